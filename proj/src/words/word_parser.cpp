#include "demuskin/words/word_parser.hpp"

#include <cctype>

#include "demuskin/errors.hpp"

namespace demuskin::words {
namespace {

class Parser {
 public:
  Parser(std::string_view text, const GeneratorSet& gens, const Frame& frame)
      : text_(text), gens_(gens), frame_(frame) {}

  ClassTwoElement parse() {
    ClassTwoElement w = word();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("word \"" + std::string(text_) + "\" at position " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_atom_start() {
    skip_space();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return c == '[' || c == '(' || c == '1' || std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  ClassTwoElement word() {
    ClassTwoElement acc(frame_);
    while (true) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        continue;
      }
      if (!at_atom_start()) break;
      acc = acc * factor();
    }
    return acc;
  }

  ClassTwoElement factor() {
    ClassTwoElement a = atom();
    while (true) {
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '^') break;
      ++pos_;
      a = power(a, integer());
    }
    return a;
  }

  std::int64_t integer() {
    skip_space();
    bool paren = false;
    if (pos_ < text_.size() && text_[pos_] == '(') {
      paren = true;
      ++pos_;
      skip_space();
    }
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) negative = text_[pos_++] == '-';
    const std::size_t start = pos_;
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_++] - '0');
      if (v > (std::int64_t{1} << 40)) fail("exponent too large");
    }
    if (start == pos_) fail("expected an integer exponent");
    if (paren) {
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
    }
    return negative ? -v : v;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  ClassTwoElement atom() {
    skip_space();
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      ClassTwoElement x = word();
      expect(',');
      ClassTwoElement y = word();
      expect(']');
      return commutator(x, y);
    }
    if (c == '(') {
      ++pos_;
      ClassTwoElement x = word();
      expect(')');
      return x;
    }
    if (c == '1') {
      ++pos_;
      return ClassTwoElement(frame_);
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string label(text_.substr(start, pos_ - start));
    const auto idx = gens_.index_of(label);
    if (!idx) {
      pos_ = start;
      fail("unknown generator '" + label + "'");
    }
    return ClassTwoElement::generator(frame_, *idx);
  }

  std::string_view text_;
  const GeneratorSet& gens_;
  const Frame& frame_;
  std::size_t pos_ = 0;
};

}  // namespace

ClassTwoElement parse_word(std::string_view text, const GeneratorSet& gens, const Frame& frame) {
  if (gens.size() != frame.rank) throw InputError("generator set does not match frame rank");
  return Parser(text, gens, frame).parse();
}

std::string format_word(const ClassTwoElement& u, const GeneratorSet& gens) {
  std::string out;
  auto append = [&out](const std::string& base, Residue e) {
    if (!out.empty()) out += ' ';
    out += base;
    if (e != 1) out += "^" + std::to_string(e);
  };
  for (std::size_t i = 0; i < u.rank(); ++i)
    if (u.gen_exp(i) != 0) append(gens.label(i), u.gen_exp(i));
  for (std::size_t i = 0; i < u.rank(); ++i)
    for (std::size_t j = i + 1; j < u.rank(); ++j)
      if (u.comm_exp(i, j) != 0) append("[" + gens.label(j) + "," + gens.label(i) + "]", u.comm_exp(i, j));
  return out.empty() ? "1" : out;
}

}  // namespace demuskin::words
