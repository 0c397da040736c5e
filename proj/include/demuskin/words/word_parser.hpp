#pragma once

#include <string>
#include <string_view>

#include "demuskin/words/element.hpp"

namespace demuskin::words {

/// Parses a word such as "x0^3 [x0,g] [x1,x2]" and collects it to normal form.
///
///   word   := factor*            (juxtaposition or '*' is product)
///   factor := atom ('^' int)*
///   atom   := label | '1' | '[' word ',' word ']' | '(' word ')'
///
/// Throws InputError with the offending position on malformed input.
ClassTwoElement parse_word(std::string_view text, const GeneratorSet& gens, const Frame& frame);

/// Normal-form rendering "g^a x0^b ... [x1,x0]^c"; "1" for the identity.
/// parse_word(format_word(u)) == u.
std::string format_word(const ClassTwoElement& u, const GeneratorSet& gens);

}  // namespace demuskin::words
