#include "demuskin/cli/json_io.hpp"

#include "demuskin/errors.hpp"
#include "demuskin/words/word_parser.hpp"

namespace demuskin::cli {
namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

std::vector<std::string> labels_of(const std::vector<std::size_t>& idx, const words::GeneratorSet& gens) {
  std::vector<std::string> out;
  for (std::size_t k : idx) out.push_back(gens.label(k));
  return out;
}

}  // namespace

std::int64_t signed_residue(const zq::Ring& r, zq::Residue x) {
  x = r.reduce(x);
  return 2 * x > r.modulus() ? x - r.modulus() : x;
}

Json to_json(const zq::ZqMatrix& m) {
  Json j;
  j["modulus"] = m.ring().modulus();
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["entries"] = m.entries();
  return j;
}

Json to_json(const zq::Submodule& s) { return to_json(s.basis()); }

zq::ZqMatrix matrix_from_json(const Json& j) {
  const zq::Modulus m = zq::Modulus::from_q(field<std::int64_t>(j, "modulus"));
  const auto rows = field<std::size_t>(j, "rows"), cols = field<std::size_t>(j, "cols");
  const auto entries = field<std::vector<std::int64_t>>(j, "entries");
  if (entries.size() != rows * cols) throw InputError("matrix entries do not match rows x cols");
  return zq::ZqMatrix(m.ring_q(), rows, cols, entries);
}

zq::Submodule submodule_from_json(const Json& j) { return zq::Submodule(matrix_from_json(j)); }

Json to_json(const words::ClassTwoElement& u) {
  Json comm = Json::array();
  for (std::size_t i = 0; i < u.rank(); ++i)
    for (std::size_t j = i + 1; j < u.rank(); ++j)
      if (u.comm_exp(i, j) != 0) comm.push_back({i, j, u.comm_exp(i, j)});
  Json out;
  out["gen_exp"] = u.gen_exps();
  out["comm_exp"] = comm;
  return out;
}

words::ClassTwoElement element_from_json(const Json& j, const words::GeneratorSet& gens, const words::Frame& frame) {
  if (j.is_string()) return words::parse_word(j.get<std::string>(), gens, frame);
  const auto gen = field<std::vector<std::int64_t>>(j, "gen_exp");
  if (gen.size() != frame.rank) throw InputError("gen_exp has the wrong length");
  words::ClassTwoElement u(frame);
  for (std::size_t i = 0; i < gen.size(); ++i) u.set_gen_exp(i, gen[i]);
  if (j.contains("comm_exp"))
    for (const auto& entry : j.at("comm_exp")) {
      if (!entry.is_array() || entry.size() != 3) throw InputError("comm_exp entries are [i, j, exponent]");
      const auto a = entry[0].get<std::size_t>(), b = entry[1].get<std::size_t>();
      if (a >= b || b >= frame.rank) throw InputError("comm_exp needs i < j < rank");
      u.set_comm_exp(a, b, entry[2].get<std::int64_t>());
    }
  return u;
}

Json to_json(const core::DemushkinPresentation& pres) {
  Json j;
  j["p"] = pres.modulus().p;
  j["f"] = pres.modulus().f;
  j["n"] = pres.n();
  j["labels"] = pres.generators().labels();
  j["relator"] = words::format_word(pres.relator(), pres.generators());
  j["chi"] = pres.chi().values;
  return j;
}

core::DemushkinPresentation presentation_from_json(const Json& j) {
  const zq::Modulus m(field<std::int64_t>(j, "p"), field<int>(j, "f"));
  const int n = field<int>(j, "n");
  const auto standard = core::standard_presentation(n, m);
  const words::GeneratorSet gens =
      j.contains("labels") ? words::GeneratorSet(field<std::vector<std::string>>(j, "labels")) : standard.generators();
  if (gens.size() != standard.rank()) throw InputError("labels do not match n + 2 generators");
  const words::ClassTwoElement relator =
      j.contains("relator") ? element_from_json(j.at("relator"), gens, standard.frame()) : standard.relator();
  core::CharacterData chi = standard.chi();
  if (j.contains("chi")) chi.values = field<std::vector<std::int64_t>>(j, "chi");
  return core::DemushkinPresentation(gens, m, relator, chi);
}

Json to_json(const words::ClassTwoEndo& e, const words::GeneratorSet& gens) {
  Json images;
  for (std::size_t k = 0; k < gens.size(); ++k) images[gens.label(k)] = words::format_word(e.image(k), gens);
  Json j;
  j["images"] = images;
  return j;
}

words::ClassTwoEndo endo_from_json(const Json& j, const core::DemushkinPresentation& pres) {
  const Json images = field<Json>(j, "images");
  if (!images.is_object()) throw InputError("images must map labels to words");
  const words::Frame& f = pres.frame();
  std::vector<words::ClassTwoElement> out;
  for (std::size_t k = 0; k < f.rank; ++k) out.push_back(words::ClassTwoElement::generator(f, k));
  for (const auto& [label, word] : images.items()) {
    const auto idx = pres.generators().index_of(label);
    if (!idx) throw InputError("unknown generator '" + label + "' in action");
    out[*idx] = element_from_json(word, pres.generators(), f);
  }
  return words::ClassTwoEndo(f, std::move(out));
}

Json to_json(const builder::FreeQuotientCertificate& cert, const words::GeneratorSet& gens) {
  const auto& fl = cert.flags;
  Json flags;
  flags["free"] = fl.v.free;
  flags["delta_invariant"] = fl.v.delta_invariant;
  flags["isotropic"] = fl.v.isotropic;
  flags["in_bockstein_kernel"] = fl.v.in_bockstein_kernel;
  flags["maximal"] = fl.v.maximal;
  flags["contains_gamma"] = fl.v.contains_gamma;
  flags["adapted"] = fl.adapted;
  flags["relator_contained"] = fl.relator_contained;
  flags["surjective_mod_F2"] = fl.surjective_mod_f2;
  flags["delta_invariant_kill"] = fl.delta_invariant_kill;
  flags["V_realized"] = fl.v_realized;

  Json j;
  j["basis_change"] = to_json(cert.basis_change, gens);
  j["killed"] = labels_of(cert.killed, gens);
  j["kept"] = labels_of(cert.kept, gens);
  j["signature"] = cert.signature ? Json::array({cert.signature->u_plus, cert.signature->u_minus}) : Json(nullptr);
  j["green"] = cert.green();
  j["flags"] = flags;
  j["V"] = to_json(cert.V);
  j["relator"] = words::format_word(cert.relator, gens);
  j["lifting_note"] = cert.notes.empty() ? "" : cert.notes.front();
  Json notes = Json::array();
  for (std::size_t i = 1; i < cert.notes.size(); ++i) notes.push_back(cert.notes[i]);
  j["notes"] = notes;
  return j;
}

}  // namespace demuskin::cli
