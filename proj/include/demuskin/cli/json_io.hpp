#pragma once

#include <json.hpp>

#include "demuskin/builder/quotient.hpp"

namespace demuskin::cli {

using Json = nlohmann::ordered_json;

/// {modulus, rows, cols, entries} with row-major entries.
Json to_json(const zq::ZqMatrix& m);
/// The Howell basis as a matrix; equal submodules serialize identically.
Json to_json(const zq::Submodule& s);
zq::ZqMatrix matrix_from_json(const Json& j);
zq::Submodule submodule_from_json(const Json& j);

/// {gen_exp, comm_exp} with the commutator list sparse: [i, j, c] is [g_j, g_i]^c.
Json to_json(const words::ClassTwoElement& u);
/// Accepts the coordinate object or a word literal.
words::ClassTwoElement element_from_json(const Json& j, const words::GeneratorSet& gens, const words::Frame& frame);

/// {p, f, n, labels, relator, chi}
Json to_json(const core::DemushkinPresentation& pres);
/// Missing relator, chi or labels default to the standard presentation.
core::DemushkinPresentation presentation_from_json(const Json& j);

/// {images: {label: word}}
Json to_json(const words::ClassTwoEndo& e, const words::GeneratorSet& gens);
/// Labels missing from `images` are fixed.
words::ClassTwoEndo endo_from_json(const Json& j, const core::DemushkinPresentation& pres);

Json to_json(const builder::FreeQuotientCertificate& cert, const words::GeneratorSet& gens);

/// Residue printed in (-q/2, q/2].
std::int64_t signed_residue(const zq::Ring& r, zq::Residue x);

}  // namespace demuskin::cli
