#include "demuskin/builder/quotient.hpp"

#include <algorithm>
#include <set>

#include "demuskin/errors.hpp"

namespace demuskin::builder {
namespace {

using words::Frame;
using zq::Residue;
using zq::Vector;
using zq::ZqMatrix;

ClassTwoElement gen(const Frame& f, std::size_t k) { return ClassTwoElement::generator(f, k); }

Vector scaled(const zq::Ring& r, Vector v, Residue s) {
  for (auto& x : v) x = r.mul(x, s);
  return v;
}

Vector added(const zq::Ring& r, Vector a, const Vector& b, Residue s) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = r.add(a[i], r.mul(s, b[i]));
  return a;
}

std::vector<Vector> free_rows(const Submodule& s, const char* what) {
  const auto basis = s.free_basis();
  if (!basis) throw PreconditionError(std::string(what) + " is not free");
  return basis->row_list();
}

Submodule span_of(const zq::Ring& r, std::size_t d, const std::vector<Vector>& rows) {
  return Submodule::span(r, d, rows);
}

Submodule perp(const zq::BilinearForm& form, const std::vector<Vector>& rows) {
  return zq::orthogonal_complement(form, span_of(form.ring(), form.dimension(), rows));
}

// Extends the rows of `start` (a free summand of `whole`) to a basis of `whole`.
std::vector<Vector> extend_basis(const std::vector<Vector>& start, const Submodule& whole) {
  std::vector<Vector> out = start;
  const zq::Ring& r = whole.ring();
  const std::size_t d = whole.ambient_rank();
  for (const Vector& t : free_rows(whole, "ambient of a basis extension")) {
    auto trial = out;
    trial.push_back(t);
    if (span_of(r, d, trial).rank() == trial.size()) out = std::move(trial);
  }
  if (out.size() != whole.rank()) throw Error("basis extension failed");
  return out;
}

// Hyperbolic pairs (first, second) with <first, second> = -1 spanning the
// nondegenerate module `space`; the rows of `kept` come first as seconds.
std::vector<std::pair<Vector, Vector>> symplectic_completion(const zq::BilinearForm& form, const Submodule& space,
                                                             const std::vector<Vector>& kept) {
  const zq::Ring& r = form.ring();
  const std::size_t d = form.dimension();
  const Residue minus_one = r.neg(1);
  std::vector<std::pair<Vector, Vector>> pairs;
  std::vector<Vector> used;

  if (!kept.empty()) {
    const auto sb = free_rows(space, "eigenspace");
    const ZqMatrix sm = ZqMatrix::from_rows(r, d, sb);
    const ZqMatrix c = sm * form.gram() * ZqMatrix::from_rows(r, d, kept).transpose();
    std::vector<Vector> duals;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      Vector target(kept.size(), 0);
      target[i] = minus_one;
      const auto y = zq::solve_left(c, target);
      if (!y) throw PreconditionError("isotropic submodule has no dual inside its eigenspace");
      duals.push_back(zq::mul(*y, sm));
    }
    // make the duals mutually orthogonal: f_i += sum_j c_ij u_j with c_ij = -<f_i, f_j> / 2
    const Residue half = r.inverse(2);
    std::vector<Vector> fixed = duals;
    for (std::size_t i = 0; i < duals.size(); ++i)
      for (std::size_t j = 0; j < duals.size(); ++j)
        fixed[i] = added(r, fixed[i], kept[j], r.neg(r.mul(half, form.pair(duals[i], duals[j]))));
    for (std::size_t i = 0; i < kept.size(); ++i) {
      pairs.emplace_back(fixed[i], kept[i]);
      used.push_back(fixed[i]);
      used.push_back(kept[i]);
    }
  }

  Submodule rest = used.empty() ? space : zq::intersection(space, perp(form, used));
  while (!rest.is_zero()) {
    const auto rows = free_rows(rest, "symplectic remainder");
    const Vector& v = rows.front();
    std::optional<Vector> partner;
    for (const Vector& t : rows)
      if (r.is_unit(form.pair(t, v))) {
        partner = scaled(r, t, r.mul(minus_one, r.inverse(form.pair(t, v))));
        break;
      }
    if (!partner) throw Error("cup form degenerates on an eigenspace");
    pairs.emplace_back(*partner, v);
    rest = zq::intersection(rest, perp(form, {v, *partner}));
  }
  return pairs;
}

bool is_delta_invariant(const Submodule& v, const ZqMatrix& h1) {
  // functionals transform as phi -> phi h1^T
  const ZqMatrix t = h1.transpose();
  for (const Vector& row : v.basis_rows())
    if (!v.contains(zq::mul(row, t))) return false;
  return true;
}

bool is_clean(const ClassTwoEndo& endo) {
  const Frame& f = endo.frame();
  for (std::size_t k = 0; k < f.rank; ++k)
    if (!(endo.image(k) == gen(f, k)) && !(endo.image(k) == words::inverse(gen(f, k)))) return false;
  return true;
}

// Coordinate duals spanning V with at most one member of each hyperbolic pair.
std::optional<std::vector<std::size_t>> coordinate_support(const Submodule& v) {
  const zq::Ring& r = v.ring();
  const std::size_t d = v.ambient_rank();
  std::vector<std::size_t> support;
  std::vector<Vector> rows;
  for (std::size_t k = 0; k < d; ++k) {
    Vector e(d, 0);
    e[k] = 1;
    if (v.contains(e)) {
      support.push_back(k);
      rows.push_back(e);
    }
  }
  if (!(Submodule::span(r, d, rows) == v)) return std::nullopt;
  for (std::size_t k : support)
    if (std::binary_search(support.begin(), support.end(), k ^ 1)) return std::nullopt;
  return support;
}

bool is_standard_clean(const DemushkinPresentation& pres, const InvolutionAction& action) {
  return pres.relator() == core::standard_relator(pres.frame()) &&
         action.endo == core::standard_involution_endo(pres.frame());
}

}  // namespace

IsotropicSubmodule validate_V(const DemushkinPresentation& pres, const InvolutionAction& action, const Submodule& v) {
  const zq::Ring rq = pres.modulus().ring_q();
  if (v.ambient_rank() != pres.rank() || !(v.ring() == rq))
    throw InputError("V must be a submodule of (Z/q)^" + std::to_string(pres.rank()));
  const core::CohomologyData inv = core::invariants(pres);
  SubmoduleChecks c;
  c.free = v.is_free();
  c.delta_invariant = is_delta_invariant(v, action.h1_matrix);
  c.isotropic = zq::is_totally_isotropic(inv.cup, v);
  c.in_bockstein_kernel = true;
  for (const Vector& row : v.basis_rows()) c.in_bockstein_kernel = c.in_bockstein_kernel && zq::dot(rq, row, inv.bockstein) == 0;
  c.maximal = c.free && v.rank() == pres.rank() / 2;
  c.contains_gamma = v.contains(core::gamma_line(pres));
  return {v, c};
}

IsotropicSubmodule build_V(const DemushkinPresentation& pres, const InvolutionAction& action, Signature sig) {
  const int n = pres.n();
  if (sig.u_plus < 0 || sig.u_minus < 0 || sig.u_plus + sig.u_minus != n / 2)
    throw InputError("signature (" + std::to_string(sig.u_plus) + ", " + std::to_string(sig.u_minus) +
                     ") does not sum to n/2 = " + std::to_string(n / 2));
  if (!is_standard_clean(pres, action))
    throw PreconditionError("build_V needs the standard relator and the clean standard involution");
  const zq::Ring rq = pres.modulus().ring_q();
  std::vector<Vector> rows;
  auto dual = [&](std::size_t idx) {
    Vector e(pres.rank(), 0);
    e[idx] = 1;
    rows.push_back(e);
  };
  dual(0);
  // x_i sits at index i + 1
  for (int j = 1; j <= sig.u_plus; ++j) dual(static_cast<std::size_t>(2 * j + 1));
  for (int j = sig.u_plus + 1; j <= n / 2; ++j) dual(static_cast<std::size_t>(2 * j));
  auto out = validate_V(pres, action, Submodule::span(rq, pres.rank(), rows));
  if (!out.checks.usable() || !out.checks.maximal || !out.checks.contains_gamma)
    throw Error("constructed V fails its own checks");
  return out;
}

AdaptedBasis adapted_basis(const DemushkinPresentation& pres, const InvolutionAction& action,
                           const IsotropicSubmodule& v) {
  const Frame& f = pres.frame();
  const std::size_t d = f.rank;
  const zq::Ring rq = f.modulus.ring_q();
  const IsotropicSubmodule checked = validate_V(pres, action, v.V);
  if (!checked.checks.usable()) throw PreconditionError("V is not free, invariant, isotropic and inside ker B");
  const core::CohomologyData inv = core::invariants(pres);
  if (!inv.is_demushkin || !inv.bockstein_surjective)
    throw PreconditionError("adapted basis needs a nondegenerate cup form and a surjective Bockstein map");
  if (pres.relator() == core::standard_relator(f) && is_clean(action.endo))
    if (const auto support = coordinate_support(v.V))
      return {ClassTwoEndo::identity(f), ZqMatrix::identity(rq, d), pres.relator(), action.endo, *support};

  const zq::BilinearForm& form = inv.cup;
  const Residue minus_one = rq.neg(1);
  const bool negating = action.h2_scalar == minus_one;
  if (!negating && action.h2_scalar != 1) throw PreconditionError("action scalar on H^2 must be +1 or -1");

  const zq::EigenSplit split = zq::eigen_split(action.h1_matrix);
  const Submodule ker_b = zq::kernel(ZqMatrix::from_rows(rq, d, {inv.bockstein}));
  const auto gamma_rows = free_rows(zq::orthogonal_complement(form, ker_b), "gamma line");
  if (gamma_rows.size() != 1) throw Error("the orthogonal of ker B is not a line");
  const Vector c = gamma_rows.front();
  if (!split.plus.contains(c)) throw Error("gamma line is not fixed by the action");

  auto bock = [&](const Vector& x) { return zq::dot(rq, x, inv.bockstein); };
  const Submodule v_plus = zq::intersection(v.V, split.plus);
  const Submodule v_minus = zq::intersection(v.V, split.minus);
  const bool gamma_kept = v_plus.contains(c);
  // x0 lives where B does not vanish: the minus part when H^2 is negated
  const Submodule& b_space = negating ? split.minus : split.plus;

  auto pick_b_unit = [&](const Submodule& s) -> std::optional<Vector> {
    if (s.is_zero()) return std::nullopt;
    for (const Vector& t : free_rows(s, "Bockstein search space"))
      if (rq.is_unit(bock(t))) return scaled(rq, t, rq.inverse(bock(t)));
    return std::nullopt;
  };
  std::optional<Vector> x0_dual;
  Submodule u_plus(rq, d);
  if (gamma_kept) {
    x0_dual = pick_b_unit(b_space);
    if (!x0_dual) throw Error("Bockstein map vanishes on its eigenspace");
    u_plus = zq::intersection(v_plus, perp(form, {*x0_dual}));
  } else {
    u_plus = v_plus;
    x0_dual = pick_b_unit(zq::intersection(b_space, zq::orthogonal_complement(form, v_plus)));
    if (!x0_dual) throw PreconditionError("V plus the gamma line is not a direct summand; no adapted basis");
  }
  const Vector gamma_dual = scaled(rq, c, rq.inverse(form.pair(c, *x0_dual)));
  const auto u_rows = u_plus.is_zero() ? std::vector<Vector>{} : free_rows(u_plus, "V+");
  const auto w_rows = v_minus.is_zero() ? std::vector<Vector>{} : free_rows(v_minus, "V-");

  std::vector<Vector> firsts, seconds;  // slots 2j and 2j+1, j = 1..n/2
  std::vector<std::size_t> kept;
  if (gamma_kept) kept.push_back(0);
  if (negating) {
    const Submodule p1 = zq::intersection(split.plus, perp(form, {*x0_dual}));
    const Submodule k1 = zq::intersection(split.minus, ker_b);
    // minus-side basis: duals of U+, then W = V-, then a completion inside U+^perp
    std::vector<Vector> k_basis;
    if (!u_rows.empty()) {
      const auto kb = free_rows(k1, "ker B minus part");
      const ZqMatrix km = ZqMatrix::from_rows(rq, d, kb);
      const ZqMatrix pairing = km * form.gram() * ZqMatrix::from_rows(rq, d, u_rows).transpose();
      for (std::size_t i = 0; i < u_rows.size(); ++i) {
        Vector target(u_rows.size(), 0);
        target[i] = minus_one;
        const auto y = zq::solve_left(pairing, target);
        if (!y) throw PreconditionError("V+ has no dual inside the minus part of ker B");
        k_basis.push_back(zq::mul(*y, km));
      }
    }
    const Submodule u_perp = u_rows.empty() ? k1 : zq::intersection(k1, perp(form, u_rows));
    for (const Vector& x : extend_basis(w_rows, u_perp)) k_basis.push_back(x);
    const auto pb = free_rows(p1, "plus part orthogonal to x0");
    if (k_basis.size() != pb.size() || pb.size() + 1 != d / 2) throw Error("eigenspace ranks do not match");
    const std::size_t half = pb.size();
    if (half > 0) {
      const ZqMatrix km = ZqMatrix::from_rows(rq, d, k_basis), pm = ZqMatrix::from_rows(rq, d, pb);
      const auto a_inv = zq::inverse(km * form.gram() * pm.transpose());
      if (!a_inv) throw Error("plus and minus parts do not pair perfectly");
      const ZqMatrix dual_plus = a_inv->transpose().scaled(minus_one) * pm;
      for (std::size_t j = 0; j < half; ++j) {
        firsts.push_back(k_basis[j]);
        seconds.push_back(dual_plus.row(j));
      }
    }
    for (std::size_t j = 0; j < u_rows.size(); ++j) kept.push_back(2 * (j + 1) + 1);
    for (std::size_t j = 0; j < w_rows.size(); ++j) kept.push_back(2 * (u_rows.size() + j + 1));
  } else {
    const Submodule rest_plus = zq::intersection(split.plus, perp(form, {gamma_dual, *x0_dual}));
    const auto plus_pairs = symplectic_completion(form, rest_plus, u_rows);
    const auto minus_pairs = split.minus.is_zero() ? std::vector<std::pair<Vector, Vector>>{}
                                                   : symplectic_completion(form, split.minus, w_rows);
    std::vector<std::pair<Vector, Vector>> ordered;
    for (std::size_t j = 0; j < u_rows.size(); ++j) ordered.push_back(plus_pairs[j]);
    for (std::size_t j = 0; j < w_rows.size(); ++j) ordered.push_back(minus_pairs[j]);
    for (std::size_t j = u_rows.size(); j < plus_pairs.size(); ++j) ordered.push_back(plus_pairs[j]);
    for (std::size_t j = w_rows.size(); j < minus_pairs.size(); ++j) ordered.push_back(minus_pairs[j]);
    for (const auto& [a, b] : ordered) {
      firsts.push_back(a);
      seconds.push_back(b);
    }
    for (std::size_t j = 0; j < u_rows.size() + w_rows.size(); ++j) kept.push_back(2 * (j + 1) + 1);
  }

  std::vector<Vector> dual_rows{gamma_dual, *x0_dual};
  for (std::size_t j = 0; j < firsts.size(); ++j) {
    dual_rows.push_back(firsts[j]);
    dual_rows.push_back(seconds[j]);
  }
  if (dual_rows.size() != d) throw Error("adapted dual basis has the wrong size");
  const ZqMatrix p = ZqMatrix::from_rows(rq, d, dual_rows);
  const ClassTwoElement target = core::standard_relator(f);
  const ZqMatrix g_std = core::invariants(f, target).cup.gram();
  if (!(p * form.gram() * p.transpose() == g_std)) throw Error("adapted dual basis is not a standard symplectic basis");
  const auto p_inv = zq::inverse(p);
  if (!p_inv) throw Error("adapted dual basis is not a basis");

  // generators transform by the inverse transpose of the dual basis
  const ClassTwoEndo linear = ClassTwoEndo::from_linear(f, p_inv->transpose());
  const ClassTwoEndo back = invert_auto(linear);
  const ClassTwoElement relator = apply_endo(back, pres.relator());
  if (!(relator == target)) throw Error("relator is not standard in the adapted basis");
  const DemushkinPresentation rebased(pres.generators(), f.modulus, relator, core::pull_back_character(pres.chi(), linear));
  const InvolutionAction moved = core::make_action(rebased, compose(back, compose(action.endo, linear)));
  const core::SymmetrizedBasis sym = core::symmetrize_basis(rebased, moved);

  std::sort(kept.begin(), kept.end());
  std::vector<Vector> realized;
  for (std::size_t k : kept) realized.push_back(p.row(k));
  if (!(Submodule::span(rq, d, realized) == v.V)) throw Error("adapted basis does not realize V");
  return {compose(linear, sym.basis), p, sym.relator, sym.action.endo, kept};
}

FreeQuotientCertificate free_quotient(const DemushkinPresentation& pres, const InvolutionAction& action,
                                      const IsotropicSubmodule& v) {
  const Frame& f = pres.frame();
  const zq::Ring rq = f.modulus.ring_q();
  const IsotropicSubmodule checked = validate_V(pres, action, v.V);
  FreeQuotientCertificate cert{ClassTwoEndo::identity(f), {}, {}, std::nullopt, {}, v.V, Submodule(rq, f.rank),
                               pres.relator(), action.endo, {}};
  cert.flags.v = checked.checks;
  cert.notes.push_back(
      "the class-2 surjection G/G^3 -> F/F^3 lifts to a surjection G -> F by the lifting criterion for "
      "pro-p groups; only the class-2 hypothesis is checked here");
  if (!checked.checks.usable()) {
    cert.notes.push_back("V fails the isotropic summand conditions");
    return cert;
  }
  if (!checked.checks.gamma_condition()) cert.notes.push_back("maximal V does not contain the gamma line");

  AdaptedBasis ab{ClassTwoEndo::identity(f), ZqMatrix::identity(rq, f.rank), pres.relator(), action.endo, {}};
  try {
    ab = adapted_basis(pres, action, checked);
  } catch (const PreconditionError& e) {
    cert.notes.push_back(std::string("no adapted basis: ") + e.what());
    return cert;
  }
  cert.flags.adapted = true;
  cert.basis_change = ab.basis;
  cert.relator = ab.relator;
  cert.action = ab.action;
  cert.kept = ab.kept;
  std::set<std::size_t> killed;
  for (std::size_t k = 0; k < f.rank; ++k)
    if (!std::binary_search(ab.kept.begin(), ab.kept.end(), k)) {
      killed.insert(k);
      cert.killed.push_back(k);
    }

  cert.flags.relator_contained = words::quotient_kill(killed, ab.relator).is_identity();

  // kept generators map onto a basis of the quotient's F/F^2; the basis change is invertible
  cert.flags.surjective_mod_f2 = ab.basis.is_automorphism() && ab.kept.size() == checked.V.rank();

  std::vector<ClassTwoElement> killed_gens;
  for (std::size_t k : cert.killed) killed_gens.push_back(gen(f, k));
  const words::NormalSubgroup kill_group(f, killed_gens);
  cert.flags.delta_invariant_kill = true;
  for (const auto& g : killed_gens)
    cert.flags.delta_invariant_kill = cert.flags.delta_invariant_kill && kill_group.contains(apply_endo(ab.action, g));

  std::vector<Vector> realized;
  for (std::size_t k : ab.kept) realized.push_back(ab.dual.row(k));
  cert.V_realized = Submodule::span(rq, f.rank, realized);
  cert.flags.v_realized = cert.V_realized == v.V;

  if (cert.green()) {
    try {
      cert.signature = signature_of(cert, action);
    } catch (const PreconditionError& e) {
      cert.notes.push_back(std::string("no signature: ") + e.what());
    }
  }
  return cert;
}

Signature signature_of(const FreeQuotientCertificate& cert, const InvolutionAction& action) {
  if (!cert.green()) throw PreconditionError("signature_of needs a green certificate");
  const Frame& f = cert.action.frame();
  const ClassTwoEndo moved = compose(invert_auto(cert.basis_change), compose(action.endo, cert.basis_change));
  const ZqMatrix lin = moved.linear_part();
  const zq::Ring rq = f.modulus.ring_q();
  ZqMatrix induced(rq, cert.kept.size(), cert.kept.size());
  for (std::size_t a = 0; a < cert.kept.size(); ++a)
    for (std::size_t b = 0; b < cert.kept.size(); ++b) induced.set(a, b, lin(cert.kept[a], cert.kept[b]));
  const zq::EigenSplit split = zq::eigen_split_rows(induced);
  const int plus = static_cast<int>(split.plus.rank());
  const int minus = static_cast<int>(split.minus.rank());
  if (plus == 0) throw PreconditionError("quotient has no fixed generator");
  return {plus - 1, minus};
}

bool uniqueness_check(const DemushkinPresentation& pres, const InvolutionAction& action,
                      const FreeQuotientCertificate& cert) {
  if (!cert.green()) throw PreconditionError("uniqueness_check needs a green certificate");
  const Signature sig = signature_of(cert, action);
  if (!(sig == Signature{pres.n() / 2, 0}))
    throw PreconditionError("uniqueness_check needs signature (n/2, 0)");
  const zq::Ring rq = pres.modulus().ring_q();
  if (action.h2_scalar != rq.neg(1)) throw PreconditionError("uniqueness_check needs an action negating H^2");

  const Frame& f = pres.frame();
  std::vector<ClassTwoElement> coinv{pres.relator()};
  for (std::size_t k = 0; k < f.rank; ++k) coinv.push_back(words::inverse(gen(f, k)) * action.endo.image(k));
  std::vector<ClassTwoElement> kill{pres.relator()};
  for (std::size_t k : cert.killed) kill.push_back(cert.basis_change.image(k));
  const words::NormalSubgroup a(f, coinv), b(f, kill);
  return a.contains(b) && b.contains(a);
}

bool factoring_check(const DemushkinPresentation& pres, const IsotropicSubmodule& v) {
  if (!v.V.is_free() || v.V.rank() != pres.rank() / 2)
    throw PreconditionError("factoring_check needs a free V of rank n/2 + 1");
  return v.V.contains(core::gamma_line(pres));
}

Submodule kill_kernel_mod_f2(const FreeQuotientCertificate& cert) {
  const ZqMatrix lin = cert.basis_change.linear_part();
  std::vector<Vector> rows;
  for (std::size_t k : cert.killed) rows.push_back(lin.row(k));
  return Submodule::span(lin.ring(), lin.cols(), rows);
}

std::vector<FreeQuotientCertificate> enumerate_certificates(const DemushkinPresentation& pres,
                                                            const InvolutionAction& action, Signature sig,
                                                            zq::Execution exec) {
  const zq::Ring rq = pres.modulus().ring_q();
  const core::CohomologyData inv = core::invariants(pres);
  const Submodule ker_b = zq::kernel(ZqMatrix::from_rows(rq, pres.rank(), {inv.bockstein}));
  const zq::IsotropicSearch found = zq::search_isotropic_summands(inv.cup, ker_b, true, exec);
  std::vector<FreeQuotientCertificate> out;
  for (const Submodule& v : found.maximal) {
    if (!is_delta_invariant(v, action.h1_matrix)) continue;
    auto cert = free_quotient(pres, action, validate_V(pres, action, v));
    if (cert.green() && cert.signature && *cert.signature == sig) out.push_back(std::move(cert));
  }
  return out;
}

}  // namespace demuskin::builder
