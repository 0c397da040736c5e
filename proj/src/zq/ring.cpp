#include "demuskin/zq/ring.hpp"

#include <limits>

#include "demuskin/errors.hpp"

namespace demuskin::zq {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Ring::Ring(std::int64_t p, int exponent) : p_(p), k_(exponent), n_(1) {
  if (!is_prime(p)) throw InputError("ring characteristic " + std::to_string(p) + " is not prime");
  if (exponent < 1) throw InputError("ring exponent must be positive");
  for (int i = 0; i < exponent; ++i) {
    if (n_ > std::numeric_limits<std::int32_t>::max() / p)
      throw InputError("modulus " + std::to_string(p) + "^" + std::to_string(exponent) + " too large");
    n_ *= p;
  }
}

int Ring::valuation(Residue a) const {
  a = reduce(a);
  if (a == 0) return k_;
  int v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

Residue Ring::inverse(Residue a) const {
  a = reduce(a);
  if (a % p_ == 0) throw PreconditionError(std::to_string(a) + " is not a unit mod " + std::to_string(n_));
  // extended Euclid on (a, n)
  std::int64_t r0 = n_, r1 = a, t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t quo = r0 / r1;
    std::int64_t r2 = r0 - quo * r1;
    r0 = r1;
    r1 = r2;
    std::int64_t t2 = t0 - quo * t1;
    t0 = t1;
    t1 = t2;
  }
  return reduce(t0);
}

Residue Ring::pow(Residue a, std::uint64_t e) const {
  Residue base = reduce(a), acc = reduce(1);
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

std::string Ring::describe() const {
  return "Z/" + std::to_string(p_) + (k_ > 1 ? "^" + std::to_string(k_) : std::string());
}

Modulus::Modulus(std::int64_t prime, int exponent) : p(prime), f(exponent) {
  if (!is_prime(prime)) throw InputError("p = " + std::to_string(prime) + " is not prime");
  if (prime == 2) throw InputError("p = 2 is excluded; p must be odd");
  if (exponent < 1) throw InputError("f must be positive");
  Ring r2(prime, 2 * exponent);  // validates q^2 fits
  q2 = r2.modulus();
  q = Ring(prime, exponent).modulus();
  if (q <= 2) throw InputError("invariant q must exceed 2");
}

Modulus Modulus::from_q(std::int64_t q) {
  if (q < 3) throw InputError("q = " + std::to_string(q) + " must be an odd prime power > 2");
  std::int64_t p = 2;
  while (q % p != 0) ++p;
  int f = 0;
  std::int64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++f;
  }
  if (rest != 1) throw InputError("q = " + std::to_string(q) + " is not a prime power");
  return Modulus(p, f);
}

}  // namespace demuskin::zq
