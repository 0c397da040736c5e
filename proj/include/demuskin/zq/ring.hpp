#pragma once

#include <cstdint>
#include <string>

namespace demuskin::zq {

using Residue = std::int64_t;

/// The chain ring Z/p^k. Residues are kept in [0, p^k).
class Ring {
 public:
  Ring(std::int64_t p, int exponent);

  std::int64_t prime() const { return p_; }
  int exponent() const { return k_; }
  std::int64_t modulus() const { return n_; }

  Residue reduce(std::int64_t x) const {
    Residue r = x % n_;
    return r < 0 ? r + n_ : r;
  }
  Residue add(Residue a, Residue b) const { return reduce(a + b); }
  Residue sub(Residue a, Residue b) const { return reduce(a - b); }
  Residue neg(Residue a) const { return reduce(-a); }
  Residue mul(Residue a, Residue b) const { return reduce(a * b); }

  bool is_unit(Residue a) const { return reduce(a) % p_ != 0; }
  /// p-adic valuation of a residue; zero has valuation `exponent()`.
  int valuation(Residue a) const;
  /// Inverse of a unit. Throws PreconditionError on non-units.
  Residue inverse(Residue a) const;
  Residue pow(Residue a, std::uint64_t e) const;

  friend bool operator==(const Ring&, const Ring&) = default;

  std::string describe() const;

 private:
  std::int64_t p_;
  int k_;
  std::int64_t n_;
};

bool is_prime(std::int64_t n);

/// The pair of rings Z/q and Z/q^2 with q = p^f, p odd and q > 2.
struct Modulus {
  std::int64_t p = 3;
  int f = 1;
  std::int64_t q = 3;
  std::int64_t q2 = 9;

  Modulus() = default;
  Modulus(std::int64_t prime, int exponent);

  /// Parses q = p^f from a prime power; throws InputError otherwise.
  static Modulus from_q(std::int64_t q);

  Ring ring_q() const { return Ring(p, f); }
  Ring ring_q2() const { return Ring(p, 2 * f); }

  friend bool operator==(const Modulus&, const Modulus&) = default;
};

}  // namespace demuskin::zq
