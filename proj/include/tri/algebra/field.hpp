#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tri::algebra {

using Residue = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

bool is_prime(std::uint64_t n);

// Distinct prime divisors of n, ascending. Trial division.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

/**
 * Description of the finite field F_q, q = p^k, realised as F_p[x]/(m(x)).
 *
 * Elements are handled through a raw encoding: the coefficient vector
 * (c_0, ..., c_{k-1}) in the power basis of m is packed as the integer
 * c_0 + c_1 p + ... + c_{k-1} p^{k-1}. Every descriptor is interned, so a
 * field is identified by the address of its descriptor and lives for the
 * whole program. Descriptors are immutable after construction.
 */
class FieldDesc {
 public:
  FieldDesc(const FieldDesc&) = delete;
  FieldDesc& operator=(const FieldDesc&) = delete;

  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  std::uint64_t order() const { return q_; }

  /// Monic modulus, low degree first (k + 1 entries). Empty for prime fields.
  const std::vector<Residue>& modulus() const { return modulus_; }

  std::vector<Residue> digits(std::uint32_t raw) const;
  std::uint32_t encode(std::span<const Residue> coeffs) const;
  Residue digit(std::uint32_t raw, unsigned i) const { return (raw / pow_p_[i]) % p_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t n) const;
  /// a^(p^i).
  std::uint32_t frobenius(std::uint32_t a, std::uint64_t i) const;

  std::string to_string() const;

 private:
  friend const FieldDesc& intern_field(std::uint32_t p, std::vector<Residue> modulus);
  FieldDesc(std::uint32_t p, std::vector<Residue> modulus);

  std::uint32_t mul_schoolbook(std::uint32_t a, std::uint32_t b) const;
  void build_tables();

  std::uint32_t p_;
  unsigned k_;
  std::uint64_t q_;
  std::vector<Residue> modulus_;
  std::vector<std::uint64_t> pow_p_;
  // log/exp tables for small extension fields; empty otherwise
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;
};

/// Largest field order accepted by make_field and friends.
inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 31;

/**
 * Canonical field of order p^k. For k > 1 the modulus is the monic
 * irreducible polynomial of degree k whose coefficient vector, read from
 * the constant term upwards, is lexicographically smallest.
 * Throws DomainError for non-prime p, k < 1 or p^k > kMaxFieldOrder.
 */
const FieldDesc& make_field(std::uint64_t p, int k);

/// Field F_p[x]/(modulus); modulus must be monic irreducible of degree >= 2.
const FieldDesc& make_field_with_modulus(std::uint64_t p, std::vector<Residue> modulus);

/// Same as make_field but the modulus is the lexicographically smallest
/// primitive polynomial, so x generates the multiplicative group.
const FieldDesc& make_primitive_field(std::uint64_t p, int k);

/// Irreducibility of a monic polynomial over F_p (Ben-Or).
bool is_irreducible_mod_p(std::span<const Residue> monic, std::uint32_t p);

class FieldElement {
 public:
  FieldElement(const FieldDesc& field, std::uint32_t raw);

  static FieldElement zero(const FieldDesc& field) { return {field, 0}; }
  static FieldElement one(const FieldDesc& field) { return {field, 1}; }
  /// Integer n reduced into the prime subfield.
  static FieldElement from_int(const FieldDesc& field, std::int64_t n);
  /// Power-basis coefficients, reduced mod p. At most k entries.
  static FieldElement from_coeffs(const FieldDesc& field, std::span<const std::int64_t> coeffs);
  /// The class of x (the generator of the power basis).
  static FieldElement generator(const FieldDesc& field);

  const FieldDesc& field() const { return *field_; }
  std::uint32_t raw() const { return raw_; }
  std::vector<Residue> coeffs() const { return field_->digits(raw_); }
  bool is_zero() const { return raw_ == 0; }
  bool is_one() const { return raw_ == 1; }

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);

  FieldElement inverse() const;
  FieldElement pow(std::uint64_t n) const;
  FieldElement pow(const BigInt& n) const;
  FieldElement frobenius(std::uint64_t i) const;

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.raw_ == b.raw_;
  }

  std::string to_string() const;

 private:
  void check_same(const FieldElement& o) const;

  const FieldDesc* field_;
  std::uint32_t raw_;
};

/// Number of y in F_q with y^l = c.
std::uint64_t lth_power_count(const FieldElement& c, std::uint64_t l);

}  // namespace tri::algebra
