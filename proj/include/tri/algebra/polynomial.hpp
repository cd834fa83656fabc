#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tri/algebra/field.hpp"

namespace tri::algebra {

/**
 * Dense univariate polynomial over a finite field, low degree first.
 *
 * The coefficient vector never has trailing zeros, so two polynomials are
 * equal exactly when their vectors are. The zero polynomial has no
 * coefficients and degree -1.
 */
class Polynomial {
 public:
  explicit Polynomial(const FieldDesc& field) : field_(&field) {}
  Polynomial(const FieldDesc& field, std::vector<FieldElement> coeffs);

  static Polynomial constant(const FieldElement& c);
  static Polynomial monomial(const FieldElement& c, std::size_t degree);
  static Polynomial x(const FieldDesc& field);
  /// Monic product of (x - r) over the given roots.
  static Polynomial from_roots(const FieldDesc& field, std::span<const FieldElement> roots);
  /// Prime-field coefficients, reduced mod p.
  static Polynomial from_ints(const FieldDesc& field, std::span<const std::int64_t> coeffs);

  const FieldDesc& field() const { return *field_; }
  const std::vector<FieldElement>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back().is_one(); }
  /// Coefficient of x^i; zero past the degree.
  FieldElement coeff(std::size_t i) const;
  FieldElement leading() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial operator-() const;
  Polynomial scaled(const FieldElement& c) const;

  Polynomial pow(std::uint64_t n) const;
  Polynomial derivative() const;
  FieldElement eval(const FieldElement& point) const;
  Polynomial monic() const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const;

 private:
  void check_same(const Polynomial& o) const;
  void normalize();

  const FieldDesc* field_;
  std::vector<FieldElement> coeffs_;
};

/// Quotient and remainder; throws DomainError when the divisor is zero.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);

/// Monic gcd; gcd(0, 0) = 0.
Polynomial gcd(Polynomial a, Polynomial b);

/// gcd(f, f') == 1. A vanishing derivative counts as not squarefree.
bool is_squarefree(const Polynomial& f);

}  // namespace tri::algebra
