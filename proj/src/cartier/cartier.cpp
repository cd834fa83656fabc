#include "tri/cartier.hpp"

#include "tri/algebra/json.hpp"
#include "tri/error.hpp"

namespace tri::cartier {

using algebra::FieldElement;

TriellipticCurve validate_curve(const FieldDesc& field, Polynomial p1, Polynomial p2) {
  const std::uint32_t p = field.characteristic();
  if (p == 3) throw DomainError("characteristic 3 is not allowed for a degree-3 cover");
  if (&p1.field() != &field || &p2.field() != &field) throw DomainError("curve polynomials must live over the curve field");
  if (!p1.is_monic() || !p2.is_monic()) throw DomainError("p1 and p2 must be monic");
  if (!algebra::is_squarefree(p1)) throw DomainError("p1 is not squarefree");
  if (!algebra::is_squarefree(p2)) throw DomainError("p2 is not squarefree");
  if (algebra::gcd(p1, p2).degree() != 0) throw DomainError("p1 and p2 are not coprime");
  const int d1 = p1.degree(), d2 = p2.degree();
  if ((d1 + 2 * d2) % 3 != 0)
    throw DomainError("d1 + 2 d2 = " + std::to_string(d1 + 2 * d2) + " is not divisible by 3 (branched at infinity)");
  if (d1 + d2 < 3) throw DomainError("fewer than 3 branch points: genus < 1");
  TriellipticCurve c{&field, std::move(p1), std::move(p2), d1, d2, d1 + d2 - 2, (d1 + 2 * d2) / 3 - 1, (2 * d1 + d2) / 3 - 1};
  return c;
}

nlohmann::json curve_to_json(const TriellipticCurve& c) {
  nlohmann::json p1 = nlohmann::json::array(), p2 = nlohmann::json::array();
  const bool prime = c.field->degree() == 1;
  for (const auto& a : c.p1.coeffs()) p1.push_back(prime ? nlohmann::json(a.raw()) : algebra::coefficient_to_json(a));
  for (const auto& a : c.p2.coeffs()) p2.push_back(prime ? nlohmann::json(a.raw()) : algebra::coefficient_to_json(a));
  return {{"p", c.field->characteristic()}, {"k", c.field->degree()}, {"p1", p1}, {"p2", p2}};
}

TriellipticCurve curve_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("p1") || !j.contains("p2"))
    throw DomainError("curve JSON needs \"p\", \"k\", \"p1\" and \"p2\"");
  const FieldDesc& f = algebra::field_from_json(j);
  return validate_curve(f, algebra::polynomial_from_json(f, j.at("p1")), algebra::polynomial_from_json(f, j.at("p2")));
}

ElkinPolynomials elkin_h(const TriellipticCurve& curve) {
  const std::uint64_t p = curve.field->characteristic();
  std::uint64_t a = 0, b = 0;
  if (p % 3 == 2) {
    a = (p - 2) / 3;
    b = (2 * p - 1) / 3;
  } else {
    a = (p - 1) / 3;
    b = (2 * p - 2) / 3;
  }
  return {curve.p1.pow(a) * curve.p2.pow(b), curve.p1.pow(b) * curve.p2.pow(a)};
}

std::vector<Polynomial> f_decomposition(const Polynomial& h) {
  const FieldDesc& f = h.field();
  const std::size_t p = f.characteristic();
  // p-th root is the inverse of Frobenius: a^(p^(k-1))
  const std::uint64_t root = f.degree() - 1;
  std::vector<std::vector<FieldElement>> parts(p);
  for (std::size_t e = 0; e < h.coeffs().size(); ++e) {
    auto& part = parts[e % p];
    const std::size_t m = e / p;
    if (part.size() <= m) part.resize(m + 1, FieldElement::zero(f));
    part[m] = h.coeffs()[e].frobenius(root);
  }
  std::vector<Polynomial> out;
  out.reserve(p);
  for (auto& part : parts) out.emplace_back(f, std::move(part));
  return out;
}

CartierMatrix cartier_matrix(const TriellipticCurve& curve) {
  const FieldDesc& f = *curve.field;
  const std::size_t p = f.characteristic();
  const auto [h1, h2] = elkin_h(curve);
  const auto f1 = f_decomposition(h1);
  const auto f2 = f_decomposition(h2);

  CartierMatrix m{Matrix(f, static_cast<std::size_t>(curve.genus), static_cast<std::size_t>(curve.genus)), curve.r,
                  curve.s, p % 3 == 2};
  const int dims[2] = {curve.r, curve.s};
  const int offsets[2] = {0, curve.r};
  for (int src = 0; src < 2; ++src) {
    const int dst = m.swaps_eigenspaces ? 1 - src : src;
    // The image lands in eigenspace dst; its coefficients come from the Elkin
    // polynomial attached to that eigenspace (h1 for the dx/y forms).
    const auto& parts = dst == 0 ? f1 : f2;
    for (int j = 1; j <= dims[src]; ++j) {
      const std::size_t t = (p - static_cast<std::size_t>(j) % p) % p;
      const std::size_t shift = static_cast<std::size_t>(j - 1) / p;
      const Polynomial& base = parts[t];
      if (base.is_zero()) continue;
      if (base.degree() + static_cast<int>(shift) >= dims[dst])
        throw ConsistencyError("Cartier image of basis form " + std::to_string(src + 1) + "," + std::to_string(j) +
                               " has degree " + std::to_string(base.degree() + static_cast<int>(shift)) +
                               " outside the target eigenspace of dimension " + std::to_string(dims[dst]));
      const std::size_t col = static_cast<std::size_t>(offsets[src] + j - 1);
      for (std::size_t e = 0; e < base.coeffs().size(); ++e)
        m.entries.set(static_cast<std::size_t>(offsets[dst]) + shift + e, col, base.coeffs()[e]);
    }
  }
  return m;
}

int iterated_rank(const CartierMatrix& m, int factors) {
  if (factors < 1) throw DomainError("need at least one factor");
  Matrix prod = m.entries;
  for (int i = 1; i < factors; ++i) prod = m.entries.twisted(static_cast<std::uint64_t>(i)) * prod;
  return static_cast<int>(prod.rank());
}

int prank_cartier(const CartierMatrix& m) {
  if (m.genus() == 0) return 0;
  return iterated_rank(m, m.genus());
}

int prank_cartier(const TriellipticCurve& curve) { return prank_cartier(cartier_matrix(curve)); }

bool is_superspecial(const CartierMatrix& m) { return m.entries.is_zero(); }

bool uses_shifted_images(const TriellipticCurve& curve) {
  const int p = static_cast<int>(curve.field->characteristic());
  return curve.r >= p || curve.s >= p;
}

}  // namespace tri::cartier
