#include "tri/algebra/polynomial.hpp"

#include <sstream>

#include "tri/error.hpp"

namespace tri::algebra {

Polynomial::Polynomial(const FieldDesc& field, std::vector<FieldElement> coeffs)
    : field_(&field), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_)
    if (&c.field() != field_) throw DomainError("coefficient field mismatch for polynomial over " + field.to_string());
  normalize();
}

Polynomial Polynomial::constant(const FieldElement& c) { return {c.field(), {c}}; }

Polynomial Polynomial::monomial(const FieldElement& c, std::size_t degree) {
  std::vector<FieldElement> v(degree + 1, FieldElement::zero(c.field()));
  v[degree] = c;
  return {c.field(), std::move(v)};
}

Polynomial Polynomial::x(const FieldDesc& field) { return monomial(FieldElement::one(field), 1); }

Polynomial Polynomial::from_roots(const FieldDesc& field, std::span<const FieldElement> roots) {
  Polynomial out = constant(FieldElement::one(field));
  for (const auto& r : roots) out *= Polynomial(field, {-r, FieldElement::one(field)});
  return out;
}

Polynomial Polynomial::from_ints(const FieldDesc& field, std::span<const std::int64_t> coeffs) {
  std::vector<FieldElement> v;
  v.reserve(coeffs.size());
  for (std::int64_t c : coeffs) v.push_back(FieldElement::from_int(field, c));
  return {field, std::move(v)};
}

void Polynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

void Polynomial::check_same(const Polynomial& o) const {
  if (field_ != o.field_)
    throw DomainError("field mismatch: " + field_->to_string() + " vs " + o.field_->to_string());
}

FieldElement Polynomial::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : FieldElement::zero(*field_);
}

FieldElement Polynomial::leading() const {
  if (coeffs_.empty()) throw DomainError("zero polynomial has no leading coefficient");
  return coeffs_.back();
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same(o);
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), FieldElement::zero(*field_));
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same(o);
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), FieldElement::zero(*field_));
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  normalize();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same(b);
  if (a.is_zero() || b.is_zero()) return Polynomial(*a.field_);
  const FieldDesc& f = *a.field_;
  std::vector<std::uint32_t> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    const std::uint32_t ai = a.coeffs_[i].raw();
    if (ai == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      out[i + j] = f.add(out[i + j], f.mul(ai, b.coeffs_[j].raw()));
  }
  std::vector<FieldElement> v;
  v.reserve(out.size());
  for (std::uint32_t raw : out) v.emplace_back(f, raw);
  return {f, std::move(v)};
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Polynomial Polynomial::scaled(const FieldElement& c) const {
  std::vector<FieldElement> v = coeffs_;
  for (auto& x : v) x *= c;
  return {*field_, std::move(v)};
}

Polynomial Polynomial::pow(std::uint64_t n) const {
  Polynomial acc = constant(FieldElement::one(*field_));
  Polynomial base = *this;
  while (n > 0) {
    if (n & 1) acc *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial(*field_);
  std::vector<FieldElement> v;
  v.reserve(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    v.push_back(coeffs_[i] * FieldElement::from_int(*field_, static_cast<std::int64_t>(i)));
  return {*field_, std::move(v)};
}

FieldElement Polynomial::eval(const FieldElement& point) const {
  if (&point.field() != field_)
    throw DomainError("field mismatch: " + field_->to_string() + " vs " + point.field().to_string());
  FieldElement acc = FieldElement::zero(*field_);
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * point + coeffs_[i];
  return acc;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  return scaled(leading().inverse());
}

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (coeffs_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    const bool unit = coeffs_[i].is_one();
    if (!unit || i == 0) os << coeffs_[i].to_string();
    if (i > 0) os << (unit ? "" : "*") << "x";
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  if (&a.field() != &b.field())
    throw DomainError("field mismatch: " + a.field().to_string() + " vs " + b.field().to_string());
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  const FieldDesc& f = a.field();
  if (a.degree() < b.degree()) return {Polynomial(f), a};
  std::vector<FieldElement> rem = a.coeffs();
  std::vector<FieldElement> quot(static_cast<std::size_t>(a.degree() - b.degree() + 1), FieldElement::zero(f));
  const FieldElement lead_inv = b.leading().inverse();
  const std::size_t db = static_cast<std::size_t>(b.degree());
  for (std::size_t top = rem.size(); top-- > db;) {
    const FieldElement c = rem[top] * lead_inv;
    if (c.is_zero()) continue;
    const std::size_t shift = top - db;
    quot[shift] = c;
    for (std::size_t i = 0; i <= db; ++i) rem[shift + i] -= c * b.coeffs()[i];
  }
  rem.resize(db, FieldElement::zero(f));
  return {Polynomial(f, std::move(quot)), Polynomial(f, std::move(rem))};
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

bool is_squarefree(const Polynomial& f) {
  if (f.is_zero()) throw DomainError("is_squarefree: zero polynomial");
  if (f.degree() == 0) return true;
  const Polynomial df = f.derivative();
  if (df.is_zero()) return false;
  return gcd(f, df).degree() == 0;
}

}  // namespace tri::algebra
