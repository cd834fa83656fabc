#include "tri/algebra/field.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "tri/error.hpp"

namespace tri::algebra {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

// Dense polynomials over F_p, low degree first, used only to find and check moduli.
using PrimePoly = std::vector<std::uint64_t>;

void trim(PrimePoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - quot * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - quot * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

// a mod m, m nonzero.
PrimePoly poly_rem(PrimePoly a, const PrimePoly& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    trim(a);
  }
  return a;
}

PrimePoly poly_mulmod(const PrimePoly& a, const PrimePoly& b, const PrimePoly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PrimePoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  return poly_rem(std::move(out), m, p);
}

PrimePoly poly_powmod(PrimePoly base, std::uint64_t e, const PrimePoly& m, std::uint64_t p) {
  PrimePoly result{1};
  base = poly_rem(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, m, p);
    e >>= 1;
    if (e) base = poly_mulmod(base, base, m, p);
  }
  return poly_rem(std::move(result), m, p);
}

PrimePoly poly_gcd(PrimePoly a, PrimePoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PrimePoly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Monic polynomials of degree k in lexicographic order of (c_0, ..., c_{k-1}).
template <typename Pred>
std::vector<Residue> first_monic(std::uint32_t p, int k, Pred&& accept) {
  std::vector<Residue> c(static_cast<std::size_t>(k) + 1, 0);
  c[static_cast<std::size_t>(k)] = 1;
  for (;;) {
    if (accept(std::span<const Residue>(c))) return c;
    // odometer with c_{k-1} as the fastest digit
    int i = k - 1;
    while (i >= 0) {
      if (++c[static_cast<std::size_t>(i)] < p) break;
      c[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  throw ConsistencyError("no monic polynomial of degree " + std::to_string(k) + " over F_" +
                         std::to_string(p) + " satisfies the search predicate");
}

PrimePoly to_prime_poly(std::span<const Residue> c) { return PrimePoly(c.begin(), c.end()); }

bool x_is_primitive(std::span<const Residue> monic, std::uint32_t p) {
  const PrimePoly m = to_prime_poly(monic);
  if (m.front() == 0) return false;
  const std::size_t k = m.size() - 1;
  // the norm of x, (-1)^k m_0, must generate F_p^*
  if (p > 2) {
    const std::uint64_t norm = k % 2 == 0 ? m.front() : p - m.front();
    for (std::uint64_t r : prime_divisors(p - 1)) {
      std::uint64_t acc = 1, base = norm;
      for (std::uint64_t e = (p - 1) / r; e > 0; e >>= 1) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
      }
      if (acc == 1) return false;
    }
  }
  std::uint64_t q = 1;
  for (std::size_t i = 0; i < k; ++i) q *= p;
  const PrimePoly x{0, 1};
  if (poly_powmod(x, q - 1, m, p) != PrimePoly{1}) return false;
  for (std::uint64_t r : prime_divisors(q - 1))
    if (poly_powmod(x, (q - 1) / r, m, p) == PrimePoly{1}) return false;
  return true;
}

void check_order(std::uint64_t p, int k) {
  if (!is_prime(p)) throw DomainError("characteristic " + std::to_string(p) + " is not prime");
  if (k < 1) throw DomainError("extension degree must be >= 1, got " + std::to_string(k));
  std::uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    if (q > kMaxFieldOrder)
      throw DomainError("field order " + std::to_string(p) + "^" + std::to_string(k) +
                        " exceeds the supported maximum 2^31");
  }
}

struct Registry {
  std::mutex mu;
  std::map<std::pair<std::uint32_t, std::vector<Residue>>, std::unique_ptr<FieldDesc>> by_modulus;
  std::map<std::pair<std::uint64_t, int>, const FieldDesc*> canonical;
  std::map<std::pair<std::uint64_t, int>, const FieldDesc*> primitive;
};

Registry& registry() {
  static Registry r;
  return r;
}

constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 16;

}  // namespace

bool is_irreducible_mod_p(std::span<const Residue> monic, std::uint32_t p) {
  PrimePoly m = to_prime_poly(monic);
  trim(m);
  if (m.size() < 2) return false;
  const std::size_t k = m.size() - 1;
  if (k == 1) return true;
  if (m.front() == 0) return false;
  const PrimePoly x{0, 1};
  PrimePoly xp = x;
  for (std::size_t i = 1; i <= k / 2; ++i) {
    xp = poly_powmod(xp, p, m, p);
    PrimePoly diff = xp;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (diff.empty()) return false;
    if (poly_gcd(m, diff, p).size() > 1) return false;
  }
  return true;
}

const FieldDesc& intern_field(std::uint32_t p, std::vector<Residue> modulus) {
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  auto key = std::make_pair(p, modulus);
  auto it = reg.by_modulus.find(key);
  if (it != reg.by_modulus.end()) return *it->second;
  auto desc = std::unique_ptr<FieldDesc>(new FieldDesc(p, std::move(modulus)));
  const FieldDesc& ref = *desc;
  reg.by_modulus.emplace(std::move(key), std::move(desc));
  return ref;
}

const FieldDesc& make_field(std::uint64_t p, int k) {
  check_order(p, k);
  {
    auto& reg = registry();
    std::lock_guard lock(reg.mu);
    auto it = reg.canonical.find({p, k});
    if (it != reg.canonical.end()) return *it->second;
  }
  const auto p32 = static_cast<std::uint32_t>(p);
  std::vector<Residue> modulus;
  if (k > 1)
    modulus = first_monic(p32, k, [&](std::span<const Residue> c) { return is_irreducible_mod_p(c, p32); });
  const FieldDesc& f = intern_field(p32, std::move(modulus));
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  reg.canonical.emplace(std::make_pair(p, k), &f);
  return f;
}

const FieldDesc& make_primitive_field(std::uint64_t p, int k) {
  check_order(p, k);
  if (k == 1) return make_field(p, 1);
  {
    auto& reg = registry();
    std::lock_guard lock(reg.mu);
    auto it = reg.primitive.find({p, k});
    if (it != reg.primitive.end()) return *it->second;
  }
  const auto p32 = static_cast<std::uint32_t>(p);
  auto modulus = first_monic(p32, k, [&](std::span<const Residue> c) { return x_is_primitive(c, p32); });
  const FieldDesc& f = intern_field(p32, std::move(modulus));
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  reg.primitive.emplace(std::make_pair(p, k), &f);
  return f;
}

const FieldDesc& make_field_with_modulus(std::uint64_t p, std::vector<Residue> modulus) {
  if (modulus.size() < 3) throw DomainError("modulus must have degree >= 2");
  check_order(p, static_cast<int>(modulus.size()) - 1);
  const auto p32 = static_cast<std::uint32_t>(p);
  for (Residue c : modulus)
    if (c >= p32) throw DomainError("modulus coefficient out of range");
  if (modulus.back() != 1) throw DomainError("modulus must be monic");
  if (!is_irreducible_mod_p(modulus, p32)) throw DomainError("modulus is reducible");
  return intern_field(p32, std::move(modulus));
}

FieldDesc::FieldDesc(std::uint32_t p, std::vector<Residue> modulus)
    : p_(p), k_(modulus.empty() ? 1 : static_cast<unsigned>(modulus.size() - 1)), q_(1), modulus_(std::move(modulus)) {
  pow_p_.reserve(k_ + 1);
  for (unsigned i = 0; i <= k_; ++i) {
    pow_p_.push_back(q_);
    if (i < k_) q_ *= p_;
  }
  if (k_ > 1 && q_ <= kTableLimit) build_tables();
}

void FieldDesc::build_tables() {
  const std::uint64_t n = q_ - 1;
  const auto divisors = prime_divisors(n);
  std::uint32_t gen = 0;
  for (std::uint32_t cand = 2; cand < q_ && gen == 0; ++cand) {
    bool ok = true;
    for (std::uint64_t r : divisors) {
      // plain square-and-multiply; tables are not built yet
      std::uint32_t acc = 1, base = cand;
      for (std::uint64_t e = n / r; e > 0; e >>= 1) {
        if (e & 1) acc = mul_schoolbook(acc, base);
        base = mul_schoolbook(base, base);
      }
      if (acc == 1) {
        ok = false;
        break;
      }
    }
    if (ok) gen = cand;
  }
  log_.assign(q_, 0);
  exp_.assign(2 * n, 0);
  std::uint32_t cur = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    exp_[i] = exp_[i + n] = cur;
    log_[cur] = static_cast<std::uint32_t>(i);
    cur = mul_schoolbook(cur, gen);
  }
}

std::vector<Residue> FieldDesc::digits(std::uint32_t raw) const {
  std::vector<Residue> out(k_);
  for (unsigned i = 0; i < k_; ++i) {
    out[i] = raw % p_;
    raw /= p_;
  }
  return out;
}

std::uint32_t FieldDesc::encode(std::span<const Residue> coeffs) const {
  if (coeffs.size() > k_) throw DomainError("too many coefficients for " + to_string());
  std::uint64_t raw = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] >= p_) throw DomainError("coefficient out of range for " + to_string());
    raw = raw * p_ + coeffs[i];
  }
  return static_cast<std::uint32_t>(raw);
}

std::uint32_t FieldDesc::add(std::uint32_t a, std::uint32_t b) const {
  if (k_ == 1) return static_cast<std::uint32_t>((std::uint64_t{a} + b) % p_);
  if (p_ == 2) return a ^ b;
  std::uint64_t out = 0;
  for (unsigned i = 0; i < k_; ++i) {
    const std::uint32_t da = a % p_, db = b % p_;
    a /= p_;
    b /= p_;
    std::uint32_t s = da + db;
    if (s >= p_) s -= p_;
    out += s * pow_p_[i];
  }
  return static_cast<std::uint32_t>(out);
}

std::uint32_t FieldDesc::neg(std::uint32_t a) const {
  if (k_ == 1) return a == 0 ? 0 : p_ - a;
  if (p_ == 2) return a;
  std::uint64_t out = 0;
  for (unsigned i = 0; i < k_; ++i) {
    const std::uint32_t d = a % p_;
    a /= p_;
    out += (d == 0 ? 0 : p_ - d) * pow_p_[i];
  }
  return static_cast<std::uint32_t>(out);
}

std::uint32_t FieldDesc::sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

std::uint32_t FieldDesc::mul_schoolbook(std::uint32_t a, std::uint32_t b) const {
  if (k_ == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
  std::vector<std::uint64_t> da(k_), db(k_), prod(2 * k_ - 1, 0);
  for (unsigned i = 0; i < k_; ++i) {
    da[i] = a % p_;
    db[i] = b % p_;
    a /= p_;
    b /= p_;
  }
  for (unsigned i = 0; i < k_; ++i) {
    if (da[i] == 0) continue;
    for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
  }
  for (std::size_t top = prod.size(); top-- > k_;) {
    const std::uint64_t c = prod[top];
    if (c == 0) continue;
    prod[top] = 0;
    const std::size_t shift = top - k_;
    for (unsigned i = 0; i < k_; ++i) prod[shift + i] = (prod[shift + i] + (p_ - c) * modulus_[i]) % p_;
  }
  std::uint64_t out = 0;
  for (unsigned i = k_; i-- > 0;) out = out * p_ + prod[i];
  return static_cast<std::uint32_t>(out);
}

std::uint32_t FieldDesc::mul(std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  if (!log_.empty()) return exp_[log_[a] + log_[b]];
  return mul_schoolbook(a, b);
}

std::uint32_t FieldDesc::pow(std::uint32_t a, std::uint64_t n) const {
  if (n == 0) return 1;
  if (a == 0) return 0;
  n %= (q_ - 1);
  if (!log_.empty()) return exp_[static_cast<std::uint64_t>(log_[a]) * n % (q_ - 1)];
  std::uint32_t acc = 1;
  while (n > 0) {
    if (n & 1) acc = mul(acc, a);
    n >>= 1;
    if (n) a = mul(a, a);
  }
  return acc;
}

std::uint32_t FieldDesc::inv(std::uint32_t a) const {
  if (a == 0) throw DomainError("division by zero in " + to_string());
  if (k_ == 1) return static_cast<std::uint32_t>(inv_mod(a, p_));
  if (!log_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  return pow(a, q_ - 2);
}

std::uint32_t FieldDesc::frobenius(std::uint32_t a, std::uint64_t i) const {
  if (k_ == 1 || a == 0) return a;
  return pow(a, pow_p_[i % k_]);
}

std::string FieldDesc::to_string() const {
  std::ostringstream os;
  os << "F_" << p_;
  if (k_ > 1) os << "^" << k_;
  return os.str();
}

FieldElement::FieldElement(const FieldDesc& field, std::uint32_t raw) : field_(&field), raw_(raw) {
  if (raw >= field.order()) throw DomainError("raw value out of range for " + field.to_string());
}

FieldElement FieldElement::from_int(const FieldDesc& field, std::int64_t n) {
  const auto p = static_cast<std::int64_t>(field.characteristic());
  std::int64_t r = n % p;
  if (r < 0) r += p;
  return {field, static_cast<std::uint32_t>(r)};
}

FieldElement FieldElement::from_coeffs(const FieldDesc& field, std::span<const std::int64_t> coeffs) {
  if (coeffs.size() > field.degree())
    throw DomainError("element has " + std::to_string(coeffs.size()) + " coefficients, field " + field.to_string() +
                      " has degree " + std::to_string(field.degree()));
  const auto p = static_cast<std::int64_t>(field.characteristic());
  std::vector<Residue> reduced;
  reduced.reserve(coeffs.size());
  for (std::int64_t c : coeffs) reduced.push_back(static_cast<Residue>(((c % p) + p) % p));
  return {field, field.encode(reduced)};
}

FieldElement FieldElement::generator(const FieldDesc& field) {
  if (field.degree() == 1) throw DomainError("prime field has no power-basis generator");
  return {field, field.characteristic()};
}

void FieldElement::check_same(const FieldElement& o) const {
  if (field_ != o.field_)
    throw DomainError("field mismatch: " + field_->to_string() + " vs " + o.field_->to_string());
}

FieldElement FieldElement::operator-() const { return {*field_, field_->neg(raw_)}; }

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same(o);
  raw_ = field_->add(raw_, o.raw_);
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same(o);
  raw_ = field_->sub(raw_, o.raw_);
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_same(o);
  raw_ = field_->mul(raw_, o.raw_);
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  check_same(o);
  raw_ = field_->mul(raw_, field_->inv(o.raw_));
  return *this;
}

FieldElement FieldElement::inverse() const { return {*field_, field_->inv(raw_)}; }

FieldElement FieldElement::pow(std::uint64_t n) const { return {*field_, field_->pow(raw_, n)}; }

FieldElement FieldElement::pow(const BigInt& n) const {
  if (n < 0) throw DomainError("negative exponent");
  if (n == 0) return one(*field_);
  if (raw_ == 0) return zero(*field_);
  const BigInt reduced = n % BigInt(field_->order() - 1);
  return pow(reduced.convert_to<std::uint64_t>());
}

FieldElement FieldElement::frobenius(std::uint64_t i) const { return {*field_, field_->frobenius(raw_, i)}; }

std::string FieldElement::to_string() const {
  const auto c = coeffs();
  if (c.size() == 1) return std::to_string(c[0]);
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << "]";
  return os.str();
}

std::uint64_t lth_power_count(const FieldElement& c, std::uint64_t l) {
  if (c.is_zero()) return 1;
  const std::uint64_t q = c.field().order();
  const std::uint64_t d = std::gcd(l, q - 1);
  return c.pow((q - 1) / d).is_one() ? d : 0;
}

}  // namespace tri::algebra
