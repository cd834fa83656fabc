#include "tri/zeta.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "tri/algebra/json.hpp"
#include "tri/error.hpp"

namespace tri::zeta {

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// F_{p^n} with a primitive modulus, plus log(x) mod d for every nonzero element.
struct CountingField {
  const FieldDesc* field;
  std::uint32_t d;
  std::vector<std::uint8_t> logmod;
};

std::shared_ptr<const CountingField> counting_field(std::uint32_t p, int n, std::uint32_t d) {
  static std::mutex mu;
  static std::map<std::tuple<std::uint32_t, int, std::uint32_t>, std::shared_ptr<const CountingField>> cache;
  std::lock_guard lock(mu);
  const auto key = std::make_tuple(p, n, d);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const FieldDesc& f = algebra::make_primitive_field(p, n);
  auto cf = std::make_shared<CountingField>();
  cf->field = &f;
  cf->d = d;
  const std::uint64_t q = f.order();
  cf->logmod.assign(q, 0);

  std::uint32_t gen = 0;  // multiplier for the prime-field case
  std::vector<std::uint32_t> reduction;  // top * (m - x^n) for top in [0, p)
  std::uint64_t top_unit = 1;
  if (n == 1) {
    const auto divisors = algebra::prime_divisors(q - 1);
    for (std::uint32_t g = 1; g < q && gen == 0; ++g) {
      bool ok = true;
      for (auto r : divisors)
        if (f.pow(g, (q - 1) / r) == 1) ok = false;
      if (ok) gen = g;
    }
  } else {
    top_unit = q / p;
    std::vector<algebra::Residue> low(f.modulus().begin(), f.modulus().end() - 1);
    const std::uint32_t low_raw = f.encode(low);
    for (std::uint32_t top = 0; top < p; ++top) reduction.push_back(f.mul(low_raw, top));
  }

  std::uint64_t cur = 1;
  for (std::uint64_t t = 0; t + 1 < q; ++t) {
    cf->logmod[cur] = static_cast<std::uint8_t>(t % d);
    if (n == 1) {
      cur = cur * gen % p;
    } else {
      // multiply by x: shift digits up and fold the top digit back with the modulus
      const auto top = static_cast<std::uint32_t>(cur / top_unit);
      cur = (cur % top_unit) * p;
      cur = f.sub(static_cast<std::uint32_t>(cur), reduction[top]);
    }
  }
  if (cur != 1) throw ConsistencyError("counting field generator does not have full order");
  cache.emplace(key, cf);
  return cf;
}

// Image of a root of the source modulus inside the counting field.
std::uint32_t embedding_root(const FieldDesc& src, const FieldDesc& dst) {
  static std::mutex mu;
  static std::map<std::pair<const FieldDesc*, const FieldDesc*>, std::uint32_t> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({&src, &dst}); it != cache.end()) return it->second;
  }
  const std::uint64_t q = src.order(), big = dst.order();
  // F_q* inside F_big* is generated by x^((big-1)/(q-1))
  const FieldElement step = FieldElement::generator(dst).pow((big - 1) / (q - 1));
  std::vector<FieldElement> modulus;
  for (auto c : src.modulus()) modulus.push_back(FieldElement::from_int(dst, c));
  FieldElement cand = step;
  for (std::uint64_t t = 1; t < q; ++t, cand = cand * step) {
    FieldElement acc = FieldElement::zero(dst);
    for (std::size_t i = modulus.size(); i-- > 0;) acc = acc * cand + modulus[i];
    if (acc.is_zero()) {
      std::lock_guard lock(mu);
      cache.emplace(std::make_pair(&src, &dst), cand.raw());
      return cand.raw();
    }
  }
  throw ConsistencyError("no root of the " + src.to_string() + " modulus in " + dst.to_string());
}

std::uint32_t embed(const FieldElement& a, const FieldDesc& dst) {
  const FieldDesc& src = a.field();
  if (src.degree() == 1) return a.raw();
  const FieldElement root(dst, embedding_root(src, dst));
  FieldElement acc = FieldElement::zero(dst);
  const auto c = a.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * root + FieldElement::from_int(dst, c[i]);
  return acc.raw();
}

// sum over x in [begin, end) of the affine fiber sizes
struct EmbeddedFactor {
  std::vector<std::uint32_t> coeffs;  // low degree first, inside the counting field
  std::uint32_t a;
};

std::uint64_t count_range(const CountingField& cf, const std::vector<std::uint32_t>& alphas, const std::vector<int>& weights,
                          const std::vector<EmbeddedFactor>& factors, std::uint64_t begin, std::uint64_t end) {
  const FieldDesc& f = *cf.field;
  const std::uint32_t p = f.characteristic();
  const unsigned n = f.degree();
  const std::size_t nb = alphas.size();
  std::vector<std::uint64_t> pw(n + 1, 1);
  for (unsigned i = 1; i <= n; ++i) pw[i] = pw[i - 1] * p;

  // y_j = x - alpha_j, digitwise, maintained as x runs through [begin, end)
  std::vector<std::uint32_t> ydig(nb * n);
  std::vector<std::uint64_t> yraw(nb);
  const auto x0 = static_cast<std::uint32_t>(begin);
  for (std::size_t j = 0; j < nb; ++j) {
    yraw[j] = f.sub(x0, alphas[j]);
    for (unsigned i = 0; i < n; ++i) ydig[j * n + i] = f.digit(static_cast<std::uint32_t>(yraw[j]), i);
  }
  std::vector<std::uint32_t> xdig(n);
  for (unsigned i = 0; i < n; ++i) xdig[i] = f.digit(x0, i);

  std::uint64_t total = 0;
  for (std::uint64_t x = begin; x < end; ++x) {
    std::uint32_t e = 0;
    bool branch = false;
    for (std::size_t j = 0; j < nb; ++j) {
      if (yraw[j] == 0) {
        branch = true;
        break;
      }
      e += static_cast<std::uint32_t>(weights[j]) * cf.logmod[yraw[j]];
    }
    for (std::size_t m = 0; m < factors.size() && !branch; ++m) {
      const auto& c = factors[m].coeffs;
      const auto xr = static_cast<std::uint32_t>(x);
      std::uint32_t v = 0;
      for (std::size_t i = c.size(); i-- > 0;) v = f.add(f.mul(v, xr), c[i]);
      if (v == 0)
        branch = true;
      else
        e += factors[m].a * cf.logmod[v];
    }
    if (branch)
      total += 1;
    else if (e % cf.d == 0)
      total += cf.d;

    // advance x by one: digits 0..carry all move up by one mod p
    unsigned depth = 0;
    while (depth < n) {
      if (++xdig[depth] < p) break;
      xdig[depth] = 0;
      ++depth;
    }
    const unsigned last = std::min(depth, n - 1);
    for (std::size_t j = 0; j < nb; ++j) {
      std::uint32_t* dg = &ydig[j * n];
      for (unsigned i = 0; i <= last; ++i) {
        if (dg[i] + 1 == p) {
          dg[i] = 0;
          yraw[j] -= static_cast<std::uint64_t>(p - 1) * pw[i];
        } else {
          ++dg[i];
          yraw[j] += pw[i];
        }
      }
    }
  }
  return total;
}

}  // namespace

int CyclicCover::branch_count() const {
  int n = static_cast<int>(branches.size());
  for (const auto& fac : factors) n += fac.poly.degree();
  return n;
}

CyclicCover make_cover(int l, const FieldDesc& field, std::vector<Branch> branches, std::vector<Factor> factors) {
  if (l < 3 || !algebra::is_prime(static_cast<std::uint64_t>(l))) throw DomainError("l must be an odd prime");
  if (l > 251) throw DomainError("l > 251 is not supported by the point counter");
  if (field.characteristic() == static_cast<std::uint32_t>(l)) throw DomainError("characteristic must differ from l");
  long long sum = 0;
  std::vector<std::uint32_t> seen;
  for (const auto& b : branches) {
    if (&b.alpha.field() != &field) throw DomainError("branch point from a different field");
    if (b.a < 1 || b.a >= l) throw DomainError("inertia generator must lie in [1, l-1]");
    sum += b.a;
    seen.push_back(b.alpha.raw());
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw DomainError("branch points must be distinct");
  for (std::size_t m = 0; m < factors.size(); ++m) {
    const auto& fac = factors[m];
    if (&fac.poly.field() != &field) throw DomainError("factor from a different field");
    if (fac.a < 1 || fac.a >= l) throw DomainError("inertia generator must lie in [1, l-1]");
    if (fac.poly.degree() < 1 || !fac.poly.is_monic()) throw DomainError("factors must be monic of degree >= 1");
    if (!algebra::is_squarefree(fac.poly)) throw DomainError("factor is not squarefree");
    for (const auto& b : branches)
      if (fac.poly.eval(b.alpha).is_zero()) throw DomainError("factor vanishes at a listed branch point");
    for (std::size_t o = 0; o < m; ++o)
      if (algebra::gcd(fac.poly, factors[o].poly).degree() != 0) throw DomainError("factors must be coprime");
    sum += static_cast<long long>(fac.a) * fac.poly.degree();
  }
  CyclicCover c{l, &field, std::move(branches), std::move(factors)};
  if (c.branch_count() < 3) throw DomainError("a cover needs at least 3 branch points");
  if (sum % l != 0) throw DomainError("inertia generators must sum to 0 mod l (cover branched at infinity)");
  return c;
}

CyclicCover from_trielliptic(const cartier::TriellipticCurve& curve) {
  const FieldDesc& f = *curve.field;
  std::vector<Branch> branches;
  Polynomial rest1 = curve.p1, rest2 = curve.p2;
  const Polynomial x = Polynomial::x(f);
  for (std::uint32_t raw = 0; raw < f.order(); ++raw) {
    const FieldElement r(f, raw);
    for (auto [rest, a] : {std::pair<Polynomial*, int>{&rest1, 1}, {&rest2, 2}})
      if (rest->degree() > 0 && rest->eval(r).is_zero()) {
        branches.push_back({r, a});
        *rest = algebra::divmod(*rest, x - Polynomial::constant(r)).first;
      }
  }
  std::vector<Factor> factors;
  if (rest1.degree() > 0) factors.push_back({rest1, 1});
  if (rest2.degree() > 0) factors.push_back({rest2, 2});
  return make_cover(3, f, std::move(branches), std::move(factors));
}

nlohmann::json cover_to_json(const CyclicCover& c) {
  nlohmann::json br = nlohmann::json::array();
  for (const auto& b : c.branches) br.push_back({{"alpha", b.alpha.coeffs()}, {"a", b.a}});
  nlohmann::json j{{"l", c.l}, {"p", c.field->characteristic()}, {"k", c.field->degree()}, {"branches", br}};
  if (!c.factors.empty()) {
    nlohmann::json fs = nlohmann::json::array();
    for (const auto& fac : c.factors) {
      nlohmann::json co = nlohmann::json::array();
      for (const auto& a : fac.poly.coeffs()) co.push_back(algebra::coefficient_to_json(a));
      fs.push_back({{"poly", co}, {"a", fac.a}});
    }
    j["factors"] = fs;
  }
  return j;
}

CyclicCover cover_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("l") || !j.contains("branches"))
    throw DomainError("cover JSON needs \"l\", \"p\", \"k\" and \"branches\"");
  const FieldDesc& f = algebra::field_from_json(j);
  std::vector<Branch> branches;
  try {
    for (const auto& b : j.at("branches"))
      branches.push_back({algebra::coefficient_from_json(f, b.at("alpha")), b.at("a").get<int>()});
    std::vector<Factor> factors;
    if (j.contains("factors"))
      for (const auto& fac : j.at("factors"))
        factors.push_back({algebra::polynomial_from_json(f, fac.at("poly")), fac.at("a").get<int>()});
    return make_cover(j.at("l").get<int>(), f, std::move(branches), std::move(factors));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed cover: ") + e.what());
  }
}

bool countable(const CyclicCover& c, int i) {
  const std::uint64_t q = c.field->order();
  std::uint64_t big = 1;
  for (int t = 0; t < i; ++t) {
    big *= q;
    if (big > kMaxCountOrder) return false;
  }
  return true;
}

std::uint64_t count_points(const CyclicCover& c, int i, unsigned workers) {
  if (i < 1) throw DomainError("extension index must be >= 1");
  if (!countable(c, i))
    throw DomainError("F_q^" + std::to_string(i) + " over " + c.field->to_string() + " is too large to enumerate");
  const std::uint32_t p = c.field->characteristic();
  const int n = static_cast<int>(c.field->degree()) * i;
  const std::uint64_t big = ipow(p, n);
  const auto d = static_cast<std::uint32_t>(std::gcd<std::uint64_t>(static_cast<std::uint64_t>(c.l), big - 1));
  // unramified over infinity: the fiber there is the set of l-th roots of unity in F_{q^i}
  if (d == 1) return big + 1;  // y -> y^l is a bijection, one point over every x

  const auto cf = counting_field(p, n, d);
  std::vector<std::uint32_t> alphas;
  std::vector<int> weights;
  for (const auto& b : c.branches) {
    alphas.push_back(embed(b.alpha, *cf->field));
    weights.push_back(b.a);
  }
  std::vector<EmbeddedFactor> factors;
  for (const auto& fac : c.factors) {
    EmbeddedFactor e{{}, static_cast<std::uint32_t>(fac.a)};
    for (const auto& co : fac.poly.coeffs()) e.coeffs.push_back(embed(co, *cf->field));
    factors.push_back(std::move(e));
  }
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(1, big / 4096))));
  std::uint64_t affine = 0;
  if (workers == 1) {
    affine = count_range(*cf, alphas, weights, factors, 0, big);
  } else {
    std::vector<std::uint64_t> partial(workers, 0);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        partial[w] = count_range(*cf, alphas, weights, factors, big * w / workers, big * (w + 1) / workers);
      });
    for (auto& t : pool) t.join();
    affine = std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
  }
  return affine + d;
}

std::int64_t predicted_count(const LPolynomial& L, int i) {
  // power sums S_j of the inverse roots from P(T) = prod (1 - a T):
  // j c_j + sum_{m=1}^{j} S_m c_{j-m} = 0, with c_j = 0 beyond 2g
  std::vector<__int128> S(static_cast<std::size_t>(i) + 1, 0);
  const auto coeff = [&](int j) -> __int128 { return j < static_cast<int>(L.coeffs.size()) ? L.coeffs[static_cast<std::size_t>(j)] : 0; };
  for (int j = 1; j <= i; ++j) {
    __int128 acc = -static_cast<__int128>(j) * coeff(j);
    for (int m = 1; m < j; ++m) acc -= S[static_cast<std::size_t>(m)] * coeff(j - m);
    S[static_cast<std::size_t>(j)] = acc;
  }
  __int128 qi = 1;
  for (int t = 0; t < i; ++t) qi *= L.q;
  return static_cast<std::int64_t>(qi + 1 - S[static_cast<std::size_t>(i)]);
}

LPolynomial l_polynomial(const CyclicCover& c, unsigned workers) {
  const int g = c.genus();
  LPolynomial L;
  L.q = c.field->order();
  L.genus = g;
  std::vector<std::int64_t> S(static_cast<std::size_t>(g) + 1, 0);
  std::int64_t qi = 1;
  for (int i = 1; i <= g; ++i) {
    qi *= static_cast<std::int64_t>(L.q);
    const std::uint64_t N = count_points(c, i, workers);
    L.counts.push_back(N);
    S[static_cast<std::size_t>(i)] = qi + 1 - static_cast<std::int64_t>(N);
    const __int128 dev = S[static_cast<std::size_t>(i)];
    if (dev * dev > static_cast<__int128>(4) * g * g * qi)
      throw ConsistencyError("Weil bound violated by N_" + std::to_string(i) + " = " + std::to_string(N));
  }
  L.coeffs.assign(static_cast<std::size_t>(2 * g) + 1, 0);
  L.coeffs[0] = 1;
  for (int i = 1; i <= g; ++i) {
    __int128 acc = 0;
    for (int j = 1; j <= i; ++j) acc -= static_cast<__int128>(S[static_cast<std::size_t>(j)]) * L.coeffs[static_cast<std::size_t>(i - j)];
    if (acc % i != 0) throw ConsistencyError("Newton identity produced a non-integral coefficient");
    L.coeffs[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(acc / i);
  }
  std::int64_t qpow = 1;
  for (int i = g; i >= 0; --i) {
    L.coeffs[static_cast<std::size_t>(2 * g - i)] = qpow * L.coeffs[static_cast<std::size_t>(i)];
    if (i > 0) qpow *= static_cast<std::int64_t>(L.q);
  }
  const __int128 c1 = g > 0 ? L.coeffs[1] : 0;
  if (c1 * c1 > static_cast<__int128>(4) * g * g * static_cast<__int128>(L.q))
    throw ConsistencyError("|c_1| exceeds 2g sqrt(q)");
  const std::int64_t at_one = std::accumulate(L.coeffs.begin(), L.coeffs.end(), std::int64_t{0});
  if (at_one <= 0) throw ConsistencyError("P(1) = " + std::to_string(at_one) + " is not positive");
  return L;
}

int prank_from_l_polynomial(const LPolynomial& L, std::uint32_t p) {
  int deg = 0;
  for (std::size_t i = 0; i < L.coeffs.size(); ++i) {
    const std::int64_t r = L.coeffs[i] % static_cast<std::int64_t>(p);
    if (r != 0) deg = static_cast<int>(i);
  }
  return deg;
}

int prank_zeta(const CyclicCover& c, unsigned workers) {
  return prank_from_l_polynomial(l_polynomial(c, workers), c.field->characteristic());
}

ZetaAudit audit(const CyclicCover& c, const LPolynomial& L, unsigned workers) {
  ZetaAudit out;
  const int g = L.genus;
  std::int64_t qpow = 1;
  for (int i = g; i >= 0; --i) {
    const std::int64_t diff = L.coeffs[static_cast<std::size_t>(2 * g - i)] - qpow * L.coeffs[static_cast<std::size_t>(i)];
    out.functional_equation_residual += diff < 0 ? -diff : diff;
    if (i > 0) qpow *= static_cast<std::int64_t>(L.q);
  }
  for (int i = 1; i <= g; ++i)
    if (predicted_count(L, i) != static_cast<std::int64_t>(L.counts[static_cast<std::size_t>(i - 1)])) out.newton_roundtrip = false;
  std::uint64_t next = 1;
  bool small = true;
  for (int i = 0; i <= g; ++i) {
    next *= L.q;
    if (next > kOvercountOrder) {
      small = false;
      break;
    }
  }
  if (small) {
    out.predicted_next = predicted_count(L, g + 1);
    out.counted_next = count_points(c, g + 1, workers);
    const __int128 dev = static_cast<__int128>(next) + 1 - static_cast<__int128>(*out.counted_next);
    if (dev * dev > static_cast<__int128>(4) * g * g * next) out.weil_bounds = false;
  }
  return out;
}

}  // namespace tri::zeta
