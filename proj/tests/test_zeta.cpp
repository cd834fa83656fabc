#include <doctest.h>

#include <cmath>

#include "tri/cartier.hpp"
#include "tri/error.hpp"
#include "tri/zeta.hpp"

using namespace tri;
using namespace tri::zeta;
using algebra::make_field;
using algebra::Polynomial;
using cartier::validate_curve;

namespace {

// Brute force over the canonical-modulus field F_{q^i}: for every x count the y with
// y^l = F(x), and the l-th roots of unity over infinity.
std::uint64_t brute_count(const CyclicCover& c, int i) {
  const FieldDesc& src = *c.field;
  const FieldDesc& big = make_field(src.characteristic(), static_cast<int>(src.degree()) * i);
  // any root of the source modulus gives an embedding; conjugates give the same count
  FieldElement root = FieldElement::zero(big);
  if (src.degree() > 1) {
    bool found = false;
    for (std::uint32_t raw = 0; raw < big.order() && !found; ++raw) {
      const FieldElement w(big, raw);
      FieldElement acc = FieldElement::zero(big);
      for (std::size_t t = src.modulus().size(); t-- > 0;) acc = acc * w + FieldElement::from_int(big, src.modulus()[t]);
      if (acc.is_zero()) {
        root = w;
        found = true;
      }
    }
    REQUIRE(found);
  }
  const auto embed = [&](const FieldElement& a) {
    if (src.degree() == 1) return FieldElement(big, a.raw());
    FieldElement acc = FieldElement::zero(big);
    const auto co = a.coeffs();
    for (std::size_t t = co.size(); t-- > 0;) acc = acc * root + FieldElement::from_int(big, co[t]);
    return acc;
  };
  std::vector<std::uint64_t> fiber(big.order(), 0);
  for (std::uint32_t y = 0; y < big.order(); ++y)
    ++fiber[FieldElement(big, y).pow(static_cast<std::uint64_t>(c.l)).raw()];
  std::vector<FieldElement> alphas;
  for (const auto& b : c.branches) alphas.push_back(embed(b.alpha));
  std::vector<std::vector<FieldElement>> polys;
  for (const auto& fac : c.factors) {
    polys.emplace_back();
    for (const auto& co : fac.poly.coeffs()) polys.back().push_back(embed(co));
  }
  std::uint64_t total = fiber[1];
  for (std::uint32_t x = 0; x < big.order(); ++x) {
    const FieldElement xe(big, x);
    FieldElement v = FieldElement::one(big);
    for (std::size_t j = 0; j < alphas.size(); ++j)
      v = v * (xe - alphas[j]).pow(static_cast<std::uint64_t>(c.branches[j].a));
    for (std::size_t m = 0; m < polys.size(); ++m) {
      FieldElement pv = FieldElement::zero(big);
      for (std::size_t t = polys[m].size(); t-- > 0;) pv = pv * xe + polys[m][t];
      v = v * pv.pow(static_cast<std::uint64_t>(c.factors[m].a));
    }
    total += fiber[v.raw()];
  }
  return total;
}

CyclicCover cover(int l, const FieldDesc& f, std::vector<std::pair<std::uint32_t, int>> br) {
  std::vector<Branch> out;
  for (auto [raw, a] : br) out.push_back({FieldElement(f, raw), a});
  return make_cover(l, f, out);
}

}  // namespace

TEST_CASE("y^3 = x^3 - x") {
  const FieldDesc& f5 = make_field(5, 1);
  const auto c5 = from_trielliptic(validate_curve(f5, Polynomial::from_ints(f5, std::vector<std::int64_t>{0, -1, 0, 1}),
                                                  Polynomial::constant(FieldElement::one(f5))));
  CHECK(c5.genus() == 1);
  CHECK(count_points(c5, 1) == 6);
  CHECK(count_points(c5, 2) == 36);
  const auto L = l_polynomial(c5);
  CHECK(L.coeffs == std::vector<std::int64_t>{1, 0, 5});
  CHECK(prank_zeta(c5) == 0);

  const FieldDesc& f7 = make_field(7, 1);
  const auto c7 = from_trielliptic(validate_curve(f7, Polynomial::from_ints(f7, std::vector<std::int64_t>{0, -1, 0, 1}),
                                                  Polynomial::constant(FieldElement::one(f7))));
  CHECK(prank_zeta(c7) == 1);
}

TEST_CASE("superspecial genus 2 curve at p = 5") {
  const FieldDesc& f5 = make_field(5, 1);
  const auto curve = validate_curve(f5, Polynomial::from_ints(f5, std::vector<std::int64_t>{-1, 0, 1}),
                                    Polynomial::from_ints(f5, std::vector<std::int64_t>{1, 0, 1}));
  const auto c = from_trielliptic(curve);
  CHECK(prank_zeta(c) == 0);
  CHECK(cartier::prank_cartier(curve) == 0);
}

TEST_CASE("point counts agree with brute force") {
  struct Case {
    int l;
    std::uint64_t p;
    int k;
    std::vector<std::pair<std::uint32_t, int>> br;
    int max_i;
  };
  const std::vector<Case> cases{
      {3, 5, 1, {{0, 1}, {1, 1}, {2, 1}}, 3},
      {3, 7, 1, {{0, 1}, {1, 2}, {3, 1}, {4, 2}}, 3},
      {3, 13, 1, {{0, 2}, {1, 2}, {5, 2}}, 2},
      {3, 2, 2, {{0, 1}, {1, 1}, {2, 2}, {3, 2}}, 4},
      {3, 2, 3, {{1, 1}, {2, 1}, {5, 1}, {6, 1}, {7, 2}}, 2},
      {5, 11, 1, {{0, 1}, {2, 1}, {7, 3}}, 2},
      {5, 2, 4, {{0, 1}, {3, 2}, {9, 2}}, 1},
      {7, 29, 1, {{0, 1}, {1, 2}, {2, 4}}, 2},
      {3, 5, 2, {{0, 1}, {7, 1}, {13, 2}, {24, 2}}, 2},
  };
  for (const auto& cs : cases) {
    const auto c = cover(cs.l, make_field(cs.p, cs.k), cs.br);
    for (int i = 1; i <= cs.max_i; ++i) {
      CAPTURE(cs.l);
      CAPTURE(cs.p);
      CAPTURE(cs.k);
      CAPTURE(i);
      CHECK(count_points(c, i) == brute_count(c, i));
      CHECK(count_points(c, i, 4) == count_points(c, i, 1));
    }
  }
}

TEST_CASE("L-polynomial audit and Weil bounds") {
  const std::vector<CyclicCover> covers{
      cover(3, make_field(5, 1), {{0, 1}, {1, 1}, {2, 2}, {4, 2}}),
      cover(3, make_field(7, 1), {{0, 1}, {1, 1}, {3, 1}, {4, 1}, {6, 2}}),
      cover(5, make_field(11, 1), {{0, 1}, {2, 1}, {7, 3}}),
      cover(3, make_field(2, 2), {{0, 1}, {1, 1}, {2, 2}, {3, 2}}),
      cover(3, make_field(2, 3), {{1, 1}, {2, 1}, {5, 2}, {6, 1}, {7, 1}}),
  };
  for (const auto& c : covers) {
    const auto L = l_polynomial(c);
    const auto a = audit(c, L);
    CHECK(a.ok());
    CHECK(a.functional_equation_residual == 0);
    CHECK(a.newton_roundtrip);
    const int g = c.genus();
    const double q = static_cast<double>(L.q);
    for (int i = 1; i <= g; ++i) {
      const double dev = std::abs(static_cast<double>(L.counts[static_cast<std::size_t>(i - 1)]) - std::pow(q, i) - 1);
      CHECK(dev <= 2 * g * std::pow(q, i / 2.0) + 1e-9);
    }
    const int pr = prank_from_l_polynomial(L, c.field->characteristic());
    CHECK(pr >= 0);
    CHECK(pr <= g);
  }
}

TEST_CASE("audit detects a corrupted L-polynomial") {
  const auto c = cover(3, make_field(7, 1), {{0, 1}, {1, 1}, {3, 2}, {4, 2}});
  auto L = l_polynomial(c);
  L.coeffs[1] += 7;
  const auto a = audit(c, L);
  CHECK_FALSE(a.ok());
  CHECK(a.functional_equation_residual != 0);
}

TEST_CASE("affine change of coordinates preserves the L-polynomial") {
  const FieldDesc& f = make_field(7, 1);
  const std::vector<std::pair<std::uint32_t, int>> br{{0, 1}, {1, 1}, {3, 2}, {5, 2}};
  const auto base = l_polynomial(cover(3, f, br)).coeffs;
  for (std::uint32_t u = 1; u < 7; ++u)
    for (std::uint32_t v = 0; v < 7; ++v) {
      std::vector<std::pair<std::uint32_t, int>> moved;
      for (auto [x, a] : br) moved.push_back({(u * x + v) % 7, a});
      CHECK(l_polynomial(cover(3, f, moved)).coeffs == base);
    }
}

TEST_CASE("prank from a given L-polynomial") {
  LPolynomial L{25, 2, {1, 5, 10, 125, 625}, {}};
  CHECK(prank_from_l_polynomial(L, 5) == 0);
  L.coeffs = {1, 3, 10, 75, 625};
  CHECK(prank_from_l_polynomial(L, 5) == 1);
  L.coeffs = {1, 3, 11, 75, 625};
  CHECK(prank_from_l_polynomial(L, 5) == 2);
}

TEST_CASE("cover validation") {
  const FieldDesc& f7 = make_field(7, 1);
  CHECK_THROWS_AS(cover(4, f7, {{0, 1}, {1, 1}, {2, 2}}), DomainError);
  CHECK_THROWS_AS(cover(7, f7, {{0, 1}, {1, 1}, {2, 5}}), DomainError);
  CHECK_THROWS_AS(cover(3, f7, {{0, 1}, {1, 2}}), DomainError);
  CHECK_THROWS_AS(cover(3, f7, {{0, 1}, {0, 1}, {2, 1}}), DomainError);
  CHECK_THROWS_AS(cover(3, f7, {{0, 1}, {1, 1}, {2, 2}}), DomainError);
  CHECK_THROWS_AS(cover(3, f7, {{0, 0}, {1, 1}, {2, 2}}), DomainError);

  const auto c = cover(3, make_field(5, 1), {{0, 1}, {1, 1}, {2, 1}});
  CHECK_THROWS_AS(count_points(c, 0), DomainError);
  CHECK(countable(c, 10));
  CHECK_FALSE(countable(c, 11));
  CHECK_THROWS_AS(count_points(c, 11), DomainError);
}

TEST_CASE("unsplit branch loci") {
  const FieldDesc& f7 = make_field(7, 1);
  const auto ints = [&](std::vector<std::int64_t> c) { return Polynomial::from_ints(f7, c); };
  // x^2 + 1 has no root over F_7
  const auto curve = validate_curve(f7, ints({1, 0, 1}), ints({0, 1}) * ints({-1, 1}));
  const auto c = from_trielliptic(curve);
  CHECK(c.branches.size() == 2);
  REQUIRE(c.factors.size() == 1);
  CHECK(c.factors[0].poly == ints({1, 0, 1}));
  CHECK(c.genus() == 2);
  for (int i = 1; i <= 3; ++i) CHECK(count_points(c, i) == brute_count(c, i));
  CHECK(prank_zeta(c) == cartier::prank_cartier(curve));
  CHECK(audit(c, l_polynomial(c)).ok());

  // fully unsplit: an irreducible cubic over F_5
  const FieldDesc& f5 = make_field(5, 1);
  const auto cubic = Polynomial::from_ints(f5, std::vector<std::int64_t>{1, 1, 0, 1});
  const auto c5 = make_cover(3, f5, {}, {{cubic, 1}});
  CHECK(c5.genus() == 1);
  for (int i = 1; i <= 3; ++i) CHECK(count_points(c5, i) == brute_count(c5, i));

  // l = 5: a rational point of weight 3 and an irreducible quadratic of weight 1 over F_4
  const FieldDesc& f4 = make_field(2, 2);
  int quadratics = 0;
  for (std::uint32_t c0 = 1; c0 < 4; ++c0)
    for (std::uint32_t c1 = 0; c1 < 4; ++c1) {
      const Polynomial quad(f4, {FieldElement(f4, c0), FieldElement(f4, c1), FieldElement::one(f4)});
      bool rational_root = false;
      for (std::uint32_t r = 0; r < 4; ++r) rational_root |= quad.eval(FieldElement(f4, r)).is_zero();
      if (rational_root) continue;
      ++quadratics;
      const auto c4 = make_cover(5, f4, {{FieldElement::zero(f4), 3}}, {{quad, 1}});
      CHECK(c4.genus() == 2);
      for (int i = 1; i <= 2; ++i) CHECK(count_points(c4, i) == brute_count(c4, i));
    }
  CHECK(quadratics == 6);

  CHECK_THROWS_AS(make_cover(3, f7, {{FieldElement(f7, 0), 1}}, {{ints({0, 0, 1}), 1}}), DomainError);
  CHECK_THROWS_AS(make_cover(3, f7, {{FieldElement(f7, 0), 1}}, {{ints({0, 1, 1}), 1}}), DomainError);
  CHECK_THROWS_AS(make_cover(3, f7, {{FieldElement(f7, 0), 1}}, {{ints({1, 0, 1}), 2}}), DomainError);  // weight 5

  const auto back = cover_from_json(cover_to_json(c));
  CHECK(cover_to_json(back) == cover_to_json(c));
}

TEST_CASE("cover json round trip") {
  const auto c = cover(3, make_field(2, 2), {{0, 1}, {1, 1}, {2, 2}, {3, 2}});
  const auto j = cover_to_json(c);
  const auto back = cover_from_json(j);
  CHECK(cover_to_json(back) == j);
  CHECK(l_polynomial(back).coeffs == l_polynomial(c).coeffs);
  CHECK_THROWS_AS(cover_from_json(nlohmann::json::parse(R"({"l":3,"p":5,"k":1})")), DomainError);
  CHECK_THROWS_AS(cover_from_json(nlohmann::json::parse(R"({"l":3,"p":5,"k":1,"branches":[{"alpha":1}]})")), DomainError);
}

TEST_CASE("Cartier and point-count p-ranks agree on random unsplit curves") {
  std::uint64_t state = 12345;
  const auto draw = [&](std::uint64_t n) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return (state >> 33) % n;
  };
  int compared = 0;
  for (auto [p, k, d1, d2] : std::vector<std::tuple<std::uint64_t, int, int, int>>{
           {5, 1, 2, 2}, {7, 1, 2, 2}, {11, 1, 2, 2}, {13, 1, 2, 2}, {2, 2, 2, 2}, {2, 3, 2, 2},
           {5, 1, 1, 4}, {7, 1, 4, 1}, {5, 1, 3, 3}, {2, 2, 1, 4}, {17, 1, 2, 2}, {5, 2, 2, 2}}) {
    const FieldDesc& f = make_field(p, k);
    for (int trial = 0; trial < 40; ++trial) {
      const auto random_monic = [&](int deg) {
        std::vector<FieldElement> c;
        for (int i = 0; i < deg; ++i) c.emplace_back(f, static_cast<std::uint32_t>(draw(f.order())));
        c.push_back(FieldElement::one(f));
        return Polynomial(f, c);
      };
      const Polynomial p1 = d1 == 0 ? Polynomial::constant(FieldElement::one(f)) : random_monic(d1);
      const Polynomial p2 = d2 == 0 ? Polynomial::constant(FieldElement::one(f)) : random_monic(d2);
      if ((d1 > 0 && !algebra::is_squarefree(p1)) || (d2 > 0 && !algebra::is_squarefree(p2)) ||
          algebra::gcd(p1, p2).degree() != 0)
        continue;
      const auto curve = validate_curve(f, p1, p2);
      const auto c = from_trielliptic(curve);
      CAPTURE(cartier::curve_to_json(curve).dump());
      const auto L = l_polynomial(c);
      CHECK(prank_from_l_polynomial(L, static_cast<std::uint32_t>(p)) == cartier::prank_cartier(curve));
      ++compared;
    }
  }
  CHECK(compared > 200);
}
