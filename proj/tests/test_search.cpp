#include <doctest.h>

#include <set>

#include "tri/error.hpp"
#include "tri/moduli.hpp"
#include "tri/search.hpp"

using namespace tri;
using namespace tri::search;
using algebra::make_field;

namespace {

std::set<int> keys(const ScanReport& r) {
  std::set<int> out;
  for (auto [k, n] : r.histogram) out.insert(k);
  return out;
}

std::uint64_t sum(const ScanReport& r) {
  std::uint64_t t = 0;
  for (auto [k, n] : r.histogram) t += n;
  return t;
}

// exact binomial for small arguments
__int128 binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("SplitMix64 reference stream") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xe220a8397b1dcdafull);
  CHECK(rng.next() == 0x6e789e6aa1b965f4ull);
  CHECK(rng.next() == 0x06c45d188009454full);
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const auto v = a.below(7);
    CHECK(v < 7);
    CHECK(v == b.below(7));
  }
}

TEST_CASE("configuration_count") {
  CHECK(configuration_count(5, 2, 2) == 30);
  CHECK(configuration_count(16, 2, 2) == 120 * 91);
  CHECK(configuration_count(5, 6, 0) == 0);
  CHECK(configuration_count(4, 2, 2) == 6);
  CHECK(configuration_count(1ull << 31, 20, 20) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("exhaustive scan examples") {
  const auto r5 = exhaustive_scan(5, 1, 2, 2);
  CHECK(keys(r5) == std::set<int>{0, 2});
  CHECK(r5.total_scanned == 30);
  CHECK(r5.agreement);
  CHECK(r5.zeta_compared == 30);
  CHECK(r5.clean());
  CHECK(r5.histogram.at(2) > r5.histogram.at(0));

  const auto r16 = exhaustive_scan(2, 4, 2, 2);
  CHECK_FALSE(r16.histogram.count(0));
  CHECK(r16.total_scanned == 120 * 91);
  CHECK(r16.clean());

  const auto r7 = exhaustive_scan(7, 1, 2, 2);
  CHECK_FALSE(r7.histogram.count(1));
  CHECK(r7.clean());
  CHECK(r7.audited == r7.total_scanned);

  CHECK_THROWS_AS(exhaustive_scan(5, 1, 2, 1), DomainError);
  CHECK_THROWS_AS(exhaustive_scan(3, 1, 2, 2), DomainError);
  ScanOptions tight;
  tight.budget = 10;
  CHECK_THROWS_WITH_AS(exhaustive_scan(5, 1, 2, 2, tight), doctest::Contains("budget"), DomainError);
}

TEST_CASE("scan invariants") {
  for (auto [p, k, d1, d2] : std::vector<std::tuple<std::uint32_t, int, int, int>>{
           {5, 1, 2, 2}, {7, 1, 2, 2}, {11, 1, 2, 2}, {2, 3, 2, 2}, {7, 1, 1, 4}, {5, 2, 3, 0}, {2, 3, 1, 4}}) {
    CAPTURE(p);
    CAPTURE(k);
    const auto r = exhaustive_scan(p, k, d1, d2);
    CHECK(sum(r) == r.total_scanned);
    CHECK(r.clean());
    const auto t = moduli::InertiaType::trielliptic(d1, d2);
    for (auto f : keys(r)) CHECK(moduli::prank_admissible(static_cast<int>(p), t, f));
    for (const auto& [f, w] : r.witnesses) CHECK(w.prank_cartier == f);

    ScanOptions dd;
    dd.dedupe = true;
    const auto rd = exhaustive_scan(p, k, d1, d2, dd);
    CHECK(keys(rd) == keys(r));
    CHECK(rd.total_scanned <= r.total_scanned);

    ScanOptions par;
    par.workers = 3;
    CHECK(scan_to_json(exhaustive_scan(p, k, d1, d2, par)) == scan_to_json(r));
  }
}

TEST_CASE("affine dedupe keeps one configuration per orbit") {
  for (auto [p, k] : std::vector<std::pair<std::uint32_t, int>>{{5, 1}, {7, 1}, {2, 2}, {2, 3}}) {
    const auto& f = make_field(p, k);
    const auto q = static_cast<std::uint32_t>(f.order());
    std::set<Configuration> orbits;
    std::uint64_t canonical = 0;
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = a + 1; b < q; ++b)
        for (std::uint32_t c = 0; c < q; ++c)
          for (std::uint32_t d = c + 1; d < q; ++d) {
            if (c == a || c == b || d == a || d == b) continue;
            const Configuration cfg{{a, b}, {c, d}};
            Configuration least = cfg;
            for (std::uint32_t u = 1; u < q; ++u)
              for (std::uint32_t v = 0; v < q; ++v) {
                Configuration img;
                for (auto x : cfg.roots1) img.roots1.push_back(f.add(f.mul(u, x), v));
                for (auto x : cfg.roots2) img.roots2.push_back(f.add(f.mul(u, x), v));
                std::sort(img.roots1.begin(), img.roots1.end());
                std::sort(img.roots2.begin(), img.roots2.end());
                least = std::min(least, img);
              }
            orbits.insert(least);
            if (is_affine_canonical(f, cfg)) {
              ++canonical;
              CHECK(least == cfg);
            }
          }
    CHECK(canonical == orbits.size());
  }
}

TEST_CASE("scan output") {
  const auto r = exhaustive_scan(5, 1, 2, 2);
  const auto j = scan_to_json(r);
  CHECK(j.at("histogram").at("0") == r.histogram.at(0));
  CHECK(j.at("witnesses").at("0").at("prank_zeta") == 0);
  CHECK_FALSE(j.contains("elapsed_seconds"));
  const auto csv = scan_to_csv({r});
  CHECK(csv.rfind("p,k,d1,d2,f,count\n", 0) == 0);
  CHECK(csv.find("5,1,2,2,0," + std::to_string(r.histogram.at(0)) + "\n") != std::string::npos);
  CHECK(csv.find("5,1,2,2,2," + std::to_string(r.histogram.at(2)) + "\n") != std::string::npos);
}

TEST_CASE("find_witness examples") {
  const auto w = find_witness(5, 1, 1, 0, 1, kDefaultBudget, 42);
  REQUIRE(w.witness);
  CHECK(w.witness->prank_cartier == 0);
  CHECK(w.witness->prank_zeta == 0);
  CHECK_FALSE(w.outside_theorem);

  const auto w2 = find_witness(5, 1, 2, 2, 6, kDefaultBudget, 42);
  REQUIRE(w2.witness);
  CHECK(w2.witness->prank_zeta == 2);
  const auto curve = curve_from_configuration(*w2.witness->field, w2.witness->config);
  CHECK(curve.r == 1);
  CHECK(curve.s == 2);

  CHECK_THROWS_WITH_AS(find_witness(5, 1, 1, 1, 1, 100, 42), doctest::Contains("not admissible"), DomainError);
  CHECK_THROWS_AS(find_witness(5, 1, 4, 0, 1, 100, 42), DomainError);  // not a trielliptic signature
  CHECK_THROWS_AS(find_witness(3, 1, 1, 0, 1, 100, 42), DomainError);

  CHECK(find_witness(7, 1, 1, 2, 1, 100, 1).outside_theorem);
}

TEST_CASE("find_witness is deterministic, including in random mode") {
  // budget 50 forces sampling over F_25
  const auto a = witness_search_to_json(find_witness(5, 1, 2, 0, 3, 50, 7));
  const auto b = witness_search_to_json(find_witness(5, 1, 2, 0, 3, 50, 7, 3));
  CHECK(a == b);
  CHECK(a.at("attempts").at(1).at("mode") == "random");
  const auto c = witness_search_to_json(find_witness(5, 2, 2, 2, 2, 1000, 11));
  CHECK(c == witness_search_to_json(find_witness(5, 2, 2, 2, 2, 1000, 11)));
  CHECK(c == witness_search_to_json(find_witness(5, 2, 2, 2, 2, 1000, 11, 4)));

  // exhaustive mode returns the lexicographically least witness
  const auto w = find_witness(5, 1, 1, 2, 1, kDefaultBudget, 0);
  REQUIRE(w.witness);
  CHECK(w.witness->config == exhaustive_scan(5, 1, 2, 2).witnesses.at(2).config);
}

TEST_CASE("coefficient_A") {
  for (std::uint32_t p : {5, 11, 17, 23, 29, 41, 47, 53}) {
    CHECK(coefficient_A(p) == 0);
    __int128 exact = 0;
    const std::int64_t a = (p - 2) / 3;
    for (std::int64_t i = 0; i <= a; ++i) {
      const __int128 term = binom(a, i) * binom((2 * p - 1) / 3, (p - 1) / 2 - i);
      exact += ((p + 1) / 6 + i) % 2 == 0 ? term : -term;
    }
    CHECK(static_cast<std::int64_t>(exact % p) == 0);
  }
  CHECK_THROWS_AS(coefficient_A(7), DomainError);
  CHECK_THROWS_AS(coefficient_A(2), DomainError);
  CHECK_THROWS_AS(coefficient_A(9), DomainError);
}

TEST_CASE("verify_suite") {
  VerifyOptions opts;
  const auto rep = verify_suite({5}, 2, opts);
  CHECK(rep.at("pass") == true);
  bool saw_superspecial = false;
  for (const auto& c : rep.at("claims")) {
    CAPTURE(c.dump());
    CHECK(c.at("pass") == true);
    if (c.at("claim").get<std::string>().find("superspecial") != std::string::npos) saw_superspecial = true;
  }
  CHECK(saw_superspecial);
  CHECK(verify_suite({5}, 2, opts) == rep);

  // p-rank 0 is admissible but not expected at p = 7; keep its search short
  VerifyOptions small;
  small.budget = 20000;
  small.k_max = 3;
  const auto rep7 = verify_suite({7}, 2, small);
  bool saw = false;
  for (const auto& c : rep7.at("claims"))
    if (c.at("claim").get<std::string>().find("g-1 = 1 never observed") != std::string::npos) saw = c.at("pass") == true;
  CHECK(saw);

  // 2-rank 0 in genus 2 is empty, so its search exhausts every field it is given
  small.k_max = 4;
  const auto rep2 = verify_suite({2}, 2, small);
  int empty_checks = 0;
  for (const auto& c : rep2.at("claims"))
    if (c.at("claim").get<std::string>().find("2-rank 0") != std::string::npos && c.at("pass") == true) ++empty_checks;
  CHECK(empty_checks == 3);

  CHECK_THROWS_AS(verify_suite({3}, 2, opts), DomainError);
}
