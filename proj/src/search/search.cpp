#include "tri/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "tri/algebra/json.hpp"
#include "tri/error.hpp"
#include "tri/moduli.hpp"
#include "tri/zeta.hpp"

namespace tri::search {

using algebra::FieldElement;
using algebra::Polynomial;
using cartier::TriellipticCurve;

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw DomainError("below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t v = next();
    if (v < limit) return v % n;
  }
}

namespace {

Polynomial split(const FieldDesc& f, const std::vector<std::uint32_t>& roots) {
  std::vector<FieldElement> r;
  r.reserve(roots.size());
  for (auto v : roots) r.emplace_back(f, v);
  return Polynomial::from_roots(f, r);
}

zeta::CyclicCover cover_of(const FieldDesc& f, const Configuration& c) {
  std::vector<zeta::Branch> br;
  for (auto v : c.roots1) br.push_back({FieldElement(f, v), 1});
  for (auto v : c.roots2) br.push_back({FieldElement(f, v), 2});
  return zeta::make_cover(3, f, std::move(br));
}

void check_pair(std::uint32_t p, int d1, int d2) {
  if (!algebra::is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (p == 3) throw DomainError("characteristic 3 is not allowed for a degree-3 cover");
  if (d1 < 0 || d2 < 0) throw DomainError("degrees must be non-negative");
  if ((d1 + 2 * d2) % 3 != 0) throw DomainError("d1 + 2 d2 must be divisible by 3");
  if (d1 + d2 < 3) throw DomainError("need at least 3 branch points");
}

// next k-subset of [0, n) in lexicographic order over the given universe
bool next_combination(std::vector<std::uint32_t>& idx, std::uint32_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - (k - i)) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::uint32_t> first_combination(std::size_t k) {
  std::vector<std::uint32_t> v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = static_cast<std::uint32_t>(i);
  return v;
}

// Walks configurations in lexicographic order, S1 outer. The S1 index drives work splitting.
template <class Fn>
void walk_configurations(std::uint32_t q, int d1, int d2, unsigned worker, unsigned workers, Fn&& fn) {
  if (static_cast<std::uint64_t>(d1) + static_cast<std::uint64_t>(d2) > q) return;
  std::vector<std::uint32_t> s1 = first_combination(static_cast<std::size_t>(d1));
  std::vector<std::uint32_t> rest;
  std::uint64_t index = 0;
  do {
    if (index++ % workers != worker) continue;
    rest.clear();
    for (std::uint32_t v = 0, j = 0; v < q; ++v) {
      if (j < s1.size() && s1[j] == v) {
        ++j;
        continue;
      }
      rest.push_back(v);
    }
    const auto m = static_cast<std::uint32_t>(rest.size());
    std::vector<std::uint32_t> pick = first_combination(static_cast<std::size_t>(d2));
    Configuration c{s1, {}};
    do {
      c.roots2.clear();
      for (auto i : pick) c.roots2.push_back(rest[i]);
      if (!fn(index - 1, c)) return;
    } while (!pick.empty() && next_combination(pick, m));
  } while (!s1.empty() && next_combination(s1, q));
}

struct Evaluation {
  int cartier = 0;
  std::optional<int> zeta;
  bool audited = false;
  bool audit_ok = true;
  bool shifted = false;
};

Evaluation evaluate(const FieldDesc& f, const Configuration& c, bool with_zeta, bool with_audit) {
  const TriellipticCurve curve = curve_from_configuration(f, c);
  Evaluation e;
  e.cartier = cartier::prank_cartier(curve);
  e.shifted = cartier::uses_shifted_images(curve);
  if (!with_zeta) return e;
  const auto cover = cover_of(f, c);
  if (!zeta::countable(cover, curve.genus)) return e;
  const auto L = zeta::l_polynomial(cover);
  e.zeta = zeta::prank_from_l_polynomial(L, f.characteristic());
  if (with_audit && zeta::countable(cover, curve.genus + 1)) {
    std::uint64_t next = 1;
    for (int i = 0; i <= curve.genus; ++i) next *= f.order();
    if (next <= zeta::kOvercountOrder) {
      e.audited = true;
      e.audit_ok = zeta::audit(cover, L).ok();
    }
  }
  return e;
}

template <class Fn>
void run_workers(unsigned workers, Fn&& fn) {
  if (workers <= 1) {
    fn(0u);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex mu;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

nlohmann::json raw_list(const FieldDesc& f, const std::vector<std::uint32_t>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (auto x : v) {
    if (f.degree() == 1)
      out.push_back(x);
    else
      out.push_back(algebra::coefficient_to_json(FieldElement(f, x)));
  }
  return out;
}

}  // namespace

TriellipticCurve curve_from_configuration(const FieldDesc& field, const Configuration& c) {
  return cartier::validate_curve(field, split(field, c.roots1), split(field, c.roots2));
}

std::uint64_t configuration_count(std::uint64_t q, int d1, int d2) {
  constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  const auto binom = [](std::uint64_t n, std::uint64_t k) -> std::uint64_t {
    if (k > n) return 0;
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
      r = r * (n - k + i) / i;
      if (r > cap) return cap;
    }
    return static_cast<std::uint64_t>(r);
  };
  const std::uint64_t a = binom(q, static_cast<std::uint64_t>(d1));
  if (static_cast<std::uint64_t>(d1) > q) return 0;
  const std::uint64_t b = binom(q - static_cast<std::uint64_t>(d1), static_cast<std::uint64_t>(d2));
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  return prod > cap ? cap : static_cast<std::uint64_t>(prod);
}

bool is_affine_canonical(const FieldDesc& field, const Configuration& c) {
  const std::uint32_t q = static_cast<std::uint32_t>(field.order());
  Configuration img;
  for (std::uint32_t u = 1; u < q; ++u)
    for (std::uint32_t v = 0; v < q; ++v) {
      if (u == 1 && v == 0) continue;
      img.roots1.clear();
      img.roots2.clear();
      for (auto x : c.roots1) img.roots1.push_back(field.add(field.mul(u, x), v));
      for (auto x : c.roots2) img.roots2.push_back(field.add(field.mul(u, x), v));
      std::sort(img.roots1.begin(), img.roots1.end());
      std::sort(img.roots2.begin(), img.roots2.end());
      if (img < c) return false;
    }
  return true;
}

nlohmann::json witness_to_json(const Witness& w) {
  nlohmann::json j = cartier::curve_to_json(curve_from_configuration(*w.field, w.config));
  j["roots1"] = raw_list(*w.field, w.config.roots1);
  j["roots2"] = raw_list(*w.field, w.config.roots2);
  j["prank_cartier"] = w.prank_cartier;
  j["prank_zeta"] = w.prank_zeta ? nlohmann::json(*w.prank_zeta) : nlohmann::json(nullptr);
  return j;
}

ScanReport exhaustive_scan(std::uint32_t p, int k, int d1, int d2, const ScanOptions& opts) {
  check_pair(p, d1, d2);
  const auto start = std::chrono::steady_clock::now();
  const FieldDesc& f = algebra::make_field(p, k);
  const std::uint64_t q = f.order();
  std::uint64_t count = configuration_count(q, d1, d2);
  if (opts.dedupe && q > 1) count = (count + q * (q - 1) - 1) / (q * (q - 1));
  if (count > opts.budget)
    throw DomainError("scan of " + std::to_string(count) + " configurations exceeds the budget of " +
                      std::to_string(opts.budget));

  const unsigned workers = std::max(1u, opts.workers);
  std::vector<ScanReport> parts(workers);
  std::atomic<bool> stop{false};
  const auto type = moduli::InertiaType::trielliptic(d1, d2);
  run_workers(workers, [&](unsigned w) {
    ScanReport& part = parts[w];
    walk_configurations(static_cast<std::uint32_t>(q), d1, d2, w, workers, [&](std::uint64_t, const Configuration& c) {
      if (stop.load(std::memory_order_relaxed)) return false;
      if (opts.dedupe && !is_affine_canonical(f, c)) return true;
      const Evaluation e = evaluate(f, c, opts.zeta, opts.audit);
      Witness wit{&f, c, e.cartier, e.zeta};
      if (e.zeta) {
        ++part.zeta_compared;
        if (*e.zeta != e.cartier) {
          part.agreement = false;
          part.mismatch = wit;
          stop = true;
          return false;
        }
      }
      ++part.total_scanned;
      ++part.histogram[e.cartier];
      if (!part.witnesses.count(e.cartier)) part.witnesses.emplace(e.cartier, wit);
      if (e.audited) {
        ++part.audited;
        if (!e.audit_ok) ++part.audit_failures;
      }
      if (e.shifted) ++part.shifted_images;
      if (!moduli::prank_admissible(static_cast<int>(p), type, e.cartier)) ++part.inadmissible;
      return true;
    });
  });

  ScanReport out;
  out.p = p;
  out.k = k;
  out.d1 = d1;
  out.d2 = d2;
  out.genus = d1 + d2 - 2;
  out.r = (d1 + 2 * d2) / 3 - 1;
  out.s = (2 * d1 + d2) / 3 - 1;
  out.dedupe = opts.dedupe;
  for (auto& part : parts) {
    for (auto [key, n] : part.histogram) out.histogram[key] += n;
    for (auto& [key, wit] : part.witnesses) {
      auto it = out.witnesses.find(key);
      if (it == out.witnesses.end() || wit.config < it->second.config) out.witnesses.insert_or_assign(key, wit);
    }
    out.total_scanned += part.total_scanned;
    out.zeta_compared += part.zeta_compared;
    out.audited += part.audited;
    out.audit_failures += part.audit_failures;
    out.inadmissible += part.inadmissible;
    out.shifted_images += part.shifted_images;
    if (!part.agreement) {
      out.agreement = false;
      if (!out.mismatch || part.mismatch->config < out.mismatch->config) out.mismatch = part.mismatch;
    }
  }
  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

nlohmann::json scan_to_json(const ScanReport& r) {
  nlohmann::json hist = nlohmann::json::object(), wit = nlohmann::json::object();
  for (auto [key, n] : r.histogram) hist[std::to_string(key)] = n;
  for (const auto& [key, w] : r.witnesses) wit[std::to_string(key)] = witness_to_json(w);
  nlohmann::json j{{"p", r.p},
                   {"k", r.k},
                   {"l", 3},
                   {"d1", r.d1},
                   {"d2", r.d2},
                   {"r", r.r},
                   {"s", r.s},
                   {"g", r.genus},
                   {"dedupe", r.dedupe},
                   {"histogram", hist},
                   {"witnesses", wit},
                   {"total_scanned", r.total_scanned},
                   {"zeta_compared", r.zeta_compared},
                   {"agreement", r.agreement},
                   {"audited", r.audited},
                   {"audit_failures", r.audit_failures},
                   {"inadmissible", r.inadmissible},
                   {"shifted_images", r.shifted_images}};
  if (r.mismatch) j["mismatch"] = witness_to_json(*r.mismatch);
  return j;
}

std::string scan_to_csv(const std::vector<ScanReport>& reports, bool header) {
  std::ostringstream os;
  if (header) os << "p,k,d1,d2,f,count\n";
  for (const auto& r : reports)
    for (auto [key, n] : r.histogram) os << r.p << ',' << r.k << ',' << r.d1 << ',' << r.d2 << ',' << key << ',' << n << '\n';
  return os.str();
}

WitnessSearch find_witness(std::uint32_t p, int r, int s, int f, int k_max, std::uint64_t budget, std::uint64_t seed,
                           unsigned workers) {
  if (!algebra::is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (p == 3) throw DomainError("characteristic 3 is not allowed for a degree-3 cover");
  if (!moduli::is_trielliptic_signature(r, s))
    throw DomainError("(" + std::to_string(r) + ", " + std::to_string(s) + ") is not a trielliptic signature");
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  if (budget < 1) throw DomainError("budget must be at least 1");
  const auto type = moduli::inertia_from_signature(r, s);
  if (const auto adm = moduli::prank_admissible(static_cast<int>(p), type, f); !adm)
    throw DomainError("p-rank " + std::to_string(f) + " is not admissible: " + adm.reason);
  const int d1 = type.count(1), d2 = type.count(2);
  workers = std::max(1u, workers);

  WitnessSearch out;
  out.p = p;
  out.r = r;
  out.s = s;
  out.f = f;
  out.k_max = k_max;
  out.budget = budget;
  out.seed = seed;
  out.outside_theorem = p == 2 || p % 3 != 2 || f % 2 != 0 || f > 2 * std::min(r, s);

  SplitMix64 rng(seed);
  for (int k = 1; k <= k_max && !out.witness; ++k) {
    std::uint64_t q = 1;
    bool too_big = false;
    for (int i = 0; i < k; ++i) {
      q *= p;
      if (q > algebra::kMaxFieldOrder) too_big = true;
    }
    if (too_big) break;
    const FieldDesc& fld = algebra::make_field(p, k);
    FieldAttempt att{k, "", 0};
    const std::uint64_t count = configuration_count(q, d1, d2);
    std::optional<Configuration> hit;

    if (count == 0) {
      att.mode = "empty";
    } else if (count <= budget) {
      att.mode = "exhaustive";
      // each worker stops at its first hit; the lexicographically least hit wins
      std::vector<std::optional<std::pair<std::uint64_t, Configuration>>> found(workers);
      std::vector<std::uint64_t> tried(workers, 0);
      std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
      run_workers(workers, [&](unsigned w) {
        walk_configurations(static_cast<std::uint32_t>(q), d1, d2, w, workers, [&](std::uint64_t idx, const Configuration& c) {
          if (idx > best.load()) return false;
          ++tried[w];
          if (cartier::prank_cartier(curve_from_configuration(fld, c)) != f) return true;
          found[w] = std::make_pair(idx, c);
          std::uint64_t cur = best.load();
          while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
          }
          return false;
        });
      });
      for (const auto& fw : found)
        if (fw && (!hit || fw->second < *hit)) hit = fw->second;
      for (auto t : tried) att.tried += t;
      // report the work a sequential walk would have done
      if (workers > 1) att.tried = std::min<std::uint64_t>(att.tried, count);
    } else {
      att.mode = "random";
      constexpr std::uint64_t kBatch = 4096;
      const auto n = static_cast<std::size_t>(d1 + d2);
      std::vector<Configuration> batch;
      std::vector<std::uint32_t> draw;
      for (std::uint64_t done = 0; done < budget && !hit;) {
        const std::uint64_t m = std::min(kBatch, budget - done);
        batch.assign(m, {});
        for (auto& c : batch) {
          draw.clear();
          while (draw.size() < n) {
            const auto v = static_cast<std::uint32_t>(rng.below(q));
            if (std::find(draw.begin(), draw.end(), v) == draw.end()) draw.push_back(v);
          }
          c.roots1.assign(draw.begin(), draw.begin() + d1);
          c.roots2.assign(draw.begin() + d1, draw.end());
          std::sort(c.roots1.begin(), c.roots1.end());
          std::sort(c.roots2.begin(), c.roots2.end());
        }
        std::vector<std::uint64_t> first(workers, m);
        run_workers(workers, [&](unsigned w) {
          for (std::uint64_t i = w; i < m; i += workers)
            if (cartier::prank_cartier(curve_from_configuration(fld, batch[i])) == f) {
              first[w] = i;
              break;
            }
        });
        const std::uint64_t idx = *std::min_element(first.begin(), first.end());
        if (idx < m) {
          hit = batch[idx];
          att.tried += idx + 1;
        } else {
          att.tried += m;
        }
        done += m;
      }
    }
    out.attempts.push_back(att);
    if (hit) {
      Witness w{&fld, *hit, f, std::nullopt};
      const auto cover = cover_of(fld, *hit);
      if (zeta::countable(cover, cover.genus())) {
        w.prank_zeta = zeta::prank_zeta(cover, workers);
        if (*w.prank_zeta != f)
          throw ConsistencyError("witness p-rank " + std::to_string(f) + " by Cartier but " +
                                 std::to_string(*w.prank_zeta) + " by point counting");
      }
      out.witness = w;
    }
  }
  return out;
}

nlohmann::json witness_search_to_json(const WitnessSearch& w) {
  nlohmann::json att = nlohmann::json::array();
  for (const auto& a : w.attempts) att.push_back({{"k", a.k}, {"mode", a.mode}, {"tried", a.tried}});
  return {{"p", w.p},
          {"r", w.r},
          {"s", w.s},
          {"f", w.f},
          {"k_max", w.k_max},
          {"budget", w.budget},
          {"seed", w.seed},
          {"outside_theorem", w.outside_theorem},
          {"found", w.witness.has_value()},
          {"witness", w.witness ? witness_to_json(*w.witness) : nlohmann::json(nullptr)},
          {"attempts", att}};
}

std::uint32_t coefficient_A(std::uint32_t p) {
  if (!algebra::is_prime(p) || p == 2 || p % 3 != 2) throw DomainError("coefficient_A needs an odd prime p = 2 mod 3");
  const std::uint32_t top = (2 * p - 1) / 3;
  // Pascal's triangle mod p up to row top
  std::vector<std::vector<std::uint32_t>> pascal(top + 1);
  for (std::uint32_t n = 0; n <= top; ++n) {
    pascal[n].assign(n + 1, 1);
    for (std::uint32_t k = 1; k < n; ++k) pascal[n][k] = (pascal[n - 1][k - 1] + pascal[n - 1][k]) % p;
  }
  const auto binom = [&](std::int64_t n, std::int64_t k) -> std::uint32_t {
    if (k < 0 || k > n) return 0;
    return pascal[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  };
  const std::int64_t a = (p - 2) / 3, half = (p - 1) / 2, sign0 = (p + 1) / 6;
  std::uint64_t sum = 0;
  for (std::int64_t i = 0; i <= a; ++i) {
    const std::uint64_t term = static_cast<std::uint64_t>(binom(a, i)) * binom(top, half - i) % p;
    sum += (sign0 + i) % 2 == 0 ? term : (p - term) % p;
  }
  return static_cast<std::uint32_t>(sum % p);
}

}  // namespace tri::search
