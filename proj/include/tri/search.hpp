#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tri/cartier.hpp"

namespace tri::search {

using algebra::FieldDesc;

/// Configurations an exhaustive pass may visit before falling back to sampling.
inline constexpr std::uint64_t kDefaultBudget = 5'000'000;

/**
 * SplitMix64 (Steele, Lea and Flood): state += 0x9e3779b97f4a7c15, then the
 * output is the state mixed by two xor-shift-multiply rounds. Portable and
 * fully determined by the 64-bit seed.
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

/// Branch points of y^3 = p1 p2^2 as raw field values, each list ascending.
struct Configuration {
  std::vector<std::uint32_t> roots1;
  std::vector<std::uint32_t> roots2;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

cartier::TriellipticCurve curve_from_configuration(const FieldDesc& field, const Configuration& c);

/// Number of (p1, p2) with split, disjoint root sets: C(q, d1) C(q - d1, d2), saturating.
std::uint64_t configuration_count(std::uint64_t q, int d1, int d2);

/// True when no affine map x -> ux + v sends c to a lexicographically smaller configuration.
bool is_affine_canonical(const FieldDesc& field, const Configuration& c);

/// The curve and both p-ranks, in a form that can be re-verified independently.
struct Witness {
  const FieldDesc* field = nullptr;
  Configuration config;
  int prank_cartier = 0;
  std::optional<int> prank_zeta;  // empty when F_{q^g} is too large to count
};

nlohmann::json witness_to_json(const Witness& w);

struct ScanOptions {
  bool dedupe = false;
  std::uint64_t budget = kDefaultBudget;
  unsigned workers = 1;
  bool zeta = true;   // compare against the point-count oracle where countable
  bool audit = true;  // check N_{g+1} where q^{g+1} <= zeta::kOvercountOrder
};

struct ScanReport {
  std::uint32_t p = 0;
  int k = 0;
  int d1 = 0, d2 = 0;
  int r = 0, s = 0, genus = 0;
  bool dedupe = false;
  std::map<int, std::uint64_t> histogram;  // p-rank -> curves
  std::map<int, Witness> witnesses;        // lexicographically least curve per p-rank
  std::uint64_t total_scanned = 0;
  std::uint64_t zeta_compared = 0;
  bool agreement = true;
  std::optional<Witness> mismatch;  // first curve where the oracles disagree; the scan stops there
  std::uint64_t audited = 0;
  std::uint64_t audit_failures = 0;
  std::uint64_t inadmissible = 0;  // curves whose p-rank breaks the admissibility law
  std::uint64_t shifted_images = 0;
  double elapsed_seconds = 0;

  bool clean() const { return agreement && audit_failures == 0 && inadmissible == 0; }
};

/**
 * Every smooth y^3 = p1 p2^2 over F_{p^k} with p1, p2 split, deg p1 = d1 and
 * deg p2 = d2. DomainError on an invalid (d1, d2) or when the configuration
 * count (divided by the affine group order when deduplicating) exceeds the budget.
 */
ScanReport exhaustive_scan(std::uint32_t p, int k, int d1, int d2, const ScanOptions& opts = {});

/// Report without elapsed time, so identical runs serialize identically.
nlohmann::json scan_to_json(const ScanReport& r);
/// One row per histogram cell: p,k,d1,d2,f,count.
std::string scan_to_csv(const std::vector<ScanReport>& reports, bool header = true);

struct FieldAttempt {
  int k = 0;
  std::string mode;  // "exhaustive", "random" or "empty"
  std::uint64_t tried = 0;
};

struct WitnessSearch {
  std::uint32_t p = 0;
  int r = 0, s = 0, f = 0;
  int k_max = 0;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  bool outside_theorem = false;  // p = 1 mod 3 or f outside the even range up to 2 min(r, s)
  std::optional<Witness> witness;
  std::vector<FieldAttempt> attempts;
};

/**
 * Searches F_{p^k}, k = 1..k_max, for a curve of signature (r, s) and p-rank f.
 * A field is scanned exhaustively in lexicographic order when its configuration
 * count is within budget, otherwise `budget` SplitMix64 samples are drawn. The
 * witness is double-checked by point counting when countable.
 */
WitnessSearch find_witness(std::uint32_t p, int r, int s, int f, int k_max, std::uint64_t budget, std::uint64_t seed,
                           unsigned workers = 1);

nlohmann::json witness_search_to_json(const WitnessSearch& w);

/// The alternating binomial sum that vanishes for p = 2 mod 3, evaluated in F_p.
std::uint32_t coefficient_A(std::uint32_t p);

struct VerifyOptions {
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 42;
  int k_max = 6;
  unsigned workers = 1;
};

/// Runs every desk-scale check for each p and g <= g_max; failures are report entries.
nlohmann::json verify_suite(const std::vector<std::uint32_t>& primes, int g_max, const VerifyOptions& opts = {});

}  // namespace tri::search
