#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tri::moduli {

/**
 * Inertia type of a cyclic degree-l cover of the projective line: how many
 * branch points carry each canonical inertia generator h in {1, ..., l-1}.
 *
 * Construction validates that l is an odd prime, that sum h * counts(h) is
 * divisible by l, and that there are at least three branch points.
 */
class InertiaType {
 public:
  /// counts[h - 1] is the multiplicity of h.
  InertiaType(int l, std::vector<int> counts);

  /// Trielliptic type {1 -> d1, 2 -> d2}.
  static InertiaType trielliptic(int d1, int d2) { return InertiaType(3, {d1, d2}); }

  int l() const { return l_; }
  const std::vector<int>& counts() const { return counts_; }
  int count(int h) const { return counts_.at(static_cast<std::size_t>(h - 1)); }
  /// Number of branch points.
  int n() const;
  /// Branch labels listed with multiplicity, ascending.
  std::vector<int> labels() const;

  std::string to_string() const;

  friend bool operator==(const InertiaType&, const InertiaType&) = default;

 private:
  int l_;
  std::vector<int> counts_;
};

/// Eigenspace dimensions (s_1, ..., s_{l-1}) of the regular differentials.
struct SignatureType {
  int l = 0;
  std::vector<int> dims;

  int genus() const;
  friend bool operator==(const SignatureType&, const SignatureType&) = default;
};

/// The p-rank bookkeeping attached to a prime p and an inertia type.
struct PRankProfile {
  int p = 0;
  int l = 0;
  int genus = 0;
  int e = 0;        // multiplicative order of p mod l
  int epsilon = 0;  // 1 iff p = 1 mod l
  int bound = 0;    // upper bound on the p-rank
  // orbits of i -> p^{-1} i on {1, ..., l-1}, each listed from its least element
  std::vector<std::vector<int>> orbits;
};

struct Admissibility {
  bool ok = false;
  std::string reason;
  explicit operator bool() const { return ok; }
};

enum class ClutchKind { Compact, NonCompact };
enum class BoundaryKind { Delta, Xi };

struct DimensionBounds {
  int lower = 0;
  int ambient = 0;
};

bool is_odd_prime(int l);
int multiplicative_order(int p, int l);

int genus_from_inertia(const InertiaType& t);

/// All inertia types of genus g for degree l, ascending in the counts vector.
std::vector<InertiaType> enumerate_inertia_types(int l, int g);

SignatureType signature_from_inertia(const InertiaType& t);

/// Trielliptic signatures (r, s) with r + s = g, ascending in r.
std::vector<std::pair<int, int>> trielliptic_signatures(int g);
bool is_trielliptic_signature(int r, int s);

/// Inverse of the trielliptic signature map: d1 = 2s - r + 1, d2 = 2r - s + 1.
InertiaType inertia_from_signature(int r, int s);

PRankProfile prank_profile(int p, const InertiaType& t);

Admissibility prank_admissible(int p, const InertiaType& t, int f);

int clutch_prank(int f1, int f2, ClutchKind kind, int l);

/// Pairs (f1, f2) of p-ranks of the two components of a boundary stratum
/// member with total p-rank f, ascending in f1.
std::vector<std::pair<int, int>> strata_pairs(int i, int g, int f, int l, int p, BoundaryKind kind);

DimensionBounds stratum_dim_bounds(int p, const InertiaType& t, int f);

}  // namespace tri::moduli
