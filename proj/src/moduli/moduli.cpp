#include "tri/moduli.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tri/algebra/field.hpp"
#include "tri/error.hpp"

namespace tri::moduli {

namespace {

void require_prime_p(int p, int l) {
  if (p < 2 || !algebra::is_prime(static_cast<std::uint64_t>(p)))
    throw DomainError("p = " + std::to_string(p) + " is not prime");
  if (p == l) throw DomainError("p must differ from l = " + std::to_string(l));
}

int mod(long long a, int m) {
  const long long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

}  // namespace

bool is_odd_prime(int l) { return l > 2 && algebra::is_prime(static_cast<std::uint64_t>(l)); }

int multiplicative_order(int p, int l) {
  const int base = mod(p, l);
  if (std::gcd(base, l) != 1) throw DomainError("p is not a unit mod l");
  int e = 1;
  for (long long cur = base; cur != 1; cur = cur * base % l) ++e;
  return e;
}

InertiaType::InertiaType(int l, std::vector<int> counts) : l_(l), counts_(std::move(counts)) {
  if (!is_odd_prime(l)) throw DomainError("l = " + std::to_string(l) + " is not an odd prime");
  if (counts_.size() != static_cast<std::size_t>(l - 1))
    throw DomainError("inertia type for l = " + std::to_string(l) + " needs " + std::to_string(l - 1) + " counts");
  long long weighted = 0;
  for (std::size_t h = 0; h < counts_.size(); ++h) {
    if (counts_[h] < 0) throw DomainError("negative inertia multiplicity");
    weighted += static_cast<long long>(h + 1) * counts_[h];
  }
  if (weighted % l != 0)
    throw DomainError("inertia type " + to_string() + " violates sum h*count(h) = 0 mod l");
  if (n() < 3) throw DomainError("inertia type " + to_string() + " has fewer than 3 branch points");
}

int InertiaType::n() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }

std::vector<int> InertiaType::labels() const {
  std::vector<int> out;
  for (std::size_t h = 0; h < counts_.size(); ++h) out.insert(out.end(), static_cast<std::size_t>(counts_[h]), static_cast<int>(h + 1));
  return out;
}

std::string InertiaType::to_string() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t h = 0; h < counts_.size(); ++h) os << (h ? ", " : "") << h + 1 << "->" << counts_[h];
  os << "}";
  return os.str();
}

int SignatureType::genus() const { return std::accumulate(dims.begin(), dims.end(), 0); }

int genus_from_inertia(const InertiaType& t) { return (t.n() - 2) * (t.l() - 1) / 2; }

std::vector<InertiaType> enumerate_inertia_types(int l, int g) {
  if (!is_odd_prime(l)) throw DomainError("l = " + std::to_string(l) + " is not an odd prime");
  if (g < 1) throw DomainError("genus must be >= 1");
  std::vector<InertiaType> out;
  if ((2 * g) % (l - 1) != 0) return out;
  const int n = 2 * g / (l - 1) + 2;
  const int slots = l - 1;
  std::vector<int> counts(static_cast<std::size_t>(slots), 0);
  // compositions of n into `slots` parts, ascending lexicographically
  auto rec = [&](auto&& self, int slot, int remaining, long long weighted) -> void {
    if (slot == slots - 1) {
      counts[static_cast<std::size_t>(slot)] = remaining;
      if ((weighted + static_cast<long long>(slot + 1) * remaining) % l == 0) out.emplace_back(l, counts);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[static_cast<std::size_t>(slot)] = c;
      self(self, slot + 1, remaining - c, weighted + static_cast<long long>(slot + 1) * c);
    }
  };
  rec(rec, 0, n, 0);
  return out;
}

SignatureType signature_from_inertia(const InertiaType& t) {
  const int l = t.l();
  SignatureType sig{l, {}};
  for (int i = 1; i < l; ++i) {
    // s_i = -1 + sum_j {i a_j / l}; the numerators add to a multiple of l
    long long num = 0;
    for (int h = 1; h < l; ++h) num += static_cast<long long>(t.count(h)) * ((i * h) % l);
    if (num % l != 0) throw ConsistencyError("signature numerator not divisible by l for " + t.to_string());
    sig.dims.push_back(static_cast<int>(num / l) - 1);
  }
  return sig;
}

bool is_trielliptic_signature(int r, int s) {
  if (r < 0 || s < 0) return false;
  return std::max(r, s) <= 2 * std::min(r, s) + 1;
}

std::vector<std::pair<int, int>> trielliptic_signatures(int g) {
  if (g < 1) throw DomainError("genus must be >= 1");
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r <= g; ++r)
    if (is_trielliptic_signature(r, g - r)) out.emplace_back(r, g - r);
  return out;
}

InertiaType inertia_from_signature(int r, int s) {
  if (r + s < 1 || !is_trielliptic_signature(r, s))
    throw DomainError("(" + std::to_string(r) + ", " + std::to_string(s) + ") is not a trielliptic signature");
  return InertiaType::trielliptic(2 * s - r + 1, 2 * r - s + 1);
}

PRankProfile prank_profile(int p, const InertiaType& t) {
  const int l = t.l();
  require_prime_p(p, l);
  PRankProfile prof;
  prof.p = p;
  prof.l = l;
  prof.genus = genus_from_inertia(t);
  prof.e = multiplicative_order(p, l);
  prof.epsilon = mod(p, l) == 1 ? 1 : 0;
  const SignatureType sig = signature_from_inertia(t);

  int p_inv = 1;
  while (mod(static_cast<long long>(p_inv) * p, l) != 1) ++p_inv;
  std::vector<bool> seen(static_cast<std::size_t>(l), false);
  for (int start = 1; start < l; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> orbit;
    int min_dim = sig.dims[static_cast<std::size_t>(start - 1)];
    for (int i = start; !seen[static_cast<std::size_t>(i)]; i = mod(static_cast<long long>(i) * p_inv, l)) {
      seen[static_cast<std::size_t>(i)] = true;
      orbit.push_back(i);
      min_dim = std::min(min_dim, sig.dims[static_cast<std::size_t>(i - 1)]);
    }
    if (static_cast<int>(orbit.size()) != prof.e) throw ConsistencyError("orbit size differs from the order of p");
    prof.bound += prof.e * min_dim;
    prof.orbits.push_back(std::move(orbit));
  }
  return prof;
}

Admissibility prank_admissible(int p, const InertiaType& t, int f) {
  const PRankProfile prof = prank_profile(p, t);
  if (f < 0) return {false, "p-rank is negative"};
  if (f > prof.bound)
    return {false, "p-rank " + std::to_string(f) + " exceeds the bound B = " + std::to_string(prof.bound)};
  if (f % prof.e != 0)
    return {false, "p-rank " + std::to_string(f) + " is not divisible by e = " + std::to_string(prof.e)};
  const bool excludes_g_minus_1 = t.l() > 3 || mod(p, 3) == 1;
  if (excludes_g_minus_1 && f == prof.genus - 1)
    return {false, "p-rank equals g - 1 = " + std::to_string(f) + ", excluded for this l and p"};
  return {true, "admissible"};
}

int clutch_prank(int f1, int f2, ClutchKind kind, int l) {
  if (f1 < 0 || f2 < 0) throw DomainError("p-ranks must be non-negative");
  if (!is_odd_prime(l)) throw DomainError("l = " + std::to_string(l) + " is not an odd prime");
  return kind == ClutchKind::Compact ? f1 + f2 : f1 + f2 + (l - 1);
}

std::vector<std::pair<int, int>> strata_pairs(int i, int g, int f, int l, int p, BoundaryKind kind) {
  if (!is_odd_prime(l)) throw DomainError("l = " + std::to_string(l) + " is not an odd prime");
  require_prime_p(p, l);
  const int e = multiplicative_order(p, l);
  int g1 = i, g2 = 0, total = f;
  if (kind == BoundaryKind::Delta) {
    if (i < 1 || i > g - 1) throw DomainError("Delta index out of range 1 <= i <= g - 1");
    g2 = g - i;
  } else {
    if (i < 0 || i > g - (l - 1)) throw DomainError("Xi index out of range 0 <= i <= g - (l - 1)");
    if (f < 2) throw DomainError("Xi strata need f >= 2");
    g2 = g - (l - 1) - i;
    total = f - (l - 1);
  }
  std::vector<std::pair<int, int>> out;
  for (int f1 = 0; f1 <= g1; ++f1) {
    const int f2 = total - f1;
    if (f2 < 0 || f2 > g2) continue;
    if (f1 % e != 0 || f2 % e != 0) continue;
    out.emplace_back(f1, f2);
  }
  return out;
}

DimensionBounds stratum_dim_bounds(int p, const InertiaType& t, int f) {
  if (const auto adm = prank_admissible(p, t, f); !adm) throw DomainError("inadmissible p-rank: " + adm.reason);
  const PRankProfile prof = prank_profile(p, t);
  DimensionBounds out;
  out.ambient = t.n() - 3;
  // the maximal stratum is open and dense; the purity count only applies below it
  out.lower = f == prof.bound ? out.ambient : out.ambient - (prof.bound - f) / prof.e + prof.epsilon;
  return out;
}

}  // namespace tri::moduli
