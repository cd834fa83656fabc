#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "tri/algebra/field.hpp"
#include "tri/algebra/polynomial.hpp"
#include "tri/cartier.hpp"

namespace tri::zeta {

using algebra::FieldDesc;
using algebra::FieldElement;
using algebra::Polynomial;

struct Branch {
  FieldElement alpha;
  int a;  // canonical inertia generator in [1, l-1]
};

/// Monic squarefree factor of degree >= 1 whose roots all carry inertia a.
struct Factor {
  Polynomial poly;
  int a;
};

/**
 * The smooth projective model of
 *   y^l = prod_j (x - alpha_j)^{a_j} * prod_m F_m(x)^{b_m}
 * over F_q. The alpha_j are distinct rational branch points; the F_m hold
 * branch points that need not be rational. All roots are distinct and the
 * weighted degree is 0 mod l, so the cover is unramified over infinity.
 */
struct CyclicCover {
  int l = 0;
  const FieldDesc* field = nullptr;
  std::vector<Branch> branches;
  std::vector<Factor> factors;

  /// Number of geometric branch points.
  int branch_count() const;
  int genus() const { return (branch_count() - 2) * (l - 1) / 2; }
};

CyclicCover make_cover(int l, const FieldDesc& field, std::vector<Branch> branches, std::vector<Factor> factors = {});

/// Rational roots of p1 and p2 become branches; any unsplit remainder becomes a factor.
CyclicCover from_trielliptic(const cartier::TriellipticCurve& curve);

// {"l": int, "p": int, "k": int, "branches": [{"alpha": [int], "a": int}],
//  "factors": [{"poly": [coeff], "a": int}]}, "factors" optional
nlohmann::json cover_to_json(const CyclicCover& c);
CyclicCover cover_from_json(const nlohmann::json& j);

/// Largest extension field the point counter will enumerate.
inline constexpr std::uint64_t kMaxCountOrder = std::uint64_t{1} << 24;
/// Field size up to which the L-polynomial is checked against N_{g+1}.
inline constexpr std::uint64_t kOvercountOrder = std::uint64_t{1} << 22;

/// True when F_{q^i} is small enough for count_points.
bool countable(const CyclicCover& c, int i);

/// Number of F_{q^i}-points of the smooth model. Exhaustive over F_{q^i}.
std::uint64_t count_points(const CyclicCover& c, int i, unsigned workers = 1);

struct LPolynomial {
  std::uint64_t q = 0;
  int genus = 0;
  std::vector<std::int64_t> coeffs;  // c_0 .. c_{2g}
  std::vector<std::uint64_t> counts;  // N_1 .. N_g
};

/// Counts N_1..N_g, Newton's identities, functional equation. Throws
/// ConsistencyError if P(1) <= 0 or a Weil bound fails.
LPolynomial l_polynomial(const CyclicCover& c, unsigned workers = 1);

/// N_i predicted by the L-polynomial.
std::int64_t predicted_count(const LPolynomial& L, int i);

/// Degree of P(T) mod p.
int prank_from_l_polynomial(const LPolynomial& L, std::uint32_t p);

int prank_zeta(const CyclicCover& c, unsigned workers = 1);

struct ZetaAudit {
  std::int64_t functional_equation_residual = 0;  // sum |c_{2g-i} - q^{g-i} c_i|
  bool newton_roundtrip = true;  // the L-polynomial reproduces N_1..N_g
  bool weil_bounds = true;
  std::optional<std::int64_t> predicted_next;  // N_{g+1}, when q^{g+1} <= kOvercountOrder
  std::optional<std::uint64_t> counted_next;
  bool ok() const {
    return functional_equation_residual == 0 && newton_roundtrip && weil_bounds && predicted_next.has_value() == counted_next.has_value() &&
           (!predicted_next || static_cast<std::int64_t>(*counted_next) == *predicted_next);
  }
};

/// Independent checks of an assembled L-polynomial, including the N_{g+1} overcount.
ZetaAudit audit(const CyclicCover& c, const LPolynomial& L, unsigned workers = 1);

}  // namespace tri::zeta
