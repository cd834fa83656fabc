#pragma once

#include <vector>

#include <json.hpp>

#include "tri/algebra/polynomial.hpp"
#include "tri/matrix.hpp"

namespace tri::cartier {

using algebra::FieldDesc;
using algebra::Polynomial;

/**
 * The trielliptic curve y^3 = p1(x) * p2(x)^2 over F_q, q = p^k, p != 3.
 *
 * p1 and p2 are monic, squarefree and coprime; their roots are the branch
 * points with inertia 1 and 2. The cover is not branched at infinity, so
 * d1 + 2 d2 is divisible by 3. Only validate_curve builds one.
 */
struct TriellipticCurve {
  const FieldDesc* field = nullptr;
  Polynomial p1;
  Polynomial p2;
  int d1 = 0;
  int d2 = 0;
  int genus = 0;
  int r = 0;  // dim of the eigenspace spanned by x^{j-1} dx / y
  int s = 0;  // dim of the eigenspace spanned by x^{j-1} p2 dx / y^2
};

TriellipticCurve validate_curve(const FieldDesc& field, Polynomial p1, Polynomial p2);

// {"p": int, "k": int, "p1": [coeff], "p2": [coeff]}, low degree first.
nlohmann::json curve_to_json(const TriellipticCurve& c);
TriellipticCurve curve_from_json(const nlohmann::json& j);

struct ElkinPolynomials {
  Polynomial h1;
  Polynomial h2;
};

/**
 * h1 = p1^a p2^b and h2 = p1^b p2^a with (a, b) = ((p-2)/3, (2p-1)/3) for
 * p = 2 mod 3 and ((p-1)/3, (2p-2)/3) for p = 1 mod 3.
 */
ElkinPolynomials elkin_h(const TriellipticCurve& curve);

/**
 * The unique f_0, ..., f_{p-1} with h = sum_t f_t(x)^p x^t: the coefficient
 * of x^m in f_t is the p-th root of the coefficient of x^{mp+t} in h.
 */
std::vector<Polynomial> f_decomposition(const Polynomial& h);

/**
 * Matrix of the Cartier operator on regular differentials.
 *
 * Basis order: the r forms x^{j-1} dx/y, then the s forms x^{j-1} p2 dx/y^2.
 * Column c holds the image of basis vector c. The operator swaps the two
 * eigenspaces when p = 2 mod 3 (block anti-diagonal) and preserves them when
 * p = 1 mod 3 (block diagonal).
 */
struct CartierMatrix {
  Matrix entries;
  int r = 0;
  int s = 0;
  bool swaps_eigenspaces = false;

  int genus() const { return r + s; }
  const FieldDesc& field() const { return entries.field(); }
};

/// Throws ConsistencyError when an image polynomial does not fit its target eigenspace.
CartierMatrix cartier_matrix(const TriellipticCurve& curve);

/// Rank of C^(p^{g-1}) ... C^(p) C.
int prank_cartier(const CartierMatrix& m);
int prank_cartier(const TriellipticCurve& curve);

/// Rank of the product of `factors` twisted copies (g copies gives the p-rank).
int iterated_rank(const CartierMatrix& m, int factors);

bool is_superspecial(const CartierMatrix& m);

/// True when r >= p or s >= p, where the x^{floor((j-1)/p)} shift in the image formula is active.
bool uses_shifted_images(const TriellipticCurve& curve);

}  // namespace tri::cartier
