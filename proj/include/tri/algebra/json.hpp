#pragma once

#include <json.hpp>

#include "tri/algebra/field.hpp"
#include "tri/algebra/polynomial.hpp"

namespace tri::algebra {

using nlohmann::json;

// {"p": int, "k": int, "modulus": [int]}; modulus omitted for prime fields.
json field_to_json(const FieldDesc& f);
// Canonical field for (p, k). A "modulus" entry, when present, must match it.
const FieldDesc& field_from_json(const json& j);

// {"p": int, "k": int, "coeffs": [int]}
json element_to_json(const FieldElement& a);
FieldElement element_from_json(const json& j);

// A bare coefficient: an int (prime-field value), a coefficient array, or a
// full element object. Used inside polynomials and curve files.
FieldElement coefficient_from_json(const FieldDesc& f, const json& j);
json coefficient_to_json(const FieldElement& a);

// {"field": {...}, "coeffs": [[int]]}, low degree first; trailing zeros dropped on read.
json polynomial_to_json(const Polynomial& f);
Polynomial polynomial_from_json(const json& j);
Polynomial polynomial_from_json(const FieldDesc& f, const json& coeffs);

}  // namespace tri::algebra
