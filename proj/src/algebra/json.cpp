#include "tri/algebra/json.hpp"

#include "tri/error.hpp"

namespace tri::algebra {

json field_to_json(const FieldDesc& f) {
  json j = {{"p", f.characteristic()}, {"k", f.degree()}};
  if (f.degree() > 1) j["modulus"] = f.modulus();
  return j;
}

const FieldDesc& field_from_json(const json& j) {
  try {
    const auto p = j.at("p").get<std::uint64_t>();
    const int k = j.contains("k") ? j.at("k").get<int>() : 1;
    const FieldDesc& f = make_field(p, k);
    if (j.contains("modulus") && k > 1 && j.at("modulus").get<std::vector<Residue>>() != f.modulus())
      throw DomainError("field modulus does not match the canonical modulus for " + f.to_string());
    return f;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed field description: ") + e.what());
  }
}

json coefficient_to_json(const FieldElement& a) { return a.coeffs(); }

FieldElement coefficient_from_json(const FieldDesc& f, const json& j) {
  try {
    if (j.is_number_integer()) return FieldElement::from_int(f, j.get<std::int64_t>());
    if (j.is_array()) {
      const auto c = j.get<std::vector<std::int64_t>>();
      return FieldElement::from_coeffs(f, c);
    }
    if (j.is_object()) {
      FieldElement a = element_from_json(j);
      if (&a.field() != &f) throw DomainError("coefficient lives in " + a.field().to_string() + ", expected " + f.to_string());
      return a;
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed field element: ") + e.what());
  }
  throw DomainError("field element must be an integer, an array or an object");
}

json element_to_json(const FieldElement& a) {
  return {{"p", a.field().characteristic()}, {"k", a.field().degree()}, {"coeffs", a.coeffs()}};
}

FieldElement element_from_json(const json& j) {
  const FieldDesc& f = field_from_json(j);
  try {
    const auto c = j.at("coeffs").get<std::vector<std::int64_t>>();
    if (c.size() != f.degree()) throw DomainError("element of " + f.to_string() + " needs exactly k coefficients");
    for (auto v : c)
      if (v < 0 || v >= static_cast<std::int64_t>(f.characteristic()))
        throw DomainError("element coefficient out of range [0, p)");
    return FieldElement::from_coeffs(f, c);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed field element: ") + e.what());
  }
}

json polynomial_to_json(const Polynomial& f) {
  json coeffs = json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(coefficient_to_json(c));
  return {{"field", field_to_json(f.field())}, {"coeffs", coeffs}};
}

Polynomial polynomial_from_json(const FieldDesc& f, const json& coeffs) {
  if (!coeffs.is_array()) throw DomainError("polynomial coefficients must be an array");
  std::vector<FieldElement> v;
  v.reserve(coeffs.size());
  for (const auto& c : coeffs) v.push_back(coefficient_from_json(f, c));
  return {f, std::move(v)};
}

Polynomial polynomial_from_json(const json& j) {
  if (!j.contains("field") || !j.contains("coeffs")) throw DomainError("polynomial needs \"field\" and \"coeffs\"");
  return polynomial_from_json(field_from_json(j.at("field")), j.at("coeffs"));
}

}  // namespace tri::algebra
