#pragma once

// JSON encodings. Polynomials are coefficient lists, lowest degree first.
// Rational entries are strings "num/den" (or "num"); GF(p) entries are
// integers in [0, p).

#include "json.hpp"

#include <regex>
#include <stdexcept>
#include <string>
#include <variant>

#include "fixrank/placement.hpp"

namespace fixrank::io {

using json = nlohmann::json;

/// Malformed input (bad field name, wrong shape, unparsable entry).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AnyField = std::variant<RationalField, PrimeField>;

inline AnyField parse_field(const std::string& name) {
  if (name == "q" || name == "Q") return RationalField{};
  static const std::regex gf(R"(gf\((\d+)\))", std::regex::icase);
  std::smatch m;
  if (std::regex_match(name, m, gf)) {
    try {
      return PrimeField(static_cast<std::uint32_t>(std::stoul(m[1].str())));
    } catch (const std::exception& e) {
      throw InputError("field '" + name + "': " + e.what());
    }
  }
  throw InputError("unknown field '" + name + "' (expected \"q\" or \"gf(p)\")");
}

inline Rational element_from_json(const RationalField&, const json& j) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  throw InputError("rational entry must be a string \"num/den\" or an integer: " + j.dump());
}

inline Zp element_from_json(const PrimeField& f, const json& j) {
  if (!j.is_number_integer()) throw InputError("GF(p) entry must be an integer: " + j.dump());
  return f.from_int(j.get<std::int64_t>());
}

inline json element_to_json(const Rational& x) { return x.str(); }
inline json element_to_json(const Zp& x) { return x.value(); }

template <class E>
json point_to_json(const ExtPoint<E>& c) {
  return c ? element_to_json(*c) : json("inf");
}

template <class F>
Poly<Elem<F>> poly_from_json(const F& field, const json& j) {
  if (!j.is_array()) throw InputError("polynomial must be a coefficient array");
  std::vector<Elem<F>> c;
  for (const auto& x : j) c.push_back(element_from_json(field, x));
  return Poly<Elem<F>>(std::move(c));
}

template <class E>
json poly_to_json(const Poly<E>& p) {
  json a = json::array();
  for (const auto& c : p.coeffs()) a.push_back(element_to_json(c));
  return a;
}

template <class F>
Matrix<Elem<F>> matrix_from_json(const F& field, const json& j, Index m, Index n, const char* what) {
  if (!j.is_array() || j.size() != m) throw InputError(std::string(what) + " must have " + std::to_string(m) + " rows");
  Matrix<Elem<F>> out(m, n, field.zero());
  for (Index i = 0; i < m; ++i) {
    if (!j[i].is_array() || j[i].size() != n)
      throw InputError(std::string(what) + " row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    for (Index k = 0; k < n; ++k) out(i, k) = element_from_json(field, j[i][k]);
  }
  return out;
}

template <class E>
json matrix_to_json(const Matrix<E>& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(element_to_json(m(i, k)));
    a.push_back(row);
  }
  return a;
}

inline std::string field_name(const AnyField& f) {
  return std::visit([](const auto& x) { return x.name(); }, f);
}

/// Field named by the document, or the fallback when the key is absent.
inline AnyField field_of(const json& j, const std::optional<std::string>& fallback) {
  if (j.is_object() && j.contains("field")) return parse_field(j.at("field").get<std::string>());
  if (fallback) return parse_field(*fallback);
  throw InputError("no field given (add \"field\" or pass --field)");
}

template <class F>
Pencil<Elem<F>> pencil_from_json(const F& field, const json& j) {
  if (!j.is_object()) throw InputError("pencil must be a JSON object");
  for (const char* k : {"m", "n", "G0", "G1"})
    if (!j.contains(k)) throw InputError(std::string("pencil is missing \"") + k + "\"");
  if (j.contains("field") && parse_field(j["field"].get<std::string>()).index() != AnyField(field).index())
    throw InputError("pencil field differs from the requested field");
  const auto m = j["m"].get<Index>(), n = j["n"].get<Index>();
  return Pencil<Elem<F>>(matrix_from_json(field, j["G0"], m, n, "G0"), matrix_from_json(field, j["G1"], m, n, "G1"));
}

template <class F>
json pencil_to_json(const F& field, const Pencil<Elem<F>>& p) {
  return json{{"field", field.name()},
              {"m", p.rows()},
              {"n", p.cols()},
              {"G0", matrix_to_json(p.g0)},
              {"G1", matrix_to_json(p.g1)}};
}

template <class F>
WeierstrassStructure<Elem<F>> structure_from_json(const F& field, const json& j) {
  if (!j.is_object() || !j.contains("hfactors") || !j["hfactors"].is_array())
    throw InputError("structure must be an object with an \"hfactors\" array");
  std::vector<HomogPoly<Elem<F>>> f;
  for (const auto& h : j["hfactors"]) {
    if (!h.contains("inf_mult") || !h.contains("finite")) throw InputError("hfactor needs inf_mult and finite");
    const int m = h["inf_mult"].get<int>();
    auto fin = poly_from_json(field, h["finite"]);
    if (fin.is_zero()) throw InputError("hfactor finite part must be nonzero");
    if (!fin.is_monic()) throw InputError("hfactor finite part must be monic");
    try {
      f.emplace_back(m, std::move(fin));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  return WeierstrassStructure<Elem<F>>(std::move(f));
}

template <class E>
json structure_to_json(const WeierstrassStructure<E>& s) {
  json a = json::array();
  for (const auto& h : s.factors()) a.push_back(json{{"inf_mult", h.inf_mult()}, {"finite", poly_to_json(h.finite())}});
  return json{{"hfactors", a}};
}

template <class E>
json certificate_to_json(const std::string& field, const SynthCertificate<E>& c) {
  json path = json::array();
  for (const auto& s : c.path) {
    json step{{"step", step_name(s.step)}};
    if (s.point) step["point"] = point_to_json(*s.point);
    path.push_back(step);
  }
  json p{{"field", field}, {"m", c.p.rows()}, {"n", c.p.cols()}, {"G0", matrix_to_json(c.p.g0)}, {"G1", matrix_to_json(c.p.g1)}};
  return json{{"P", p}, {"rank", c.rank_p}, {"achieved", structure_to_json(c.achieved)}, {"path", path}};
}

inline const char* refusal_kind_name(RefusalKind k) {
  switch (k) {
    case RefusalKind::InterlacingFails: return "infeasible";
    case RefusalKind::RankOutOfRange: return "rank_out_of_range";
    case RefusalKind::ScalarException: return "scalar_exception";
    case RefusalKind::NoApplicabilityPath: return "no_applicability_path";
    case RefusalKind::NotCovered: return "not_covered";
    case RefusalKind::BackendExhausted: return "backend_exhausted";
  }
  return "?";
}

inline json refusal_to_json(const Refusal& r) {
  return json{{"refused", true}, {"kind", refusal_kind_name(r.kind)}, {"reason", r.code}, {"detail", r.detail}};
}

}  // namespace fixrank::io
