#pragma once

// JSON conversions for exact values. Integers that fit in a signed 64-bit
// word are emitted as numbers, larger ones as decimal strings.

#include <qhm/cf.hpp>
#include <qhm/lattice.hpp>
#include <qhm/parse.hpp>

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace qhm {

using Json = nlohmann::json;

inline Json to_json(const Integer& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());
}

inline Json to_json(const Rational& v) { return Json(to_string(v)); }

inline Json to_json(const RatVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline Json to_json(const AlgebraicReal& a) {
  return Json{{"expr", a.to_string()},
              {"minpoly", to_string(a.minpoly())},
              {"interval", Json::array({to_json(a.lo()), to_json(a.hi())})},
              {"approx", a.to_decimal(12)}};
}

template <std::size_t N>
Json to_json(const Unimodular<N>& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < N; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < N; ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline Json to_json(const CFExpansion& cf) {
  Json q = Json::array();
  for (const auto& a : cf.quotients) q.push_back(to_json(a));
  Json out{{"quotients", q}, {"exact", cf.exact}};
  out["period_start"] = cf.period ? Json(cf.period->first) : Json(nullptr);
  out["period_len"] = cf.period ? Json(cf.period->second) : Json(nullptr);
  return out;
}

inline Json to_json(const RatLattice& l) {
  Json rows = Json::array();
  for (const auto& r : l.hnf()) {
    Json row = Json::array();
    for (const auto& x : r) row.push_back(to_json(x));
    rows.push_back(std::move(row));
  }
  return Json{{"denom", to_json(l.denom())}, {"basis_rows", rows}};
}

inline Json to_json(const Word& w) {
  Json out = Json::array();
  for (const auto& l : w) out.push_back(Json{{"gen", "A" + std::to_string(l.generator)}, {"exp", to_json(l.exponent)}});
  return out;
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(static_cast<long>(j.get<long long>()));
  if (j.is_string()) {
    Rational r = parse_rational(j.get<std::string>());
    if (r.get_den() != 1) throw std::invalid_argument("expected an integer, got " + j.get<std::string>());
    return r.get_num();
  }
  throw std::invalid_argument("expected an integer in JSON");
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("expected a rational in JSON");
}

template <std::size_t N>
Unimodular<N> unimodular_from_json(const Json& j) {
  std::vector<std::vector<Integer>> rows;
  for (const auto& r : j) {
    std::vector<Integer> row;
    for (const auto& x : r) row.push_back(integer_from_json(x));
    rows.push_back(std::move(row));
  }
  auto m = Unimodular<N>::from_rows(rows);
  if (!m) throw std::invalid_argument("matrix in JSON is not unimodular");
  return *m;
}

/// Accepts either {"expr": ...} objects or plain expression strings.
inline AlgebraicReal algebraic_from_json(const Json& j) {
  if (j.is_string()) return parse_algebraic(j.get<std::string>());
  if (j.is_object() && j.contains("expr")) return parse_algebraic(j.at("expr").get<std::string>());
  throw std::invalid_argument("expected an algebraic number in JSON");
}

}  // namespace qhm
