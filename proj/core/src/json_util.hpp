#pragma once

#include <gmpxx.h>

#include <nlohmann/json.hpp>
#include <string>

#include "essmin/errors.hpp"
#include "essmin/intpoly.hpp"

namespace essmin::detail {

using json = nlohmann::json;

/// "p/q", "p", or a decimal such as "0.25", converted exactly.
inline mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  mpz_class num;
  if (digits.empty() || num.set_str(digits, 10) != 0) throw ParseError("bad rational '" + s + "'");
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(s.size() - dot - 1));
  q = mpq_class(num, den);
  q.canonicalize();
  return q;
}

inline std::string rational_str(const mpq_class& q) { return q.get_str(); }

inline json poly_json_strings(const IntPoly& p) { return p.to_strings(); }

inline IntPoly poly_from_json(const json& j) {
  if (j.is_string()) return IntPoly::parse(j.get<std::string>());
  if (!j.is_array()) throw ParseError("polynomial must be a string or an array of decimal strings");
  std::vector<std::string> c;
  for (const auto& v : j) {
    if (v.is_string()) c.push_back(v.get<std::string>());
    else if (v.is_number_integer()) c.push_back(std::to_string(v.get<long long>()));
    else throw ParseError("polynomial coefficient must be an integer string");
  }
  return IntPoly::from_strings(c);
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace essmin::detail
