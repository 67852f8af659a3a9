#pragma once

// JSON forms of ledgers, zero tables and sum estimates. Big integers are
// written as decimal strings so rationals round-trip exactly.

#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "airysum/airy.hpp"
#include "airysum/numeric_sums.hpp"
#include "airysum/sum_derivation.hpp"

namespace airysum {

using json = nlohmann::json;

inline json to_json(const ZetaPoly& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) {
    terms.push_back({{"zeta_power", e}, {"numerator", c.get_num().get_str()}, {"denominator", c.get_den().get_str()}});
  }
  return terms;
}

inline ZetaPoly zeta_poly_from_json(const json& terms) {
  if (!terms.is_array()) throw std::invalid_argument("terms must be an array");
  ZetaPoly p;
  for (const auto& t : terms) {
    const int e = t.at("zeta_power").get<int>();
    mpz_class num, den;
    if (num.set_str(t.at("numerator").get<std::string>(), 10) != 0 ||
        den.set_str(t.at("denominator").get<std::string>(), 10) != 0) {
      throw std::invalid_argument("malformed rational in terms");
    }
    if (den <= 0) throw std::invalid_argument("denominator must be positive");
    Rational c(num, den);
    c.canonicalize();
    p.add_to(e, c);
  }
  return p;
}

inline json to_json(const DerivationLedger& ledger) {
  json arr = json::array();
  for (const auto& [p, e] : ledger.entries()) {
    arr.push_back({{"p", p}, {"terms", to_json(e.identity.closed_form)}, {"provenance", e.provenance}});
  }
  return arr;
}

inline DerivationLedger ledger_from_json(const json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("ledger must be a JSON array");
  std::map<int, std::pair<ZetaPoly, std::string>> rows;
  for (const auto& row : arr) {
    rows[row.at("p").get<int>()] = {zeta_poly_from_json(row.at("terms")), row.value("provenance", std::string())};
  }
  DerivationLedger l;
  for (const auto& [p, v] : rows) l.insert({p, v.first}, v.second);
  return l;
}

inline json to_json(const ZeroTable& t) {
  json zs = json::array();
  for (long n = 1; n <= t.size(); ++n) zs.push_back({{"n", n}, {"zeta", t.zeta(n).str()}});
  return {{"precision_bits", t.precision_bits()}, {"tolerance", t.tolerance().str(6)}, {"zeros", zs}};
}

inline ZeroTable zero_table_from_json(const json& j) {
  const long prec = j.at("precision_bits").get<long>();
  std::vector<Real> zs;
  long expect = 1;
  for (const auto& z : j.at("zeros")) {
    if (z.at("n").get<long>() != expect++) throw std::invalid_argument("zero table indices must be contiguous from 1");
    zs.emplace_back(z.at("zeta").get<std::string>(), prec);
  }
  return ZeroTable(std::move(zs), prec, Real(j.at("tolerance").get<std::string>(), prec));
}

inline json to_json(const SumEstimate& s) {
  return {{"value", s.value.str()}, {"error_bound", s.error_bound.str(6)}, {"K", s.truncation_K}, {"tail", to_string(s.tail)}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return json::parse(in);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace airysum
