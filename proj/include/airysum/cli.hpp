#pragma once

// Command-line front end: zeros, derive, verify.
//
// Exit codes: 0 success / all checks pass, 1 a check failed or a runtime
// error occurred, 2 usage error.

#include <cstdlib>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "airysum/airy.hpp"
#include "airysum/json_io.hpp"
#include "airysum/multi_sum.hpp"
#include "airysum/numeric_sums.hpp"
#include "airysum/quadrature.hpp"
#include "airysum/sum_derivation.hpp"

namespace airysum {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string command;
  long n_max = 10;
  int p_max = 11;
  long precision_bits = kDefaultPrecisionBits;
  long K = kDefaultTruncation;
  double tolerance = 1e-6;
  std::string output_format = "text";
  std::string output_path;
  std::string ledger_path;
  std::string suite = "all";
};

// AIRYSUM_PRECISION overrides the built-in default precision.
inline long default_precision_from_env() {
  const char* v = std::getenv("AIRYSUM_PRECISION");
  if (!v || !*v) return kDefaultPrecisionBits;
  char* end = nullptr;
  const long p = std::strtol(v, &end, 10);
  if (*end != '\0' || p < kMinPrecisionBits) {
    throw std::invalid_argument(std::string("AIRYSUM_PRECISION must be an integer >= 64, got '") + v + "'");
  }
  return p;
}

struct CheckLine {
  std::string name;
  bool pass;
  std::string detail;
};

class Verifier {
 public:
  Verifier(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  void add(const std::string& name, bool pass, const std::string& detail) {
    lines_.push_back({name, pass, detail});
    out_ << (pass ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : "  " + detail) << "\n";
  }
  bool all_pass() const {
    for (const auto& l : lines_) {
      if (!l.pass) return false;
    }
    return true;
  }
  const std::vector<CheckLine>& lines() const { return lines_; }

  const ZeroTable& table() {
    if (!table_) table_ = build_zero_table(std::max(cfg_.K, kDefaultTruncation), cfg_.precision_bits);
    return *table_;
  }
  const DerivationLedger& ledger() {
    if (!ledger_) ledger_ = derive_ledger(11);
    return *ledger_;
  }

  void sums() {
    for (const auto& row : verify_against_published_table(ledger())) {
      add("S_" + std::to_string(row.p) + " closed form", row.match,
          row.match ? row.derived.to_string() : row.differences.front());
    }
    for (int p = 2; p <= 11; ++p) {
      const CompareReport rep = compare(ledger().get(p), {1, 2, 3, 4, 5}, table(), cfg_.tolerance, cfg_.K);
      for (const auto& r : rep.rows) {
        add("S_" + std::to_string(p) + "(" + std::to_string(r.n) + ") numeric", r.pass,
            "rel dev " + r.relative_deviation.str(3) + ", bound " + r.error_bound.str(3));
      }
    }
  }

  void stark() {
    const double lam = 0.01;
    StarkConfig sc;
    sc.F_bar = Real(lam, cfg_.precision_bits);
    const Rational expect[] = {Rational(2, 3), Rational(-1, 9), Rational(4, 81)};
    for (int order = 1; order <= 3; ++order) {
      add("Stark series coefficient " + std::to_string(order), stark_series_coefficient(order) == expect[order - 1],
          stark_series_coefficient(order).get_str());
    }
    for (long n = 1; n <= 3; ++n) {
      const Real zn = table().zeta(n);
      for (int order = 1; order <= 3; ++order) {
        SumEstimate s = stark_perturbative(n, sc, order, table(), cfg_.K);
        const Real coeff = s.value / pow(sc.ratio(), static_cast<long>(order)) / zn;
        const Real want(expect[order - 1], coeff.precision());
        const Real rel = abs(coeff - want) / abs(want);
        add("Stark order " + std::to_string(order) + " n=" + std::to_string(n), rel < cfg_.tolerance,
            "coefficient " + coeff.str(12) + ", rel dev " + rel.str(3));
      }
    }
  }

  void bethe() {
    const SumRelation trk = bethe_relation(2);
    const DerivationLedger l = derive_ledger(3);
    add("Bethe O(q^2) is TRK", trk.coeffs.size() == 1 && trk.coeffs.count(3) && relation_residual(trk, l).is_zero(),
        trk.to_string());
    for (int order : {4, 6}) {
      BetheCheck b = bethe_tower_check(order, 1, table(), cfg_.K);
      add("Bethe O(q^" + std::to_string(order) + ") n=1", b.symbolic_holds && b.residual < 1e-8,
          "residual " + b.residual.str(3) + "; " + b.relation.to_string());
    }
  }

  void tsums() {
    const DerivationLedger& l = ledger();
    const MultiSumIdentity t323 = derive_T_from_identities(TIdentity::stark3, l);
    const MultiSumIdentity t222 = derive_T_from_identities(TIdentity::triple_x, l);
    add("T_{3,2,3} derived", t323.closed_form == ZetaPoly::monomial(1, Rational(1, 324)), t323.closed_form.to_string());
    add("T_{2,2,2} derived",
        t222.closed_form == ZetaPoly::monomial(3, Rational(2, 945)) + ZetaPoly(Rational(5, 168)),
        t222.closed_form.to_string());
    for (const MultiSumIdentity* id : {&t323, &t222}) {
      for (long n = 1; n <= 3; ++n) {
        TSumEstimate t = t_sum_numeric(id->a, id->b, id->c, n, table(), kDefaultDoubleSumTruncation);
        const Real closed = id->closed_form.eval(table().zeta(n)).with_precision(t.value.precision());
        const Real rel = abs(t.value - closed) / abs(closed);
        add("T_{" + std::to_string(id->a) + "," + std::to_string(id->b) + "," + std::to_string(id->c) + "}(" +
                std::to_string(n) + ") numeric",
            rel < 1e-5, "rel dev " + rel.str(3));
      }
    }
  }

 private:
  RunConfig cfg_;
  std::ostream& out_;
  std::vector<CheckLine> lines_;
  std::optional<ZeroTable> table_;
  std::optional<DerivationLedger> ledger_;
};

inline int run_zeros(const RunConfig& c, std::ostream& out) {
  const ZeroTable t = build_zero_table(c.n_max, c.precision_bits);
  std::ostringstream os;
  if (c.output_format == "json") {
    os << to_json(t).dump(2) << "\n";
  } else if (c.output_format == "csv") {
    os << "n,zeta\n";
    for (long n = 1; n <= t.size(); ++n) os << n << "," << t.zeta(n).str() << "\n";
  } else {
    for (long n = 1; n <= t.size(); ++n) os << std::setw(6) << n << "  " << t.zeta(n).str() << "\n";
  }
  if (c.output_path.empty()) {
    out << os.str();
  } else {
    write_text_file(c.output_path, os.str());
  }
  return kExitOk;
}

inline int run_derive(const RunConfig& c, std::ostream& out, std::ostream& err) {
  DerivationLedger ledger;
  if (!c.ledger_path.empty()) {
    std::ifstream probe(c.ledger_path);
    if (probe) ledger = ledger_from_json(json::parse(probe));
  }
  const int before = ledger.p_max();
  derive_through(c.p_max, ledger);
  int matched = 0, compared = 0;
  for (const auto& row : verify_against_published_table(ledger)) {
    ++compared;
    if (row.match) ++matched;
    for (const auto& d : row.differences) err << "S_" << row.p << " differs from published form: " << d << "\n";
  }
  err << "derived S_" << std::max(2, before + 1) << "..S_" << c.p_max << " (ledger now S_2..S_" << ledger.p_max()
      << "); published table " << matched << "/" << compared << " exact\n";
  const std::string text = to_json(ledger).dump(2) + "\n";
  const std::string dest = !c.output_path.empty() ? c.output_path : c.ledger_path;
  if (dest.empty()) {
    out << text;
  } else {
    write_text_file(dest, text);
  }
  return matched == compared ? kExitOk : kExitFail;
}

inline int run_verify(const RunConfig& c, std::ostream& out) {
  Verifier v(c, out);
  const std::string& s = c.suite;
  if (s == "sums" || s == "all") v.sums();
  if (s == "stark" || s == "all") v.stark();
  if (s == "bethe" || s == "all") v.bethe();
  if (s == "tsums" || s == "all") v.tsums();
  std::size_t passed = 0;
  for (const auto& l : v.lines()) passed += l.pass ? 1 : 0;
  out << passed << "/" << v.lines().size() << " checks passed\n";
  if (!c.output_path.empty()) {
    json rep = json::array();
    for (const auto& l : v.lines()) rep.push_back({{"check", l.name}, {"pass", l.pass}, {"detail", l.detail}});
    write_text_file(c.output_path, rep.dump(2) + "\n");
  }
  return v.all_pass() ? kExitOk : kExitFail;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c.precision_bits = default_precision_from_env();
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App app{"Airy zeros, bouncer matrix elements and exact sums S_p(n) over Airy zeros"};
  app.require_subcommand(1);
  auto* zeros = app.add_subcommand("zeros", "Compute zeta_1..zeta_n, the negated zeros of Ai");
  zeros->add_option("--n", c.n_max, "Number of zeros")->required()->check(CLI::PositiveNumber);
  zeros->add_option("--precision", c.precision_bits, "Precision in bits (env AIRYSUM_PRECISION)")
      ->capture_default_str()
      ->check(CLI::Range(kMinPrecisionBits, 1L << 16));
  zeros->add_option("--format", c.output_format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv", "text"}));
  zeros->add_option("--output", c.output_path, "Write to this file instead of stdout");

  auto* derive = app.add_subcommand("derive", "Derive exact closed forms S_2..S_pmax");
  derive->add_option("--p-max", c.p_max, "Highest p")->capture_default_str()->check(CLI::Range(2, 200));
  derive->add_option("--ledger", c.ledger_path, "Ledger JSON to extend (created if absent)");
  derive->add_option("--output", c.output_path, "Write the ledger here (default: --ledger file or stdout)");

  auto* verify = app.add_subcommand("verify", "Run numeric verification suites");
  verify->add_option("--suite", c.suite, "Suite to run")
      ->capture_default_str()
      ->check(CLI::IsMember({"sums", "stark", "bethe", "tsums", "all"}));
  verify->add_option("--K", c.K, "Truncation for single sums")->capture_default_str()->check(CLI::Range(100L, 100000L));
  verify->add_option("--tolerance", c.tolerance, "Relative tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--precision", c.precision_bits, "Precision in bits")
      ->capture_default_str()
      ->check(CLI::Range(kMinPrecisionBits, 1L << 16));
  verify->add_option("--output", c.output_path, "Also write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*zeros) return run_zeros(c, out);
    if (*derive) return run_derive(c, out, err);
    if (*verify) return run_verify(c, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}

}  // namespace airysum
