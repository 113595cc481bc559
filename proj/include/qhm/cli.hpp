#pragma once

// Command-line front end: rank, cf, equiv, normalize, reduce, verify and
// witness-check. Exit codes: 0 ok, 2 usage or parse error, 3 Unknown,
// 4 witness-check failure.

#include <qhm/bimodule.hpp>
#include <qhm/classify.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace qhm::cli {

enum ExitCode : int { Ok = 0, UsageError = 2, UnknownVerdict = 3, WitnessFailure = 4 };

namespace detail {

inline std::string format_vector(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

inline void print_trace(std::ostream& out, const Trace& trace) {
  for (const auto& step : trace) out << "  [" << step.rule << "] " << step.data.dump() << "\n";
}

inline void print_params(std::ostream& out, const std::string& label, const QHMParams& p) {
  out << label << ": c = " << p.c << ", mu = " << p.mu.to_string() << " (~" << p.mu.to_decimal(12) << "), nu = "
      << p.nu.to_string() << " (~" << p.nu.to_decimal(12) << ")\n";
}

struct ParamFlags {
  std::string c = "1", mu, nu;

  void add(CLI::App* app, const std::string& suffix, bool with_c) {
    if (with_c) app->add_option("--c" + suffix, c, "positive integer c")->required();
    app->add_option("--mu" + suffix, mu, "expression for mu")->required();
    app->add_option("--nu" + suffix, nu, "expression for nu")->required();
  }

  QHMParams parse() const {
    Rational cr = parse_rational(c);
    if (cr.get_den() != 1) throw ParseError("c must be an integer");
    return QHMParams(cr.get_num(), parse_algebraic(mu), parse_algebraic(nu));
  }
};

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Morita classification of quantum Heisenberg manifolds", "qhm"};
  app.require_subcommand(1, 1);

  bool json = false;
  Budget budget;

  auto* rank_cmd = app.add_subcommand("rank", "rank and HNF basis of G = Z + 2mu Z + 2nu Z");
  detail::ParamFlags rank_flags;
  rank_flags.add(rank_cmd, "", false);
  rank_cmd->add_flag("--json", json, "emit JSON");

  auto* cf_cmd = app.add_subcommand("cf", "continued fraction expansion");
  std::string cf_x;
  int cf_terms = 64;
  cf_cmd->add_option("--x", cf_x, "expression")->required();
  cf_cmd->add_option("--terms", cf_terms, "maximum number of partial quotients")->check(CLI::PositiveNumber);
  cf_cmd->add_flag("--json", json, "emit JSON");

  auto* eq_cmd = app.add_subcommand("equiv", "decide Morita equivalence of two parameter triples");
  detail::ParamFlags eq1, eq2;
  eq1.add(eq_cmd, "", true);
  eq2.add(eq_cmd, "2", true);
  std::string out_file;
  eq_cmd->add_option("--budget", budget.height_bound, "rank-3 height bound")->check(CLI::NonNegativeNumber);
  eq_cmd->add_option("--cf-terms", budget.cf_terms, "continued fraction terms")->check(CLI::PositiveNumber);
  eq_cmd->add_option("--orbit-bound", budget.orbit_bound, "GL2(Z) orbit search bound")->check(CLI::NonNegativeNumber);
  eq_cmd->add_option("--out", out_file, "write the witness JSON to this file");
  eq_cmd->add_flag("--json", json, "emit JSON");

  auto* norm_cmd = app.add_subcommand("normalize", "move a rank-2 triple to the shape (p/(2q), nu')");
  detail::ParamFlags norm_flags;
  norm_flags.add(norm_cmd, "", true);
  norm_cmd->add_flag("--json", json, "emit JSON");

  auto* red_cmd = app.add_subcommand("reduce", "rank-2 pipeline down to (0, q nu')");
  detail::ParamFlags red_flags;
  red_flags.add(red_cmd, "", true);
  red_cmd->add_flag("--json", json, "emit JSON");

  auto* ver_cmd = app.add_subcommand("verify", "numerical residuals of the bimodule identities");
  double vmu = 0, vnu = 0;
  int vc = 1;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  bool literal = false;
  ver_cmd->add_option("--mu", vmu, "mu (double)")->required();
  ver_cmd->add_option("--nu", vnu, "nu (double)")->required();
  ver_cmd->add_option("--c", vc, "c")->required()->check(CLI::PositiveNumber);
  ver_cmd->add_option("--samples", samples, "number of random points")->check(CLI::PositiveNumber);
  ver_cmd->add_option("--seed", seed, "random seed");
  ver_cmd->add_flag("--literal-cocycle", literal, "take u* whenever one index of U(n,k) is negative");

  auto* wc_cmd = app.add_subcommand("witness-check", "re-verify a saved witness");
  std::string witness_file;
  wc_cmd->add_option("--file", witness_file, "witness JSON")->required();

  std::vector<const char*> argv{"qhm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return UsageError;
  }

  try {
    if (rank_cmd->parsed()) {
      AlgebraicReal mu = parse_algebraic(rank_flags.mu), nu = parse_algebraic(rank_flags.nu);
      TraceGroup g = trace_group(mu, nu);
      if (json) {
        out << Json{{"rank", g.rank()}, {"lattice", to_json(g.lattice)}, {"field", g.context().to_string()}}.dump(2)
            << "\n";
        return Ok;
      }
      out << "rank: " << g.rank() << "\n";
      out << "field: " << g.context().to_string() << "\n";
      out << "HNF basis (coordinates in powers of the primitive element):\n";
      for (const auto& b : g.lattice.basis()) out << "  " << detail::format_vector(b) << "\n";
      return Ok;
    }
    if (cf_cmd->parsed()) {
      AlgebraicReal x = parse_algebraic(cf_x);
      CFExpansion cf = cf_expand(x, cf_terms);
      if (json) {
        out << to_json(cf).dump(2) << "\n";
      } else {
        out << cf.to_string() << (cf.exact ? "" : " ...") << "\n";
      }
      return Ok;
    }
    if (eq_cmd->parsed()) {
      QHMParams p = eq1.parse(), p2 = eq2.parse();
      Verdict v = decide_equivalence(p, p2, budget);
      Json w = to_json(v, p, p2);
      if (!out_file.empty()) {
        std::ofstream f(out_file);
        if (!f) {
          err << "error: cannot write " << out_file << "\n";
          return UsageError;
        }
        f << w.dump(2) << "\n";
      }
      if (json) {
        out << w.dump(2) << "\n";
      } else {
        detail::print_params(out, "p ", p);
        detail::print_params(out, "p'", p2);
        out << "verdict: " << v.kind();
        if (v.equivalent()) out << " (Morita equivalent by the trace-group criterion)";
        out << "\n";
        if (const auto* eq = v.equivalent()) {
          out << "r = " << eq->r.to_string() << " ~ " << eq->r.to_decimal(15) << "\n";
          if (eq->gl3) out << "GL3 witness: " << eq->gl3->to_string() << "\n";
          if (eq->gl2) out << "GL2 witness (q alpha = A(q' alpha')): " << eq->gl2->to_string() << "\n";
        } else if (const auto* ne = v.not_equivalent()) {
          out << "certificate: " << to_string(ne->certificate.kind) << " (" << ne->certificate.invariant << ") "
              << ne->certificate.values.dump() << "\n";
        } else {
          out << "budget report: " << v.unknown()->budget_report << "\n";
        }
        out << "trace:\n";
        detail::print_trace(out, v.trace);
      }
      return v.unknown() ? UnknownVerdict : Ok;
    }
    if (norm_cmd->parsed() || red_cmd->parsed()) {
      const bool reduce = red_cmd->parsed();
      QHMParams p = (reduce ? red_flags : norm_flags).parse();
      Json j;
      Trace trace;
      std::optional<QHMParams> final;
      std::optional<Normalized> n;
      if (!(reduce && p.mu.is_rational())) {
        n = normalize_rank2(p);
        trace = n->trace;
        j["normalized"] = n->params.to_json();
        j["matrix"] = to_json(n->matrix);
        j["swapped"] = n->swapped;
        final = n->params;
      } else {
        final = p;
      }
      if (reduce) {
        DifResult d = reduce_dif(*final);
        trace.insert(trace.end(), d.trace.begin(), d.trace.end());
        Json rem = Json::array();
        for (const auto& r : d.remainders) rem.push_back(to_json(r));
        j["remainders"] = rem;
        j["chain_length"] = d.chain_length;
        j["reduced"] = d.params.to_json();
        final = d.params;
      }
      j["trace"] = to_json(trace);
      if (json) {
        out << j.dump(2) << "\n";
        return Ok;
      }
      detail::print_params(out, "input ", p);
      if (n) {
        detail::print_params(out, "normalized", n->params);
        out << "matrix: " << n->matrix.to_string() << (n->swapped ? " (after swapping mu and nu)" : "") << "\n";
      }
      if (reduce) detail::print_params(out, "reduced", *final);
      out << "trace:\n";
      detail::print_trace(out, trace);
      return Ok;
    }
    if (ver_cmd->parsed()) {
      bimodule::GeometrySpec spec(vmu, vnu, vc, literal ? bimodule::CocycleSign::Literal : bimodule::CocycleSign::Product);
      out << bimodule::to_json(bimodule::verify_all(spec, samples, seed)).dump(2) << "\n";
      return Ok;
    }
    if (wc_cmd->parsed()) {
      std::ifstream f(witness_file);
      if (!f) {
        err << "error: cannot read " << witness_file << "\n";
        return UsageError;
      }
      Json w;
      try {
        w = Json::parse(f);
      } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return UsageError;
      }
      WitnessCheck check;
      try {
        check = check_witness(w);
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& e) {
        check.fail(e.what());
      }
      for (const auto& m : check.messages) out << "  " << m << "\n";
      out << (check.ok ? "witness OK" : "witness REJECTED") << "\n";
      return check.ok ? Ok : WitnessFailure;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return UsageError;
  } catch (const Json::exception& e) {
    err << "malformed JSON: " << e.what() << "\n";
    return UsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return UsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return UsageError;
  }
  return UsageError;
}

}  // namespace qhm::cli
