#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "cex/constructions.hpp"
#include "cex/measure.hpp"
#include "cex/report.hpp"
#include "cex/variation.hpp"
#include "cex/verify.hpp"

namespace cex {

struct RunConfig {
  std::string command;
  std::string target;      // verify target or compute kind
  std::string function;    // --f
  std::string u_spec = "geometric:0.5";
  int depth = 10;
  int levels = 6;
  int count = 8;
  std::int64_t grid = 4096;
  double tol = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  double from = -1.0;  // < 0 means "use the domain endpoint"
  double to = -1.0;
  std::vector<double> ps;
  std::vector<double> alphas;
  std::vector<double> deltas;
  std::string dist_method = "grid";
  std::string format = "json";
  std::string out_path;
};

namespace cli_detail {

inline void echo_config(Report& rep, const RunConfig& cfg) {
  rep.config.emplace_back("command", cfg.command);
  if (!cfg.target.empty()) rep.config.emplace_back("target", cfg.target);
  if (!cfg.function.empty()) rep.config.emplace_back("function", cfg.function);
  rep.config.emplace_back("u", cfg.u_spec);
  rep.config.emplace_back("depth", static_cast<std::int64_t>(cfg.depth));
  rep.config.emplace_back("levels", static_cast<std::int64_t>(cfg.levels));
  rep.config.emplace_back("count", static_cast<std::int64_t>(cfg.count));
  rep.config.emplace_back("grid", cfg.grid);
  rep.config.emplace_back("tol", cfg.tol);
  rep.config.emplace_back("seed", static_cast<std::int64_t>(cfg.seed));
  rep.config.emplace_back("format", cfg.format);
  rep.config.emplace_back("out", cfg.out_path.empty() ? std::string("-") : cfg.out_path);
}

inline SeqSpec parse_useq(const std::string& spec, int depth) {
  if (spec.rfind("geometric:", 0) == 0) {
    try {
      return SeqSpec::geometric(std::stod(spec.substr(10)));
    } catch (const std::invalid_argument&) {
      throw CatalogError("bad geometric ratio in '" + spec + "'");
    }
  }
  if (spec == "harmonic-squared") return SeqSpec::harmonic_squared();
  if (spec == "transform:harmonic") return seq_transform(harmonic_base(depth + 1));
  if (spec == "transform:corollary3" || spec == "corollary3") return seq_transform(corollary3_params(depth));
  throw CatalogError("unknown sequence family '" + spec +
                     "' (expected geometric:<r>, harmonic-squared, transform:harmonic, corollary3)");
}

/// Extended registry over the gallery for CLI targets.
inline std::variant<Fn1, Fn2> resolve_target(const std::string& name, const RunConfig& cfg) {
  if (name == "sqrt-sine") return make_sqrt_sine();
  if (name == "xlnx-derivative") return make_log_magnitude();
  if (name.rfind("schauder:", 0) == 0) return schauder(std::stoi(name.substr(9)));
  if (name.rfind("rademacher:", 0) == 0) return rademacher(std::stoi(name.substr(11)));
  if (name.rfind("zigzag:", 0) == 0) {
    // zigzag:<witness-fn>:<levels>
    std::string rest = name.substr(7);
    auto colon = rest.rfind(':');
    std::string inner_name = colon == std::string::npos ? rest : rest.substr(0, colon);
    int levels = cfg.levels;
    if (colon != std::string::npos) {
      try {
        levels = std::stoi(rest.substr(colon + 1));
      } catch (const std::exception&) {
        throw CatalogError("bad level count in '" + name + "'");
      }
    }
    auto inner = resolve_target(inner_name, cfg);
    if (!std::holds_alternative<Fn1>(inner))
      throw CatalogError("zigzag needs a one-variable witness function in '" + name + "'");
    WitnessSeq w = find_witnesses(std::get<Fn1>(inner), Interval(0.0, 1.0), levels, 2000);
    return zigzag_fn(build_zigzag(w, levels));
  }
  if (name == "diag" || name == "pathology") {
    SeqSpec u = parse_useq(cfg.u_spec, cfg.depth);
    Fn2 fn = pathology_fn(build_pathology(u, cfg.depth));
    if (name == "diag") return diagonal(fn);
    return fn;
  }
  return gallery(name);
}

inline Fn1 resolve_fn1(const std::string& name, const RunConfig& cfg) {
  auto item = resolve_target(name, cfg);
  if (!std::holds_alternative<Fn1>(item))
    throw CatalogError("'" + name + "' is a two-variable function; this command needs one variable");
  return std::get<Fn1>(item);
}

inline int emit(const Report& rep, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.format == "json") {
    std::string body = render_json(rep);
    if (cfg.out_path.empty()) {
      out << body;
    } else {
      std::ofstream f(cfg.out_path, std::ios::binary);
      if (!f) {
        err << "error: cannot open output path '" << cfg.out_path << "'\n";
        return 2;
      }
      f << body;
    }
    return 0;
  }
  // csv: one table per file when writing to disk; named blocks on stdout
  auto files = render_csv(rep);
  if (cfg.out_path.empty()) {
    for (const auto& [name, body] : files) out << "table," << name << "\r\n" << body << "\r\n";
    return 0;
  }
  for (const auto& [name, body] : files) {
    std::string path = cfg.out_path + "." + name + ".csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      err << "error: cannot open output path '" << path << "'\n";
      return 2;
    }
    f << body;
  }
  return 0;
}

inline int run_gallery_list(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Report rep;
  echo_config(rep, cfg);
  Table t{"gallery", {"name", "arity", "domain", "note"}, {}};
  for (const auto& e : gallery_catalog())
    t.rows.push_back({e.name, static_cast<std::int64_t>(e.arity), e.domain, e.note});
  rep.tables.push_back(std::move(t));
  return emit(rep, cfg, out, err);
}

inline int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Report rep;
  echo_config(rep, cfg);
  BundleResult bundle;
  if (cfg.target == "theorem3") {
    bundle = verify_theorem3(parse_useq(cfg.u_spec, cfg.depth), cfg.depth);
  } else if (cfg.target == "theorem2") {
    bundle = verify_theorem2(resolve_fn1(cfg.function.empty() ? "xlnx" : cfg.function, cfg), cfg.levels,
                             cfg.grid, cfg.seed);
  } else if (cfg.target == "corollary3") {
    bundle = verify_corollary3(cfg.depth, cfg.tol);
  } else if (cfg.target == "fichtenholz") {
    bundle = verify_fichtenholz(resolve_fn1(cfg.function.empty() ? "xlnx" : cfg.function, cfg), cfg.levels,
                                cfg.grid, cfg.seed);
  } else if (cfg.target == "schauder") {
    bundle = verify_schauder(cfg.count);
  } else {
    err << "error: unknown verify target '" << cfg.target << "'\n";
    return 2;
  }
  rep.verdicts = std::move(bundle.verdicts);
  rep.tables.insert(rep.tables.end(), bundle.tables.begin(), bundle.tables.end());
  int rc = emit(rep, cfg, out, err);
  if (rc != 0) return rc;
  return rep.all_pass() ? 0 : 1;
}

inline int run_compute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Report rep;
  echo_config(rep, cfg);
  if (cfg.target == "variation") {
    Fn1 fn = resolve_fn1(cfg.function, cfg);
    Interval iv(cfg.from >= 0.0 ? cfg.from : fn.domain.lo, cfg.to >= 0.0 ? cfg.to : fn.domain.hi);
    VariationReport v = variation_refined(fn, iv, cfg.depth, cfg.tol);
    Table t{"per_depth", {"points", "variation"}, {}};
    for (const auto& [points, sum] : v.per_depth) t.rows.push_back({points, sum});
    rep.tables.push_back(std::move(t));
    rep.tables.push_back({"variation",
                          {"estimate", "converged", "exact"},
                          {{v.estimate, std::string(v.converged ? "yes" : "no"),
                            std::string(v.exact ? "yes" : "no")}}});
  } else if (cfg.target == "ac-modulus") {
    Fn1 fn = resolve_fn1(cfg.function, cfg);
    if (cfg.deltas.empty()) throw ParameterError("ac-modulus needs --delta");
    Table t{"ac_modulus", {"delta", "modulus", "cells", "total_length"}, {}};
    for (double d : cfg.deltas) {
      ACModulusReport m = ac_modulus(fn, fn.domain, d, cfg.grid);
      double len = 0.0;
      for (const auto& [a, b] : m.chosen) len += b - a;
      t.rows.push_back({d, m.modulus, static_cast<std::int64_t>(m.chosen.size()), len});
    }
    rep.tables.push_back(std::move(t));
  } else if (cfg.target == "lipschitz") {
    Fn1 fn = resolve_fn1(cfg.function, cfg);
    double est = lipschitz_estimate(fn, fn.domain, cfg.grid, cfg.seed);
    rep.tables.push_back({"lipschitz", {"estimate"}, {{est}}});
  } else if (cfg.target == "norm") {
    auto item = resolve_target(cfg.function, cfg);
    std::vector<double> ps = cfg.ps.empty() ? std::vector<double>{1.0, 2.0} : cfg.ps;
    Table t{"lp_norms", {"p", "integral", "norm", "method", "converged"}, {}};
    for (double p : ps) {
      LpResult r = std::holds_alternative<Fn1>(item)
                       ? lp_norm(std::get<Fn1>(item), p, LpMethod::Quadrature)
                       : lp_norm(std::get<Fn2>(item), p);
      t.rows.push_back({r.p, r.integral, r.norm, r.method, std::string(r.converged ? "yes" : "no")});
    }
    rep.tables.push_back(std::move(t));
  } else if (cfg.target == "distribution") {
    auto item = resolve_target(cfg.function, cfg);
    std::vector<double> alphas = cfg.alphas.empty() ? std::vector<double>{0.5, 1.0, 2.0} : cfg.alphas;
    bool exact = cfg.dist_method == "exact";
    Table t{"distribution", {"alpha", "lambda", "error_bar"}, {}};
    for (double a : alphas) {
      if (std::holds_alternative<Fn1>(item)) {
        const Fn1& fn = std::get<Fn1>(item);
        if (exact) {
          t.rows.push_back({a, distribution(fn, a, DistMethod::Exact), 0.0});
        } else {
          GridDistribution g = distribution_grid(fn, a, cfg.grid);
          t.rows.push_back({a, g.value, g.error_bar()});
        }
      } else {
        const Fn2& fn = std::get<Fn2>(item);
        if (exact) {
          t.rows.push_back({a, distribution(fn, a, DistMethod::Exact), 0.0});
        } else {
          GridDistribution g = distribution_grid(fn, a, std::min<std::int64_t>(cfg.grid, 4096));
          t.rows.push_back({a, g.value, g.error_bar()});
        }
      }
    }
    rep.tables.push_back(std::move(t));
  } else {
    err << "error: unknown compute kind '" << cfg.target << "'\n";
    return 2;
  }
  return emit(rep, cfg, out, err);
}

}  // namespace cli_detail

/// Entry point shared by the binary and the in-process tests.
/// Exit codes: 0 all pass, 1 verification failures or runtime errors, 2 usage.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"counterexample gallery: build classical pathological functions and certify their properties"};
  app.require_subcommand(1);

  auto* gallery_cmd = app.add_subcommand("gallery", "list the function gallery");
  auto* gallery_list_cmd = gallery_cmd->add_subcommand("list", "print the catalog");
  gallery_list_cmd->fallthrough();

  auto* verify_cmd = app.add_subcommand("verify", "run a verification bundle");
  verify_cmd->add_option("target", cfg.target, "one of: theorem2, theorem3, corollary3, fichtenholz, schauder")
      ->required();

  auto* compute_cmd = app.add_subcommand("compute", "run a single computation");
  compute_cmd
      ->add_option("what", cfg.target, "one of: variation, ac-modulus, lipschitz, norm, distribution")
      ->required();

  for (CLI::App* cmd : {gallery_cmd, verify_cmd, compute_cmd}) {
    cmd->add_option("--f", cfg.function, "target function name");
    cmd->add_option("--u", cfg.u_spec, "sequence family (geometric:<r>, harmonic-squared, transform:harmonic, corollary3)");
    cmd->add_option("--depth", cfg.depth, "construction / refinement depth")->check(CLI::PositiveNumber);
    cmd->add_option("--levels", cfg.levels, "witness levels")->check(CLI::PositiveNumber);
    cmd->add_option("--count", cfg.count, "system size (schauder)")->check(CLI::PositiveNumber);
    cmd->add_option("--grid", cfg.grid, "grid cells")->check(CLI::Range(std::int64_t(2), std::int64_t(1) << 26));
    cmd->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", cfg.seed, "random seed for sampled estimates");
    cmd->add_option("--from", cfg.from, "left endpoint override");
    cmd->add_option("--to", cfg.to, "right endpoint override");
    cmd->add_option("--p", cfg.ps, "exponents p");
    cmd->add_option("--alpha", cfg.alphas, "distribution thresholds");
    cmd->add_option("--delta", cfg.deltas, "modulus budgets");
    cmd->add_option("--method", cfg.dist_method, "distribution method: exact or grid");
    cmd->add_option("--format", cfg.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", cfg.out_path, "output path (default standard output)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gallery_cmd->parsed()) {
      cfg.command = "gallery";
      if (gallery_cmd->get_subcommands().empty()) {
        err << "usage error: expected 'gallery list'\n";
        return 2;
      }
      return cli_detail::run_gallery_list(cfg, out, err);
    }
    if (verify_cmd->parsed()) {
      cfg.command = "verify";
      return cli_detail::run_verify(cfg, out, err);
    }
    cfg.command = "compute";
    if (cfg.function.empty()) {
      err << "usage error: compute " << cfg.target << " needs --f <name>\n";
      return 2;
    }
    return cli_detail::run_compute(cfg, out, err);
  } catch (const CatalogError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cex
