#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "spinbound/bound.hpp"
#include "spinbound/config.hpp"
#include "spinbound/errors.hpp"
#include "spinbound/interaction.hpp"
#include "spinbound/lattice.hpp"
#include "spinbound/parallel.hpp"
#include "spinbound/percolation.hpp"
#include "spinbound/resistor.hpp"
#include "spinbound/spin_mc.hpp"
#include "spinbound/stats.hpp"
#include "spinbound/version.hpp"

namespace spinbound {

std::string csv_number(double v) {
  if (!std::isfinite(v))
    throw NumericalError("non-finite value would reach the CSV output");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// RFC-4180 style: header row mandatory, CRLF, floats at 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::invalid_argument("cannot open output file " + path);
  }
  void row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << "\r\n";
  }
  static std::string num(double v) { return csv_number(v); }
  static std::string num(long v) { return std::to_string(v); }
  static std::string num(int v) { return std::to_string(v); }

 private:
  std::ofstream out_;
};

CouplingFamily family_from(const ExperimentConfig& cfg) {
  const double alpha = cfg.get_double("alpha");
  const int cutoff = static_cast<int>(cfg.get_long("cutoff"));
  if (cfg.get_bool("normalized"))
    return CouplingFamily::normalized(alpha, cutoff);
  return CouplingFamily::raw(alpha, cfg.get_double("amplitude"), cutoff);
}

Interaction interaction_from(const ExperimentConfig& cfg) {
  const double beta = cfg.get_double("beta");
  const auto& coeffs = cfg.get_string("coeffs");
  if (!coeffs.empty()) return interaction_from_csv(coeffs, beta);
  return make_interaction(cfg.get_string("interaction"), beta);
}

void run_bound(const ExperimentConfig& cfg, CsvWriter& csv) {
  const auto family = family_from(cfg);
  const auto f = interaction_from(cfg);
  const auto approx = approximate(f, cfg.get_double("epsilon"));
  const int R = static_cast<int>(cfg.get_long("R"));
  const auto& cons_str = cfg.get_string("constraint");
  DeltaConstraint cons;
  if (cons_str == "warmup")
    cons = DeltaConstraint::warmup;
  else if (cons_str == "general")
    cons = DeltaConstraint::general;
  else
    throw std::invalid_argument("constraint must be warmup or general");
  const auto rep = bound_report(approx, family, R, cons, cfg.get_double("c3"),
                                default_thread_count());
  csv.row({"delta_star", "exponent_C", "logF", "closed_form"});
  csv.row({CsvWriter::num(rep.delta_star), CsvWriter::num(rep.exponent_C),
           CsvWriter::num(rep.log_F), CsvWriter::num(rep.closed_form)});
}

void run_lemma_suite(long kmax, CsvWriter& csv) {
  csv.row({"check", "param1", "param2", "lhs", "rhs", "ok"});
  for (double alpha : {1.5, 2.0, 3.0, 5.0}) {
    const bool ok = convolution_bound_sweep(kmax, alpha);
    const auto at_kmax = convolution_bound_check(kmax, alpha);
    csv.row({"convolution", CsvWriter::num(static_cast<long>(kmax)),
             CsvWriter::num(alpha), CsvWriter::num(at_kmax.first),
             CsvWriter::num(at_kmax.second), ok ? "1" : "0"});
  }
  // S ~ Binomial(10, 0.3), mu = 3: exact tail vs the Chernoff bound
  const int n = 10;
  const double p = 0.3, mu = 3.0;
  for (double eps : {0.5, 1.0, 2.0}) {
    const double thr = (1.0 + eps) * mu;
    double tail = 0.0;
    for (int k = static_cast<int>(std::ceil(thr)); k <= n; ++k) {
      double binom = 1.0;
      for (int i = 0; i < k; ++i) binom = binom * (n - i) / (i + 1);
      tail += binom * std::pow(p, k) * std::pow(1 - p, n - k);
    }
    const double bound = chernoff_bound(mu, eps);
    csv.row({"chernoff", CsvWriter::num(eps), CsvWriter::num(mu),
             CsvWriter::num(tail), CsvWriter::num(bound),
             tail <= bound ? "1" : "0"});
  }
}

void run_perc(const ExperimentConfig& cfg, CsvWriter& csv) {
  const auto& experiment = cfg.get_string("experiment");
  if (experiment == "lemmas") {
    run_lemma_suite(cfg.get_long("kmax"), csv);
    return;
  }
  const auto family = family_from(cfg);
  const double rho = cfg.get_double("rho");
  const int R = static_cast<int>(cfg.get_long("R"));
  long M = cfg.get_long("M");
  const long replicas = cfg.get_long("replicas");
  const int threads = default_thread_count();
  const std::uint64_t seed = cfg.seed();

  if (experiment == "tails") {
    if (M == 0) M = 128;
    const int kmax = static_cast<int>(cfg.get_long("kmax"));
    const Box box(static_cast<int>(M));
    const auto curve =
        measure_origin_tails(box, family, rho, replicas, kmax, kmax, seed,
                             threads);
    csv.row({"k", "p_n_gt_k", "n_ci_lo", "n_ci_hi", "p_r_ge_k", "r_ci_lo",
             "r_ci_hi"});
    for (int k = 1; k <= kmax; ++k) {
      const auto ci_n = wilson_interval(curve.n_gt[k], replicas);
      const auto ci_r = wilson_interval(curve.r_ge[k], replicas);
      csv.row({CsvWriter::num(k),
               CsvWriter::num(static_cast<double>(curve.n_gt[k]) / replicas),
               CsvWriter::num(ci_n.lo), CsvWriter::num(ci_n.hi),
               CsvWriter::num(static_cast<double>(curve.r_ge[k]) / replicas),
               CsvWriter::num(ci_r.lo), CsvWriter::num(ci_r.hi)});
    }
  } else if (experiment == "good") {
    if (M == 0) M = 4L * R;
    double c3 = cfg.get_double("c3");
    if (c3 < 0)
      c3 = calibrate_C3(family, rho, R, std::max(1L, replicas / 10), seed + 1,
                        threads);
    const auto pt = measure_bad_probability(family, rho, R,
                                            static_cast<int>(M), replicas, c3,
                                            seed, threads);
    const auto ci = wilson_interval(pt.bad, replicas);
    csv.row({"R", "replicas", "c3", "p_bad", "ci_lo", "ci_hi", "p_cond1_fail",
             "p_cond2_fail", "p_cond3_fail", "mean_cond3_sum"});
    csv.row({CsvWriter::num(R), CsvWriter::num(replicas), CsvWriter::num(c3),
             CsvWriter::num(static_cast<double>(pt.bad) / replicas),
             CsvWriter::num(ci.lo), CsvWriter::num(ci.hi),
             CsvWriter::num(static_cast<double>(pt.cond1_fail) / replicas),
             CsvWriter::num(static_cast<double>(pt.cond2_fail) / replicas),
             CsvWriter::num(static_cast<double>(pt.cond3_fail) / replicas),
             CsvWriter::num(pt.mean_cond3_sum)});
  } else if (experiment == "domination") {
    if (M == 0) M = 4L * R;
    const Box box(static_cast<int>(M));
    const auto check =
        domination_check(box, family, rho, R, replicas, seed, threads);
    csv.row({"samples", "violations", "mean_lhs", "mean_rhs"});
    csv.row({CsvWriter::num(check.samples), CsvWriter::num(check.violations),
             CsvWriter::num(check.mean_lhs), CsvWriter::num(check.mean_rhs)});
  } else {
    throw std::invalid_argument("unknown experiment '" + experiment + "'");
  }
}

void run_resist(const ExperimentConfig& cfg, CsvWriter& csv) {
  const auto family = family_from(cfg);
  const auto points = theorem2_experiment(
      family, cfg.get_double("epsilon"), cfg.get_int_list("x-list"),
      static_cast<int>(cfg.get_long("replicas")), cfg.get_double("c-tilde"),
      cfg.seed(), cfg.get_double("tol"), default_thread_count());
  csv.row({"x", "R_mean", "R_ci_lo", "R_ci_hi", "p_ge_threshold"});
  for (const auto& pt : points)
    csv.row({CsvWriter::num(pt.x_norm), CsvWriter::num(pt.r_mean),
             CsvWriter::num(pt.r_mean_ci.lo), CsvWriter::num(pt.r_mean_ci.hi),
             CsvWriter::num(pt.p_ge)});
}

void run_mc(const ExperimentConfig& cfg, CsvWriter& csv) {
  const auto family = family_from(cfg);
  const auto f = interaction_from(cfg);
  const long burn = cfg.get_long("burn-in");
  if (burn < 1000)
    throw std::invalid_argument("mc: burn-in must be >= 1000 sweeps");
  const auto& bnd = cfg.get_string("boundary");
  BoundaryKind kind;
  if (bnd == "const")
    kind = BoundaryKind::constant;
  else if (bnd == "random")
    kind = BoundaryKind::random;
  else
    throw std::invalid_argument("boundary must be const or random");

  const Box box(static_cast<int>(cfg.get_long("M")));
  std::vector<Vec2i> xs;
  for (int d : cfg.get_int_list("x-list")) xs.push_back(Vec2i{d, 0});

  SpinSampler sampler(box, family, f, kind, cfg.get_double("boundary-angle"),
                      cfg.seed());
  sampler.burn_in(burn);
  const auto estimates =
      sampler.estimate_correlations(xs, cfg.get_long("sweeps"));

  // Prediction c * ||x||^-C with c from the constant term of the good-set
  // chain and C the optimised good-set decay rate.
  const auto approx = approximate(f, cfg.get_double("epsilon"));
  const auto opt =
      optimize_good_set_delta(approx, family, cfg.get_double("c3"));
  const double log_c = warmup_additive_constant(family) * approx.C_K();

  csv.row({"x", "corr", "stderr", "bound_value"});
  for (size_t i = 0; i < xs.size(); ++i) {
    // clamped into the representable range; the chain constants are
    // astronomically lossy and only the comparison direction matters
    const double log_bound =
        log_c - opt.exponent_C * std::log(static_cast<double>(xs[i].x));
    const double bound_value = std::exp(std::min(log_bound, 700.0));
    csv.row({CsvWriter::num(xs[i].x), CsvWriter::num(estimates[i].mean),
             CsvWriter::num(estimates[i].stderr_),
             CsvWriter::num(bound_value)});
  }
}

void write_summary(const ExperimentConfig& cfg, double wall_seconds) {
  std::ofstream out(cfg.output_path() + ".summary.txt", std::ios::binary);
  if (!out)
    throw std::invalid_argument("cannot write summary next to " +
                                cfg.output_path());
  out << "# spinbound run record\n";
  out << "version=" << kVersion << "\n";
  out << canonical_serialization(cfg);
  out << "# threads=" << default_thread_count() << "\n";
  out << "# wall_seconds=" << wall_seconds << "\n";
}

}  // namespace

void run(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  CsvWriter csv(cfg.output_path());
  if (cfg.subcommand == "bound")
    run_bound(cfg, csv);
  else if (cfg.subcommand == "perc")
    run_perc(cfg, csv);
  else if (cfg.subcommand == "resist")
    run_resist(cfg, csv);
  else if (cfg.subcommand == "mc")
    run_mc(cfg, csv);
  else if (cfg.subcommand == "lemmas")
    run_lemma_suite(cfg.get_long("kmax"), csv);
  else
    throw std::invalid_argument("unknown subcommand " + cfg.subcommand);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_summary(cfg, wall);
}

void replay(const std::string& summary_path,
            const std::string& output_override) {
  std::ifstream in(summary_path);
  if (!in)
    throw std::invalid_argument("cannot open run record " + summary_path);
  std::ostringstream text;
  text << in.rdbuf();
  auto kv = parse_flat_config(text.str());
  const auto ver = kv.find("version");
  if (ver == kv.end() || ver->second != kVersion)
    throw std::invalid_argument(
        "run record version mismatch: record has '" +
        (ver == kv.end() ? std::string("none") : ver->second) +
        "', this build is '" + kVersion + "'");
  kv.erase("version");
  const auto sub = kv.find("subcommand");
  if (sub == kv.end())
    throw std::invalid_argument("run record lacks a subcommand");
  const std::string subcommand = sub->second;
  kv.erase("subcommand");
  if (!output_override.empty()) kv["output"] = output_override;
  run(make_config(subcommand, kv));
}

int run_cli(int argc, char** argv) {
  try {
    CLI::App app{"spinbound: numerical laboratory for correlation-decay "
                 "bounds in 2D long-range O(2) models"};
    app.require_subcommand(1);

    const std::vector<std::string> subs = {"bound", "perc", "resist", "mc",
                                           "lemmas"};
    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::string> files;
    std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>>
        opts;
    for (const auto& sub : subs) {
      auto* cmd = app.add_subcommand(sub);
      for (const auto& [key, def] : config_schema(sub)) {
        auto* opt = cmd->add_option("--" + key, values[sub][key]);
        opts[sub].emplace_back(key, opt);
      }
      files[sub] = "";
      cmd->add_option("--config", files[sub], "flat key=value config file");
    }
    std::string record_path, replay_output;
    auto* replay_cmd = app.add_subcommand("replay", "re-run a recorded experiment");
    replay_cmd->add_option("record", record_path)->required();
    replay_cmd->add_option("--output", replay_output);

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }

    if (replay_cmd->parsed()) {
      replay(record_path, replay_output);
      return 0;
    }
    for (const auto& sub : subs) {
      auto* cmd = app.get_subcommand(sub);
      if (!cmd->parsed()) continue;
      std::map<std::string, std::string> overrides;
      for (const auto& [key, opt] : opts[sub])
        if (opt->count() > 0) overrides[key] = values[sub][key];
      run(make_config(sub, overrides, files[sub]));
      return 0;
    }
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "spinbound: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "spinbound: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "spinbound: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "spinbound: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace spinbound
