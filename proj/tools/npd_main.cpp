// Command-line front end: build/inspect dictionaries, evaluate coherence
// measures and recovery conditions, run the solvers and the experiment
// sweeps. Every run prints its seed and a config digest to stderr so outputs
// can be traced to the exact invocation.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "npd/npd.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void print_run_header(const std::string& effective, std::uint64_t seed) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(effective)));
  std::cerr << "seed=" << seed << " config_digest=" << buf << "\n";
}

struct DictOptions {
  std::string path;
  std::string family = "rpt";
  int p_max = 0;
  int L = 0;
  bool no_normalize = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--dict", path, "load a dictionary written by the dict subcommand");
    cmd->add_option("--family", family, "dictionary family (rpt|farey)")
        ->check(CLI::IsMember({"rpt", "farey"}));
    cmd->add_option("--pmax", p_max, "largest period");
    cmd->add_option("--len", L, "number of samples L");
    cmd->add_flag("--no-normalize", no_normalize, "skip column normalization");
  }

  npd::NpdDictionary load() const {
    if (!path.empty()) return npd::import_dictionary(path);
    if (p_max < 1 || L < 1) {
      throw CLI::ValidationError("dictionary", "need --dict or both --pmax and --len");
    }
    return npd::build_npd(npd::family_from_name(family), p_max, L, !no_normalize);
  }

  std::string describe() const {
    if (!path.empty()) return "dict=" + path;
    return "family=" + family + " pmax=" + std::to_string(p_max) + " len=" + std::to_string(L) +
           " normalized=" + (no_normalize ? "0" : "1");
  }
};

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t comma = csv.find(',', start);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(std::stoi(csv.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

Eigen::VectorXcd load_signal(const std::string& path, int expected_len) {
  std::ifstream in(path);
  if (!in) throw npd::IoError("cannot open signal file '" + path + "'");
  std::vector<std::complex<double>> vals;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t start = 0;
    while (start < line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      vals.push_back(npd::detail::parse_entry(line.substr(start, comma - start), line_no));
      start = comma + 1;
    }
  }
  if (expected_len > 0 && static_cast<int>(vals.size()) != expected_len) {
    throw npd::MalformedFile("signal has " + std::to_string(vals.size()) + " samples, expected " +
                             std::to_string(expected_len));
  }
  Eigen::VectorXcd y(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) y[static_cast<Eigen::Index>(i)] = vals[i];
  return y;
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw npd::IoError("cannot open '" + out_path + "' for writing");
  out << text;
}

struct SweepCli {
  std::string config_path;
  std::string family;
  int p_max = -1, L = -1, m = -1, k_min = -1, k_max = -1, s_min = -1, s_max = -1;
  int trials = -1, jobs = -1;
  double eps = -1.0, sigma = -1.0, gamma = -1.0, gamma_step = -1.0, gamma_max = -1.0;
  double alpha_step = -1.0, bp_tol = -1.0, omp_eps = -1.0;
  std::string periods;
  std::int64_t seed = -1;
  bool empirical = false;
  std::string out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its fields");
    cmd->add_option("--family", family)->check(CLI::IsMember({"rpt", "farey"}));
    cmd->add_option("--pmax", p_max);
    cmd->add_option("--len", L);
    cmd->add_option("--m", m);
    cmd->add_option("--k-min", k_min);
    cmd->add_option("--k-max", k_max);
    cmd->add_option("--s-min", s_min);
    cmd->add_option("--s-max", s_max);
    cmd->add_option("--trials", trials);
    cmd->add_option("--jobs", jobs, "worker count (0 = all cores)");
    cmd->add_option("--eps", eps, "bounded-noise l2 radius");
    cmd->add_option("--sigma", sigma, "gaussian noise std");
    cmd->add_option("--gamma", gamma, "coefficient floor");
    cmd->add_option("--gamma-step", gamma_step);
    cmd->add_option("--gamma-max", gamma_max);
    cmd->add_option("--alpha-step", alpha_step);
    cmd->add_option("--bp-tol", bp_tol);
    cmd->add_option("--omp-eps", omp_eps);
    cmd->add_option("--periods", periods, "hidden periods, e.g. 4 or 3,4");
    cmd->add_option("--seed", seed);
    cmd->add_flag("--empirical", empirical, "phase: also run recovery trials");
    cmd->add_option("--out", out, "output CSV path (SVG written alongside)");
  }

  npd::ExperimentConfig build(npd::NoiseSpec::Kind kind) const {
    npd::ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw npd::IoError("cannot open config '" + config_path + "'");
      nlohmann::json j;
      in >> j;
      cfg = npd::config_from_json(j);
    }
    if (!family.empty()) cfg.family = npd::family_from_name(family);
    if (p_max >= 0) cfg.p_max = p_max;
    if (L >= 0) cfg.L = L;
    if (m >= 0) cfg.m = m;
    if (k_min >= 0) cfg.k_min = k_min;
    if (k_max >= 0) cfg.k_max = k_max;
    if (s_min >= 0) cfg.s_min = s_min;
    if (s_max >= 0) cfg.s_max = s_max;
    if (trials >= 0) cfg.trials = trials;
    if (jobs >= 0) cfg.jobs = jobs;
    if (gamma >= 0.0) cfg.gamma = gamma;
    if (gamma_step >= 0.0) cfg.gamma_step = gamma_step;
    if (gamma_max >= 0.0) cfg.gamma_max = gamma_max;
    if (alpha_step >= 0.0) cfg.alpha_step = alpha_step;
    if (bp_tol >= 0.0) cfg.bp_tol = bp_tol;
    if (omp_eps >= 0.0) cfg.omp_eps = omp_eps;
    if (!periods.empty()) cfg.periods = parse_int_list(periods);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (empirical) cfg.empirical = true;
    if (!out.empty()) cfg.out_csv = out;
    cfg.noise.kind = kind;
    if (kind == npd::NoiseSpec::Kind::Bounded && eps >= 0.0) cfg.noise.eps = eps;
    if (kind == npd::NoiseSpec::Kind::Gaussian && sigma >= 0.0) cfg.noise.sigma = sigma;
    return cfg;
  }
};

int run_dict(const DictOptions& opts, const std::string& out_path) {
  print_run_header("dict " + opts.describe() + " out=" + out_path, 0);
  const auto dict = opts.load();
  npd::export_dictionary(dict, out_path);
  std::cerr << "wrote " << dict.rows() << "x" << dict.atoms() << " dictionary to " << out_path
            << "\n";
  return kExitOk;
}

int run_coherence(const DictOptions& opts, const std::string& measure, int k, int m, int s, int p,
                  const std::string& periods, const std::string& support_csv,
                  const std::string& out_path) {
  print_run_header("coherence " + opts.describe() + " " + measure, 0);
  const auto dict = opts.load();
  const npd::CoherenceAnalyzer an(dict);

  auto resolve_support = [&]() -> std::vector<int> {
    if (!support_csv.empty()) return parse_int_list(support_csv);
    if (!periods.empty()) return npd::period_set(parse_int_list(periods)).support;
    throw CLI::ValidationError("coherence", "this measure needs --periods or --support");
  };

  std::ostringstream csv;
  csv << "measure,k,m,s,p,value\n";
  auto row = [&](const std::string& name, int k_, int m_, int s_, int p_, double v) {
    csv << name << ',' << k_ << ',' << m_ << ',' << s_ << ',' << p_ << ',' << fmt(v) << "\n";
  };

  if (measure == "mu") {
    row("mu", 0, 0, 0, 0, an.mutual_coherence());
  } else if (measure == "mu1") {
    row("mu1", k, 0, 0, 0, an.cumulative_coherence(k));
  } else if (measure == "npi") {
    row("npi", k, m, 0, 0, an.npi(k, m));
  } else if (measure == "npa") {
    row("npa", k, m, 0, 0, an.npa(k, m));
  } else if (measure == "cnpi") {
    row("cnpi", k, m, s, 0, an.cnpi(k, m, s));
  } else if (measure == "cnpa") {
    row("cnpa", k, m, s, 0, an.cnpa(k, m, s));
  } else if (measure == "zeta-p") {
    row("zeta-p", 0, 0, 0, p, an.restricted_inter(p));
  } else if (measure == "nu-p") {
    row("nu-p", 0, 0, 0, p, an.restricted_intra(p));
  } else if (measure == "erc") {
    row("erc", 0, 0, 0, 0, an.erc_value(resolve_support()));
  } else if (measure == "erc-baseline") {
    const auto b = an.erc_baseline(k, m);
    row("erc-baseline", k, m, 0, 0, b.value);
    std::cerr << "argmax T = " << b.argmax.to_string() << "\n";
  } else if (measure == "min-eig") {
    row("min-eig", 0, 0, 0, 0, an.min_eig_gram(resolve_support()));
  } else if (measure == "report") {
    row("mu", 0, 0, 0, 0, an.mutual_coherence());
    for (int pp = 1; pp <= dict.p_max; ++pp) {
      row("zeta-p", 0, 0, 0, pp, an.restricted_inter(pp));
      row("nu-p", 0, 0, 0, pp, an.restricted_intra(pp));
    }
  } else {
    throw CLI::ValidationError("coherence", "unknown measure '" + measure + "'");
  }
  write_text(out_path, csv.str());
  return kExitOk;
}

int run_bounds(const DictOptions& opts, const std::string& condition, int k, int m, int s,
               const std::string& periods, double eps, double sigma,
               const std::string& out_path) {
  print_run_header("bounds " + opts.describe() + " " + condition, 0);
  const auto dict = opts.load();
  const npd::CoherenceAnalyzer an(dict);

  auto period_arg = [&]() {
    if (periods.empty()) throw CLI::ValidationError("bounds", "--periods is required here");
    return npd::period_set(parse_int_list(periods));
  };

  std::ostringstream csv;
  csv << "condition,k,m,s,periods,lhs,holds,valid\n";
  auto verdict_row = [&](const npd::BoundVerdict& v, int k_, int m_, int s_) {
    csv << v.name << ',' << k_ << ',' << m_ << ',' << s_ << ','
        << (periods.empty() ? "-" : periods) << ',' << fmt(v.lhs) << ',' << (v.holds ? 1 : 0)
        << ',' << (v.valid ? 1 : 0) << "\n";
    std::cerr << v.name << ": " << v.detail << "\n";
  };
  auto threshold_row = [&](const std::string& name, double value) {
    csv << name << ',' << k << ',' << m << ',' << s << ',' << (periods.empty() ? "-" : periods)
        << ',' << fmt(value) << ",1,1\n";
  };

  if (condition == "classic-mu") {
    verdict_row(npd::classic_coherence_condition(an.mutual_coherence(), k), k, 0, 0);
  } else if (condition == "classic-mu1") {
    verdict_row(npd::classic_cumulative_condition(an, k), k, 0, 0);
  } else if (condition == "thm1") {
    verdict_row(npd::theorem1_condition(an, k, m), k, m, 0);
  } else if (condition == "thm2") {
    verdict_row(npd::theorem2_condition(an, period_arg()), 0, 0, 0);
  } else if (condition == "cor1") {
    verdict_row(npd::corollary1_condition(an, k, m), k, m, 0);
  } else if (condition == "refined") {
    verdict_row(npd::refined_condition(an, k, m, s), k, m, s);
  } else if (condition == "noise-npi") {
    threshold_row("noise-npi", npd::bounded_noise_threshold_npi(an, k, m, eps));
  } else if (condition == "noise-restricted") {
    threshold_row("noise-restricted",
                  npd::bounded_noise_threshold_restricted(an, period_arg(), eps));
  } else if (condition == "gaussian-restricted") {
    threshold_row("gaussian-restricted",
                  npd::gaussian_threshold_restricted(an, period_arg(), sigma, dict.L));
  } else if (condition == "gaussian-npi") {
    csv << "# note: gaussian-npi composes the bounded-noise theorem with the Gaussian radius;"
           " extrapolated by construction\n";
    threshold_row("gaussian-npi", npd::gaussian_threshold_npi(an, k, m, sigma, dict.L));
  } else {
    throw CLI::ValidationError("bounds", "unknown condition '" + condition + "'");
  }
  write_text(out_path, csv.str());
  return kExitOk;
}

int run_recover(const DictOptions& opts, const std::string& signal_path,
                const std::string& method, double stop_eps, int stop_k, int max_iter,
                double bp_tol) {
  print_run_header("recover " + opts.describe() + " signal=" + signal_path + " " + method, 0);
  const auto dict = opts.load();
  const auto y = load_signal(signal_path, dict.L);
  const npd::RecoverySolver solver(dict);

  std::vector<int> support;
  Eigen::VectorXcd coef;
  double residual = 0.0;
  int iterations = 0;
  std::string stop_reason = "-";

  if (method == "omp") {
    npd::StopRule stop;
    if (stop_k > 0) stop.sparsity = stop_k;
    if (stop_eps >= 0.0) stop.residual_norm = stop_eps;
    if (max_iter > 0) stop.max_iterations = max_iter;
    if (!stop.sparsity && !stop.residual_norm && !stop.max_iterations) {
      throw CLI::ValidationError("recover", "omp needs --stop-eps and/or --stop-k");
    }
    const auto r = solver.omp(y, stop);
    support = r.support;
    coef = r.coefficients;
    residual = r.residual_norm;
    iterations = r.iterations;
    stop_reason = npd::stop_reason_name(r.stop_reason);
  } else {
    int iters = 0;
    const Eigen::VectorXcd x = solver.basis_pursuit(y, bp_tol, &iters);
    support = npd::support_from_coefficients(x, 1e-6);
    coef.resize(static_cast<Eigen::Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) {
      coef[static_cast<Eigen::Index>(i)] = x[support[i] - 1];
    }
    residual = (dict.entries * x - y).norm();
    iterations = iters;
    stop_reason = "converged";
  }

  std::cout << "support:";
  for (std::size_t i = 0; i < support.size(); ++i) std::cout << (i ? "," : " ") << support[i];
  std::cout << "\ncoefficients:";
  for (Eigen::Index i = 0; i < coef.size(); ++i) {
    std::cout << (i ? "," : " ") << npd::detail::format_entry(coef[i]);
  }
  std::cout << "\nresidual: " << fmt(residual) << "\niterations: " << iterations
            << "\nstop: " << stop_reason << "\n";

  std::set<std::int64_t> periods_present;
  for (int j : support) periods_present.insert(dict.atom_period[static_cast<std::size_t>(j - 1)]);
  if (!periods_present.empty()) {
    std::cout << "period: " << npd::lcm_of_set(periods_present) << "\n";
  } else {
    std::cout << "period: 0\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested periodic dictionaries: construction, coherence bounds, sparse recovery"};
  app.require_subcommand(1);

  auto* dict_cmd = app.add_subcommand("dict", "build a dictionary and write it to a file");
  DictOptions dict_opts;
  dict_opts.attach(dict_cmd);
  std::string dict_out;
  dict_cmd->add_option("--out", dict_out, "output path")->required();

  auto* coh_cmd = app.add_subcommand("coherence", "coherence measures as CSV");
  DictOptions coh_opts;
  coh_opts.attach(coh_cmd);
  std::string measure = "report", coh_periods, coh_support, coh_out;
  int coh_k = 1, coh_m = 1, coh_s = 1, coh_p = 1;
  coh_cmd->add_option("--measure", measure,
                      "mu|mu1|npi|npa|cnpi|cnpa|zeta-p|nu-p|erc|erc-baseline|min-eig|report");
  coh_cmd->add_option("--k", coh_k);
  coh_cmd->add_option("--m", coh_m);
  coh_cmd->add_option("--s", coh_s);
  coh_cmd->add_option("--p", coh_p);
  coh_cmd->add_option("--periods", coh_periods, "period set, e.g. 3,4");
  coh_cmd->add_option("--support", coh_support, "explicit 1-based support indices");
  coh_cmd->add_option("--out", coh_out, "CSV path (default stdout)");

  auto* bounds_cmd = app.add_subcommand("bounds", "recovery-condition verdicts and thresholds");
  DictOptions bounds_opts;
  bounds_opts.attach(bounds_cmd);
  std::string condition, bounds_periods, bounds_out;
  int bounds_k = 1, bounds_m = 1, bounds_s = 1;
  double bounds_eps = 0.0, bounds_sigma = 0.0;
  bounds_cmd
      ->add_option("--condition", condition,
                   "classic-mu|classic-mu1|thm1|thm2|cor1|refined|noise-npi|noise-restricted|"
                   "gaussian-npi|gaussian-restricted")
      ->required();
  bounds_cmd->add_option("--k", bounds_k);
  bounds_cmd->add_option("--m", bounds_m);
  bounds_cmd->add_option("--s", bounds_s);
  bounds_cmd->add_option("--periods", bounds_periods);
  bounds_cmd->add_option("--eps", bounds_eps);
  bounds_cmd->add_option("--sigma", bounds_sigma);
  bounds_cmd->add_option("--out", bounds_out, "CSV path (default stdout)");

  auto* rec_cmd = app.add_subcommand("recover", "recover a signal with OMP or BP");
  DictOptions rec_opts;
  rec_opts.attach(rec_cmd);
  std::string signal_path, method = "omp";
  double stop_eps = -1.0, rec_bp_tol = 1e-9;
  int stop_k = 0, rec_max_iter = 0;
  rec_cmd->add_option("--signal", signal_path, "signal file, one sample per line")->required();
  rec_cmd->add_option("--method", method)->check(CLI::IsMember({"omp", "bp"}));
  rec_cmd->add_option("--stop-eps", stop_eps, "omp residual stopping norm");
  rec_cmd->add_option("--stop-k", stop_k, "omp sparsity stop");
  rec_cmd->add_option("--max-iter", rec_max_iter, "omp iteration cap");
  rec_cmd->add_option("--bp-tol", rec_bp_tol, "bp primal/dual tolerance");

  auto* phase_cmd = app.add_subcommand("phase", "refined-condition phase map over (k, s)");
  SweepCli phase_cli;
  phase_cli.attach(phase_cmd);
  auto* sr_cmd = app.add_subcommand("sweep-recovery", "noise-free recovery sweep over k");
  SweepCli sr_cli;
  sr_cli.attach(sr_cmd);
  auto* sb_cmd = app.add_subcommand("sweep-bounded", "bounded-noise gamma sweep");
  SweepCli sb_cli;
  sb_cli.attach(sb_cmd);
  auto* sg_cmd = app.add_subcommand("sweep-gaussian", "gaussian-noise alpha sweep");
  SweepCli sg_cli;
  sg_cli.attach(sg_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (dict_cmd->parsed()) return run_dict(dict_opts, dict_out);
    if (coh_cmd->parsed()) {
      return run_coherence(coh_opts, measure, coh_k, coh_m, coh_s, coh_p, coh_periods,
                           coh_support, coh_out);
    }
    if (bounds_cmd->parsed()) {
      return run_bounds(bounds_opts, condition, bounds_k, bounds_m, bounds_s, bounds_periods,
                        bounds_eps, bounds_sigma, bounds_out);
    }
    if (rec_cmd->parsed()) {
      return run_recover(rec_opts, signal_path, method, stop_eps, stop_k, rec_max_iter,
                         rec_bp_tol);
    }

    const auto run_sweep = [&](const SweepCli& cli, npd::NoiseSpec::Kind kind, auto runner,
                               const char* name) {
      npd::ExperimentConfig cfg = cli.build(kind);
      print_run_header(std::string(name) + " " + npd::to_json(cfg).dump(), cfg.seed);
      const npd::ExperimentTable table = runner(cfg);
      if (cfg.out_csv.empty()) std::cout << table.to_csv();
      return kExitOk;
    };
    if (phase_cmd->parsed()) {
      return run_sweep(phase_cli, npd::NoiseSpec::Kind::None, npd::run_phase_transition, "phase");
    }
    if (sr_cmd->parsed()) {
      return run_sweep(sr_cli, npd::NoiseSpec::Kind::None, npd::run_recovery_sweep,
                       "sweep-recovery");
    }
    if (sb_cmd->parsed()) {
      return run_sweep(sb_cli, npd::NoiseSpec::Kind::Bounded, npd::run_bounded_noise_sweep,
                       "sweep-bounded");
    }
    if (sg_cmd->parsed()) {
      return run_sweep(sg_cli, npd::NoiseSpec::Kind::Gaussian, npd::run_gaussian_sweep,
                       "sweep-gaussian");
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
