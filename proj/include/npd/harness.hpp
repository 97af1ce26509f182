#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "npd/coherence.hpp"
#include "npd/dictionary.hpp"
#include "npd/errors.hpp"
#include "npd/guarantees.hpp"
#include "npd/recovery.hpp"
#include "npd/rng.hpp"
#include "npd/support.hpp"
#include "npd/svg.hpp"

namespace npd {

struct NoiseSpec {
  enum class Kind { None, Bounded, Gaussian };
  Kind kind = Kind::None;
  double eps = 0.0;    // l2 bound of the bounded-noise model
  double sigma = 0.0;  // per-coordinate std of the Gaussian model
};

struct ExperimentConfig {
  DictionaryFamily family = DictionaryFamily::Rpt;
  int p_max = 20;
  int L = 100;
  int m = 2;
  int k_min = 1;
  int k_max = 5;
  int s_min = 1;
  int s_max = 0;  // 0 means "up to k"
  int trials = 100;
  NoiseSpec noise;
  double gamma = 0.0;        // coefficient floor for generated mixtures
  double gamma_step = 0.05;  // bounded-noise sweep grid
  double gamma_max = 0.0;    // 0 derives the grid end from the threshold
  double alpha_step = 0.01;  // Gaussian sweep grid
  std::vector<int> periods;  // fixed hidden periods for the noise sweeps
  std::uint64_t seed = 1;
  int jobs = 0;  // 0 means all available cores
  double bp_tol = 1e-9;
  double omp_eps = 1e-9;   // noise-free OMP residual stop
  bool empirical = false;  // phase transition: also run recovery trials
  std::string out_csv;     // empty disables file output
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json noise;
  switch (c.noise.kind) {
    case NoiseSpec::Kind::None: noise = {{"type", "none"}}; break;
    case NoiseSpec::Kind::Bounded: noise = {{"type", "bounded"}, {"eps", c.noise.eps}}; break;
    case NoiseSpec::Kind::Gaussian: noise = {{"type", "gaussian"}, {"sigma", c.noise.sigma}}; break;
  }
  return nlohmann::json{{"family", family_name(c.family)},
                        {"pmax", c.p_max},
                        {"len", c.L},
                        {"m", c.m},
                        {"k_range", {c.k_min, c.k_max}},
                        {"s_range", {c.s_min, c.s_max}},
                        {"trials", c.trials},
                        {"noise", noise},
                        {"gamma", c.gamma},
                        {"gamma_step", c.gamma_step},
                        {"gamma_max", c.gamma_max},
                        {"alpha_step", c.alpha_step},
                        {"periods", c.periods},
                        {"seed", c.seed},
                        {"jobs", c.jobs},
                        {"bp_tol", c.bp_tol},
                        {"omp_eps", c.omp_eps},
                        {"empirical", c.empirical},
                        {"out", c.out_csv}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("family")) c.family = family_from_name(j.at("family").get<std::string>());
  c.p_max = j.value("pmax", c.p_max);
  c.L = j.value("len", c.L);
  c.m = j.value("m", c.m);
  if (j.contains("k_range")) {
    c.k_min = j.at("k_range").at(0).get<int>();
    c.k_max = j.at("k_range").at(1).get<int>();
  }
  if (j.contains("s_range")) {
    c.s_min = j.at("s_range").at(0).get<int>();
    c.s_max = j.at("s_range").at(1).get<int>();
  }
  c.trials = j.value("trials", c.trials);
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    const std::string type = n.value("type", "none");
    if (type == "none") {
      c.noise.kind = NoiseSpec::Kind::None;
    } else if (type == "bounded") {
      c.noise.kind = NoiseSpec::Kind::Bounded;
      c.noise.eps = n.value("eps", 0.0);
    } else if (type == "gaussian") {
      c.noise.kind = NoiseSpec::Kind::Gaussian;
      c.noise.sigma = n.value("sigma", 0.0);
    } else {
      throw std::invalid_argument("config: unknown noise type '" + type + "'");
    }
  }
  c.gamma = j.value("gamma", c.gamma);
  c.gamma_step = j.value("gamma_step", c.gamma_step);
  c.gamma_max = j.value("gamma_max", c.gamma_max);
  c.alpha_step = j.value("alpha_step", c.alpha_step);
  if (j.contains("periods")) c.periods = j.at("periods").get<std::vector<int>>();
  c.seed = j.value("seed", c.seed);
  c.jobs = j.value("jobs", c.jobs);
  c.bp_tol = j.value("bp_tol", c.bp_tol);
  c.omp_eps = j.value("omp_eps", c.omp_eps);
  c.empirical = j.value("empirical", c.empirical);
  c.out_csv = j.value("out", c.out_csv);
  return c;
}

/// FNV-1a over the canonical JSON dump; printed on stderr by the CLI so any
/// output can be traced back to the exact configuration that produced it.
inline std::uint64_t config_digest(const ExperimentConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

struct ExperimentRow {
  double point_k = 0.0;
  double point2 = 0.0;  // s, gamma, or alpha depending on the experiment
  std::string method;
  double success_rate = 0.0;
  double rmse = 0.0;
  double lhs = 0.0;
  bool holds = false;
  bool valid = false;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct ExperimentTable {
  std::vector<std::string> preamble;  // emitted as '# ' comment lines
  std::vector<ExperimentRow> rows;

  std::string to_csv() const {
    std::ostringstream out;
    for (const auto& line : preamble) out << "# " << line << "\n";
    out << "point_k,point_s_or_gamma_or_alpha,method,success_rate,rmse,lhs,holds,valid,trials,"
           "seed\n";
    char buf[256];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%s,%.12g,%.12g,%.12g,%d,%d,%d,%llu\n",
                    r.point_k, r.point2, r.method.c_str(), r.success_rate, r.rmse, r.lhs,
                    r.holds ? 1 : 0, r.valid ? 1 : 0, r.trials,
                    static_cast<unsigned long long>(r.seed));
      out << buf;
    }
    return out.str();
  }

  void write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << to_csv();
    if (!out) throw IoError("write failure on '" + path + "'");
  }
};

inline std::string svg_path(const std::string& csv_path) {
  const auto dot = csv_path.find_last_of('.');
  return (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".svg";
}

struct Mixture {
  Eigen::VectorXcd x;  // length N, supported exactly on the requested indices
  Eigen::VectorXcd y;  // K x
};

/// Sparse coefficients on the given 1-based indices: standard normal draws
/// pushed away from zero by gamma (sign-preserving shift for real
/// dictionaries, modulus shift with uniform phase for complex ones).
inline Mixture gen_sparse_on(const NpdDictionary& dict, const std::vector<int>& indices,
                             double gamma, SplitMix64& rng) {
  Mixture out;
  out.x = Eigen::VectorXcd::Zero(dict.atoms());
  for (int idx : indices) {
    if (dict.is_real()) {
      double v = rng.normal();
      v += v >= 0.0 ? gamma : -gamma;
      out.x[idx - 1] = v;
    } else {
      const double mod = std::abs(rng.normal()) + gamma;
      const double phase = 2.0 * std::numbers::pi * rng.uniform();
      out.x[idx - 1] = std::complex<double>(mod * std::cos(phase), mod * std::sin(phase));
    }
  }
  out.y = dict.entries * out.x;
  return out;
}

inline Mixture gen_mixture(const NpdDictionary& dict, const PeriodSet& t, double gamma,
                           SplitMix64& rng) {
  return gen_sparse_on(dict, t.support, gamma, rng);
}

/// y + w with w isotropic and ||w||_2 = eps exactly (worst case lives on the
/// boundary of the noise ball).
inline Eigen::VectorXcd add_bounded_noise(const Eigen::VectorXcd& y, double eps,
                                          SplitMix64& rng) {
  if (eps == 0.0) return y;
  Eigen::VectorXd w(y.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.normal();
  w *= eps / w.norm();
  return y + w.cast<std::complex<double>>();
}

inline Eigen::VectorXcd add_gaussian_noise(const Eigen::VectorXcd& y, double sigma,
                                           SplitMix64& rng) {
  Eigen::VectorXcd out = y;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += sigma * rng.normal();
  return out;
}

/// Smallest p <= len(v) with v(n) = v(n+p) for all observed n, tolerance 1e-8.
inline int minimal_period(const Eigen::VectorXcd& v, double tol = 1e-8) {
  const int len = static_cast<int>(v.size());
  for (int p = 1; p < len; ++p) {
    bool ok = true;
    for (int n = 0; n + p < len; ++n) {
      if (std::abs(v[n + p] - v[n]) > tol) {
        ok = false;
        break;
      }
    }
    if (ok) return p;
  }
  return len;
}

inline int minimal_period(const Eigen::VectorXd& v, double tol = 1e-8) {
  return minimal_period(Eigen::VectorXcd(v.cast<std::complex<double>>()), tol);
}

/// Static index partition over `jobs` threads; every slot is written by
/// exactly one worker, so results are independent of scheduling.
template <class Fn>
void parallel_for(std::int64_t total, int jobs, Fn&& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs <= 1 || total <= 1) {
    for (std::int64_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) {
    workers.emplace_back([&, t] {
      for (std::int64_t i = t; i < total; i += jobs) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

namespace detail {

struct TrialOutcome {
  bool solved = false;
  bool success = false;
  double rmse = 0.0;
};

inline Eigen::VectorXcd scatter(const std::vector<int>& support, const Eigen::VectorXcd& coef,
                                int n) {
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(n);
  for (std::size_t i = 0; i < support.size(); ++i) {
    full[support[i] - 1] = coef[static_cast<Eigen::Index>(i)];
  }
  return full;
}

inline double rmse(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).norm() / std::sqrt(static_cast<double>(a.size()));
}

struct Aggregate {
  int successes = 0;
  int solved = 0;
  double rmse_sum = 0.0;

  void add(const TrialOutcome& t) {
    if (t.success) ++successes;
    if (t.solved) {
      ++solved;
      rmse_sum += t.rmse;
    }
  }
  double success_rate(int trials) const {
    return trials > 0 ? static_cast<double>(successes) / trials : 0.0;
  }
  double mean_rmse() const { return solved > 0 ? rmse_sum / solved : 0.0; }
};

}  // namespace detail

/// Noise-free recovery sweep: for each k, every element of Q_k(m) gets
/// `trials` random mixtures, solved with both OMP and BP. Success means the
/// recovered support is identical to S_T.
inline ExperimentTable run_recovery_sweep(const ExperimentConfig& cfg) {
  if (cfg.noise.kind != NoiseSpec::Kind::None) {
    throw std::invalid_argument("run_recovery_sweep: noise spec must be 'none'");
  }
  const NpdDictionary dict = build_npd(cfg.family, cfg.p_max, cfg.L, true);
  const CoherenceAnalyzer analyzer(dict);
  const RecoverySolver solver(dict);
  const int n = dict.atoms();

  struct Point {
    int k;
    std::vector<PeriodSet> sets;
    std::int64_t first_trial_id;
  };
  std::vector<Point> points;
  std::int64_t next_id = 0;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    auto sets = enumerate_Qkm(cfg.p_max, cfg.m, k);
    if (sets.empty()) continue;
    const auto count = static_cast<std::int64_t>(sets.size()) * cfg.trials;
    points.push_back({k, std::move(sets), next_id});
    next_id += count;
  }

  std::vector<detail::TrialOutcome> omp_out(static_cast<std::size_t>(next_id));
  std::vector<detail::TrialOutcome> bp_out(static_cast<std::size_t>(next_id));

  for (const Point& pt : points) {
    const std::int64_t total = static_cast<std::int64_t>(pt.sets.size()) * cfg.trials;
    parallel_for(total, cfg.jobs, [&](std::int64_t i) {
      const auto& t = pt.sets[static_cast<std::size_t>(i / cfg.trials)];
      const std::int64_t id = pt.first_trial_id + i;
      SplitMix64 rng = trial_stream(cfg.seed, static_cast<std::uint64_t>(id));
      const Mixture mix = gen_mixture(dict, t, cfg.gamma, rng);
      // Noise-free: the restricted least-squares solution equals the
      // generating coefficients, so mix.x is the scoring ground truth.
      auto& omp_slot = omp_out[static_cast<std::size_t>(id)];
      try {
        const RecoveryResult r = solver.omp(mix.y, StopRule::by_residual(cfg.omp_eps));
        omp_slot.solved = true;
        omp_slot.success = r.support == t.support;
        omp_slot.rmse = detail::rmse(detail::scatter(r.support, r.coefficients, n), mix.x);
      } catch (const std::exception&) {
      }
      auto& bp_slot = bp_out[static_cast<std::size_t>(id)];
      try {
        const Eigen::VectorXcd xhat = solver.basis_pursuit(mix.y, cfg.bp_tol);
        bp_slot.solved = true;
        bp_slot.success = support_from_coefficients(xhat, 1e-6) == t.support;
        bp_slot.rmse = detail::rmse(xhat, mix.x);
      } catch (const std::exception&) {
      }
    });
  }

  ExperimentTable table;
  table.preamble.push_back("tool: sweep-recovery");
  table.preamble.push_back("config: " + to_json(cfg).dump());
  table.preamble.push_back("seed: " + std::to_string(cfg.seed));
  for (const Point& pt : points) {
    const int total = static_cast<int>(pt.sets.size()) * cfg.trials;
    detail::Aggregate omp_agg, bp_agg;
    for (int i = 0; i < total; ++i) {
      omp_agg.add(omp_out[static_cast<std::size_t>(pt.first_trial_id + i)]);
      bp_agg.add(bp_out[static_cast<std::size_t>(pt.first_trial_id + i)]);
    }
    const BoundVerdict cond = theorem1_condition(analyzer, pt.k, cfg.m);
    auto push_row = [&](const char* method, const detail::Aggregate& agg) {
      ExperimentRow row;
      row.point_k = pt.k;
      row.point2 = 0.0;
      row.method = method;
      row.success_rate = agg.success_rate(total);
      row.rmse = agg.mean_rmse();
      row.lhs = cond.lhs;
      row.holds = cond.holds;
      row.valid = cond.valid;
      row.trials = total;
      row.seed = cfg.seed;
      table.rows.push_back(std::move(row));
    };
    push_row("omp", omp_agg);
    push_row("bp", bp_agg);
  }
  if (!cfg.out_csv.empty()) {
    table.write_csv(cfg.out_csv);
    std::vector<SvgSeries> series(2);
    series[0].name = "omp";
    series[1].name = "bp";
    for (const auto& r : table.rows) {
      auto& s = series[r.method == "omp" ? 0 : 1];
      s.x.push_back(r.point_k);
      s.y.push_back(r.success_rate);
    }
    svg_lineplot(svg_path(cfg.out_csv), "recovery sweep success rate", "k", series);
  }
  return table;
}

/// Refined-condition phase map over (k, s), optionally validated empirically
/// with exactly-s-sparse mixtures drawn on supports from Q_k(m).
inline ExperimentTable run_phase_transition(const ExperimentConfig& cfg) {
  const NpdDictionary dict = build_npd(cfg.family, cfg.p_max, cfg.L, true);
  const CoherenceAnalyzer analyzer(dict);
  const auto grid = analyzer.refined_grid(cfg.m, cfg.k_max);

  ExperimentTable table;
  table.preamble.push_back("tool: phase");
  table.preamble.push_back("config: " + to_json(cfg).dump());
  table.preamble.push_back("seed: " + std::to_string(cfg.seed));

  const int s_cap = cfg.s_max > 0 ? cfg.s_max : cfg.k_max;
  std::vector<int> ks, ss;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) ks.push_back(k);
  for (int s = cfg.s_min; s <= s_cap; ++s) ss.push_back(s);
  Eigen::MatrixXd cells = Eigen::MatrixXd::Constant(
      static_cast<Eigen::Index>(ss.size()), static_cast<Eigen::Index>(ks.size()),
      std::numeric_limits<double>::quiet_NaN());

  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    const int k = ks[ki];
    for (std::size_t si = 0; si < ss.size(); ++si) {
      const int s = ss[si];
      if (s > k || std::isnan(grid.cnpi(k, s))) continue;
      ExperimentRow row;
      row.point_k = k;
      row.point2 = s;
      row.method = "bound";
      const double lhs = grid.cnpi(k, s) + grid.cnpa(k, s - 1);
      row.lhs = lhs;
      row.valid = grid.cnpa(k, s - 1) < 1.0;
      row.holds = row.valid && lhs < 1.0;
      row.trials = 0;
      row.seed = cfg.seed;
      cells(static_cast<Eigen::Index>(si), static_cast<Eigen::Index>(ki)) = row.holds ? 1.0 : 0.0;
      table.rows.push_back(std::move(row));
    }
  }

  if (cfg.empirical && cfg.trials > 0) {
    const RecoverySolver solver(dict);
    const int n = dict.atoms();
    struct Point {
      int k, s;
      std::vector<PeriodSet> hosts;  // supports large enough for s nonzeros
      std::int64_t first_trial_id;
    };
    std::vector<Point> points;
    std::int64_t next_id = 0;
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
      const auto sets = enumerate_Qkm(cfg.p_max, cfg.m, k);
      for (int s = cfg.s_min; s <= std::min(s_cap, k); ++s) {
        std::vector<PeriodSet> hosts;
        for (const auto& t : sets) {
          if (static_cast<int>(t.support.size()) >= s) hosts.push_back(t);
        }
        if (hosts.empty()) continue;
        points.push_back({k, s, std::move(hosts), next_id});
        next_id += cfg.trials;
      }
    }
    std::vector<detail::TrialOutcome> omp_out(static_cast<std::size_t>(next_id));
    std::vector<detail::TrialOutcome> bp_out(static_cast<std::size_t>(next_id));
    for (const Point& pt : points) {
      parallel_for(cfg.trials, cfg.jobs, [&](std::int64_t i) {
        const std::int64_t id = pt.first_trial_id + i;
        SplitMix64 rng = trial_stream(cfg.seed, static_cast<std::uint64_t>(id));
        const auto& t = pt.hosts[rng.uniform_index(pt.hosts.size())];
        // Uniform s-subset of S_T via partial Fisher-Yates.
        std::vector<int> pool = t.support;
        for (int j = 0; j < pt.s; ++j) {
          const int pick =
              j + static_cast<int>(rng.uniform_index(pool.size() - static_cast<std::size_t>(j)));
          std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
        }
        std::vector<int> pattern(pool.begin(), pool.begin() + pt.s);
        std::sort(pattern.begin(), pattern.end());
        const Mixture mix = gen_sparse_on(dict, pattern, cfg.gamma, rng);
        auto& omp_slot = omp_out[static_cast<std::size_t>(id)];
        try {
          const RecoveryResult r = solver.omp(mix.y, StopRule::by_residual(cfg.omp_eps));
          omp_slot.solved = true;
          omp_slot.success = r.support == pattern;
          omp_slot.rmse = detail::rmse(detail::scatter(r.support, r.coefficients, n), mix.x);
        } catch (const std::exception&) {
        }
        auto& bp_slot = bp_out[static_cast<std::size_t>(id)];
        try {
          const Eigen::VectorXcd xhat = solver.basis_pursuit(mix.y, cfg.bp_tol);
          bp_slot.solved = true;
          bp_slot.success = support_from_coefficients(xhat, 1e-6) == pattern;
          bp_slot.rmse = detail::rmse(xhat, mix.x);
        } catch (const std::exception&) {
        }
      });
    }
    for (const Point& pt : points) {
      detail::Aggregate omp_agg, bp_agg;
      for (int i = 0; i < cfg.trials; ++i) {
        omp_agg.add(omp_out[static_cast<std::size_t>(pt.first_trial_id + i)]);
        bp_agg.add(bp_out[static_cast<std::size_t>(pt.first_trial_id + i)]);
      }
      auto push_row = [&](const char* method, const detail::Aggregate& agg) {
        ExperimentRow row;
        row.point_k = pt.k;
        row.point2 = pt.s;
        row.method = method;
        row.success_rate = agg.success_rate(cfg.trials);
        row.rmse = agg.mean_rmse();
        row.trials = cfg.trials;
        row.seed = cfg.seed;
        table.rows.push_back(std::move(row));
      };
      push_row("omp", omp_agg);
      push_row("bp", bp_agg);
    }
  }

  if (!cfg.out_csv.empty()) {
    table.write_csv(cfg.out_csv);
    svg_heatmap(svg_path(cfg.out_csv),
                "refined condition (" + family_name(cfg.family) + ", m=" + std::to_string(cfg.m) +
                    ")",
                ks, ss, cells);
  }
  return table;
}

namespace detail {

/// Shared body of the two noisy sweeps: a grid of points (gamma or alpha),
/// `trials` mixtures per point on a fixed period set, OMP with the residual
/// stopping rule of the corresponding theorem.
inline ExperimentTable run_noise_points(const ExperimentConfig& cfg, const NpdDictionary& dict,
                                        const RecoverySolver& solver, const PeriodSet& t,
                                        const BoundVerdict& cond,
                                        const std::vector<double>& grid, double threshold,
                                        bool gaussian) {
  const int n = dict.atoms();
  const double stop_eps = gaussian ? gaussian_radius(cfg.noise.sigma, cfg.L) : cfg.noise.eps;

  const std::int64_t total = static_cast<std::int64_t>(grid.size()) * cfg.trials;
  std::vector<TrialOutcome> out(static_cast<std::size_t>(total));
  parallel_for(total, cfg.jobs, [&](std::int64_t id) {
    const double point = grid[static_cast<std::size_t>(id / cfg.trials)];
    const double floor = gaussian ? point * threshold : point;
    SplitMix64 rng = trial_stream(cfg.seed, static_cast<std::uint64_t>(id));
    const Mixture mix = gen_mixture(dict, t, floor, rng);
    const Eigen::VectorXcd noisy = gaussian ? add_gaussian_noise(mix.y, cfg.noise.sigma, rng)
                                            : add_bounded_noise(mix.y, cfg.noise.eps, rng);
    auto& slot = out[static_cast<std::size_t>(id)];
    try {
      const RecoveryResult r = solver.omp(noisy, StopRule::by_residual(stop_eps));
      slot.solved = true;
      slot.success = r.support == t.support;
      // Scoring ground truth: restricted least squares on the true support of
      // the observed (noisy) signal.
      const Eigen::VectorXcd x_true =
          scatter(t.support, solver.least_squares_on_support(t.support, noisy), n);
      slot.rmse = rmse(scatter(r.support, r.coefficients, n), x_true);
    } catch (const std::exception&) {
    }
  });

  ExperimentTable table;
  table.preamble.push_back(std::string("tool: ") +
                           (gaussian ? "sweep-gaussian" : "sweep-bounded"));
  table.preamble.push_back("config: " + to_json(cfg).dump());
  table.preamble.push_back("seed: " + std::to_string(cfg.seed));
  {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "threshold: %.12g", threshold);
    table.preamble.push_back(buf);
  }
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    Aggregate agg;
    for (int i = 0; i < cfg.trials; ++i) {
      agg.add(out[gi * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(i)]);
    }
    ExperimentRow row;
    row.point_k = static_cast<double>(t.support.size());
    row.point2 = grid[gi];
    row.method = "omp";
    row.success_rate = agg.success_rate(cfg.trials);
    row.rmse = agg.mean_rmse();
    row.lhs = cond.lhs;
    row.holds = cond.holds;
    row.valid = cond.valid;
    row.trials = cfg.trials;
    row.seed = cfg.seed;
    table.rows.push_back(std::move(row));
  }
  if (!cfg.out_csv.empty()) {
    table.write_csv(cfg.out_csv);
    SvgSeries success_series, rmse_series;
    success_series.name = "success rate";
    rmse_series.name = "rmse";
    for (const auto& r : table.rows) {
      success_series.x.push_back(r.point2);
      success_series.y.push_back(r.success_rate);
      rmse_series.x.push_back(r.point2);
      rmse_series.y.push_back(r.rmse);
    }
    svg_lineplot(svg_path(cfg.out_csv), gaussian ? "gaussian noise sweep" : "bounded noise sweep",
                 gaussian ? "alpha" : "gamma", {success_series, rmse_series});
  }
  return table;
}

}  // namespace detail

/// Bounded-noise support recovery on a fixed period set: sweep the
/// coefficient floor gamma and report OMP success rate and RMSE per step.
/// The grid always contains the exact theorem threshold.
inline ExperimentTable run_bounded_noise_sweep(const ExperimentConfig& cfg) {
  if (cfg.noise.kind != NoiseSpec::Kind::Bounded) {
    throw std::invalid_argument("run_bounded_noise_sweep: noise spec must be 'bounded'");
  }
  if (cfg.periods.empty()) {
    throw std::invalid_argument("run_bounded_noise_sweep: periods must be given");
  }
  const NpdDictionary dict = build_npd(cfg.family, cfg.p_max, cfg.L, true);
  const CoherenceAnalyzer analyzer(dict);
  const RecoverySolver solver(dict);
  const PeriodSet t = period_set(cfg.periods);
  const BoundVerdict cond = theorem2_condition(analyzer, t);
  const double threshold = bounded_noise_threshold_restricted(analyzer, t, cfg.noise.eps);

  std::vector<double> gammas;
  const double gmax = cfg.gamma_max > 0.0 ? cfg.gamma_max : threshold * 1.25;
  for (double g = 0.0; g < gmax + 1e-12; g += cfg.gamma_step) gammas.push_back(g);
  gammas.push_back(threshold);
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               gammas.end());

  return detail::run_noise_points(cfg, dict, solver, t, cond, gammas, threshold,
                                  /*gaussian=*/false);
}

/// Gaussian-noise sweep over the scale alpha in [0, 1]: the coefficient floor
/// is alpha times the Gaussian threshold and OMP stops at the noise radius.
inline ExperimentTable run_gaussian_sweep(const ExperimentConfig& cfg) {
  if (cfg.noise.kind != NoiseSpec::Kind::Gaussian) {
    throw std::invalid_argument("run_gaussian_sweep: noise spec must be 'gaussian'");
  }
  if (cfg.periods.empty()) {
    throw std::invalid_argument("run_gaussian_sweep: periods must be given");
  }
  const NpdDictionary dict = build_npd(cfg.family, cfg.p_max, cfg.L, true);
  const CoherenceAnalyzer analyzer(dict);
  const RecoverySolver solver(dict);
  const PeriodSet t = period_set(cfg.periods);
  const BoundVerdict cond = theorem2_condition(analyzer, t);
  const double threshold = gaussian_threshold_restricted(analyzer, t, cfg.noise.sigma, cfg.L);

  std::vector<double> alphas;
  for (double a = 0.0; a < 1.0 - 1e-12; a += cfg.alpha_step) alphas.push_back(a);
  alphas.push_back(1.0);

  return detail::run_noise_points(cfg, dict, solver, t, cond, alphas, threshold,
                                  /*gaussian=*/true);
}

}  // namespace npd
