#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "npd/dictionary.hpp"
#include "npd/errors.hpp"
#include "npd/support.hpp"

namespace npd {

struct ErcBaseline {
  double value = 0.0;
  PeriodSet argmax;  // lexicographically smallest maximizer
};

/// Computes every coherence measure of a normalized dictionary from a single
/// N x N table of inner-product magnitudes. The table is built once at
/// construction and never mutated, so one analyzer can serve any number of
/// concurrent readers.
class CoherenceAnalyzer {
 public:
  // Holds a reference; the dictionary must outlive the analyzer.
  explicit CoherenceAnalyzer(NpdDictionary&&) = delete;
  explicit CoherenceAnalyzer(const NpdDictionary& dict) : dict_(&dict) {
    if (!dict.normalized) {
      throw NotNormalized("coherence measures require a normalized dictionary");
    }
    const int n = dict.atoms();
    mag_.resize(n, n);
    // Panel-wise Gram keeps the complex temporary small on large dictionaries.
    const int panel = 256;
    for (int c0 = 0; c0 < n; c0 += panel) {
      const int w = std::min(panel, n - c0);
      mag_.middleCols(c0, w) =
          (dict.entries.adjoint() * dict.entries.middleCols(c0, w)).cwiseAbs();
    }
  }

  const NpdDictionary& dict() const { return *dict_; }
  const Eigen::MatrixXd& magnitudes() const { return mag_; }
  int atoms() const { return static_cast<int>(mag_.rows()); }

  /// mu: largest |<k_i, k_j>| over distinct column pairs.
  double mutual_coherence() const {
    double best = 0.0;
    for (int i = 0; i < atoms(); ++i) {
      for (int j = i + 1; j < atoms(); ++j) best = std::max(best, mag_(i, j));
    }
    return best;
  }

  /// mu_1(k): max over atoms i of the sum of the k largest |<k_i, k_j>|,
  /// j != i. Greedy per-atom evaluation realizes the max over index sets
  /// Lambda_k because the summands are nonnegative.
  double cumulative_coherence(int k) const {
    const int n = atoms();
    if (k == 0) return 0.0;
    if (k < 0 || k > n - 1) throw KTooLarge("cumulative_coherence: k must be in 0..N-1");
    double best = 0.0;
    std::vector<double> vals(static_cast<std::size_t>(n) - 1);
    for (int i = 0; i < n; ++i) {
      std::size_t t = 0;
      for (int j = 0; j < n; ++j) {
        if (j != i) vals[t++] = mag_(i, j);
      }
      std::partial_sort(vals.begin(), vals.begin() + k, vals.end(), std::greater<>());
      double sum = 0.0;
      for (int j = 0; j < k; ++j) sum += vals[static_cast<std::size_t>(j)];
      best = std::max(best, sum);
    }
    return best;
  }

  /// zeta_{k,m}: nested periodic inter-coherence over Q_k(m).
  double npi(int k, int m) const {
    double best = 0.0;
    for (const PeriodSet& t : qkm(k, m)) best = std::max(best, inter_sum(t.support));
    return best;
  }

  /// nu_{k,m}: nested periodic intra-coherence over Q_k(m).
  double npa(int k, int m) const {
    double best = 0.0;
    for (const PeriodSet& t : qkm(k, m)) best = std::max(best, intra_sum(t.support));
    return best;
  }

  /// zeta_p: inter-coherence restricted to the single-period support S_p.
  double restricted_inter(int p) const { return inter_sum(single_period_support(p)); }

  /// nu_p: intra-coherence restricted to S_p.
  double restricted_intra(int p) const { return intra_sum(single_period_support(p)); }

  /// zeta_{k,m}(s): cumulative variant summing only the s largest magnitudes
  /// over subsets Lambda_s of S_T with |Lambda_s| <= s.
  double cnpi(int k, int m, int s) const {
    if (s < 1 || s > k) throw SOutOfRange("cnpi: need 1 <= s <= k");
    double best = 0.0;
    for (const PeriodSet& t : qkm(k, m)) best = std::max(best, inter_sum_top(t.support, s));
    return best;
  }

  /// nu_{k,m}(s); s = 0 is defined as 0.
  double cnpa(int k, int m, int s) const {
    if (s == 0) return 0.0;
    if (s < 0 || s > k) throw SOutOfRange("cnpa: need 0 <= s <= k");
    double best = 0.0;
    for (const PeriodSet& t : qkm(k, m)) best = std::max(best, intra_sum_top(t.support, s));
    return best;
  }

  /// ||K_S^dagger K_{S^c}||_{1,1}: for each atom j outside S, the l1 norm of
  /// the least-squares solution of K_S z = k_j; maximum over j. Solved via the
  /// normal equations with a dense Cholesky factorization.
  double erc_value(const std::vector<int>& support) const {
    const auto ks = columns(support);
    const Eigen::MatrixXcd gram = ks.adjoint() * ks;
    check_gram_condition(gram, support);
    const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    double best = 0.0;
    std::vector<char> in_s(static_cast<std::size_t>(atoms()) + 1, 0);
    for (int i : support) in_s[static_cast<std::size_t>(i)] = 1;
    for (int j = 1; j <= atoms(); ++j) {
      if (in_s[static_cast<std::size_t>(j)]) continue;
      const Eigen::VectorXcd z = llt.solve(ks.adjoint() * dict_->atom(j));
      best = std::max(best, z.lpNorm<1>());
    }
    return best;
  }

  /// M_k(m): the ERC baseline, max of erc_value over the supports of Q_k(m).
  ErcBaseline erc_baseline(int k, int m) const {
    ErcBaseline out;
    bool first = true;
    for (const PeriodSet& t : qkm(k, m)) {
      double v = 0.0;
      try {
        v = erc_value(t.support);
      } catch (const SingularGram& e) {
        throw SingularGram(std::string(e.what()) + " for T=" + t.to_string());
      }
      if (first || v > out.value) {
        out.value = v;
        out.argmax = t;
        first = false;
      }
    }
    return out;
  }

  /// Smallest eigenvalue of the Hermitian Gram matrix of K_S.
  double min_eig_gram(const std::vector<int>& support) const {
    const auto ks = columns(support);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ks.adjoint() * ks,
                                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// Q_k(m) for this dictionary's p_max; throws EmptyQkm when no mixture fits.
  std::vector<PeriodSet> qkm(int k, int m) const {
    auto sets = enumerate_Qkm(dict_->p_max, m, k);
    if (sets.empty()) {
      throw EmptyQkm("Q_" + std::to_string(k) + "(" + std::to_string(m) + ") is empty");
    }
    return sets;
  }

  /// Per-T prefix maxima of the cumulative measures over the whole s-range,
  /// for every k up to k_max in one pass. grid.cnpi(k, s) is NaN wherever
  /// Q_k(m) is empty.
  struct RefinedGrid {
    int m = 0;
    int k_max = 0;
    Eigen::MatrixXd cnpi;  // (k_max+1) x (k_max+1); row k, col s, entries for 1<=s<=k
    Eigen::MatrixXd cnpa;  // col 0 is the s=0 convention (zero)
  };

  RefinedGrid refined_grid(int m, int k_max) const {
    RefinedGrid g;
    g.m = m;
    g.k_max = k_max;
    g.cnpi = Eigen::MatrixXd::Constant(k_max + 1, k_max + 1,
                                       std::numeric_limits<double>::quiet_NaN());
    g.cnpa = g.cnpi;
    const auto sets = enumerate_Qkm(dict_->p_max, m, k_max);
    // Group by support cardinality so the running maxima cover Q_k(m) exactly
    // when row k is filled.
    std::vector<std::vector<const PeriodSet*>> by_size(static_cast<std::size_t>(k_max) + 1);
    for (const auto& t : sets) by_size[t.support.size()].push_back(&t);

    Eigen::VectorXd gmax = Eigen::VectorXd::Zero(k_max + 1);  // index s
    Eigen::VectorXd hmax = Eigen::VectorXd::Zero(k_max + 1);
    bool any = false;
    for (int k = 1; k <= k_max; ++k) {
      for (const PeriodSet* t : by_size[static_cast<std::size_t>(k)]) {
        any = true;
        const auto [gv, hv] = prefix_maxima(t->support);
        const int tsz = static_cast<int>(t->support.size());
        for (int s = 1; s <= k_max; ++s) {
          gmax[s] = std::max(gmax[s], gv[static_cast<std::size_t>(std::min(s, tsz))]);
          hmax[s] = std::max(hmax[s], hv[static_cast<std::size_t>(std::min(s, tsz))]);
        }
      }
      if (!any) continue;
      g.cnpa(k, 0) = 0.0;
      for (int s = 1; s <= k; ++s) {
        g.cnpi(k, s) = gmax[s];
        g.cnpa(k, s) = hmax[s];
      }
    }
    return g;
  }

 private:
  Eigen::MatrixXcd columns(const std::vector<int>& support) const {
    Eigen::MatrixXcd ks(dict_->rows(), support.size());
    for (std::size_t c = 0; c < support.size(); ++c) ks.col(c) = dict_->atom(support[c]);
    return ks;
  }

  void check_gram_condition(const Eigen::MatrixXcd& gram, const std::vector<int>& support) const {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12) {
      throw SingularGram("Gram matrix of " + std::to_string(support.size()) +
                         " atoms has condition above 1e12");
    }
  }

  double inter_sum(const std::vector<int>& support) const {
    std::vector<char> in_s(static_cast<std::size_t>(atoms()) + 1, 0);
    for (int i : support) in_s[static_cast<std::size_t>(i)] = 1;
    double best = 0.0;
    for (int i = 1; i <= atoms(); ++i) {
      if (in_s[static_cast<std::size_t>(i)]) continue;
      double sum = 0.0;
      for (int j : support) sum += mag_(i - 1, j - 1);
      best = std::max(best, sum);
    }
    return best;
  }

  double intra_sum(const std::vector<int>& support) const {
    double best = 0.0;
    for (int i : support) {
      double sum = 0.0;
      for (int j : support) {
        if (j != i) sum += mag_(i - 1, j - 1);
      }
      best = std::max(best, sum);
    }
    return best;
  }

  // Sum of the s largest magnitudes realizes the max over subsets of size
  // <= s since magnitudes are nonnegative.
  double inter_sum_top(const std::vector<int>& support, int s) const {
    std::vector<char> in_s(static_cast<std::size_t>(atoms()) + 1, 0);
    for (int i : support) in_s[static_cast<std::size_t>(i)] = 1;
    double best = 0.0;
    std::vector<double> vals(support.size());
    for (int i = 1; i <= atoms(); ++i) {
      if (in_s[static_cast<std::size_t>(i)]) continue;
      for (std::size_t c = 0; c < support.size(); ++c) vals[c] = mag_(i - 1, support[c] - 1);
      best = std::max(best, top_sum(vals, s));
    }
    return best;
  }

  double intra_sum_top(const std::vector<int>& support, int s) const {
    double best = 0.0;
    std::vector<double> vals;
    vals.reserve(support.size());
    for (int i : support) {
      vals.clear();
      for (int j : support) {
        if (j != i) vals.push_back(mag_(i - 1, j - 1));
      }
      best = std::max(best, top_sum(vals, s));
    }
    return best;
  }

  static double top_sum(std::vector<double>& vals, int s) {
    const int take = std::min<int>(s, static_cast<int>(vals.size()));
    std::partial_sort(vals.begin(), vals.begin() + take, vals.end(), std::greater<>());
    double sum = 0.0;
    for (int i = 0; i < take; ++i) sum += vals[static_cast<std::size_t>(i)];
    return sum;
  }

  // Full prefix-sum curves g(s), h(s) for one support: g over atoms outside
  // the support, h over atoms inside (self term excluded).
  std::pair<std::vector<double>, std::vector<double>> prefix_maxima(
      const std::vector<int>& support) const {
    const int tsz = static_cast<int>(support.size());
    std::vector<double> g(static_cast<std::size_t>(tsz) + 1, 0.0);
    std::vector<double> h(static_cast<std::size_t>(tsz) + 1, 0.0);
    std::vector<char> in_s(static_cast<std::size_t>(atoms()) + 1, 0);
    for (int i : support) in_s[static_cast<std::size_t>(i)] = 1;
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(tsz));
    for (int i = 1; i <= atoms(); ++i) {
      vals.clear();
      for (int j : support) {
        if (j != i) vals.push_back(mag_(i - 1, j - 1));
      }
      std::sort(vals.begin(), vals.end(), std::greater<>());
      auto& acc = in_s[static_cast<std::size_t>(i)] ? h : g;
      double run = 0.0;
      for (std::size_t s = 1; s <= static_cast<std::size_t>(tsz); ++s) {
        if (s - 1 < vals.size()) run += vals[s - 1];
        acc[s] = std::max(acc[s], run);
      }
    }
    return {std::move(g), std::move(h)};
  }

  const NpdDictionary* dict_;
  Eigen::MatrixXd mag_;
};

}  // namespace npd
