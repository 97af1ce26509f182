#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "npd/coherence.hpp"
#include "npd/errors.hpp"
#include "npd/support.hpp"

namespace npd {

/// Outcome of evaluating one recovery condition. `holds` is lhs < 1; `valid`
/// records whether the Neumann-series / denominator preconditions behind the
/// derivation are met, so a verdict with valid=false is reported but carries
/// no guarantee.
struct BoundVerdict {
  std::string name;
  double lhs = 0.0;
  bool holds = false;
  bool valid = false;
  std::string detail;
};

/// k < (1/mu + 1)/2. mu = 0 means orthonormal atoms, so any k qualifies.
inline BoundVerdict classic_coherence_condition(double mu, int k) {
  BoundVerdict v;
  v.name = "classic-mu";
  if (mu == 0.0) {
    v.lhs = 0.0;
    v.holds = true;
    v.valid = true;
    v.detail = "mu=0";
    return v;
  }
  const double bound = 0.5 * (1.0 / mu + 1.0);
  v.lhs = static_cast<double>(k) / bound;  // normalized so holds <=> lhs < 1
  v.holds = static_cast<double>(k) < bound;
  v.valid = true;
  v.detail = "k<" + std::to_string(bound);
  return v;
}

/// mu_1(k) + mu_1(k-1) < 1, with mu_1(0) = 0.
inline BoundVerdict classic_cumulative_condition(const CoherenceAnalyzer& an, int k) {
  BoundVerdict v;
  v.name = "classic-mu1";
  const double a = an.cumulative_coherence(k);
  const double b = k >= 1 ? an.cumulative_coherence(k - 1) : 0.0;
  v.lhs = a + b;
  v.holds = v.lhs < 1.0;
  v.valid = true;
  v.detail = "mu1(k)=" + std::to_string(a) + " mu1(k-1)=" + std::to_string(b);
  return v;
}

/// zeta_{k,m} + nu_{k,m} < 1. Valid only when nu_{k,m} < 1 (Neumann series).
inline BoundVerdict theorem1_condition(const CoherenceAnalyzer& an, int k, int m) {
  BoundVerdict v;
  v.name = "thm1";
  const double zeta = an.npi(k, m);
  const double nu = an.npa(k, m);
  v.lhs = zeta + nu;
  v.valid = nu < 1.0;
  v.holds = v.valid && v.lhs < 1.0;
  v.detail = "zeta=" + std::to_string(zeta) + " nu=" + std::to_string(nu);
  return v;
}

/// 2 sum zeta_p + max nu_p - min zeta_p < 1 over the periods of T. Valid when
/// max_j (nu_{p_j} + sum_{i != j} zeta_{p_i}) < 1.
inline BoundVerdict theorem2_condition(const CoherenceAnalyzer& an, const PeriodSet& t) {
  BoundVerdict v;
  v.name = "thm2";
  std::vector<double> zetas, nus;
  for (int p : t.periods) {
    zetas.push_back(an.restricted_inter(p));
    nus.push_back(an.restricted_intra(p));
  }
  const double zsum = std::accumulate(zetas.begin(), zetas.end(), 0.0);
  const double numax = *std::max_element(nus.begin(), nus.end());
  const double zmin = *std::min_element(zetas.begin(), zetas.end());
  v.lhs = 2.0 * zsum + numax - zmin;
  double denom_arg = 0.0;
  for (std::size_t j = 0; j < nus.size(); ++j) {
    denom_arg = std::max(denom_arg, nus[j] + zsum - zetas[j]);
  }
  v.valid = denom_arg < 1.0;
  v.holds = v.valid && v.lhs < 1.0;
  v.detail = "T=" + t.to_string() + " sum_zeta=" + std::to_string(zsum) +
             " max_nu=" + std::to_string(numax) + " min_zeta=" + std::to_string(zmin);
  return v;
}

/// Corollary: the theorem-2 expression maximized over Q_k(m).
inline BoundVerdict corollary1_condition(const CoherenceAnalyzer& an, int k, int m) {
  BoundVerdict v;
  v.name = "cor1";
  v.valid = true;
  bool first = true;
  for (const PeriodSet& t : an.qkm(k, m)) {
    const BoundVerdict member = theorem2_condition(an, t);
    if (first || member.lhs > v.lhs) {
      v.lhs = member.lhs;
      v.detail = member.detail;
      first = false;
    }
    v.valid = v.valid && member.valid;
  }
  v.holds = v.valid && v.lhs < 1.0;
  return v;
}

/// zeta_{k,m}(s) + nu_{k,m}(s-1) < 1, with nu(0) = 0.
inline BoundVerdict refined_condition(const CoherenceAnalyzer& an, int k, int m, int s) {
  if (s < 1 || s > k) throw SOutOfRange("refined_condition: need 1 <= s <= k");
  BoundVerdict v;
  v.name = "refined";
  const double zeta_s = an.cnpi(k, m, s);
  const double nu_s1 = an.cnpa(k, m, s - 1);
  v.lhs = zeta_s + nu_s1;
  v.valid = nu_s1 < 1.0;
  v.holds = v.valid && v.lhs < 1.0;
  v.detail = "cnpi(s)=" + std::to_string(zeta_s) + " cnpa(s-1)=" + std::to_string(nu_s1);
  return v;
}

/// Coefficient floor 2 eps / ((1 - zeta - nu)(1 - nu)) under which OMP with
/// stopping radius eps recovers the exact support.
inline double bounded_noise_threshold_npi(const CoherenceAnalyzer& an, int k, int m, double eps) {
  const double zeta = an.npi(k, m);
  const double nu = an.npa(k, m);
  if (!(nu < 1.0) || !(zeta + nu < 1.0)) {
    throw ConditionNotMet("zeta_{k,m} + nu_{k,m} >= 1; the threshold has no meaning");
  }
  return 2.0 * eps / ((1.0 - zeta - nu) * (1.0 - nu));
}

/// Restricted-coherence analogue built from the theorem-2 terms.
inline double bounded_noise_threshold_restricted(const CoherenceAnalyzer& an, const PeriodSet& t,
                                                 double eps) {
  const BoundVerdict cond = theorem2_condition(an, t);
  if (!cond.holds) {
    throw ConditionNotMet("theorem-2 condition fails for T=" + t.to_string());
  }
  std::vector<double> zetas, nus;
  for (int p : t.periods) {
    zetas.push_back(an.restricted_inter(p));
    nus.push_back(an.restricted_intra(p));
  }
  const double zsum = std::accumulate(zetas.begin(), zetas.end(), 0.0);
  const double nuhat = *std::max_element(nus.begin(), nus.end());
  const double zcheck = *std::min_element(zetas.begin(), zetas.end());
  return 2.0 * eps / ((1.0 - 2.0 * zsum - nuhat + zcheck) * (1.0 - zsum - nuhat + zcheck));
}

/// sigma sqrt(L + 2 sqrt(L ln L)): the radius of the high-probability ball
/// containing Gaussian noise, P >= 1 - 1/L.
inline double gaussian_radius(double sigma, int L) {
  const double l = static_cast<double>(L);
  return sigma * std::sqrt(l + 2.0 * std::sqrt(l * std::log(l)));
}

inline double gaussian_threshold_restricted(const CoherenceAnalyzer& an, const PeriodSet& t,
                                            double sigma, int L) {
  return bounded_noise_threshold_restricted(an, t, gaussian_radius(sigma, L));
}

/// Gaussian analogue of the zeta/nu threshold. The derivation composes the
/// bounded-noise theorem with the Gaussian radius; flag output accordingly.
inline double gaussian_threshold_npi(const CoherenceAnalyzer& an, int k, int m, double sigma,
                                     int L) {
  return bounded_noise_threshold_npi(an, k, m, gaussian_radius(sigma, L));
}

}  // namespace npd
