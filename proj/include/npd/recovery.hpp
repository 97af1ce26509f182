#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "npd/dictionary.hpp"
#include "npd/errors.hpp"

namespace npd {

/// Stopping rules for OMP; any combination, first trigger wins.
struct StopRule {
  std::optional<int> sparsity;
  std::optional<double> residual_norm;
  std::optional<int> max_iterations;

  static StopRule by_sparsity(int k) { return {.sparsity = k}; }
  static StopRule by_residual(double eps) { return {.residual_norm = eps}; }
  static StopRule by_iterations(int n) { return {.max_iterations = n}; }

  void validate(int n_atoms) const {
    if (!sparsity && !residual_norm && !max_iterations) {
      throw std::invalid_argument("StopRule: at least one rule must be set");
    }
    if (sparsity && (*sparsity < 0 || *sparsity > n_atoms)) {
      throw std::invalid_argument("StopRule: sparsity must be in 0..N");
    }
    if (residual_norm && *residual_norm < 0.0) {
      throw std::invalid_argument("StopRule: residual bound must be >= 0");
    }
  }
};

enum class StopReason { Sparsity, ResidualNorm, MaxIterations };

inline std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Sparsity: return "sparsity";
    case StopReason::ResidualNorm: return "residual";
    default: return "max-iterations";
  }
}

struct RecoveryResult {
  std::vector<int> support;         // sorted, 1-based
  Eigen::VectorXcd coefficients;    // aligned with support
  double residual_norm = 0.0;       // recomputed from scratch at the end
  double tracked_residual_norm = 0.0;  // value maintained across iterations
  int iterations = 0;
  StopReason stop_reason = StopReason::MaxIterations;
};

/// Indices of entries with |x_i| > rel_threshold * max_j |x_j| (1-based).
inline std::vector<int> support_from_coefficients(const Eigen::VectorXcd& x,
                                                  double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw std::invalid_argument("support_from_coefficients: threshold must be in (0,1)");
  }
  const double top = x.cwiseAbs().maxCoeff();
  std::vector<int> out;
  if (top == 0.0) return out;
  for (int i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > rel_threshold * top) out.push_back(i + 1);
  }
  return out;
}

namespace detail {

template <class Scalar>
struct OmpState {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Mat q;    // L x t, orthonormal columns
  Mat r;    // t x t, upper triangular
  Vec qty;  // Q^H y
};

template <class Scalar>
RecoveryResult omp_impl(const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic,
                                                             Eigen::Dynamic>>& k_mat,
                        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                        const StopRule& stop) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  const int n = static_cast<int>(k_mat.cols());
  const int l = static_cast<int>(k_mat.rows());
  const int cap = std::min(l, n);
  stop.validate(n);

  std::vector<int> selected;  // 0-based column order of selection
  std::vector<char> in_sel(static_cast<std::size_t>(n), 0);
  OmpState<Scalar> st;
  st.q.resize(l, cap);
  st.r = Mat::Zero(cap, cap);
  st.qty.resize(cap);

  Vec resid = y;
  double tracked_norm = resid.norm();
  RecoveryResult out;

  auto refactor = [&]() {
    // Full recompute caps the drift of the incremental updates.
    const int t = static_cast<int>(selected.size());
    Mat cols(l, t);
    for (int i = 0; i < t; ++i) cols.col(i) = k_mat.col(selected[static_cast<std::size_t>(i)]);
    const Eigen::HouseholderQR<Mat> qr(cols);
    st.q.leftCols(t) = qr.householderQ() * Mat::Identity(l, t);
    st.r.topLeftCorner(t, t) =
        qr.matrixQR().topLeftCorner(t, t).template triangularView<Eigen::Upper>();
    st.qty.head(t) = st.q.leftCols(t).adjoint() * y;
    resid = y - st.q.leftCols(t) * st.qty.head(t);
    tracked_norm = resid.norm();
  };

  while (true) {
    const int t = static_cast<int>(selected.size());
    if (stop.sparsity && t >= *stop.sparsity) {
      out.stop_reason = StopReason::Sparsity;
      break;
    }
    if (stop.residual_norm && tracked_norm <= *stop.residual_norm) {
      out.stop_reason = StopReason::ResidualNorm;
      break;
    }
    if (stop.max_iterations && t >= *stop.max_iterations) {
      out.stop_reason = StopReason::MaxIterations;
      break;
    }
    if (t >= cap) {
      out.stop_reason = StopReason::MaxIterations;
      break;
    }

    const Vec corr = k_mat.adjoint() * resid;
    int pick = -1;
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      if (in_sel[static_cast<std::size_t>(j)]) continue;
      const double a = std::abs(corr[j]);
      if (a > best) {  // ties resolve to the lowest index
        best = a;
        pick = j;
      }
    }
    if (pick < 0 || best == 0.0) {
      // Residual is orthogonal to every remaining atom; no rule can fire later.
      out.stop_reason = StopReason::MaxIterations;
      break;
    }

    // Modified Gram-Schmidt append of the picked column.
    Vec a = k_mat.col(pick);
    for (int i = 0; i < t; ++i) {
      const Scalar proj = st.q.col(i).adjoint() * a;
      st.r(i, t) = proj;
      a -= st.q.col(i) * proj;
    }
    const double nrm = a.norm();
    st.r(t, t) = Scalar(nrm);
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= t; ++i) {
      const double d = std::abs(st.r(i, i));
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    if (!(dmin > 0.0) || dmax / dmin > 1e12) {
      throw SingularGram("omp: selected atoms are numerically dependent");
    }
    st.q.col(t) = a / nrm;
    st.qty[t] = st.q.col(t).adjoint() * y;
    selected.push_back(pick);
    in_sel[static_cast<std::size_t>(pick)] = 1;
    if (selected.size() % 10 == 0) {
      refactor();
    } else {
      resid = y - st.q.leftCols(t + 1) * st.qty.head(t + 1);
      tracked_norm = resid.norm();
    }
  }

  const int t = static_cast<int>(selected.size());
  out.iterations = t;
  out.tracked_residual_norm = tracked_norm;

  Vec coef = Vec::Zero(t);
  if (t > 0) {
    coef = st.r.topLeftCorner(t, t)
               .template triangularView<Eigen::Upper>()
               .solve(st.qty.head(t));
  }
  // Report the support sorted, coefficients permuted to match.
  std::vector<int> order(static_cast<std::size_t>(t));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a_, int b_) { return selected[static_cast<std::size_t>(a_)] < selected[static_cast<std::size_t>(b_)]; });
  out.support.resize(static_cast<std::size_t>(t));
  out.coefficients.resize(t);
  Mat cols(l, t);
  for (int i = 0; i < t; ++i) {
    const int sel = selected[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    out.support[static_cast<std::size_t>(i)] = sel + 1;
    out.coefficients[i] = coef[order[static_cast<std::size_t>(i)]];
    cols.col(i) = k_mat.col(sel);
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fit = y;
  for (int i = 0; i < t; ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      fit -= cols.col(i) * out.coefficients[i].real();
    } else {
      fit -= cols.col(i) * out.coefficients[i];
    }
  }
  out.residual_norm = fit.norm();
  return out;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> bp_admm(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& rowspace_proj,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& least_norm_solution, double tol,
    int max_iterations, int* iterations_out) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = rowspace_proj.rows();
  const double rho = 1.0;  // penalty parameter
  const double thresh = 1.0 / rho;

  Vec x = least_norm_solution;
  Vec z = Vec::Zero(n), u = Vec::Zero(n), v(n), xu(n), z_old(n);
  for (int it = 1; it <= max_iterations; ++it) {
    v = z - u;
    // Exact projection onto {x : Kx = y}.
    x = v - rowspace_proj * v + least_norm_solution;
    z_old = z;
    xu = x + u;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mag = std::abs(xu[i]);
      z[i] = mag > thresh ? xu[i] * Scalar((mag - thresh) / mag) : Scalar(0);
    }
    u = xu - z;
    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    if (primal <= tol && dual <= tol) {
      if (iterations_out) *iterations_out = it;
      return x;
    }
  }
  throw NoConvergence("basis_pursuit: no convergence after " + std::to_string(max_iterations) +
                      " iterations");
}

}  // namespace detail

/// Sparse-recovery front end for one dictionary. The constructor keeps a real
/// shadow of real-valued dictionaries so solver inner loops avoid complex
/// arithmetic; basis-pursuit precomputations are built on first use.
class RecoverySolver {
 public:
  static constexpr int kBpMaxIterations = 50000;

  explicit RecoverySolver(const NpdDictionary& dict) : dict_(&dict) {
    if (!dict.normalized) throw NotNormalized("recovery requires a normalized dictionary");
    real_path_ = dict.entries.imag().cwiseAbs().maxCoeff() == 0.0;
    if (real_path_) real_ = dict.entries.real();
  }

  const NpdDictionary& dict() const { return *dict_; }

  /// Classic OMP: select the atom with the largest |<k_j, r>| (ties to the
  /// lowest index), re-solve least squares on the selected set, update the
  /// residual, repeat until a stopping rule fires.
  RecoveryResult omp(const Eigen::VectorXcd& y, const StopRule& stop) const {
    if (real_path_ && y.imag().cwiseAbs().maxCoeff() == 0.0) {
      const Eigen::VectorXd yr = y.real();
      return detail::omp_impl<double>(real_, yr, stop);
    }
    return detail::omp_impl<std::complex<double>>(dict_->entries, y, stop);
  }

  /// Basis pursuit min ||x||_1 s.t. Kx = y, solved by operator splitting with
  /// penalty 1.0 and modulus soft-thresholding; converged when both primal and
  /// dual residuals drop to tol.
  Eigen::VectorXcd basis_pursuit(const Eigen::VectorXcd& y, double tol,
                                 int* iterations_out = nullptr) const {
    if (real_path_ && y.imag().cwiseAbs().maxCoeff() == 0.0) {
      std::call_once(bp_real_once_, [&] {
        bp_real_pinv_ = pseudo_inverse(real_);
        bp_real_proj_ = bp_real_pinv_ * real_;
      });
      const Eigen::VectorXd b0 = bp_real_pinv_ * y.real();
      return detail::bp_admm<double>(bp_real_proj_, b0, tol, kBpMaxIterations, iterations_out)
          .cast<std::complex<double>>();
    }
    std::call_once(bp_cplx_once_, [&] {
      bp_cplx_pinv_ = pseudo_inverse(dict_->entries);
      bp_cplx_proj_ = bp_cplx_pinv_ * dict_->entries;
    });
    const Eigen::VectorXcd b0 = bp_cplx_pinv_ * y;
    return detail::bp_admm<std::complex<double>>(bp_cplx_proj_, b0, tol, kBpMaxIterations,
                                                 iterations_out);
  }

  /// Minimizer of ||K_S c - y||_2 over coefficients on the 1-based support S.
  Eigen::VectorXcd least_squares_on_support(const std::vector<int>& support,
                                            const Eigen::VectorXcd& y) const {
    Eigen::MatrixXcd cols(dict_->rows(), support.size());
    for (std::size_t i = 0; i < support.size(); ++i) cols.col(i) = dict_->atom(support[i]);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cols.adjoint() * cols,
                                                             Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12) {
      throw SingularGram("least_squares_on_support: Gram condition above 1e12");
    }
    return Eigen::ColPivHouseholderQR<Eigen::MatrixXcd>(cols).solve(y);
  }

 private:
  template <class Mat>
  static Mat pseudo_inverse(const Mat& m) {
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(m);
    return cod.pseudoInverse();
  }

  const NpdDictionary* dict_;
  bool real_path_ = false;
  Eigen::MatrixXd real_;
  mutable std::once_flag bp_real_once_, bp_cplx_once_;
  mutable Eigen::MatrixXd bp_real_pinv_, bp_real_proj_;
  mutable Eigen::MatrixXcd bp_cplx_pinv_, bp_cplx_proj_;
};

inline RecoveryResult omp(const NpdDictionary& dict, const Eigen::VectorXcd& y,
                          const StopRule& stop) {
  return RecoverySolver(dict).omp(y, stop);
}

inline Eigen::VectorXcd basis_pursuit(const NpdDictionary& dict, const Eigen::VectorXcd& y,
                                      double tol) {
  return RecoverySolver(dict).basis_pursuit(y, tol);
}

inline Eigen::VectorXcd least_squares_on_support(const NpdDictionary& dict,
                                                 const std::vector<int>& support,
                                                 const Eigen::VectorXcd& y) {
  return RecoverySolver(dict).least_squares_on_support(support, y);
}

}  // namespace npd
