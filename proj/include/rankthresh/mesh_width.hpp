#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "rankthresh/thresholds.hpp"

namespace rankthresh {

/// Per-sample upper bound on sup <H, W> over the unit-norm directions that
/// violate a recovery condition, with the bookkeeping the bound used.
struct BoundDetail {
  double value = 0.0;
  int r = 0;
  int c = 0;              // number of dropped smallest entries (largest admissible)
  bool fallback = false;  // Frobenius bound used
};

/// Rank used for a rank fraction: round(beta n).
int rank_for(double beta, Eigen::Index n);

/// Supported kinds: Strong, Sectional, Weak (Gaussian H) and PsdWeak,
/// PsdStrong (symmetric H).  The matrix being recovered is taken in
/// canonical position, its support in the leading r coordinates.
BoundDetail sample_bound_detail(ThresholdKind kind, const Eigen::MatrixXd& H, double beta);
double sample_bound(ThresholdKind kind, const Eigen::MatrixXd& H, double beta);

struct WidthEstimate {
  ThresholdKind kind = ThresholdKind::Weak;
  Eigen::Index n = 0;
  double beta = 0.0;
  int samples = 0;
  double mean_bound = 0.0;  // includes the 1/sqrt(2) of the svec isometry for PSD kinds
  double std_err = 0.0;
  double mu_implied = 0.0;  // mean_bound^2 / D, D = n^2 or n(n+1)/2
};

/// Monte Carlo mean of sample_bound over iid Gaussian (or GUE for PSD kinds)
/// H.  Sample i uses derive_seed(seed, {i}), so the result does not depend on
/// the worker count.
WidthEstimate estimate_width(ThresholdKind kind, Eigen::Index n, double beta, int samples, std::uint64_t seed,
                             unsigned workers = 1);

}  // namespace rankthresh
