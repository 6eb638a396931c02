#pragma once

#include <Eigen/Dense>

#include "rankthresh/measurements.hpp"

namespace rankthresh {

struct SolverConfig {
  int max_iters = 20000;
  double primal_tol = 1e-7;
  double dual_tol = 1e-7;
  double penalty = 1.0;
  double success_tol = 1e-3;
};

struct RecoveryOutcome {
  Eigen::MatrixXd X_hat;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;   // |A(X_hat) - y|_2
  double objective = 0.0;  // nuclear norm or trace of X_hat
  double rel_error = -1.0; // |X_hat - X0|_F / |X0|_F, or |X_hat|_F when X0 = 0; -1 without ground truth
};

/// min |X|_* subject to A(X) = y.  ADMM between the affine slice and
/// singular-value soft thresholding.  General-mode operator only.
RecoveryOutcome solve_nnm(const MeasurementOperator& op, const Eigen::VectorXd& y, const SolverConfig& cfg = {},
                          const Eigen::MatrixXd* truth = nullptr);

/// min trace(X) subject to A(X) = y, X PSD.  ADMM between the affine slice
/// (with the trace term folded in) and eigenvalue clipping.  Symmetric-mode
/// operator only.
RecoveryOutcome solve_psd_trace(const MeasurementOperator& op, const Eigen::VectorXd& y, const SolverConfig& cfg = {},
                                const Eigen::MatrixXd* truth = nullptr);

/// Some X with A(X) = y, X PSD: Dykstra alternating projections started at 0,
/// which lands on the feasible point of least Frobenius norm.  Symmetric-mode
/// operator only.
RecoveryOutcome solve_psd_feasible(const MeasurementOperator& op, const Eigen::VectorXd& y,
                                   const SolverConfig& cfg = {}, const Eigen::MatrixXd* truth = nullptr);

/// Converged and rel_error <= success_tol (boundary counts as success).
bool success_check(const RecoveryOutcome& outcome, const Eigen::MatrixXd& X0, double success_tol);

double relative_error(const Eigen::MatrixXd& X_hat, const Eigen::MatrixXd& X0);

}  // namespace rankthresh
