#include "rankthresh/recovery_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rankthresh/matrix_ops.hpp"

namespace rankthresh {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Exact recovery is scale-equivariant, so every program is solved for
// y / scale where scale is the norm of the least-norm solution.  This keeps
// the default penalty meaningful whatever the magnitude of X0.
struct Normalized {
  VectorXd y;
  VectorXd x_ls;
  double scale = 0.0;
  double feas_tol = 0.0;  // bound on |A x - y| in normalized units
};

Normalized normalize(const MeasurementOperator& op, const VectorXd& y, const SolverConfig& cfg) {
  Normalized out;
  const VectorXd x_ls = op.matrix().transpose() * op.gram_solve(y);
  out.scale = x_ls.norm();
  if (out.scale == 0.0) {
    out.y = VectorXd::Zero(y.size());
    out.x_ls = VectorXd::Zero(op.dim());
    return out;
  }
  out.y = y / out.scale;
  out.x_ls = x_ls / out.scale;
  // Must hold both relative to the normalized data and, after rescaling,
  // relative to the caller's y.
  out.feas_tol = cfg.primal_tol * std::min(1.0 + out.y.norm(), (1.0 + y.norm()) / out.scale);
  return out;
}

VectorXd soft_threshold_singular(const MeasurementOperator& op, const VectorXd& v, double tau) {
  const MatrixXd M = op.from_coords(v);
  Eigen::BDCSVD<MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd s = (svd.singularValues().array() - tau).cwiseMax(0.0).matrix();
  Eigen::Index k = 0;
  while (k < s.size() && s(k) > 0.0) ++k;
  if (k == 0) return VectorXd::Zero(v.size());
  const MatrixXd R = svd.matrixU().leftCols(k) * s.head(k).asDiagonal() * svd.matrixV().leftCols(k).transpose();
  return op.to_coords(R);
}

VectorXd clip_psd(const MeasurementOperator& op, const VectorXd& v) {
  return op.to_coords(project_psd(op.from_coords(v)));
}

// Scaled-form ADMM for  min c.x + g(z)  s.t.  A x = y,  x = z.
// prox(v, t) must return argmin_z g(z) + |z - v|^2 / (2 t).
template <class Prox>
RecoveryOutcome admm(const MeasurementOperator& op, const Normalized& prob, const VectorXd& c, Prox&& prox,
                     bool output_z, const SolverConfig& cfg) {
  RecoveryOutcome out;
  const KernelProjector proj(op);
  double rho = cfg.penalty;
  VectorXd z = prob.x_ls;
  VectorXd u = VectorXd::Zero(op.dim());
  VectorXd x = z;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    x = proj.project_affine(z - u - c / rho, prob.x_ls);
    const VectorXd z_prev = z;
    z = prox(x + u, 1.0 / rho);
    u += x - z;
    out.iterations = it;

    const double r = (x - z).norm();
    const double s = rho * (z - z_prev).norm();
    const double primal_scale = std::max({1.0, x.norm(), z.norm()});
    const double dual_scale = std::max(1.0, rho * u.norm());
    if (r <= cfg.primal_tol * primal_scale && s <= cfg.dual_tol * dual_scale) {
      const VectorXd& candidate = output_z ? z : x;
      const double res = (op.matrix() * candidate - prob.y).norm();
      if (res <= prob.feas_tol) {
        out.converged = true;
        break;
      }
    }
    // Residual balancing keeps both residuals shrinking at comparable rates.
    if (it % 10 == 0) {
      if (r > 10.0 * s) {
        rho *= 2.0;
        u /= 2.0;
      } else if (s > 10.0 * r) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  out.X_hat = op.from_coords(output_z ? z : x);
  return out;
}

void finish(RecoveryOutcome& out, const MeasurementOperator& op, const VectorXd& y, double scale,
            const MatrixXd* truth) {
  out.X_hat *= scale;
  out.residual = (op.apply(out.X_hat) - y).norm();
  if (truth) out.rel_error = relative_error(out.X_hat, *truth);
}

RecoveryOutcome zero_outcome(const MeasurementOperator& op, const VectorXd& y, const MatrixXd* truth) {
  RecoveryOutcome out;
  out.X_hat = MatrixXd::Zero(op.n(), op.n());
  out.converged = true;
  out.residual = y.norm();
  if (truth) out.rel_error = relative_error(out.X_hat, *truth);
  return out;
}

void require(const MeasurementOperator& op, const VectorXd& y, MeasurementMode mode, const char* who) {
  if (op.mode() != mode) throw std::invalid_argument(std::string(who) + ": wrong operator mode");
  if (y.size() != op.m()) throw std::invalid_argument(std::string(who) + ": measurement length mismatch");
}

}  // namespace

double relative_error(const MatrixXd& X_hat, const MatrixXd& X0) {
  const double base = X0.norm();
  const double diff = (X_hat - X0).norm();
  return base > 0.0 ? diff / base : diff;
}

RecoveryOutcome solve_nnm(const MeasurementOperator& op, const VectorXd& y, const SolverConfig& cfg,
                          const MatrixXd* truth) {
  require(op, y, MeasurementMode::General, "solve_nnm");
  const Normalized prob = normalize(op, y, cfg);
  if (prob.scale == 0.0) return zero_outcome(op, y, truth);
  const VectorXd c = VectorXd::Zero(op.dim());
  auto prox = [&](const VectorXd& v, double t) { return soft_threshold_singular(op, v, t); };
  RecoveryOutcome out = admm(op, prob, c, prox, false, cfg);
  out.objective = nuclear_norm(out.X_hat) * prob.scale;
  finish(out, op, y, prob.scale, truth);
  return out;
}

RecoveryOutcome solve_psd_trace(const MeasurementOperator& op, const VectorXd& y, const SolverConfig& cfg,
                                const MatrixXd* truth) {
  require(op, y, MeasurementMode::Symmetric, "solve_psd_trace");
  const Normalized prob = normalize(op, y, cfg);
  if (prob.scale == 0.0) return zero_outcome(op, y, truth);
  const VectorXd c = svec(MatrixXd::Identity(op.n(), op.n()));
  auto prox = [&](const VectorXd& v, double) { return clip_psd(op, v); };
  RecoveryOutcome out = admm(op, prob, c, prox, true, cfg);
  out.objective = out.X_hat.trace() * prob.scale;
  finish(out, op, y, prob.scale, truth);
  return out;
}

RecoveryOutcome solve_psd_feasible(const MeasurementOperator& op, const VectorXd& y, const SolverConfig& cfg,
                                   const MatrixXd* truth) {
  require(op, y, MeasurementMode::Symmetric, "solve_psd_feasible");
  const Normalized prob = normalize(op, y, cfg);
  if (prob.scale == 0.0) return zero_outcome(op, y, truth);
  RecoveryOutcome out;
  const KernelProjector proj(op);
  VectorXd z = VectorXd::Zero(op.dim());
  VectorXd p = VectorXd::Zero(op.dim());
  VectorXd q = VectorXd::Zero(op.dim());
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const VectorXd x = proj.project_affine(z + p, prob.x_ls);
    p += z - x;
    const VectorXd z_next = clip_psd(op, x + q);
    q += x - z_next;
    const double gap = (x - z_next).norm();
    const double step = (z_next - z).norm();
    z = z_next;
    out.iterations = it;
    if (gap <= 1e-9 * std::max(1.0, z.norm()) && step <= cfg.dual_tol * std::max(1.0, z.norm())) {
      const double res = (op.matrix() * z - prob.y).norm();
      if (res <= prob.feas_tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.X_hat = op.from_coords(z);
  out.objective = out.X_hat.trace() * prob.scale;
  finish(out, op, y, prob.scale, truth);
  return out;
}

bool success_check(const RecoveryOutcome& outcome, const MatrixXd& X0, double success_tol) {
  if (!outcome.converged) return false;
  return relative_error(outcome.X_hat, X0) <= success_tol;
}

}  // namespace rankthresh
