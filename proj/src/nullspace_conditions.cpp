#include "rankthresh/nullspace_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rankthresh/rng.hpp"

namespace rankthresh {

namespace {

using Eigen::MatrixXd;

bool symmetric_exactly(const MatrixXd& W) { return W.rows() == W.cols() && W == W.transpose(); }

// Symmetric up to rounding; anything larger counts as "not hermitian".
bool symmetric_enough(const MatrixXd& W) { return is_symmetric(W, 1e-12); }

void need(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// i-th smallest eigenvalue (0-based) of a symmetric matrix.
double ascending_eigenvalue(const MatrixXd& S, Eigen::Index i) {
  const Eigen::VectorXd desc = eigenvalues_desc(S);
  return desc(desc.size() - 1 - i);
}

double smallest_eigenvalue(const MatrixXd& S) {
  if (S.size() == 0) return std::numeric_limits<double>::infinity();
  return ascending_eigenvalue(S, 0);
}

}  // namespace

std::string_view to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::StrongSquare: return "strong";
    case ConditionKind::Sectional: return "sectional";
    case ConditionKind::WeakFixedX: return "weak";
    case ConditionKind::PsdWeak: return "psd-weak";
    case ConditionKind::PsdStrong: return "psd-strong";
    case ConditionKind::PsdUniqueWeak: return "psd-unique-weak";
    case ConditionKind::PsdUniqueStrong: return "psd-unique-strong";
  }
  return "unknown";
}

std::optional<ConditionKind> parse_condition_kind(std::string_view name) {
  for (ConditionKind k : kAllConditionKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

bool is_psd_condition(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::StrongSquare:
    case ConditionKind::Sectional:
    case ConditionKind::WeakFixedX: return false;
    default: return true;
  }
}

ConditionContext ConditionContext::for_rank(int r) {
  ConditionContext ctx;
  ctx.r = r;
  return ctx;
}

ConditionContext ConditionContext::for_support(const MatrixXd& P, const MatrixXd& Q) {
  ConditionContext ctx;
  SupportPair<double> sp;
  sp.P = P;
  sp.Q = Q;
  sp.rank = static_cast<int>(std::lround(P.trace()));
  ctx.r = sp.rank;
  ctx.support = std::move(sp);
  return ctx;
}

ConditionContext ConditionContext::for_factors(const MatrixXd& U, const MatrixXd& V) {
  ConditionContext ctx;
  ctx.r = static_cast<int>(U.cols());
  ctx.U = U;
  ctx.V = V;
  ctx.U_bar = orthogonal_complement(U);
  ctx.V_bar = orthogonal_complement(V);
  SupportPair<double> sp;
  sp.P = U * U.transpose();
  sp.Q = V * V.transpose();
  sp.rank = ctx.r;
  ctx.support = std::move(sp);
  return ctx;
}

ConditionContext ConditionContext::canonical(Eigen::Index n, int r) {
  const MatrixXd E = MatrixXd::Identity(n, n).leftCols(r);
  return for_factors(E, E);
}

ConditionResult evaluate_condition(ConditionKind kind, const MatrixXd& W, const ConditionContext& ctx, double tol) {
  const double scale = W.norm();
  need(scale > 0.0, "evaluate_condition: W must be nonzero");
  need(W.rows() == W.cols(), "evaluate_condition: W must be square");
  const Eigen::Index n = W.rows();

  double slack = 0.0;
  if (is_psd_condition(kind) && !symmetric_enough(W)) {
    // Not hermitian: the perturbed point leaves the PSD cone's span.
    slack = (W - W.transpose()).norm();
    return {slack / scale > tol, slack / scale};
  }
  const MatrixXd S = symmetric_exactly(W) ? W : MatrixXd((W + W.transpose()) / 2.0);

  switch (kind) {
    case ConditionKind::StrongSquare: {
      need(ctx.r >= 0 && ctx.r <= n, "strong condition needs 0 <= r <= n");
      const Eigen::VectorXd s = singular_values_desc(W);
      slack = s.sum() - 2.0 * s.head(ctx.r).sum();
      break;
    }
    case ConditionKind::Sectional: {
      need(ctx.support.has_value(), "sectional condition needs a support pair");
      const MatrixXd& P = ctx.support->P;
      const MatrixXd& Q = ctx.support->Q;
      const MatrixXd I = MatrixXd::Identity(n, n);
      slack = nuclear_norm((I - P) * W * (I - Q)) - nuclear_norm(P * W * Q);
      break;
    }
    case ConditionKind::WeakFixedX: {
      need(ctx.U.rows() == n && ctx.V.rows() == n && ctx.U_bar.rows() == n && ctx.V_bar.rows() == n,
           "weak condition needs U, V and their completions");
      const double lower = ctx.U_bar.cols() > 0 ? nuclear_norm(ctx.U_bar.transpose() * W * ctx.V_bar) : 0.0;
      slack = (ctx.U.transpose() * W * ctx.V).trace() + lower;
      break;
    }
    case ConditionKind::PsdWeak: {
      need(ctx.U_bar.rows() == n, "psd weak condition needs U_bar");
      const double neg = -smallest_eigenvalue(ctx.U_bar.transpose() * S * ctx.U_bar);
      slack = std::max(S.trace(), neg);
      break;
    }
    case ConditionKind::PsdStrong: {
      need(ctx.r >= 0 && ctx.r <= n, "psd strong condition needs 0 <= r <= n");
      const double neg = ctx.r < n ? -ascending_eigenvalue(S, ctx.r) : -std::numeric_limits<double>::infinity();
      slack = std::max(S.trace(), neg);
      break;
    }
    case ConditionKind::PsdUniqueWeak: {
      need(ctx.U_bar.rows() == n, "psd uniqueness condition needs U_bar");
      slack = -smallest_eigenvalue(ctx.U_bar.transpose() * S * ctx.U_bar);
      break;
    }
    case ConditionKind::PsdUniqueStrong: {
      need(ctx.r >= 0 && ctx.r <= n, "psd unique strong condition needs 0 <= r <= n");
      slack = ctx.r < n ? -ascending_eigenvalue(S, ctx.r) : -std::numeric_limits<double>::infinity();
      break;
    }
  }
  const double margin = slack / scale;
  return {margin > tol, margin};
}

bool check_condition(ConditionKind kind, const MatrixXd& W, const ConditionContext& ctx, double tol) {
  return evaluate_condition(kind, W, ctx, tol).holds;
}

MatrixXd strong_counterexample(const MatrixXd& W, int r, double tol) {
  if (check_condition(ConditionKind::StrongSquare, W, ConditionContext::for_rank(r), tol))
    throw std::invalid_argument("strong_counterexample: W satisfies the strong condition");
  return -truncate_rank(W, r);
}

KernelSearchResult search_weak_violation(const MeasurementOperator& op, const ConditionContext& ctx, int starts,
                                         int steps, std::uint64_t seed) {
  const Eigen::Index n = op.n();
  need(op.mode() == MeasurementMode::General, "search_weak_violation: needs a general operator");
  need(ctx.U.rows() == n && ctx.U_bar.rows() == n, "search_weak_violation: needs U, V and completions");
  need(op.m() < op.dim(), "search_weak_violation: kernel is trivial");

  auto to_kernel = [&](const MatrixXd& M) { return op.from_coords(op.project_kernel(op.to_coords(M))); };
  auto value = [&](const MatrixXd& W) { return evaluate_condition(ConditionKind::WeakFixedX, W, ctx, 0.0).margin; };
  const MatrixXd UVt = ctx.U * ctx.V.transpose();
  auto subgradient = [&](const MatrixXd& W) -> MatrixXd {
    MatrixXd g = UVt;
    if (ctx.U_bar.cols() > 0) {
      Eigen::BDCSVD<MatrixXd> svd(ctx.U_bar.transpose() * W * ctx.V_bar, Eigen::ComputeThinU | Eigen::ComputeThinV);
      g += ctx.U_bar * svd.matrixU() * svd.matrixV().transpose() * ctx.V_bar.transpose();
    }
    return g;
  };

  KernelSearchResult best;
  best.margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    MatrixXd W = sample_null_space(op, derive_seed(seed, {static_cast<std::uint64_t>(s)})).W;
    W /= W.norm();
    for (int k = 0; k <= steps; ++k) {
      const double f = value(W);
      if (f < best.margin) {
        best.margin = f;
        best.W = W;
      }
      if (k == steps) break;
      MatrixXd g = to_kernel(subgradient(W));
      g -= (g.cwiseProduct(W).sum()) * W;  // tangent to the sphere
      const double gn = g.norm();
      if (gn == 0.0) break;
      W -= (0.5 / std::sqrt(k + 1.0)) * g / gn;
      W = to_kernel(W);
      W /= W.norm();
    }
  }
  return best;
}

}  // namespace rankthresh
