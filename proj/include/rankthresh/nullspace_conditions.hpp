#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "rankthresh/matrix_ops.hpp"
#include "rankthresh/measurements.hpp"

namespace rankthresh {

enum class ConditionKind { StrongSquare, Sectional, WeakFixedX, PsdWeak, PsdStrong, PsdUniqueWeak, PsdUniqueStrong };

inline constexpr ConditionKind kAllConditionKinds[] = {
    ConditionKind::StrongSquare, ConditionKind::Sectional,     ConditionKind::WeakFixedX,
    ConditionKind::PsdWeak,      ConditionKind::PsdStrong,     ConditionKind::PsdUniqueWeak,
    ConditionKind::PsdUniqueStrong};

std::string_view to_string(ConditionKind kind);
std::optional<ConditionKind> parse_condition_kind(std::string_view name);
bool is_psd_condition(ConditionKind kind);

/// What each condition needs to know about the matrix being recovered.
///   StrongSquare, PsdStrong, PsdUniqueStrong: rank r
///   Sectional: support projectors P, Q
///   WeakFixedX: partial unitaries U, V and completions U_bar, V_bar
///   PsdWeak, PsdUniqueWeak: U and U_bar
struct ConditionContext {
  int r = -1;
  std::optional<SupportPair<double>> support;
  Eigen::MatrixXd U, V, U_bar, V_bar;

  static ConditionContext for_rank(int r);
  static ConditionContext for_support(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q);
  /// Completions are computed here; U and V need orthonormal columns.
  static ConditionContext for_factors(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V);
  /// Context for X = diag(positive r x r, 0): U = V = first r unit vectors.
  static ConditionContext canonical(Eigen::Index n, int r);
};

struct ConditionResult {
  bool holds = false;
  /// Signed slack of the predicate divided by |W|_F; positive when it holds.
  double margin = 0.0;
};

/// Evaluates one null-space condition on a single direction W != 0.  Strict
/// inequalities need margin > tol.  Under PSD kinds a non-symmetric W passes.
/// Throws std::invalid_argument for W = 0 or a context missing what the kind needs.
ConditionResult evaluate_condition(ConditionKind kind, const Eigen::MatrixXd& W, const ConditionContext& ctx,
                                   double tol = 1e-9);

bool check_condition(ConditionKind kind, const Eigen::MatrixXd& W, const ConditionContext& ctx, double tol = 1e-9);

/// X = -W_r, the rank-r truncation of -W.  When W violates the rank-r strong
/// condition, X + W has nuclear norm at most that of X.  Throws
/// std::invalid_argument if W satisfies the condition.
Eigen::MatrixXd strong_counterexample(const Eigen::MatrixXd& W, int r, double tol = 1e-9);

struct KernelSearchResult {
  Eigen::MatrixXd W;    // unit Frobenius norm, in the kernel
  double margin = 0.0;  // trace(U^T W V) + |U_bar^T W V_bar|_*, smallest found
};

/// Looks for a kernel direction violating the fixed-X weak condition.  The
/// map W -> trace(U^T W V) + |U_bar^T W V_bar|_* is convex, so each of
/// `starts` random kernel samples is driven downhill on the unit sphere of
/// the kernel by projected subgradient steps.  Returns the smallest value seen.
KernelSearchResult search_weak_violation(const MeasurementOperator& op, const ConditionContext& ctx, int starts,
                                         int steps, std::uint64_t seed);

}  // namespace rankthresh
