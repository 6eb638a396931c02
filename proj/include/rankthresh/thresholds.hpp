#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace rankthresh {

enum class ThresholdKind { Strong, Sectional, Weak, PsdWeak, PsdWeakAlt, PsdStrong, UniqueWeak, UniqueStrong };

inline constexpr ThresholdKind kAllThresholdKinds[] = {
    ThresholdKind::Strong,     ThresholdKind::Sectional, ThresholdKind::Weak,       ThresholdKind::PsdWeak,
    ThresholdKind::PsdWeakAlt, ThresholdKind::PsdStrong, ThresholdKind::UniqueWeak, ThresholdKind::UniqueStrong};

std::string_view to_string(ThresholdKind kind);
std::optional<ThresholdKind> parse_threshold_kind(std::string_view name);

/// False for the two closed-form uniqueness kinds.
bool has_delta_equation(ThresholdKind kind);
/// PSD kinds count measurements against n(n+1)/2 instead of n^2.
bool is_psd_kind(ThresholdKind kind);

struct ThresholdPoint {
  double beta = 0.0;
  std::optional<double> delta;
  double mu = 0.0;
  double theta = 0.0;
  double oversampling = 0.0;  // mu / theta; +inf when theta = 0 < mu, NaN when both vanish
};

/// theta = beta (2 - beta).
double model_complexity(double beta);

/// True when the kind declares failure at beta (mu is then exactly 1).
bool declares_failure(ThresholdKind kind, double beta);

/// Left side minus right side of the kind's fixed-point equation in delta.
double delta_residual(ThresholdKind kind, double beta, double delta);

/// The kind's sampling-rate formula evaluated at a given delta.
double mu_at_delta(ThresholdKind kind, double beta, double delta);

/// Root of the fixed-point equation in (0, 1).  Empty when the kind declares
/// failure at beta.  beta = 0 returns the limiting root delta = 1.
/// Throws std::domain_error for beta outside [0, 1) or a kind without an equation.
std::optional<double> solve_delta(ThresholdKind kind, double beta);

/// Smallest sufficient sampling rate.  Throws std::domain_error outside [0, 1].
double mu_threshold(ThresholdKind kind, double beta);

/// Strong, Sectional, Weak with delta pinned to 0.  Other kinds throw
/// std::domain_error.
double legacy_mu(ThresholdKind kind, double beta);

ThresholdPoint threshold_point(ThresholdKind kind, double beta);

/// One point per grid value, grid strictly increasing inside [0, 1].  Points
/// are evaluated on up to `workers` threads; output order follows the grid.
std::vector<ThresholdPoint> threshold_curve(ThresholdKind kind, std::span<const double> betas, unsigned workers = 1);

}  // namespace rankthresh
