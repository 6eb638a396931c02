#include "rankthresh/thresholds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "rankthresh/parallel.hpp"
#include "rankthresh/spectral_laws.hpp"

namespace rankthresh {

namespace {

constexpr double kDeltaHi = 1.0 - 1e-9;
constexpr int kScanPoints = 10000;

double gamma_one() { return gamma(1.0); }

void require_beta(double beta, const char* what) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::domain_error(std::string(what) + ": beta outside [0, 1]");
}

double bisect_delta(ThresholdKind kind, double beta, double lo, double hi) {
  auto f = [&](double d) { return delta_residual(kind, beta, d); };
  auto close_enough = [](double a, double b) { return std::abs(b - a) <= 1e-15; };
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::bisect(f, lo, hi, close_enough, max_iter);
  return 0.5 * (a + b);
}

}  // namespace

std::string_view to_string(ThresholdKind kind) {
  switch (kind) {
    case ThresholdKind::Strong: return "strong";
    case ThresholdKind::Sectional: return "sectional";
    case ThresholdKind::Weak: return "weak";
    case ThresholdKind::PsdWeak: return "psd-weak";
    case ThresholdKind::PsdWeakAlt: return "psd-weak-alt";
    case ThresholdKind::PsdStrong: return "psd-strong";
    case ThresholdKind::UniqueWeak: return "unique-weak";
    case ThresholdKind::UniqueStrong: return "unique-strong";
  }
  return "unknown";
}

std::optional<ThresholdKind> parse_threshold_kind(std::string_view name) {
  for (ThresholdKind k : kAllThresholdKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

bool has_delta_equation(ThresholdKind kind) {
  return kind != ThresholdKind::UniqueWeak && kind != ThresholdKind::UniqueStrong;
}

bool is_psd_kind(ThresholdKind kind) {
  switch (kind) {
    case ThresholdKind::Strong:
    case ThresholdKind::Sectional:
    case ThresholdKind::Weak: return false;
    default: return true;
  }
}

double model_complexity(double beta) { return beta * (2.0 - beta); }

bool declares_failure(ThresholdKind kind, double beta) {
  switch (kind) {
    case ThresholdKind::Strong: return gamma_one() - 2.0 * gamma(beta) <= 0.0;
    case ThresholdKind::Sectional:
    case ThresholdKind::PsdStrong:
    case ThresholdKind::UniqueStrong: return beta >= 0.5;
    default: return false;
  }
}

double delta_residual(ThresholdKind kind, double beta, double delta) {
  const double b = beta;
  const double d = delta;
  const double rb = 1.0 - b;
  switch (kind) {
    case ThresholdKind::Strong:
      return (gamma(1.0 - d) - 2.0 * gamma(b)) / (1.0 - d) - quarter_circle_inv_cdf(d);
    case ThresholdKind::Sectional: {
      const double num = std::pow(rb, 1.5) * gamma(1.0 - d) - std::pow(b, 1.5) * gamma_one();
      return num / (std::sqrt(rb) * (1.0 - d * rb)) - quarter_circle_inv_cdf(d);
    }
    case ThresholdKind::Weak:
      return std::pow(rb, 1.5) * gamma(1.0 - d) / (std::sqrt(rb) * (1.0 - d * rb)) - quarter_circle_inv_cdf(d);
    case ThresholdKind::PsdWeak:
      return std::pow(rb, 1.5) * gamma_semicircle(1.0 - d) / (1.0 - rb * d) - std::sqrt(rb) * semicircle_inv_cdf(d);
    case ThresholdKind::PsdWeakAlt:
      return std::pow(rb, 1.5) * gamma(1.0 - d) / (1.0 + b - rb * d) - std::sqrt(rb) * quarter_circle_inv_cdf(d);
    case ThresholdKind::PsdStrong:
      return (gamma(1.0 - d) - gamma(2.0 * b)) / (2.0 * b + 1.0 - d) - quarter_circle_inv_cdf(d);
    default: throw std::domain_error("delta_residual: kind has no delta equation");
  }
}

double mu_at_delta(ThresholdKind kind, double beta, double delta) {
  const double b = beta;
  const double d = delta;
  const double rb = 1.0 - b;
  switch (kind) {
    case ThresholdKind::Strong: {
      const double a = gamma(1.0 - d) - 2.0 * gamma(b);
      return gamma2(1.0 - d) - a * a / (1.0 - d);
    }
    case ThresholdKind::Sectional: {
      const double a = std::pow(rb, 1.5) * gamma(1.0 - d) - std::pow(b, 1.5) * gamma_one();
      return 1.0 - rb * rb * (1.0 - gamma2(1.0 - d)) - a * a / (1.0 - d * rb);
    }
    case ThresholdKind::Weak: {
      const double g = gamma(1.0 - d);
      return 1.0 - rb * rb * (1.0 - gamma2(1.0 - d)) - rb * rb * rb * g * g / (1.0 - d * rb);
    }
    case ThresholdKind::PsdWeak: {
      const double g = gamma_semicircle(1.0 - d);
      return 1.0 - rb * rb * (1.0 - gamma2_semicircle(1.0 - d)) - rb * rb * rb * g * g / (1.0 - rb * d);
    }
    case ThresholdKind::PsdWeakAlt: {
      // The printed second-moment factor is the semicircle one; only the
      // quarter-circle moment reproduces the companion formula above.
      const double g = gamma(1.0 - d);
      return 1.0 - rb * rb * (1.0 - gamma2(1.0 - d) / 2.0) - rb * rb * rb * g * g / (2.0 * (1.0 + b - rb * d));
    }
    case ThresholdKind::PsdStrong: {
      const double a = gamma(1.0 - d) - gamma(2.0 * b);
      return 0.5 * (gamma2(1.0 - d) + gamma2(2.0 * b) - a * a / (2.0 * b + 1.0 - d));
    }
    default: throw std::domain_error("mu_at_delta: kind has no delta equation");
  }
}

std::optional<double> solve_delta(ThresholdKind kind, double beta) {
  if (!has_delta_equation(kind)) throw std::domain_error("solve_delta: kind has no delta equation");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::domain_error("solve_delta: beta outside [0, 1)");
  if (beta == 0.0) return 1.0;
  if (declares_failure(kind, beta)) return std::nullopt;

  double lo = 0.0;
  double hi = kDeltaHi;
  double f_lo = delta_residual(kind, beta, lo);
  double f_hi = delta_residual(kind, beta, hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    bool bracketed = false;
    double prev = f_lo;
    for (int i = 1; i <= kScanPoints && !bracketed; ++i) {
      const double d = kDeltaHi * i / kScanPoints;
      const double f = delta_residual(kind, beta, d);
      if ((f > 0.0) != (prev > 0.0)) {
        lo = kDeltaHi * (i - 1) / kScanPoints;
        hi = d;
        bracketed = true;
      }
      prev = f;
    }
    if (!bracketed) return std::nullopt;
  }
  return bisect_delta(kind, beta, lo, hi);
}

double mu_threshold(ThresholdKind kind, double beta) {
  require_beta(beta, "mu_threshold");
  switch (kind) {
    case ThresholdKind::UniqueWeak: return 1.0 - (1.0 - beta) * (1.0 - beta) / 2.0;
    case ThresholdKind::UniqueStrong: return beta >= 0.5 ? 1.0 : (1.0 + gamma2(2.0 * beta)) / 2.0;
    default: break;
  }
  if (beta == 0.0) return 0.0;
  if (beta == 1.0) return 1.0;
  const auto delta = solve_delta(kind, beta);
  if (!delta) return 1.0;
  return mu_at_delta(kind, beta, *delta);
}

double legacy_mu(ThresholdKind kind, double beta) {
  require_beta(beta, "legacy_mu");
  switch (kind) {
    case ThresholdKind::Strong:
    case ThresholdKind::Sectional:
      if (declares_failure(kind, beta)) return 1.0;
      return mu_at_delta(kind, beta, 0.0);
    case ThresholdKind::Weak: return mu_at_delta(kind, beta, 0.0);
    default: throw std::domain_error("legacy_mu: only strong, sectional and weak have a legacy form");
  }
}

ThresholdPoint threshold_point(ThresholdKind kind, double beta) {
  require_beta(beta, "threshold_point");
  ThresholdPoint p;
  p.beta = beta;
  if (has_delta_equation(kind) && beta < 1.0) p.delta = solve_delta(kind, beta);
  if (p.delta && beta > 0.0)
    p.mu = mu_at_delta(kind, beta, *p.delta);
  else
    p.mu = mu_threshold(kind, beta);
  p.theta = model_complexity(beta);
  if (p.theta > 0.0)
    p.oversampling = p.mu / p.theta;
  else
    p.oversampling = p.mu > 0.0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
  return p;
}

std::vector<ThresholdPoint> threshold_curve(ThresholdKind kind, std::span<const double> betas, unsigned workers) {
  for (std::size_t i = 0; i < betas.size(); ++i) {
    require_beta(betas[i], "threshold_curve");
    if (i > 0 && !(betas[i] > betas[i - 1])) throw std::invalid_argument("threshold_curve: grid not strictly increasing");
  }
  std::vector<ThresholdPoint> out(betas.size());
  parallel_for(betas.size(), workers, [&](std::size_t i) { out[i] = threshold_point(kind, betas[i]); });
  return out;
}

}  // namespace rankthresh
