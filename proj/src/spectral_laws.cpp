#include "rankthresh/spectral_laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace rankthresh {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;

// The angle-space integrands are trigonometric polynomials of low degree, which
// one 31-point panel already integrates to rounding.  A shallow depth cap stops
// runaway subdivision on tiny intervals, where the relative target is
// unreachable.
template <class F>
double integrate(F&& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 3, 1e-14);
}

// Angle-space bracket for the inverse CDF; stop at ~2 ulp of pi/2.
template <class F>
double bisect_angle(F&& f, double lo, double hi) {
  auto close_enough = [](double a, double b) { return std::abs(b - a) <= 4e-16; };
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::bisect(f, lo, hi, close_enough, max_iter);
  return 0.5 * (a + b);
}

}  // namespace

std::string_view to_string(SpectralLawKind kind) {
  switch (kind) {
    case SpectralLawKind::QuarterCircle: return "quarter-circle";
    case SpectralLawKind::MarcenkoPastur: return "marcenko-pastur";
    case SpectralLawKind::Semicircle: return "semicircle";
  }
  return "unknown";
}

Interval SpectralLaw::support() const {
  switch (kind_) {
    case SpectralLawKind::QuarterCircle: return {0.0, 2.0};
    case SpectralLawKind::MarcenkoPastur: return {0.0, 4.0};
    case SpectralLawKind::Semicircle: return {-2.0, 2.0};
  }
  return {0.0, 0.0};
}

double SpectralLaw::density(double x) const {
  const auto [lo, hi] = support();
  if (x < lo || x > hi) return 0.0;
  switch (kind_) {
    case SpectralLawKind::QuarterCircle: return std::sqrt(std::max(0.0, 4.0 - x * x)) / kPi;
    case SpectralLawKind::MarcenkoPastur:
      if (x <= 0.0) return 0.0;  // integrable pole at the origin
      return std::sqrt(std::max(0.0, 4.0 * x - x * x)) / (2.0 * kPi * x);
    case SpectralLawKind::Semicircle: return std::sqrt(std::max(0.0, 4.0 - x * x)) / (2.0 * kPi);
  }
  return 0.0;
}

// x = 2 sin t (quarter circle, semicircle) or x = 4 sin^2 t (Marcenko-Pastur).
double SpectralLaw::angle_of(double x) const {
  switch (kind_) {
    case SpectralLawKind::QuarterCircle:
    case SpectralLawKind::Semicircle: return std::asin(std::clamp(x / 2.0, -1.0, 1.0));
    case SpectralLawKind::MarcenkoPastur: return std::asin(std::sqrt(std::clamp(x / 4.0, 0.0, 1.0)));
  }
  return 0.0;
}

double SpectralLaw::point_at(double angle) const {
  if (kind_ == SpectralLawKind::MarcenkoPastur) {
    const double s = std::sin(angle);
    return 4.0 * s * s;
  }
  return 2.0 * std::sin(angle);
}

double SpectralLaw::angle_cdf(double angle) const {
  // density(x) dx in the angle variable: (4/pi) cos^2 t for the one-sided
  // laws, (2/pi) cos^2 t for the semicircle.
  const double scale = kind_ == SpectralLawKind::Semicircle ? 2.0 / kPi : 4.0 / kPi;
  const double lo = kind_ == SpectralLawKind::Semicircle ? -kHalfPi : 0.0;
  return integrate([scale](double t) { const double c = std::cos(t); return scale * c * c; }, lo, angle);
}

double SpectralLaw::angle_inv_cdf(double p) const {
  const double lo = kind_ == SpectralLawKind::Semicircle ? -kHalfPi : 0.0;
  if (p <= 0.0) return lo;
  if (p >= 1.0) return kHalfPi;
  return bisect_angle([&](double t) { return angle_cdf(t) - p; }, lo, kHalfPi);
}

double SpectralLaw::cdf(double x) const {
  const auto [lo, hi] = support();
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return std::clamp(angle_cdf(angle_of(x)), 0.0, 1.0);
}

double SpectralLaw::inv_cdf(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("inv_cdf: probability outside [0, 1]");
  const auto [lo, hi] = support();
  if (p == 0.0) return lo;
  if (p == 1.0) return hi;
  return std::clamp(point_at(angle_inv_cdf(p)), lo, hi);
}

double SpectralLaw::upper_tail_moment(int order, double beta) const {
  if (order != 1 && order != 2) throw std::domain_error("upper_tail_moment: order must be 1 or 2");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::domain_error("upper_tail_moment: beta outside [0, 1]");
  if (beta == 0.0) return 0.0;
  const double scale = kind_ == SpectralLawKind::Semicircle ? 2.0 / kPi : 4.0 / kPi;
  const double from = angle_inv_cdf(1.0 - beta);
  return integrate(
      [&](double t) {
        const double c = std::cos(t);
        const double x = point_at(t);
        return (order == 1 ? x : x * x) * scale * c * c;
      },
      from, kHalfPi);
}

double law_cdf(const SpectralLaw& law, double x) { return law.cdf(x); }
double law_inv_cdf(const SpectralLaw& law, double p) { return law.inv_cdf(p); }
double gamma_moment(const SpectralLaw& law, int order, double beta) { return law.upper_tail_moment(order, beta); }

double gamma(double beta) { return SpectralLaw::quarter_circle().upper_tail_moment(1, beta); }
double gamma2(double beta) { return SpectralLaw::quarter_circle().upper_tail_moment(2, beta); }
double quarter_circle_inv_cdf(double p) { return SpectralLaw::quarter_circle().inv_cdf(p); }

double gamma_semicircle(double beta) { return SpectralLaw::semicircle().upper_tail_moment(1, beta); }
double gamma2_semicircle(double beta) { return SpectralLaw::semicircle().upper_tail_moment(2, beta); }
double semicircle_inv_cdf(double p) { return SpectralLaw::semicircle().inv_cdf(p); }

}  // namespace rankthresh
