#pragma once

#include <string_view>

namespace rankthresh {

enum class SpectralLawKind { QuarterCircle, MarcenkoPastur, Semicircle };

struct Interval {
  double lo;
  double hi;
};

/// One of the three limiting spectral densities of Gaussian ensembles.
///
/// QuarterCircle: singular values of a square iid Gaussian matrix scaled by
/// 1/sqrt(n), density sqrt(4 - x^2) / pi on [0, 2].
/// MarcenkoPastur: their squares scaled by 1/n, density
/// sqrt(4x - x^2) / (2 pi x) on [0, 4].
/// Semicircle: eigenvalues of a GUE sample scaled by 1/sqrt(n), density
/// sqrt(4 - x^2) / (2 pi) on [-2, 2].
///
/// Every integral is evaluated in an angle variable (x = 2 sin t, or
/// x = 4 sin^2 t for Marcenko-Pastur) in which the square-root endpoint
/// singularities disappear and the integrands are trigonometric polynomials.
class SpectralLaw {
 public:
  explicit constexpr SpectralLaw(SpectralLawKind kind) : kind_(kind) {}

  static constexpr SpectralLaw quarter_circle() { return SpectralLaw(SpectralLawKind::QuarterCircle); }
  static constexpr SpectralLaw marcenko_pastur() { return SpectralLaw(SpectralLawKind::MarcenkoPastur); }
  static constexpr SpectralLaw semicircle() { return SpectralLaw(SpectralLawKind::Semicircle); }

  constexpr SpectralLawKind kind() const { return kind_; }
  Interval support() const;

  /// Density; zero outside the support.
  double density(double x) const;
  /// CDF; clamps to {0, 1} outside the support.
  double cdf(double x) const;
  /// Inverse CDF.  Throws std::domain_error for p outside [0, 1].
  double inv_cdf(double p) const;
  /// Integral of x^order over the top-beta probability mass.
  double upper_tail_moment(int order, double beta) const;

 private:
  double angle_of(double x) const;
  double point_at(double angle) const;
  double angle_cdf(double angle) const;
  double angle_inv_cdf(double p) const;

  SpectralLawKind kind_;
};

std::string_view to_string(SpectralLawKind kind);

double law_cdf(const SpectralLaw& law, double x);
double law_inv_cdf(const SpectralLaw& law, double p);

/// Upper-tail partial moment of order 1 or 2 over the top-beta mass.
/// Throws std::domain_error for beta outside [0, 1] or order not in {1, 2}.
double gamma_moment(const SpectralLaw& law, int order, double beta);

// Shorthands for the quarter-circle moments every threshold formula uses.
double gamma(double beta);
double gamma2(double beta);
double quarter_circle_inv_cdf(double p);

// Semicircle counterparts, by direct quadrature.
double gamma_semicircle(double beta);
double gamma2_semicircle(double beta);
double semicircle_inv_cdf(double p);

}  // namespace rankthresh
