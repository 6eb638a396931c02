#include "rankthresh/mesh_width.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rankthresh/matrix_ops.hpp"
#include "rankthresh/measurements.hpp"
#include "rankthresh/parallel.hpp"
#include "rankthresh/rng.hpp"

namespace rankthresh {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Every bound here has the form
//   sqrt(base_sq - sum_{i<=c} a_i^2 - A_c^2 / (L - c)),   A_c = A_0 - sum_{i<=c} a_i,
// where `a` (increasing) holds the entries that may be dropped.  It is the
// dual bound with multiplier nu = A_c / (L - c), valid when nu >= 0 and nu
// is at least the last dropped entry.  The largest such c is used.
BoundDetail dual_bound(const VectorXd& a, double A0, Eigen::Index L, double base_sq, double frobenius) {
  BoundDetail out;
  const Eigen::Index c_max = std::min<Eigen::Index>(a.size(), L - 1);
  int best = -1;
  double best_A = 0.0;
  double best_drop_sq = 0.0;
  double prefix = 0.0;
  double prefix_sq = 0.0;
  for (Eigen::Index c = 0; c <= c_max; ++c) {
    if (c > 0) {
      prefix += a(c - 1);
      prefix_sq += a(c - 1) * a(c - 1);
    }
    const double A = A0 - prefix;
    const double last = c > 0 ? std::max(0.0, a(c - 1)) : 0.0;
    if (A >= static_cast<double>(L - c) * last) {
      best = static_cast<int>(c);
      best_A = A;
      best_drop_sq = prefix_sq;
    }
  }
  if (best < 0) {
    out.value = frobenius;
    out.fallback = true;
    return out;
  }
  out.c = best;
  const double v = base_sq - best_drop_sq - best_A * best_A / static_cast<double>(L - best);
  out.value = std::min(frobenius, std::sqrt(std::max(0.0, v)));
  return out;
}

BoundDetail fallback(double frobenius) {
  BoundDetail out;
  out.value = frobenius;
  out.fallback = true;
  return out;
}

VectorXd ascending(const VectorXd& desc) { return desc.reverse(); }

}  // namespace

int rank_for(double beta, Eigen::Index n) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::domain_error("rank_for: beta outside [0, 1]");
  return static_cast<int>(std::clamp<long>(std::lround(beta * static_cast<double>(n)), 0, n));
}

BoundDetail sample_bound_detail(ThresholdKind kind, const MatrixXd& H, double beta) {
  if (H.rows() != H.cols()) throw std::invalid_argument("sample_bound: H must be square");
  const Eigen::Index n = H.rows();
  const int r = rank_for(beta, n);
  const Eigen::Index k = n - r;
  const double frob = H.norm();
  const double frob_sq = H.squaredNorm();
  BoundDetail out;

  switch (kind) {
    case ThresholdKind::Strong: {
      const VectorXd h = ascending(singular_values_desc(H));
      const double A0 = h.head(k).sum() - h.tail(r).sum();
      out = A0 > 0.0 ? dual_bound(h.head(k), A0, n, h.squaredNorm(), frob) : fallback(frob);
      break;
    }
    case ThresholdKind::Sectional: {
      const VectorXd h1 = singular_values_desc(H.topLeftCorner(r, r));
      const VectorXd h2 = ascending(singular_values_desc(H.bottomRightCorner(k, k)));
      const double A0 = h2.sum() - h1.sum();
      out = A0 >= 0.0 ? dual_bound(h2, A0, n, frob_sq, frob) : fallback(frob);
      break;
    }
    case ThresholdKind::Weak: {
      const VectorXd h2 = ascending(singular_values_desc(H.bottomRightCorner(k, k)));
      const double A0 = H.topLeftCorner(r, r).trace() + h2.sum();
      out = A0 > 0.0 ? dual_bound(h2, A0, n, frob_sq, frob) : fallback(frob);
      break;
    }
    case ThresholdKind::PsdWeak: {
      if (!is_symmetric(H)) throw std::invalid_argument("sample_bound: PSD kinds need symmetric H");
      const VectorXd h2 = ascending(eigenvalues_desc(H.bottomRightCorner(k, k)));
      const double A0 = H.topLeftCorner(r, r).trace() + h2.sum();
      out = dual_bound(h2, A0, n, frob_sq, frob);
      break;
    }
    case ThresholdKind::PsdStrong: {
      if (!is_symmetric(H)) throw std::invalid_argument("sample_bound: PSD kinds need symmetric H");
      const VectorXd lambda = eigenvalues_desc(H);
      const Eigen::Index pos = (lambda.array() > 0.0).count();
      const Eigen::Index neg = (lambda.array() < 0.0).count();
      if (neg < r) {
        out = fallback(frob);
        break;
      }
      const VectorXd h1 = ascending(lambda.head(pos));
      const VectorXd h2 = -lambda.tail(r);  // magnitudes of the r most negative, increasing
      const double A0 = h1.sum() - h2.sum();
      if (A0 <= 0.0) {
        out = fallback(frob);
        break;
      }
      out = dual_bound(h1, A0, pos + r, h1.squaredNorm() + h2.squaredNorm(), frob);
      break;
    }
    default: throw std::invalid_argument("sample_bound: unsupported kind");
  }
  out.r = r;
  return out;
}

double sample_bound(ThresholdKind kind, const MatrixXd& H, double beta) {
  return sample_bound_detail(kind, H, beta).value;
}

WidthEstimate estimate_width(ThresholdKind kind, Eigen::Index n, double beta, int samples, std::uint64_t seed,
                             unsigned workers) {
  if (samples < 2) throw std::invalid_argument("estimate_width: need at least two samples");
  if (n < 1) throw std::invalid_argument("estimate_width: n must be positive");
  const bool psd = is_psd_kind(kind);
  std::vector<double> values(static_cast<std::size_t>(samples));
  parallel_for(values.size(), workers, [&](std::size_t i) {
    Engine eng = make_engine(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    const MatrixXd H = psd ? gue_sample(n, eng) : gaussian_matrix(n, n, eng);
    values[i] = sample_bound(kind, H, beta) / (psd ? std::sqrt(2.0) : 1.0);
  });
  WidthEstimate est;
  est.kind = kind;
  est.n = n;
  est.beta = beta;
  est.samples = samples;
  const Eigen::Map<const VectorXd> v(values.data(), samples);
  est.mean_bound = v.mean();
  const double var = (v.array() - est.mean_bound).square().sum() / (samples - 1);
  est.std_err = std::sqrt(var / samples);
  const double D = psd ? static_cast<double>(n * (n + 1)) / 2.0 : static_cast<double>(n * n);
  est.mu_implied = est.mean_bound * est.mean_bound / D;
  return est;
}

}  // namespace rankthresh
