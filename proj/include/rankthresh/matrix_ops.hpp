#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

namespace rankthresh {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class SpectrumKind { Singular, Eigen };

/// Singular values or eigenvalues, stored in descending order.  `increasing()`
/// gives the ascending view used when a formula sums the smallest entries first.
template <class Scalar>
struct Spectrum {
  Vec<Scalar> values;
  SpectrumKind kind = SpectrumKind::Singular;

  auto increasing() const { return values.reverse(); }
  Eigen::Index size() const { return values.size(); }
};

struct Inertia {
  int neg = 0;
  int zero = 0;
  int pos = 0;
};

template <class Scalar>
struct SupportPair {
  Mat<Scalar> P;
  Mat<Scalar> Q;
  int rank = 0;
};

template <class Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& X, typename Derived::Scalar rel_tol = 1e-10) {
  if (X.rows() != X.cols()) return false;
  const auto scale = X.norm();
  return (X - X.transpose()).norm() <= rel_tol * scale;
}

template <class Derived>
Vec<typename Derived::Scalar> singular_values_desc(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  if (X.size() == 0) return Vec<Scalar>();
  Eigen::BDCSVD<Mat<Scalar>> svd(X.eval());
  return svd.singularValues();  // already descending
}

/// Eigenvalues of a symmetric matrix, descending.
template <class Derived>
Vec<typename Derived::Scalar> eigenvalues_desc(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  if (X.size() == 0) return Vec<Scalar>();
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(X.eval(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

template <class Derived>
Spectrum<typename Derived::Scalar> ordered_spectrum(const Eigen::MatrixBase<Derived>& X, SpectrumKind kind) {
  if (kind == SpectrumKind::Eigen) {
    if (!is_symmetric(X)) throw std::invalid_argument("ordered_spectrum: eigen spectrum needs a symmetric matrix");
    return {eigenvalues_desc(X), kind};
  }
  return {singular_values_desc(X), kind};
}

/// Sum of the k largest singular values, 1 <= k <= min(rows, cols).
template <class Derived>
typename Derived::Scalar ky_fan_norm(const Eigen::MatrixBase<Derived>& X, Eigen::Index k) {
  const Eigen::Index q = std::min(X.rows(), X.cols());
  if (k < 1 || k > q) throw std::out_of_range("ky_fan_norm: k outside [1, min(rows, cols)]");
  return singular_values_desc(X).head(k).sum();
}

template <class Derived>
typename Derived::Scalar nuclear_norm(const Eigen::MatrixBase<Derived>& X) {
  if (X.size() == 0) return 0;
  return singular_values_desc(X).sum();
}

inline Eigen::Index svec_size(Eigen::Index n) { return n * (n + 1) / 2; }

/// Dimension n with n(n+1)/2 = len, or -1 when len is not triangular.
inline Eigen::Index svec_dimension(Eigen::Index len) {
  auto n = static_cast<Eigen::Index>(std::floor((std::sqrt(8.0 * static_cast<double>(len) + 1.0) - 1.0) / 2.0));
  while (svec_size(n) < len) ++n;
  return svec_size(n) == len ? n : -1;
}

/// Column-major lower triangle with the off-diagonal entries scaled by sqrt(2),
/// so that svec(A).dot(svec(B)) = trace(A B).  Only the lower triangle is read.
template <class Derived>
Vec<typename Derived::Scalar> svec(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  if (A.rows() != A.cols()) throw std::invalid_argument("svec: matrix is not square");
  const Eigen::Index n = A.rows();
  const Scalar root2 = std::sqrt(Scalar(2));
  Vec<Scalar> v(svec_size(n));
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    v(k++) = A(j, j);
    for (Eigen::Index i = j + 1; i < n; ++i) v(k++) = root2 * A(i, j);
  }
  return v;
}

template <class Derived>
Mat<typename Derived::Scalar> ivec(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = svec_dimension(v.size());
  if (n < 0) throw std::invalid_argument("ivec: length is not n(n+1)/2");
  const Scalar root2 = std::sqrt(Scalar(2));
  Mat<Scalar> A(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    A(j, j) = v(k++);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      A(i, j) = v(k++) / root2;
      A(j, i) = A(i, j);
    }
  }
  return A;
}

/// Eigenvalues with |lambda| <= zero_tol * |lambda|_max count as zero.
template <class Derived>
Inertia inertia(const Eigen::MatrixBase<Derived>& X, typename Derived::Scalar zero_tol = 1e-8) {
  Inertia out;
  const auto lambda = eigenvalues_desc(X);
  if (lambda.size() == 0) return out;
  const auto cutoff = zero_tol * lambda.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff)
      ++out.pos;
    else if (lambda(i) < -cutoff)
      ++out.neg;
    else
      ++out.zero;
  }
  return out;
}

/// Column and row space projectors of X; rank counts sigma_i > rank_tol * sigma_1.
template <class Derived>
SupportPair<typename Derived::Scalar> support_pair(const Eigen::MatrixBase<Derived>& X,
                                                   typename Derived::Scalar rank_tol = 1e-8) {
  using Scalar = typename Derived::Scalar;
  SupportPair<Scalar> out;
  out.P = Mat<Scalar>::Zero(X.rows(), X.rows());
  out.Q = Mat<Scalar>::Zero(X.cols(), X.cols());
  if (X.size() == 0) return out;
  Eigen::BDCSVD<Mat<Scalar>> svd(X.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == Scalar(0)) return out;
  int r = 0;
  while (r < s.size() && s(r) > rank_tol * s(0)) ++r;
  const auto U = svd.matrixU().leftCols(r);
  const auto V = svd.matrixV().leftCols(r);
  out.P = U * U.transpose();
  out.Q = V * V.transpose();
  out.rank = r;
  return out;
}

/// Orthonormal basis of the orthogonal complement of the columns of U, which
/// must themselves be orthonormal.  [U, result] is then orthogonal.
template <class Derived>
Mat<typename Derived::Scalar> orthogonal_complement(const Eigen::MatrixBase<Derived>& U) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = U.rows();
  const Eigen::Index r = U.cols();
  if (r == 0) return Mat<Scalar>::Identity(n, n);
  Eigen::HouseholderQR<Mat<Scalar>> qr(U.eval());
  Mat<Scalar> Q = qr.householderQ() * Mat<Scalar>::Identity(n, n);
  return Q.rightCols(n - r);
}

/// Keep the k largest singular values of X, zero the rest.
template <class Derived>
Mat<typename Derived::Scalar> truncate_rank(const Eigen::MatrixBase<Derived>& X, Eigen::Index k) {
  using Scalar = typename Derived::Scalar;
  Eigen::BDCSVD<Mat<Scalar>> svd(X.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  k = std::clamp<Eigen::Index>(k, 0, svd.singularValues().size());
  return svd.matrixU().leftCols(k) * svd.singularValues().head(k).asDiagonal() *
         svd.matrixV().leftCols(k).transpose();
}

/// Nearest PSD matrix in Frobenius norm: clip negative eigenvalues to zero.
template <class Derived>
Mat<typename Derived::Scalar> project_psd(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  Mat<Scalar> S = (X + X.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(S);
  const Vec<Scalar> lambda = es.eigenvalues().cwiseMax(Scalar(0));
  return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace rankthresh
