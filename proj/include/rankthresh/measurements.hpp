#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "rankthresh/rng.hpp"

namespace rankthresh {

enum class MeasurementMode { General, Symmetric };

/// Dense Gaussian linear map from n x n matrices to R^m.
///
/// General mode acts on vec(X) (column-major, length n^2) with iid standard
/// normal rows.  Symmetric mode acts on svec(X) (length n(n+1)/2) with iid
/// standard normal rows; this is the law of svec((G + G^T) / 2) for Gaussian
/// G, i.e. the Gaussian operator restricted to symmetric matrices.
///
/// The Gram matrix A A^T is factored once at construction and reused for
/// every affine or kernel projection.  A built operator is immutable.
class MeasurementOperator {
 public:
  MeasurementOperator(MeasurementMode mode, Eigen::Index n, Eigen::Index m, std::uint64_t seed);

  MeasurementMode mode() const { return mode_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index m() const { return matrix_.rows(); }
  /// Ambient coordinate dimension D.
  Eigen::Index dim() const { return matrix_.cols(); }
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// vec(X) or svec(X) depending on mode.
  Eigen::VectorXd to_coords(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd from_coords(const Eigen::VectorXd& v) const;

  Eigen::VectorXd apply(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd adjoint(const Eigen::VectorXd& y) const;

  /// (A A^T)^{-1} r with one step of iterative refinement.
  Eigen::VectorXd gram_solve(const Eigen::VectorXd& r) const;
  /// Orthogonal projection of coordinates onto the kernel of A.
  Eigen::VectorXd project_kernel(const Eigen::VectorXd& v) const;
  /// Orthogonal projection of coordinates onto {x : A x = y}.
  Eigen::VectorXd project_affine(const Eigen::VectorXd& v, const Eigen::VectorXd& y) const;

 private:
  MeasurementMode mode_;
  Eigen::Index n_;
  std::uint64_t seed_;
  Eigen::MatrixXd matrix_;
  Eigen::LLT<Eigen::MatrixXd> gram_;
};

/// Kernel projector backed by an orthonormal basis from a Householder QR of
/// A^T.  Keeps whichever of the row-space and kernel bases is smaller, so a
/// projection costs O(D min(m, D - m)).  Worth building when one operator is
/// projected against many times.
class KernelProjector {
 public:
  explicit KernelProjector(const MeasurementOperator& op);

  Eigen::VectorXd project_kernel(const Eigen::VectorXd& v) const;
  /// Projection onto {x : A x = y} given any point of it whose row-space
  /// component is x_row (the least-norm solution).
  Eigen::VectorXd project_affine(const Eigen::VectorXd& v, const Eigen::VectorXd& x_row) const;

 private:
  Eigen::MatrixXd basis_;
  bool kernel_basis_ = false;
};

MeasurementOperator build_operator(MeasurementMode mode, Eigen::Index n, Eigen::Index m, std::uint64_t seed);

struct NullSpaceSample {
  Eigen::MatrixXd W;
  std::uint64_t seed = 0;
  std::uint64_t operator_seed = 0;
};

/// Gaussian matrix projected onto the kernel.  Requires m < D.
NullSpaceSample sample_null_space(const MeasurementOperator& op, std::uint64_t seed);

/// (A + A^T) / sqrt(2) for Gaussian A: off-diagonal variance 1, diagonal variance 2.
Eigen::MatrixXd gue_sample(Eigen::Index n, Engine& eng);
Eigen::MatrixXd gue_sample(Eigen::Index n, std::uint64_t seed);

}  // namespace rankthresh
