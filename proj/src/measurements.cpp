#include "rankthresh/measurements.hpp"

#include <cmath>
#include <stdexcept>

#include "rankthresh/matrix_ops.hpp"

namespace rankthresh {

namespace {

Eigen::Index coord_dim(MeasurementMode mode, Eigen::Index n) {
  return mode == MeasurementMode::General ? n * n : svec_size(n);
}

}  // namespace

MeasurementOperator::MeasurementOperator(MeasurementMode mode, Eigen::Index n, Eigen::Index m, std::uint64_t seed)
    : mode_(mode), n_(n), seed_(seed) {
  if (n < 1) throw std::invalid_argument("MeasurementOperator: n must be positive");
  const Eigen::Index d = coord_dim(mode, n);
  if (m < 1 || m > d) throw std::invalid_argument("MeasurementOperator: need 1 <= m <= D");
  Engine eng = make_engine(seed);
  matrix_ = gaussian_matrix(m, d, eng);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(matrix_);
  gram_.compute(gram);
  if (gram_.info() != Eigen::Success) throw std::runtime_error("MeasurementOperator: Gram matrix is singular");
}

Eigen::VectorXd MeasurementOperator::to_coords(const Eigen::MatrixXd& X) const {
  if (X.rows() != n_ || X.cols() != n_) throw std::invalid_argument("to_coords: shape mismatch");
  if (mode_ == MeasurementMode::General) return X.reshaped();
  return svec(X);
}

Eigen::MatrixXd MeasurementOperator::from_coords(const Eigen::VectorXd& v) const {
  if (v.size() != dim()) throw std::invalid_argument("from_coords: length mismatch");
  if (mode_ == MeasurementMode::General) return v.reshaped(n_, n_);
  return ivec(v);
}

Eigen::VectorXd MeasurementOperator::apply(const Eigen::MatrixXd& X) const { return matrix_ * to_coords(X); }

Eigen::MatrixXd MeasurementOperator::adjoint(const Eigen::VectorXd& y) const {
  if (y.size() != m()) throw std::invalid_argument("adjoint: length mismatch");
  return from_coords(matrix_.transpose() * y);
}

Eigen::VectorXd MeasurementOperator::gram_solve(const Eigen::VectorXd& r) const {
  Eigen::VectorXd z = gram_.solve(r);
  const Eigen::VectorXd defect = r - matrix_ * (matrix_.transpose() * z);
  z += gram_.solve(defect);
  return z;
}

Eigen::VectorXd MeasurementOperator::project_kernel(const Eigen::VectorXd& v) const {
  return v - matrix_.transpose() * gram_solve(matrix_ * v);
}

Eigen::VectorXd MeasurementOperator::project_affine(const Eigen::VectorXd& v, const Eigen::VectorXd& y) const {
  return v - matrix_.transpose() * gram_solve(matrix_ * v - y);
}

KernelProjector::KernelProjector(const MeasurementOperator& op) {
  const Eigen::Index D = op.dim();
  const Eigen::Index m = op.m();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(op.matrix().transpose());
  kernel_basis_ = D - m < m;
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(D, kernel_basis_ ? D - m : m);
  if (kernel_basis_)
    sel.bottomRows(D - m).setIdentity();
  else
    sel.topRows(m).setIdentity();
  basis_ = qr.householderQ() * sel;
}

Eigen::VectorXd KernelProjector::project_kernel(const Eigen::VectorXd& v) const {
  if (kernel_basis_) return basis_ * (basis_.transpose() * v);
  return v - basis_ * (basis_.transpose() * v);
}

Eigen::VectorXd KernelProjector::project_affine(const Eigen::VectorXd& v, const Eigen::VectorXd& x_row) const {
  return project_kernel(v) + x_row;
}

MeasurementOperator build_operator(MeasurementMode mode, Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  return MeasurementOperator(mode, n, m, seed);
}

NullSpaceSample sample_null_space(const MeasurementOperator& op, std::uint64_t seed) {
  if (op.m() >= op.dim()) throw std::invalid_argument("sample_null_space: kernel is trivial (m = D)");
  Engine eng = make_engine(seed);
  const Eigen::VectorXd g = gaussian_matrix(op.dim(), 1, eng);
  Eigen::VectorXd w = op.project_kernel(g);
  w = op.project_kernel(w);  // second pass pushes the residual to rounding level
  return {op.from_coords(w), seed, op.seed()};
}

Eigen::MatrixXd gue_sample(Eigen::Index n, Engine& eng) {
  const Eigen::MatrixXd A = gaussian_matrix(n, n, eng);
  return (A + A.transpose()) / std::sqrt(2.0);
}

Eigen::MatrixXd gue_sample(Eigen::Index n, std::uint64_t seed) {
  Engine eng = make_engine(seed);
  return gue_sample(n, eng);
}

}  // namespace rankthresh
