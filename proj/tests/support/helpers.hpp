#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "rankthresh/rng.hpp"

namespace testing_support {

using rankthresh::Engine;

inline Engine engine(std::uint64_t seed) { return rankthresh::make_engine(seed); }

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, Engine& eng) {
  return rankthresh::gaussian_matrix(rows, cols, eng);
}

inline Eigen::MatrixXd symmetric(Eigen::Index n, Engine& eng) {
  const Eigen::MatrixXd A = gaussian(n, n, eng);
  return (A + A.transpose()) / 2.0;
}

inline Eigen::MatrixXd orthogonal(Eigen::Index n, Engine& eng) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(n, n, eng));
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::MatrixXd low_rank(Eigen::Index n, Eigen::Index r, Engine& eng) {
  return gaussian(n, r, eng) * gaussian(n, r, eng).transpose();
}

inline Eigen::MatrixXd low_rank_psd(Eigen::Index n, Eigen::Index r, Engine& eng) {
  const Eigen::MatrixXd G = gaussian(n, r, eng);
  return G * G.transpose();
}

}  // namespace testing_support
