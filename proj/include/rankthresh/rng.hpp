#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace rankthresh {

using Engine = std::mt19937_64;

/// One round of the splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Stable child seed for a tuple of indices under a master seed, so any work
/// item can be regenerated on its own.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

Engine make_engine(std::uint64_t seed);

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Engine& eng);

}  // namespace rankthresh
