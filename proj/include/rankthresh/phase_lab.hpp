#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "rankthresh/recovery_solvers.hpp"

namespace rankthresh {

enum class PhaseProgram { Nnm, PsdTrace, PsdFeasible };

std::string_view to_string(PhaseProgram program);
std::optional<PhaseProgram> parse_phase_program(std::string_view name);

struct PhaseConfig {
  PhaseProgram program = PhaseProgram::Nnm;
  int n = 40;
  std::vector<double> beta_grid;
  std::vector<double> mu_grid;
  int trials = 10;
  std::uint64_t seed = 1;
  SolverConfig solver;
  unsigned workers = 1;
};

struct PhaseCell {
  double beta = 0.0;
  double mu = 0.0;
  int n = 0;
  int r = 0;
  int m = 0;
  int trials = 0;
  int successes = 0;
  int non_converged = 0;  // counted among the failures

  double success_rate() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
};

/// Measurement count for a sampling rate: round(mu n^2), or round(mu n(n+1)/2)
/// for the PSD programs, clamped to [1, D].
int measurement_count(PhaseProgram program, int n, double mu);

/// One (beta, mu) cell.  Trial t draws its operator and ground truth from
/// derive_seed(cfg.seed, {beta_index, mu_index, t}).
PhaseCell run_cell(const PhaseConfig& cfg, double beta, double mu, std::size_t beta_index = 0,
                   std::size_t mu_index = 0);

/// Every grid cell, beta-major.  `on_cell` (if set) sees each cell as soon as
/// it is complete, in output order, so callers can flush partial results.
std::vector<PhaseCell> run_grid(const PhaseConfig& cfg, const std::function<void(const PhaseCell&)>& on_cell = {});

enum class Censoring { None, Low, High };
std::string_view to_string(Censoring c);

struct BoundaryPoint {
  double beta = 0.0;
  double mu50 = 0.0;  // NaN when censored
  Censoring censoring = Censoring::None;
  int monotonicity_violations = 0;  // success-rate drops larger than `noise` along mu
};

/// 50% success crossing per beta column, by linear interpolation between the
/// last cell below 1/2 and the first at or above it.  A column that already
/// succeeds at its lowest mu is censored low; one that never reaches 1/2 is
/// censored high.
std::vector<BoundaryPoint> empirical_boundary(const std::vector<PhaseCell>& cells, double noise = 0.2);

}  // namespace rankthresh
