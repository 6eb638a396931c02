#include "rankthresh/phase_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "rankthresh/matrix_ops.hpp"
#include "rankthresh/measurements.hpp"
#include "rankthresh/mesh_width.hpp"
#include "rankthresh/parallel.hpp"
#include "rankthresh/rng.hpp"

namespace rankthresh {

namespace {

using Eigen::MatrixXd;

struct TrialResult {
  bool success = false;
  bool converged = false;
};

TrialResult run_trial(const PhaseConfig& cfg, int r, int m, std::uint64_t seed) {
  const bool psd = cfg.program != PhaseProgram::Nnm;
  const auto mode = psd ? MeasurementMode::Symmetric : MeasurementMode::General;
  const MeasurementOperator op(mode, cfg.n, m, derive_seed(seed, {0}));

  Engine eng = make_engine(derive_seed(seed, {1}));
  MatrixXd X0 = MatrixXd::Zero(cfg.n, cfg.n);
  if (r > 0) {
    const MatrixXd G1 = gaussian_matrix(cfg.n, r, eng);
    if (psd) {
      X0 = G1 * G1.transpose();
    } else {
      const MatrixXd G2 = gaussian_matrix(cfg.n, r, eng);
      X0 = G1 * G2.transpose();
    }
  }
  const Eigen::VectorXd y = op.apply(X0);

  RecoveryOutcome out;
  switch (cfg.program) {
    case PhaseProgram::Nnm: out = solve_nnm(op, y, cfg.solver, &X0); break;
    case PhaseProgram::PsdTrace: out = solve_psd_trace(op, y, cfg.solver, &X0); break;
    case PhaseProgram::PsdFeasible: out = solve_psd_feasible(op, y, cfg.solver, &X0); break;
  }
  return {success_check(out, X0, cfg.solver.success_tol), out.converged};
}

}  // namespace

std::string_view to_string(PhaseProgram program) {
  switch (program) {
    case PhaseProgram::Nnm: return "nnm";
    case PhaseProgram::PsdTrace: return "psd-trace";
    case PhaseProgram::PsdFeasible: return "psd-feasible";
  }
  return "unknown";
}

std::optional<PhaseProgram> parse_phase_program(std::string_view name) {
  for (PhaseProgram p : {PhaseProgram::Nnm, PhaseProgram::PsdTrace, PhaseProgram::PsdFeasible})
    if (to_string(p) == name) return p;
  return std::nullopt;
}

std::string_view to_string(Censoring c) {
  switch (c) {
    case Censoring::None: return "none";
    case Censoring::Low: return "censored-low";
    case Censoring::High: return "censored-high";
  }
  return "unknown";
}

int measurement_count(PhaseProgram program, int n, double mu) {
  const double D = program == PhaseProgram::Nnm ? double(n) * n : double(n) * (n + 1) / 2.0;
  const long m = std::lround(mu * D);
  return static_cast<int>(std::clamp<long>(m, 1, static_cast<long>(D)));
}

PhaseCell run_cell(const PhaseConfig& cfg, double beta, double mu, std::size_t beta_index, std::size_t mu_index) {
  if (cfg.n < 1) throw std::invalid_argument("run_cell: n must be positive");
  if (cfg.trials < 1) throw std::invalid_argument("run_cell: trials must be positive");
  if (!(mu > 0.0 && mu <= 1.0)) throw std::domain_error("run_cell: mu outside (0, 1]");
  PhaseCell cell;
  cell.beta = beta;
  cell.mu = mu;
  cell.n = cfg.n;
  cell.r = rank_for(beta, cfg.n);
  cell.m = measurement_count(cfg.program, cfg.n, mu);
  cell.trials = cfg.trials;
  std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
  parallel_for(results.size(), cfg.workers, [&](std::size_t t) {
    results[t] = run_trial(cfg, cell.r, cell.m, derive_seed(cfg.seed, {beta_index, mu_index, t}));
  });
  for (const auto& t : results) {
    cell.successes += t.success ? 1 : 0;
    cell.non_converged += t.converged ? 0 : 1;
  }
  return cell;
}

std::vector<PhaseCell> run_grid(const PhaseConfig& cfg, const std::function<void(const PhaseCell&)>& on_cell) {
  for (double b : cfg.beta_grid)
    if (!(b >= 0.0 && b <= 1.0)) throw std::domain_error("run_grid: beta outside [0, 1]");
  for (double m : cfg.mu_grid)
    if (!(m > 0.0 && m <= 1.0)) throw std::domain_error("run_grid: mu outside (0, 1]");
  std::vector<PhaseCell> cells;
  cells.reserve(cfg.beta_grid.size() * cfg.mu_grid.size());
  for (std::size_t i = 0; i < cfg.beta_grid.size(); ++i) {
    for (std::size_t j = 0; j < cfg.mu_grid.size(); ++j) {
      cells.push_back(run_cell(cfg, cfg.beta_grid[i], cfg.mu_grid[j], i, j));
      if (on_cell) on_cell(cells.back());
    }
  }
  return cells;
}

std::vector<BoundaryPoint> empirical_boundary(const std::vector<PhaseCell>& cells, double noise) {
  std::map<double, std::vector<const PhaseCell*>> columns;
  for (const auto& c : cells) columns[c.beta].push_back(&c);

  std::vector<BoundaryPoint> out;
  for (auto& [beta, column] : columns) {
    std::sort(column.begin(), column.end(), [](const PhaseCell* a, const PhaseCell* b) { return a->mu < b->mu; });
    BoundaryPoint bp;
    bp.beta = beta;
    bp.mu50 = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 1; i < column.size(); ++i)
      if (column[i]->success_rate() < column[i - 1]->success_rate() - noise) ++bp.monotonicity_violations;

    if (column.empty() || column.front()->success_rate() >= 0.5) {
      bp.censoring = Censoring::Low;
    } else {
      bp.censoring = Censoring::High;
      for (std::size_t i = 1; i < column.size(); ++i) {
        const double p1 = column[i]->success_rate();
        if (p1 < 0.5) continue;
        const double p0 = column[i - 1]->success_rate();
        const double m0 = column[i - 1]->mu;
        const double m1 = column[i]->mu;
        bp.mu50 = m0 + (0.5 - p0) / (p1 - p0) * (m1 - m0);
        bp.censoring = Censoring::None;
        break;
      }
    }
    out.push_back(bp);
  }
  return out;
}

}  // namespace rankthresh
