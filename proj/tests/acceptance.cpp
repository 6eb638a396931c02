// One line per acceptance criterion.  Exit status is nonzero when any fails.
//
//   acceptance            CI variants (n = 30 phase diagrams)
//   acceptance --full     n = 40 phase diagrams, several hours on one core
//   acceptance --only 1,2,9
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "rankthresh/cli.hpp"
#include "rankthresh/matrix_ops.hpp"
#include "rankthresh/measurements.hpp"
#include "rankthresh/mesh_width.hpp"
#include "rankthresh/nullspace_conditions.hpp"
#include "rankthresh/parallel.hpp"
#include "rankthresh/phase_lab.hpp"
#include "rankthresh/recovery_solvers.hpp"
#include "rankthresh/spectral_laws.hpp"
#include "rankthresh/thresholds.hpp"
#include "support/failure_sets.hpp"
#include "support/helpers.hpp"
#include "support/sdp_oracle.hpp"

using namespace rankthresh;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace ts = testing_support;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Options {
  bool full = false;
  unsigned workers = 1;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (++failed_ <= 6) failures_ += (failures_.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  Verdict verdict() const { return {pass_, pass_ ? notes_ : failures_ + " | " + notes_}; }

 private:
  bool pass_ = true;
  int failed_ = 0;
  std::string failures_;
  std::string notes_;
};

std::vector<double> uniform_grid(int count) {
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = double(k) / (count - 1);
  return g;
}

Verdict spectral_anchors(const Options&) {
  Tally t;
  const SpectralLaw qc = SpectralLaw::quarter_circle();
  const double m1 = gamma_moment(qc, 1, 1.0), m2 = gamma_moment(qc, 2, 1.0);
  t.expect(std::abs(m1 - 8.0 / (3.0 * std::numbers::pi)) <= 1e-8, "first moment");
  t.expect(std::abs(m2 - 1.0) <= 1e-8, "second moment");
  t.note("|m1-8/3pi|=" + fmt("%.1e", std::abs(m1 - 8.0 / (3.0 * std::numbers::pi))));
  t.note("|m2-1|=" + fmt("%.1e", std::abs(m2 - 1.0)));
  double worst = 0.0;
  for (const SpectralLaw law : {qc, SpectralLaw::marcenko_pastur(), SpectralLaw::semicircle()})
    for (int i = 0; i < 1000; ++i) {
      const double p = (i + 0.5) / 1000.0;
      worst = std::max(worst, std::abs(law.cdf(law.inv_cdf(p)) - p));
    }
  t.expect(worst <= 1e-9, "round trip " + fmt("%.2e", worst));
  t.note("round trip max " + fmt("%.1e", worst));
  return t.verdict();
}

Verdict legacy_anchor(const Options&) {
  const double want = 1.0 - 64.0 / (9.0 * std::numbers::pi * std::numbers::pi);
  const double got = legacy_mu(ThresholdKind::Weak, 0.0);
  Tally t;
  t.expect(std::abs(got - want) <= 1e-8, "legacy weak at 0");
  t.note("legacy_mu=" + fmt("%.12f", got) + " diff " + fmt("%.1e", std::abs(got - want)));
  return t.verdict();
}

double max_ratio(ThresholdKind kind, const std::vector<double>& grid, unsigned workers) {
  double best = 0.0;
  for (const auto& p : threshold_curve(kind, grid, workers))
    if (p.beta > 0.0 && std::isfinite(p.oversampling)) best = std::max(best, p.oversampling);
  return best;
}

Verdict oversampling(const Options& o) {
  // The ratio peaks as beta -> 0, which a uniform grid barely resolves, so the
  // 201 points are spread geometrically over [1e-6, 1].
  std::vector<double> geometric(201);
  for (int k = 0; k <= 200; ++k) geometric[k] = std::pow(10.0, -6.0 + 6.0 * k / 200.0);
  geometric.back() = 1.0;
  const double weak = max_ratio(ThresholdKind::Weak, geometric, o.workers);
  const double strong = max_ratio(ThresholdKind::Strong, geometric, o.workers);
  const auto uniform = uniform_grid(201);
  Tally t;
  t.expect(weak >= 2.7 && weak <= 3.3, "weak max ratio " + fmt("%.3f", weak));
  t.expect(strong >= 7.0 && strong <= 9.0, "strong max ratio " + fmt("%.3f", strong));
  t.note("geometric grid: weak " + fmt("%.3f", weak) + ", strong " + fmt("%.3f", strong));
  t.note("uniform grid (info): weak " + fmt("%.3f", max_ratio(ThresholdKind::Weak, uniform, o.workers)) +
         ", strong " + fmt("%.3f", max_ratio(ThresholdKind::Strong, uniform, o.workers)));
  return t.verdict();
}

Verdict failure_boundaries(const Options&) {
  Tally t;
  int strong_fail = 0;
  for (double beta : uniform_grid(201)) {
    if (beta >= 0.5) {
      t.expect(mu_threshold(ThresholdKind::Sectional, beta) == 1.0, "sectional at " + fmt("%.3f", beta));
      t.expect(mu_threshold(ThresholdKind::UniqueStrong, beta) == 1.0, "unique-strong at " + fmt("%.3f", beta));
    }
    if (rankthresh::gamma(1.0) - 2.0 * rankthresh::gamma(beta) <= 0.0) {
      ++strong_fail;
      t.expect(mu_threshold(ThresholdKind::Strong, beta) == 1.0, "strong at " + fmt("%.3f", beta));
    }
    const double uw = 1.0 - (1.0 - beta) * (1.0 - beta) / 2.0;
    t.expect(mu_threshold(ThresholdKind::UniqueWeak, beta) == uw, "unique-weak at " + fmt("%.3f", beta));
  }
  t.note(std::to_string(strong_fail) + " strong failure points");
  return t.verdict();
}

Verdict dominance(const Options&) {
  Tally t;
  double slack = 1.0;
  for (ThresholdKind kind : {ThresholdKind::Strong, ThresholdKind::Sectional, ThresholdKind::Weak})
    for (double beta : uniform_grid(201)) {
      const double gap = legacy_mu(kind, beta) - mu_threshold(kind, beta);
      slack = std::min(slack, gap);
      t.expect(gap >= -1e-9, std::string(to_string(kind)) + " at " + fmt("%.3f", beta));
    }
  t.note("min(legacy - mu) " + fmt("%.2e", slack));
  return t.verdict();
}

Verdict width_convergence(const Options& o) {
  Tally t;
  for (auto [kind, beta] : {std::pair{ThresholdKind::Weak, 0.3}, std::pair{ThresholdKind::Strong, 0.05}}) {
    const auto w = estimate_width(kind, 200, beta, 200, 1, o.workers);
    const double target = mu_threshold(kind, beta);
    const double implied = (w.mean_bound / 200.0) * (w.mean_bound / 200.0);
    const double rel = std::abs(implied / target - 1.0);
    t.expect(rel <= 0.10, std::string(to_string(kind)) + " off by " + fmt("%.3f", rel));
    t.note(std::string(to_string(kind)) + " " + fmt("%.4f", implied) + " vs " + fmt("%.4f", target));
  }
  return t.verdict();
}

Verdict phase_boundary(PhaseProgram program, ThresholdKind reference, const std::vector<double>& betas, int n,
                       double tol, const Options& o) {
  std::vector<double> unused, mus;
  parse_phase_grid("1x20", unused, mus);
  PhaseConfig cfg;
  cfg.program = program;
  cfg.n = n;
  cfg.trials = 10;
  cfg.seed = 1;
  cfg.beta_grid = betas;
  cfg.mu_grid = mus;
  cfg.workers = o.workers;
  const auto boundary = empirical_boundary(run_grid(cfg));
  Tally t;
  for (const auto& b : boundary) {
    const double target = mu_threshold(reference, b.beta);
    const bool ok = b.censoring == Censoring::None && std::abs(b.mu50 - target) <= tol;
    t.expect(ok, "beta " + fmt("%.1f", b.beta) + " mu50 " + fmt("%.3f", b.mu50));
    t.note(std::string(to_string(program)) + " beta " + fmt("%.1f", b.beta) + ": " + fmt("%.3f", b.mu50) + " vs " +
           fmt("%.3f", target));
  }
  return t.verdict();
}

Verdict weak_phase(const Options& o) {
  const int n = o.full ? 40 : 30;
  const double tol = o.full ? 0.05 : 0.08;
  auto v = phase_boundary(PhaseProgram::Nnm, ThresholdKind::Weak, {0.2, 0.4, 0.6}, n, tol, o);
  v.detail = "n=" + std::to_string(n) + " tol " + fmt("%.2f", tol) + ": " + v.detail;
  return v;
}

Verdict psd_phase(const Options& o) {
  const int n = o.full ? 40 : 30;
  auto a = phase_boundary(PhaseProgram::PsdTrace, ThresholdKind::PsdWeak, {0.2, 0.4}, n, 0.08, o);
  auto b = phase_boundary(PhaseProgram::PsdFeasible, ThresholdKind::UniqueWeak, {0.2, 0.4}, n, 0.08, o);
  return {a.pass && b.pass, "n=" + std::to_string(n) + " tol 0.08: " + a.detail + "; " + b.detail};
}

// Property batteries.  Each counts violations over random instances.
Verdict properties(const Options&) {
  Tally t;
  auto eng = ts::engine(2024);
  int batteries = 0;
  auto battery = [&](const std::string& name, int count, const std::function<bool()>& holds) {
    ++batteries;
    int bad = 0;
    for (int i = 0; i < count; ++i) bad += holds() ? 0 : 1;
    t.expect(bad == 0, name + " " + std::to_string(bad) + "/" + std::to_string(count));
  };
  std::uniform_int_distribution<int> small(1, 6);

  battery("trace bound", 1000, [&] {
    const MatrixXd X = ts::gaussian(6, 6, eng), Y = ts::gaussian(6, 6, eng);
    const double rhs = singular_values_desc(X).dot(singular_values_desc(Y));
    return (X.transpose() * Y).trace() <= rhs * (1 + 1e-10);
  });
  battery("singular value differences", 1000, [&] {
    const MatrixXd X = ts::gaussian(8, 8, eng), Y = ts::gaussian(8, 8, eng);
    return (singular_values_desc(X) - singular_values_desc(Y)).cwiseAbs().sum() <=
           nuclear_norm(MatrixXd(X - Y)) + 1e-10;
  });
  battery("diagonal blocks", 1000, [&] {
    const MatrixXd X = ts::gaussian(8, 8, eng);
    const int k = 1 + small(eng);
    return nuclear_norm(X) + 1e-10 >= nuclear_norm(MatrixXd(X.topLeftCorner(k, k))) +
                                          nuclear_norm(MatrixXd(X.bottomRightCorner(8 - k, 8 - k)));
  });
  battery("nuclear norm vs trace", 1000, [&] {
    const MatrixXd X = ts::gaussian(7, 7, eng);
    return nuclear_norm(X) >= X.trace() - 1e-12;
  });
  battery("eigenvalue majorization", 1000, [&] {
    const MatrixXd X = ts::symmetric(7, eng), Y = ts::symmetric(7, eng);
    VectorXd s = (eigenvalues_desc(X) - eigenvalues_desc(Y)).cwiseAbs();
    std::sort(s.data(), s.data() + s.size(), std::greater<>());
    const VectorXd sigma = singular_values_desc(MatrixXd(X - Y));
    double ls = 0.0, rs = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
      if ((ls += s(k)) > (rs += sigma(k)) + 1e-10) return false;
    return true;
  });
  battery("psd product", 1000, [&] {
    const MatrixXd X = ts::low_rank_psd(6, small(eng), eng), Y = ts::low_rank_psd(6, small(eng), eng);
    return (X * Y).trace() >= -1e-12 * X.norm() * Y.norm();
  });
  battery("svec isometry", 1000, [&] {
    const MatrixXd A = ts::symmetric(6, eng), B = ts::symmetric(6, eng);
    return std::abs((A * B).trace() - svec(A).dot(svec(B))) <= 1e-12 * A.norm() * B.norm();
  });

  int kernel_case = 0;
  battery("kernel residual", 200, [&] {
    const int i = kernel_case++;
    const auto mode = i % 2 ? MeasurementMode::Symmetric : MeasurementMode::General;
    const int n = 3 + i % 6;
    const Eigen::Index D = mode == MeasurementMode::General ? n * n : svec_size(n);
    const auto op = build_operator(mode, n, 1 + i % (D - 1), 5000 + i);
    const MatrixXd W = sample_null_space(op, 6000 + i).W;
    return op.apply(W).norm() <= 1e-9 * W.norm();
  });

  int solver_case = 0;
  battery("solver certificates", 12, [&] {
    const int i = solver_case++;
    const SolverConfig cfg;
    if (i % 3 == 0) {
      const auto op = build_operator(MeasurementMode::General, 8, 40, 7000 + i);
      const MatrixXd X0 = ts::low_rank(8, 2, eng);
      const VectorXd y = op.apply(X0);
      const auto out = solve_nnm(op, y, cfg);
      return out.converged && out.residual <= cfg.primal_tol * (1 + y.norm()) &&
             out.objective <= nuclear_norm(X0) * (1 + 1e-6);
    }
    const auto op = build_operator(MeasurementMode::Symmetric, 8, 24, 7000 + i);
    const MatrixXd X0 = ts::low_rank_psd(8, 1, eng);
    const VectorXd y = op.apply(X0);
    const auto out = i % 3 == 1 ? solve_psd_trace(op, y, cfg) : solve_psd_feasible(op, y, cfg);
    const bool psd = eigenvalues_desc(out.X_hat).minCoeff() >= -1e-8 * out.X_hat.norm();
    const bool bounded = i % 3 == 2 || out.objective <= X0.trace() * (1 + 1e-6);
    return out.converged && psd && bounded && out.residual <= cfg.primal_tol * (1 + y.norm());
  });

  battery("strong condition monotone in r", 500, [&] {
    const MatrixXd W = ts::gaussian(6, 6, eng);
    for (int r = 1; r < 6; ++r)
      if (check_condition(ConditionKind::StrongSquare, W, ConditionContext::for_rank(r + 1)) &&
          !check_condition(ConditionKind::StrongSquare, W, ConditionContext::for_rank(r)))
        return false;
    return true;
  });
  battery("scale invariance", 500, [&] {
    const int r = small(eng) % 3 + 1;
    const auto ctx = ConditionContext::canonical(6, r);
    const MatrixXd W = ts::symmetric(6, eng) + 0.3 * ts::gaussian(6, 6, eng) * (small(eng) % 2);
    const double c = std::exp(ts::uniform(eng, -5.0, 5.0));
    for (ConditionKind kind : kAllConditionKinds) {
      const auto a = evaluate_condition(kind, W, ctx);
      if (std::abs(a.margin) < 1e-6) continue;
      if (a.holds != evaluate_condition(kind, MatrixXd(c * W), ctx).holds) return false;
    }
    return true;
  });
  battery("unitary invariance", 500, [&] {
    const MatrixXd W = ts::gaussian(6, 6, eng);
    const MatrixXd U = ts::orthogonal(6, eng), V = ts::orthogonal(6, eng);
    const auto ctx = ConditionContext::for_rank(small(eng) % 3 + 1);
    const auto a = evaluate_condition(ConditionKind::StrongSquare, W, ctx);
    const auto b = evaluate_condition(ConditionKind::StrongSquare, MatrixXd(U * W * V.transpose()), ctx);
    return std::abs(a.margin - b.margin) <= 1e-10;
  });

  struct Member {
    ThresholdKind kind;
    MatrixXd (*make)(const MatrixXd&, int, ts::Engine&);
  };
  for (const Member m : {Member{ThresholdKind::Strong, ts::strong_member},
                         Member{ThresholdKind::Sectional, ts::sectional_member},
                         Member{ThresholdKind::Weak, ts::weak_member},
                         Member{ThresholdKind::PsdWeak, ts::psd_weak_member},
                         Member{ThresholdKind::PsdStrong, ts::psd_strong_member}}) {
    int i = 0;
    battery(std::string("bound dominance ") + std::string(to_string(m.kind)), 1000, [&] {
      const int r = 1 + i++ % 3;
      const MatrixXd H = is_psd_kind(m.kind) ? gue_sample(8, eng) : ts::gaussian(8, 8, eng);
      MatrixXd W = m.make(H, r, eng);
      W /= W.norm();
      if (check_condition(ts::condition_for(m.kind), W, ConditionContext::canonical(8, r))) return false;
      return H.cwiseProduct(W).sum() <= sample_bound(m.kind, H, r / 8.0) + 1e-9;
    });
  }
  t.note(std::to_string(batteries) + " batteries");
  return t.verdict();
}

Verdict oracle_equivalence(const Options&) {
  Tally t;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto eng = ts::engine(8000 + i);
    const int n = 3 + i % 6;
    const int r = 1 + i % 2;
    double ours = 0.0;
    sdp_oracle::Solution ref;
    if (i < 10) {
      const auto op = build_operator(MeasurementMode::General, n, n * n / 2, 9000 + i);
      const VectorXd y = op.apply(ts::low_rank(n, r, eng));
      const auto out = solve_nnm(op, y);
      t.expect(out.converged, "nnm " + std::to_string(i) + " not converged");
      ours = out.objective;
      ref = sdp_oracle::nuclear_norm_min(op, y);
    } else {
      const auto op = build_operator(MeasurementMode::Symmetric, n, svec_size(n) / 2, 9000 + i);
      const VectorXd y = op.apply(ts::low_rank_psd(n, r, eng));
      const auto out = solve_psd_trace(op, y);
      t.expect(out.converged, "psd " + std::to_string(i) + " not converged");
      ours = out.objective;
      ref = sdp_oracle::trace_min(op, y);
    }
    t.expect(ref.converged, "oracle " + std::to_string(i) + " not converged");
    const double rel = std::abs(ours - ref.primal_objective) / std::abs(ref.primal_objective);
    worst = std::max(worst, rel);
    t.expect(rel <= 1e-5, "instance " + std::to_string(i) + " rel " + fmt("%.2e", rel));
  }
  t.note("20 instances, worst rel diff " + fmt("%.2e", worst));
  return t.verdict();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  Options opt;
  opt.workers = default_workers();
  std::string only;
  app.add_flag("--full", opt.full, "n = 40 phase diagrams");
  app.add_option("--only", only, "comma-separated criteria");
  app.add_option("--workers", opt.workers, "threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::set<int> selected;
  std::stringstream ss(only);
  for (std::string item; std::getline(ss, item, ',');) selected.insert(std::stoi(item));

  const std::vector<std::pair<std::string, Verdict (*)(const Options&)>> criteria{
      {"spectral anchors", spectral_anchors},
      {"legacy anchor", legacy_anchor},
      {"oversampling ratios", oversampling},
      {"failure boundaries", failure_boundaries},
      {"dominance over legacy", dominance},
      {"width convergence", width_convergence},
      {"weak phase boundary", weak_phase},
      {"psd phase boundaries", psd_phase},
      {"property batteries", properties},
      {"interior-point agreement", oracle_equivalence},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second(opt);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %-26s %s  (%.0fs) %s\n", id, criteria[i].first.c_str(), v.pass ? "PASS" : "FAIL", secs,
                v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
