#include "rankthresh/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "rankthresh/csv.hpp"
#include "rankthresh/matrix_ops.hpp"
#include "rankthresh/measurements.hpp"
#include "rankthresh/mesh_width.hpp"
#include "rankthresh/nullspace_conditions.hpp"
#include "rankthresh/parallel.hpp"
#include "rankthresh/phase_lab.hpp"
#include "rankthresh/rng.hpp"
#include "rankthresh/thresholds.hpp"

namespace rankthresh {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string output;
  std::string gnuplot;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
  return s;
}

std::vector<double> grid_or_throw(const std::string& text) {
  try {
    return parse_grid(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad grid '") + text + "': " + e.what());
  }
}

// Output sink: the --output file if given, else the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

void write_gnuplot(const std::string& path, const std::string& csv, const std::string& xcol, const std::string& ycol,
                   bool heatmap) {
  if (path.empty()) return;
  std::ofstream g(path);
  if (!g) throw std::runtime_error("cannot open " + path);
  const std::string data = csv.empty() ? "data.csv" : csv;
  g << "set datafile separator ','\n"
    << "set datafile commentschars '#'\n"
    << "set key autotitle columnhead\n"
    << "set xlabel '" << xcol << "'\nset ylabel '" << ycol << "'\n";
  if (heatmap) {
    g << "set palette gray\nset cbrange [0:1]\n"
      << "plot '" << data << "' using (column('" << xcol << "')):(column('" << ycol
      << "')):(column('successes')/column('trials')) with points pt 5 palette notitle\n";
  } else {
    g << "plot '" << data << "' using (column('" << xcol << "')):(column('" << ycol << "')) with lines\n";
  }
}

Metadata base_meta(const std::string& command, const Common& c, bool seeded) {
  Metadata m{{"command", command}, {"version", kVersion}};
  if (seeded) m.emplace_back("seed", std::to_string(c.seed));
  m.emplace_back("workers", std::to_string(c.workers));
  return m;
}

void add_common(CLI::App* sub, Common& c, bool seeded) {
  sub->add_option("-o,--output", c.output, "CSV output path (default: stdout)");
  sub->add_option("--gnuplot", c.gnuplot, "also write a gnuplot script reading the CSV");
  sub->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 4096u));
  if (seeded) sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
}

}  // namespace

void parse_phase_grid(const std::string& text, std::vector<double>& betas, std::vector<double>& mus) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw std::invalid_argument("grid must look like BxM");
  int B = 0, M = 0;
  try {
    std::size_t used = 0;
    B = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("");
    M = std::stoi(text.substr(x + 1), &used);
    if (used != text.size() - x - 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must look like BxM");
  }
  if (B < 1 || M < 1) throw std::invalid_argument("grid sizes must be positive");
  betas.clear();
  mus.clear();
  for (int k = 1; k <= B; ++k) betas.push_back(static_cast<double>(k) / B);
  for (int j = 1; j <= M; ++j) mus.push_back(0.1 + 0.9 * static_cast<double>(j) / M);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recovery thresholds for low-rank matrix recovery", "rankthresh"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  common.workers = default_workers();

  // thresholds
  auto* th = app.add_subcommand("thresholds", "threshold curve mu(beta) for one kind");
  std::string th_kind = "weak";
  std::string th_grid = "0:1:101";
  th->add_option("--kind", th_kind, "strong|sectional|weak|psd-weak|psd-weak-alt|psd-strong|unique-weak|unique-strong")
      ->capture_default_str();
  th->add_option("--beta-grid", th_grid, "start:stop:count or comma list")->capture_default_str();
  add_common(th, common, false);

  // width
  auto* wd = app.add_subcommand("width", "Monte Carlo mesh-width bounds");
  std::string wd_kind = "weak";
  std::string wd_grid = "0.1:0.9:9";
  int wd_n = 40;
  int wd_samples = 100;
  wd->add_option("--kind", wd_kind, "strong|sectional|weak|psd-weak|psd-strong")->capture_default_str();
  wd->add_option("--beta-grid", wd_grid, "start:stop:count or comma list")->capture_default_str();
  wd->add_option("--n", wd_n, "matrix dimension")->check(CLI::Range(1, 2000))->capture_default_str();
  wd->add_option("--samples", wd_samples, "samples per beta")->check(CLI::Range(2, 100000000))->capture_default_str();
  add_common(wd, common, true);

  // phase
  auto* ph = app.add_subcommand("phase", "phase-transition grid of recovery trials");
  std::string ph_program = "nnm";
  std::string ph_grid;
  std::string ph_beta_grid;
  std::string ph_mu_grid;
  std::string ph_boundary;
  PhaseConfig pc;
  ph->add_option("--program", ph_program, "nnm|psd-trace|psd-feasible")->capture_default_str();
  ph->add_option("--n", pc.n, "matrix dimension")->check(CLI::Range(1, 500))->capture_default_str();
  ph->add_option("--trials", pc.trials, "trials per cell")->check(CLI::Range(1, 1000000))->capture_default_str();
  ph->add_option("--grid", ph_grid, "BxM: beta = k/B, mu = 0.1 + 0.9 j/M");
  ph->add_option("--beta-grid", ph_beta_grid, "explicit beta grid (overrides --grid)");
  ph->add_option("--mu-grid", ph_mu_grid, "explicit mu grid (overrides --grid)");
  ph->add_option("--max-iters", pc.solver.max_iters, "solver iteration cap")->capture_default_str();
  ph->add_option("--success-tol", pc.solver.success_tol, "relative error counted as success")->capture_default_str();
  ph->add_option("--boundary", ph_boundary, "also write the 50% boundary CSV here");
  add_common(ph, common, true);

  // check
  auto* ck = app.add_subcommand("check", "null-space condition margins on sampled kernel directions");
  std::string ck_kind = "weak";
  int ck_n = 6;
  int ck_m = 20;
  int ck_rank = 1;
  int ck_samples = 100;
  ck->add_option("--kind", ck_kind,
                 "strong|sectional|weak|psd-weak|psd-strong|psd-unique-weak|psd-unique-strong")
      ->capture_default_str();
  ck->add_option("--n", ck_n, "matrix dimension")->check(CLI::Range(1, 500))->capture_default_str();
  ck->add_option("--m", ck_m, "number of measurements")->check(CLI::PositiveNumber)->capture_default_str();
  ck->add_option("--rank", ck_rank, "rank of the support")->check(CLI::NonNegativeNumber)->capture_default_str();
  ck->add_option("--samples", ck_samples, "kernel directions")->check(CLI::Range(1, 100000000))->capture_default_str();
  add_common(ck, common, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return 2;
  }

  try {
    if (th->parsed()) {
      const auto kind = parse_threshold_kind(th_kind);
      if (!kind) throw UsageError("unknown kind '" + th_kind + "'");
      const auto betas = grid_or_throw(th_grid);
      std::vector<ThresholdPoint> pts;
      try {
        pts = threshold_curve(*kind, betas, common.workers);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      } catch (const std::domain_error& e) {
        throw UsageError(e.what());
      }
      Sink sink(common.output, out);
      auto meta = base_meta("thresholds", common, false);
      meta.emplace_back("kind", th_kind);
      meta.emplace_back("beta_grid", th_grid);
      meta.emplace_back("root_tol", "1e-15");
      meta.emplace_back("quadrature_tol", "1e-14");
      write_metadata(*sink, meta);
      write_threshold_csv(*sink, *kind, pts);
      write_gnuplot(common.gnuplot, common.output, "beta", "mu", false);
      return 0;
    }

    if (wd->parsed()) {
      const auto kind = parse_threshold_kind(wd_kind);
      if (!kind || !(*kind == ThresholdKind::Strong || *kind == ThresholdKind::Sectional ||
                     *kind == ThresholdKind::Weak || *kind == ThresholdKind::PsdWeak ||
                     *kind == ThresholdKind::PsdStrong))
        throw UsageError("width supports strong, sectional, weak, psd-weak, psd-strong");
      const auto betas = grid_or_throw(wd_grid);
      for (double b : betas)
        if (!(b >= 0.0 && b <= 1.0)) throw UsageError("beta outside [0, 1]");
      std::vector<WidthEstimate> rows;
      for (std::size_t i = 0; i < betas.size(); ++i)
        rows.push_back(estimate_width(*kind, wd_n, betas[i], wd_samples, derive_seed(common.seed, {i}), common.workers));
      Sink sink(common.output, out);
      auto meta = base_meta("width", common, true);
      meta.emplace_back("kind", wd_kind);
      meta.emplace_back("n", std::to_string(wd_n));
      meta.emplace_back("beta_grid", wd_grid);
      meta.emplace_back("samples", std::to_string(wd_samples));
      write_metadata(*sink, meta);
      write_width_csv(*sink, rows);
      write_gnuplot(common.gnuplot, common.output, "beta", "mu_implied", false);
      return 0;
    }

    if (ph->parsed()) {
      const auto program = parse_phase_program(ph_program);
      if (!program) throw UsageError("unknown program '" + ph_program + "'");
      pc.program = *program;
      pc.seed = common.seed;
      pc.workers = common.workers;
      if (!ph_grid.empty()) {
        try {
          parse_phase_grid(ph_grid, pc.beta_grid, pc.mu_grid);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
      if (!ph_beta_grid.empty()) pc.beta_grid = grid_or_throw(ph_beta_grid);
      if (!ph_mu_grid.empty()) pc.mu_grid = grid_or_throw(ph_mu_grid);
      if (pc.beta_grid.empty() || pc.mu_grid.empty()) throw UsageError("phase needs --grid or both explicit grids");
      for (double b : pc.beta_grid)
        if (!(b >= 0.0 && b <= 1.0)) throw UsageError("beta outside [0, 1]");
      for (double m : pc.mu_grid)
        if (!(m > 0.0 && m <= 1.0)) throw UsageError("mu outside (0, 1]");
      if (pc.solver.max_iters < 1) throw UsageError("--max-iters must be positive");
      if (!(pc.solver.success_tol > 0.0)) throw UsageError("--success-tol must be positive");

      Sink sink(common.output, out);
      auto meta = base_meta("phase", common, true);
      meta.emplace_back("program", ph_program);
      meta.emplace_back("n", std::to_string(pc.n));
      meta.emplace_back("trials", std::to_string(pc.trials));
      meta.emplace_back("beta_grid", join(pc.beta_grid));
      meta.emplace_back("mu_grid", join(pc.mu_grid));
      meta.emplace_back("max_iters", std::to_string(pc.solver.max_iters));
      meta.emplace_back("primal_tol", format_double(pc.solver.primal_tol));
      meta.emplace_back("dual_tol", format_double(pc.solver.dual_tol));
      meta.emplace_back("success_tol", format_double(pc.solver.success_tol));
      write_metadata(*sink, meta);
      write_phase_header(*sink);
      const auto cells = run_grid(pc, [&](const PhaseCell& c) {
        write_phase_row(*sink, pc.program, c);
        (*sink).flush();
      });
      if (!ph_boundary.empty()) {
        std::ofstream b(ph_boundary);
        if (!b) throw std::runtime_error("cannot open " + ph_boundary);
        write_metadata(b, meta);
        write_boundary_csv(b, pc.program, pc.n, empirical_boundary(cells));
      }
      write_gnuplot(common.gnuplot, common.output, "beta", "mu", true);
      return 0;
    }

    if (ck->parsed()) {
      const auto kind = parse_condition_kind(ck_kind);
      if (!kind) throw UsageError("unknown condition kind '" + ck_kind + "'");
      const bool psd = is_psd_condition(*kind);
      const long D = psd ? long(ck_n) * (ck_n + 1) / 2 : long(ck_n) * ck_n;
      if (ck_m >= D) throw UsageError("--m must be below the ambient dimension " + std::to_string(D));
      if (ck_rank > ck_n) throw UsageError("--rank exceeds --n");
      const auto mode = psd ? MeasurementMode::Symmetric : MeasurementMode::General;
      const auto op = build_operator(mode, ck_n, ck_m, derive_seed(common.seed, {0}));
      const auto ctx = ConditionContext::canonical(ck_n, ck_rank);

      std::vector<ConditionResult> res(static_cast<std::size_t>(ck_samples));
      parallel_for(res.size(), common.workers, [&](std::size_t i) {
        const auto s = sample_null_space(op, derive_seed(common.seed, {1, i}));
        res[i] = evaluate_condition(*kind, s.W, ctx);
      });

      Sink sink(common.output, out);
      auto meta = base_meta("check", common, true);
      meta.emplace_back("kind", ck_kind);
      meta.emplace_back("n", std::to_string(ck_n));
      meta.emplace_back("m", std::to_string(ck_m));
      meta.emplace_back("rank", std::to_string(ck_rank));
      meta.emplace_back("samples", std::to_string(ck_samples));
      meta.emplace_back("strict_tol", "1e-9");
      write_metadata(*sink, meta);
      *sink << "sample,kind,n,m,r,holds,margin\n";
      for (std::size_t i = 0; i < res.size(); ++i) {
        *sink << i << ',' << ck_kind << ',' << ck_n << ',' << ck_m << ',' << ck_rank << ','
              << (res[i].holds ? 1 : 0) << ',' << format_double(res[i].margin) << '\n';
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace rankthresh
