// Command-line front end: instance generation, single solves, phase grids
// and the lemma checks.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "rmc/errors.hpp"
#include "rmc/harness.hpp"
#include "rmc/matrix_io.hpp"
#include "rmc/oracles.hpp"
#include "rmc/problem.hpp"
#include "rmc/solver.hpp"

namespace {

struct GenArgs {
  long n1 = 0;
  long n2 = 0;
  long rank = 1;
  double p = 1.0;
  double alpha = 0.0;
  std::uint64_t seed = 1;
  std::string prefix;
};

int run_gen(const GenArgs& a) {
  const rmc::Instance inst = rmc::make_instance(a.n1, a.n2 > 0 ? a.n2 : a.n1, a.rank, a.p,
                                                a.alpha, a.seed);
  rmc::save_observations(a.prefix + ".obs", inst.data.observations);
  rmc::save_truth(a.prefix + ".truth", inst.truth);
  const auto& st = inst.data.stats;
  std::printf("wrote %s.obs (%zu entries) and %s.truth (%zu outliers, alpha_hat %.4f)\n",
              a.prefix.c_str(), inst.data.observations.size(), a.prefix.c_str(),
              st.total_outliers, st.alpha_hat);
  return 0;
}

struct SolveArgs {
  std::string input;
  long rank = 1;
  std::string threshold = "soft";
  double scad_a = 3.0;
  double beta = 0.0;
  std::string beta_oracle;
  double beta_factor = 1.1;
  double gamma = 0.9;
  int max_iters = 500;
  double tol = 1e-9;
  std::uint64_t seed = 0x5eed5eedULL;
  std::string trace_out;
  std::string out;
  bool no_timing = false;
};

int run_solve(const SolveArgs& a) {
  const rmc::ObservationSet obs = rmc::load_observations(a.input);
  rmc::SolverConfig cfg;
  cfg.rank = a.rank;
  cfg.kind = rmc::ThresholdKind::parse(a.threshold, a.scad_a);
  cfg.gamma = a.gamma;
  cfg.max_iters = a.max_iters;
  cfg.stop_tol = a.tol;
  cfg.svd.seed = a.seed;
  cfg.record_timing = !a.no_timing;
  cfg.beta_factor = a.beta_factor;

  std::optional<rmc::GroundTruth> truth;
  if (!a.beta_oracle.empty()) {
    truth = rmc::load_truth(a.beta_oracle, a.rank);
    cfg.beta_mode = rmc::BetaMode::Oracle;
  } else if (a.beta > 0.0) {
    cfg.beta = a.beta;
  } else {
    cfg.beta_mode = rmc::BetaMode::DataDriven;
  }

  const rmc::GroundTruth* gt = truth ? &*truth : nullptr;
  const rmc::SolveTrace trace = cfg.kind.variant() == rmc::ThresholdKind::Variant::Hard
                                    ? rmc::solve_rrmc(obs, cfg, gt)
                                    : rmc::solve(obs, cfg, gt);
  for (const auto& w : trace.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (!a.trace_out.empty()) rmc::save_trace_csv(a.trace_out, trace);
  if (!a.out.empty()) rmc::save_dense(a.out, trace.l_hat);

  std::printf("algorithm %s beta %.6g termination %s iterations %d", trace.algorithm.c_str(),
              trace.beta, rmc::to_string(trace.termination), trace.iterations);
  if (trace.final_record().rel_inf_error) {
    std::printf(" rel_inf_error %.3e", *trace.final_record().rel_inf_error);
  }
  std::printf("\n");
  if (!trace.failure.empty()) std::fprintf(stderr, "failure: %s\n", trace.failure.c_str());
  return trace.termination == rmc::Termination::Failed ? 2 : 0;
}

int run_phase(const std::string& config, const std::string& out_dir, unsigned threads) {
  std::ifstream in(config);
  if (!in) throw rmc::IoError("cannot open config '" + config + "'");
  std::stringstream text;
  text << in.rdbuf();
  std::istringstream parse_in(text.str());
  const rmc::ExperimentGrid grid = rmc::parse_config(parse_in, config);
  const rmc::GridResult result = rmc::run_grid(grid, {threads});
  rmc::write_phase_outputs(grid, text.str(), result, out_dir);
  for (const auto& line : result.log) std::fprintf(stderr, "%s\n", line.c_str());
  for (const auto& cells : result.cells) {
    int ok = 0;
    int total = 0;
    for (const auto& c : cells) {
      ok += c.successes;
      total += c.trials;
    }
    std::printf("%-5s %d/%d successful trials\n", cells.front().algorithm.c_str(), ok, total);
  }
  return 0;
}

int run_verify(int trials, std::uint64_t seed, const std::string& lemma) {
  std::vector<rmc::OracleReport> reports;
  if (lemma == "all") {
    reports = rmc::run_all_oracles(trials, seed);
  } else if (lemma == "sparse-spectral") {
    reports.push_back(rmc::check_sparse_spectral(trials, seed));
  } else if (lemma == "perturbation") {
    reports.push_back(rmc::check_perturbation_bound(trials, seed));
  } else if (lemma == "sparse-projection") {
    reports.push_back(rmc::check_sparse_projection_bound(trials, seed));
  } else {
    reports.push_back(rmc::check_threshold_lemma(trials, seed));
  }
  int bad = 0;
  for (const auto& r : reports) {
    std::printf("%-18s trials %4d  worst_slack %+.6e  violations %d\n", r.lemma_name.c_str(),
                r.trials, r.worst_slack, r.violations);
    bad += r.violations;
  }
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust matrix completion with general thresholding"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a corrupted low-rank instance");
  g->add_option("--n1", gen.n1, "Rows")->required()->check(CLI::PositiveNumber);
  g->add_option("--n2", gen.n2, "Columns (default n1)")->check(CLI::PositiveNumber);
  g->add_option("--rank", gen.rank, "Rank of L*")->required()->check(CLI::PositiveNumber);
  g->add_option("--p", gen.p, "Sampling rate")->required();
  g->add_option("--alpha", gen.alpha, "Outlier probability")->required();
  g->add_option("--seed", gen.seed, "Seed")->required();
  g->add_option("--out-prefix", gen.prefix, "Writes <prefix>.obs and <prefix>.truth")->required();

  SolveArgs sa;
  auto* s = app.add_subcommand("solve", "Recover L* from an observation file");
  s->add_option("--input", sa.input, "Observation file")->required()->check(CLI::ExistingFile);
  s->add_option("--rank", sa.rank, "Target rank")->required()->check(CLI::PositiveNumber);
  s->add_option("--threshold", sa.threshold, "soft | scad | hard")
      ->check(CLI::IsMember({"soft", "scad", "hard"}));
  s->add_option("--scad-a", sa.scad_a, "SCAD shape parameter (> 2)");
  auto* beta = s->add_option("--beta", sa.beta, "Fixed threshold scale");
  auto* oracle = s->add_option("--beta-oracle", sa.beta_oracle,
                               "Truth file; beta = factor * (mu r / n) sigma_1")
                     ->check(CLI::ExistingFile);
  beta->excludes(oracle);
  s->add_option("--beta-factor", sa.beta_factor, "Multiplier for oracle or data-driven beta");
  s->add_option("--gamma", sa.gamma, "Threshold decay");
  s->add_option("--max-iters", sa.max_iters, "Iteration budget");
  s->add_option("--tol", sa.tol, "Relative successive-change tolerance");
  s->add_option("--seed", sa.seed, "Seed of the randomized SVD");
  s->add_option("--trace-out", sa.trace_out, "Per-iteration CSV");
  s->add_option("--out", sa.out, "Write the recovered matrix here");
  s->add_flag("--no-timing", sa.no_timing, "Record wall_ms as 0");

  std::string config;
  std::string out_dir;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* ph = app.add_subcommand("phase", "Run a phase-transition grid");
  ph->add_option("--config", config, "Grid config file")->required()->check(CLI::ExistingFile);
  ph->add_option("--out-dir", out_dir, "Output directory")->required();
  ph->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  int trials = 100;
  std::uint64_t seed = 1;
  std::string lemma = "all";
  auto* v = app.add_subcommand("verify", "Check the lemma inequalities on random instances");
  v->add_option("--trials", trials, "Trials per lemma")->check(CLI::PositiveNumber);
  v->add_option("--seed", seed, "Seed");
  v->add_option("--lemma", lemma, "Which check")
      ->check(CLI::IsMember({"sparse-spectral", "perturbation", "sparse-projection", "threshold",
                             "all"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) return run_gen(gen);
    if (*s) return run_solve(sa);
    if (*ph) return run_phase(config, out_dir, threads);
    return run_verify(trials, seed, lemma);
  } catch (const rmc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
