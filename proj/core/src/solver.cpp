#include "rmc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "rmc/errors.hpp"
#include "rmc/matrix_io.hpp"

namespace rmc {

namespace {

constexpr double kChangeFloor = 1e-30;

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

// Comparison of S^t against the planted outliers. Both lists are sorted by
// cell, so one merge pass answers containment and the entrywise error.
struct OutlierComparison {
  bool support_in_truth = true;
  double inf_error = 0.0;
};

OutlierComparison compare_outliers(const ObservationSet& s, const std::vector<Entry>& truth) {
  OutlierComparison out;
  auto it = truth.begin();
  for (const Entry& e : s.entries()) {
    while (it != truth.end() && it->cell() < e.cell()) ++it;
    const bool planted = it != truth.end() && it->cell() == e.cell();
    const double target = planted ? it->value : 0.0;
    if (e.value != 0.0 && !planted) out.support_in_truth = false;
    out.inf_error = std::max(out.inf_error, std::abs(e.value - target));
  }
  return out;
}

SolveTrace run(const ObservationSet& obs, const SolverConfig& cfg, const GroundTruth* truth,
               const std::string& algorithm) {
  cfg.validate();
  if (cfg.rank > std::min(obs.rows(), obs.cols())) {
    throw DimensionError("solve: rank exceeds min(n1, n2)");
  }
  if (truth && (truth->l_star.rows() != obs.rows() || truth->l_star.cols() != obs.cols())) {
    throw DimensionError("solve: ground truth shape differs from the observations");
  }

  SolveTrace trace;
  trace.algorithm = algorithm;
  trace.beta = resolve_beta(cfg, obs, truth);
  if (algorithm != "rrmc" && !cfg.kind.conforming()) {
    trace.warnings.push_back("threshold '" + cfg.kind.name() +
                             "' violates the Lipschitz property; the geometric schedule carries no "
                             "guarantee for it");
  }

  const double p = obs.sample_rate();
  const double truth_inf = truth ? entrywise_max_norm(truth->l_star) : 0.0;
  const auto start = std::chrono::steady_clock::now();

  IterateState state;
  state.l = Matrix::Zero(obs.rows(), obs.cols());
  state.xi = trace.beta;

  SvdOptions svd = cfg.svd;
  double change = 0.0;
  bool stationary = false;

  for (;;) {
    state.s = s_update(state, obs, cfg);

    IterationRecord rec;
    rec.t = state.t;
    rec.xi = state.xi;
    rec.successive_change = change;
    rec.support_size = state.s.support_size();
    if (truth) {
      const double err = entrywise_max_norm(state.l - truth->l_star);
      rec.inf_error = err;
      rec.rel_inf_error = truth_inf > 0.0 ? err / truth_inf : err;
      const OutlierComparison cmp = compare_outliers(state.s, truth->s_star);
      rec.support_in_truth = cmp.support_in_truth;
      rec.outlier_inf_error = cmp.inf_error;
    }
    rec.wall_ms = cfg.record_timing ? elapsed_ms(start) : 0;
    trace.records.push_back(rec);

    if (stationary) {
      trace.termination = Termination::Converged;
      break;
    }
    if (state.t >= cfg.max_iters) {
      trace.termination = Termination::MaxIters;
      break;
    }

    SvdFactors f;
    try {
      f = l_update_factors(state, state.s, obs, cfg, p, svd);
    } catch (const NumericalError& e) {
      trace.termination = Termination::Failed;
      trace.failure = e.what();
      break;
    }
    Matrix next = f.reconstruct();
    if (!next.allFinite()) {
      trace.termination = Termination::Failed;
      trace.failure = "non-finite iterate at t = " + std::to_string(state.t + 1);
      break;
    }
    if (cfg.warm_start) svd.start = f.v;

    change = (next - state.l).norm() / std::max(state.l.norm(), kChangeFloor);
    if (change < cfg.stop_tol) {
      stationary = true;
      trace.converged_at = state.t;
    }
    state.l = std::move(next);
    ++state.t;
    state.xi *= cfg.gamma;
    ++trace.iterations;
  }

  trace.l_hat = std::move(state.l);
  trace.s_hat = std::move(state.s);
  return trace;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIters: return "max_iters";
    case Termination::Failed: return "failed";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (rank < 1) throw DimensionError("solver: rank must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("solver: gamma must lie in (0, 1)");
  if (max_iters < 1) throw ParameterError("solver: max_iters must be positive");
  if (!(stop_tol > 0.0)) throw ParameterError("solver: stop_tol must be positive");
  if (beta_mode == BetaMode::Fixed && !(beta > 0.0 && std::isfinite(beta))) {
    throw ParameterError("solver: beta must be positive");
  }
  if (beta_mode != BetaMode::Fixed && !(beta_factor > 0.0 && std::isfinite(beta_factor))) {
    throw ParameterError("solver: beta_factor must be positive");
  }
}

ObservationSet s_update(const IterateState& state, const ObservationSet& obs,
                        const SolverConfig& cfg) {
  if (!(state.xi > 0.0)) throw ParameterError("s_update: xi must be positive");
  std::vector<double> values;
  values.reserve(obs.size());
  for (const Entry& e : obs.entries()) {
    values.push_back(cfg.kind(state.xi, e.value - state.l(e.row, e.col)));
  }
  return obs.with_values(values);
}

SvdFactors l_update_factors(const IterateState& state, const ObservationSet& s_new,
                            const ObservationSet& obs, const SolverConfig& cfg, double p,
                            const SvdOptions& svd) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("l_update: p must lie in (0, 1]");
  if (s_new.size() != obs.size()) throw DimensionError("l_update: S and M index sets differ");
  Matrix arg = state.l;
  const auto m = obs.entries();
  const auto s = s_new.entries();
  const double inv_p = 1.0 / p;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Index i = m[k].row;
    const Index j = m[k].col;
    arg(i, j) -= inv_p * (state.l(i, j) + s[k].value - m[k].value);
  }
  return truncated_svd(arg, cfg.rank, svd);
}

Matrix l_update(const IterateState& state, const ObservationSet& s_new, const ObservationSet& obs,
                const SolverConfig& cfg, double p) {
  return l_update_factors(state, s_new, obs, cfg, p, cfg.svd).reconstruct();
}

double beta_data_driven(const ObservationSet& obs, Index rank) {
  if (obs.empty()) throw ParameterError("beta_data_driven: no observations");
  const Matrix y = obs.to_dense() / obs.sample_rate();
  const SvdFactors f = truncated_svd(y, rank, with_method(SvdMethod::Dense));
  if (f.sigma(0) == 0.0) return 0.0;
  const double n = static_cast<double>(std::max(obs.rows(), obs.cols()));
  return coherence(f.u, f.v) * static_cast<double>(rank) / n * f.sigma(0);
}

double resolve_beta(const SolverConfig& cfg, const ObservationSet& obs, const GroundTruth* truth) {
  double beta = cfg.beta;
  switch (cfg.beta_mode) {
    case BetaMode::Fixed:
      break;
    case BetaMode::Oracle:
      if (!truth) throw ParameterError("solver: oracle beta needs a ground truth");
      beta = cfg.beta_factor * truth->entry_scale();
      break;
    case BetaMode::DataDriven:
      beta = cfg.beta_factor * beta_data_driven(obs, cfg.rank);
      break;
  }
  if (!(beta > 0.0 && std::isfinite(beta))) {
    throw ParameterError("solver: beta must be positive, got " + format_real(beta));
  }
  return beta;
}

SolveTrace solve(const ObservationSet& obs, const SolverConfig& cfg, const GroundTruth* truth) {
  return run(obs, cfg, truth, "rmc-" + cfg.kind.name());
}

SolveTrace solve_rrmc(const ObservationSet& obs, const SolverConfig& cfg, const GroundTruth* truth) {
  SolverConfig hard = cfg;
  hard.kind = ThresholdKind::hard();
  return run(obs, hard, truth, "rrmc");
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << "t,xi,successive_change,support_size,rel_inf_error,support_in_truth,wall_ms\n";
  for (const IterationRecord& r : trace.records) {
    out << r.t << ',' << format_real(r.xi) << ',' << format_real(r.successive_change) << ','
        << r.support_size << ',';
    if (r.rel_inf_error) out << format_real(*r.rel_inf_error);
    out << ',';
    if (r.support_in_truth) out << (*r.support_in_truth ? 1 : 0);
    out << ',' << r.wall_ms << '\n';
  }
}

void save_trace_csv(const std::string& path, const SolveTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_trace_csv(out, trace);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace rmc
