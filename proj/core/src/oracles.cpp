#include "rmc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "rmc/errors.hpp"
#include "rmc/problem.hpp"
#include "rmc/random.hpp"
#include "rmc/solver.hpp"

namespace rmc {

namespace {

Matrix gaussian(Index rows, Index cols, CounterRng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

double spectral(const Matrix& a) {
  const Vector s = singular_values(a);
  return s.size() ? s(0) : 0.0;
}

Matrix random_orthogonal(Index r, CounterRng& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(r, r, rng));
  Matrix q = qr.householderQ();
  // Include reflections as well as rotations.
  if (rng.uniform() < 0.5) q.col(0) *= -1.0;
  return q;
}

void record(OracleReport& rep, double slack, bool violated) {
  if (rep.trials == 0 || slack < rep.worst_slack) rep.worst_slack = slack;
  ++rep.trials;
  if (violated) ++rep.violations;
}

}  // namespace

Matrix stack_factors(const Matrix& u, const Matrix& v) {
  if (u.cols() != v.cols()) throw DimensionError("stack_factors: column counts differ");
  Matrix f(u.rows() + v.rows(), u.cols());
  f.topRows(u.rows()) = u;
  f.bottomRows(v.rows()) = v;
  return f;
}

Matrix procrustes_rotation(const Matrix& ref, const Matrix& f) {
  if (ref.rows() != f.rows() || ref.cols() != f.cols()) {
    throw DimensionError("procrustes_rotation: shapes differ");
  }
  Eigen::JacobiSVD<Matrix> svd(ref.transpose() * f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

std::vector<std::pair<Index, Index>> random_sparse_pattern(Index n1, Index n2, Index per_line,
                                                           std::uint64_t seed) {
  CounterRng rng(seed);
  std::set<std::pair<Index, Index>> cells;
  const Index m = std::min(n1, n2);
  std::vector<Index> rows(static_cast<std::size_t>(n1));
  std::vector<Index> cols(static_cast<std::size_t>(n2));
  for (Index layer = 0; layer < per_line; ++layer) {
    std::iota(rows.begin(), rows.end(), Index{0});
    std::iota(cols.begin(), cols.end(), Index{0});
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);
    for (std::size_t i = cols.size(); i > 1; --i) std::swap(cols[i - 1], cols[rng.below(i)]);
    // Each layer is a partial matching: at most one cell per row and column.
    for (Index k = 0; k < m; ++k) {
      if (rng.uniform() < 0.85) cells.insert({rows[static_cast<std::size_t>(k)], cols[static_cast<std::size_t>(k)]});
    }
  }
  return {cells.begin(), cells.end()};
}

double sparse_spectral_slack(const Matrix& s, Index max_per_line) {
  return static_cast<double>(max_per_line) * entrywise_max_norm(s) - spectral(s);
}

OracleReport check_sparse_spectral(int trials, std::uint64_t seed) {
  OracleReport rep{"sparse-spectral", 0, 0.0, 0};
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(derive_seed(seed, tag_of("sparse-spectral"), {static_cast<std::uint64_t>(t)}));
    const Index n = 30;
    const Index k = 1 + static_cast<Index>(rng.below(10));  // alpha n = k
    const auto pattern = random_sparse_pattern(n, n, k, rng.next_u64());
    Matrix s = Matrix::Zero(n, n);
    const bool constant = t % 5 == 0;  // equal magnitudes stress the bound
    for (auto [i, j] : pattern) s(i, j) = constant ? (rng.uniform() < 0.5 ? -1.0 : 1.0) : rng.normal();
    const double bound = static_cast<double>(k) * entrywise_max_norm(s);
    const double slack = bound - spectral(s);
    record(rep, slack, slack < -1e-9 * std::max(1.0, bound));
  }
  return rep;
}

PerturbationSides perturbation_sides(const Matrix& l_star, Index r, const Matrix& e) {
  const SvdOptions dense = with_method(SvdMethod::Dense);
  const SvdFactors truth = truncated_svd(l_star, r, dense);
  const SvdFactors est = truncated_svd(l_star + e, r, dense);
  const double kappa = truth.sigma(0) / truth.sigma(r - 1);

  const Matrix f_star = stack_factors(truth.u, truth.v);
  const Matrix f = stack_factors(est.u, est.v);
  const Matrix g = procrustes_rotation(f_star, f);
  const Matrix delta = f - f_star * g;

  const double fs = two_inf_norm(f_star);
  PerturbationSides sides;
  sides.sigma1 = truth.sigma(0);
  sides.lhs = entrywise_max_norm(est.reconstruct() - l_star);
  sides.rhs = two_inf_norm(delta) * (two_inf_norm(f) + fs) * est.sigma(0) +
              (3.0 + 4.0 * kappa) * fs * fs * spectral(e);
  sides.procrustes_gap = 0.0;
  return sides;
}

OracleReport check_perturbation_bound(int trials, std::uint64_t seed) {
  OracleReport rep{"perturbation", 0, 0.0, 0};
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(derive_seed(seed, tag_of("perturbation"), {static_cast<std::uint64_t>(t)}));
    const Index n = 10 + static_cast<Index>(rng.below(31));  // n <= 40
    const Index r = 1 + static_cast<Index>(rng.below(4));
    Matrix x = gaussian(n, r, rng);
    for (Index j = 0; j < r; ++j) x.col(j) *= 1.0 + 4.0 * rng.uniform();  // spread kappa
    const Matrix l_star = x * gaussian(n, r, rng).transpose();
    const Vector sv = singular_values(l_star);
    const double sigma_r = sv(r - 1);

    Matrix e;
    switch (t % 3) {
      case 0: e = gaussian(n, n, rng); break;
      case 1: e = gaussian(n, 1, rng) * gaussian(n, 1, rng).transpose(); break;  // rank one
      default: {
        e = Matrix::Zero(n, n);
        for (Index k = 0; k < n; ++k) e(rng.below(n), rng.below(n)) = rng.normal();
      }
    }
    e *= 0.4 * sigma_r / spectral(e);

    PerturbationSides sides = perturbation_sides(l_star, r, e);
    const double slack = sides.rhs - sides.lhs;
    bool violated = slack < -1e-8 * sides.sigma1;

    // The Procrustes rotation must beat random orthogonal alignments.
    const SvdOptions dense = with_method(SvdMethod::Dense);
    const SvdFactors a = truncated_svd(l_star, r, dense);
    const SvdFactors b = truncated_svd(l_star + e, r, dense);
    const Matrix fs = stack_factors(a.u, a.v);
    const Matrix f = stack_factors(b.u, b.v);
    const double best = (f - fs * procrustes_rotation(fs, f)).norm();
    for (int k = 0; k < 50; ++k) {
      const double other = (f - fs * random_orthogonal(r, rng)).norm();
      if (best > other + 1e-9) violated = true;
    }
    record(rep, slack, violated);
  }
  return rep;
}

double sparse_projection_slack(const std::vector<std::pair<Index, Index>>& pattern,
                               double per_line_bound, const Matrix& a, const Matrix& b) {
  double lhs = 0.0;
  for (auto [i, j] : pattern) {
    const double v = a.row(i).dot(b.row(j));
    lhs += v * v;
  }
  const double a_f = a.squaredNorm();
  const double b_f = b.squaredNorm();
  const double a_2i = two_inf_norm(a);
  const double b_2i = two_inf_norm(b);
  const double bound = per_line_bound * std::min(a_f * b_2i * b_2i, a_2i * a_2i * b_f);
  return bound - lhs;
}

OracleReport check_sparse_projection_bound(int trials, std::uint64_t seed) {
  OracleReport rep{"sparse-projection", 0, 0.0, 0};
  const Index n = 25;
  const Index r = 3;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(derive_seed(seed, tag_of("sparse-projection"), {static_cast<std::uint64_t>(t)}));
    // 2 alpha p n = k cells per row and column at most.
    const Index k = static_cast<Index>(rng.below(n / 2 + 1));
    const auto pattern = random_sparse_pattern(n, n, k, rng.next_u64());
    Matrix a = gaussian(n, r, rng);
    Matrix b = gaussian(n, r, rng);
    for (Index i = 0; i < n; ++i) {
      a.row(i) *= std::exp(rng.normal());  // uneven row norms
      b.row(i) *= std::exp(rng.normal());
    }
    const double slack = sparse_projection_slack(pattern, static_cast<double>(k), a, b);
    const double scale = static_cast<double>(std::max<Index>(k, 1)) * a.squaredNorm() * b.squaredNorm();
    record(rep, slack, slack < -1e-9 * std::max(1.0, scale));
  }
  return rep;
}

OracleReport check_threshold_lemma(int trials, std::uint64_t seed) {
  OracleReport rep{"threshold", 0, 0.0, 0};
  const double gamma = 0.9;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(derive_seed(seed, tag_of("threshold"), {static_cast<std::uint64_t>(t)}));
    const Index n = 20 + static_cast<Index>(rng.below(31));
    const Index r = 1 + static_cast<Index>(rng.below(3));
    const double p = rng.uniform(0.3, 1.0);
    const double alpha = rng.uniform(0.0, 0.3);
    const Instance inst = make_instance(n, n, r, p, alpha, rng.next_u64());
    const double unit = inst.truth.entry_scale();
    const double beta = unit * rng.uniform(1.0, 1.5);
    const int step = static_cast<int>(rng.below(11));

    double decay = 1.0;
    for (int s = 0; s < step; ++s) decay *= gamma;
    // Perturbation strictly inside the premise; about a third of the
    // entries sit on its boundary.
    const double radius = unit * decay * (1.0 - 1e-12);
    IterateState state;
    state.t = step;
    state.xi = beta * decay;
    state.l = inst.truth.l_star;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) state.l(i, j) += radius * std::clamp(1.5 * rng.normal(), -1.0, 1.0);

    double worst = std::numeric_limits<double>::infinity();
    bool violated = false;
    for (const ThresholdKind& kind : {ThresholdKind::soft(), ThresholdKind::scad(3.0)}) {
      SolverConfig cfg;
      cfg.kind = kind;
      const ObservationSet s = s_update(state, inst.data.observations, cfg);
      const double bound = (kind.lipschitz_k() + kind.offset_b()) * state.xi;

      auto it = inst.truth.s_star.begin();
      double err = 0.0;
      for (const Entry& e : s.entries()) {
        while (it != inst.truth.s_star.end() && it->cell() < e.cell()) ++it;
        const bool planted = it != inst.truth.s_star.end() && it->cell() == e.cell();
        if (e.value != 0.0 && !planted) violated = true;
        err = std::max(err, std::abs(e.value - (planted ? it->value : 0.0)));
      }
      worst = std::min(worst, bound - err);
      if (err > bound * (1.0 + 1e-9)) violated = true;
    }
    record(rep, worst, violated);
  }
  return rep;
}

std::vector<OracleReport> run_all_oracles(int trials, std::uint64_t seed) {
  return {check_sparse_spectral(trials, seed), check_perturbation_bound(trials, seed),
          check_sparse_projection_bound(trials, seed), check_threshold_lemma(trials, seed)};
}

}  // namespace rmc
