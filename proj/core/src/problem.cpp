#include "rmc/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rmc/errors.hpp"
#include "rmc/matrix_io.hpp"
#include "rmc/random.hpp"

namespace rmc {

namespace {
constexpr std::uint64_t kTagFactors = tag_of("factors");
constexpr std::uint64_t kTagMask = tag_of("mask");
constexpr std::uint64_t kTagOutliers = tag_of("outliers");
}  // namespace

double GroundTruth::entry_scale() const {
  const double n = static_cast<double>(std::max(l_star.rows(), l_star.cols()));
  return incoherence.mu * static_cast<double>(rank()) / n * sigma_max();
}

GroundTruth ground_truth_from(Matrix l_star, Index r) {
  GroundTruth gt;
  gt.factors = truncated_svd(l_star, r, with_method(SvdMethod::Dense));
  gt.incoherence = incoherence(gt.factors.u, gt.factors.v, gt.factors.sigma);
  gt.l_star = std::move(l_star);
  return gt;
}

GroundTruth gen_ground_truth(Index n1, Index n2, Index r, std::uint64_t seed) {
  if (n1 < 1 || n2 < 1 || r < 1 || r > std::min(n1, n2)) {
    throw DimensionError("gen_ground_truth: need 1 <= r <= min(n1, n2)");
  }
  CounterRng rng(derive_seed(seed, kTagFactors));
  Matrix x(n1, r);
  Matrix y(n2, r);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < r; ++j) x(i, j) = rng.normal();
  for (Index i = 0; i < n2; ++i)
    for (Index j = 0; j < r; ++j) y(i, j) = rng.normal();
  return ground_truth_from(x * y.transpose(), r);
}

Mask sample_mask(Index n1, Index n2, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("sample_mask: p must lie in (0, 1]");
  if (n1 < 1 || n2 < 1) throw DimensionError("sample_mask: dimensions must be positive");
  CounterRng rng(derive_seed(seed, kTagMask));
  Mask m{n1, n2, p, {}};
  m.cells.reserve(static_cast<std::size_t>(p * static_cast<double>(n1 * n2) * 1.1) + 16);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j)
      if (rng.uniform() < p) m.cells.push_back({i, j});
  return m;
}

SparsityStats sparsity_stats(Index n1, Index n2, double p, const std::vector<Entry>& outliers) {
  std::vector<Index> rows(static_cast<std::size_t>(n1), 0);
  std::vector<Index> cols(static_cast<std::size_t>(n2), 0);
  for (const Entry& e : outliers) {
    ++rows[static_cast<std::size_t>(e.row)];
    ++cols[static_cast<std::size_t>(e.col)];
  }
  SparsityStats s;
  s.max_row_count = rows.empty() ? 0 : *std::max_element(rows.begin(), rows.end());
  s.max_col_count = cols.empty() ? 0 : *std::max_element(cols.begin(), cols.end());
  s.total_outliers = static_cast<Index>(outliers.size());
  const double n = static_cast<double>(std::max(n1, n2));
  s.alpha_hat = static_cast<double>(std::max(s.max_row_count, s.max_col_count)) / (p * n);
  return s;
}

CorruptedObservations inject_outliers(const GroundTruth& gt, const Mask& mask, double alpha,
                                      std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("inject_outliers: alpha must lie in [0, 1)");
  if (mask.cells.empty()) throw ParameterError("inject_outliers: mask is empty");
  if (mask.rows != gt.l_star.rows() || mask.cols != gt.l_star.cols()) {
    throw DimensionError("inject_outliers: mask and ground truth shapes differ");
  }
  const double bound = 2.0 * entrywise_max_norm(gt.l_star);
  CounterRng rng(derive_seed(seed, kTagOutliers));

  std::vector<Entry> observed;
  std::vector<Entry> outliers;
  observed.reserve(mask.cells.size());
  for (const Cell& c : mask.cells) {
    // Two draws per cell regardless of the outcome keep streams aligned.
    const double event = rng.uniform();
    const double magnitude = rng.uniform(-bound, bound);
    double value = gt.l_star(c.row, c.col);
    if (event < alpha) {
      outliers.push_back({c.row, c.col, magnitude});
      value += magnitude;
    }
    observed.push_back({c.row, c.col, value});
  }
  CorruptedObservations out{
      ObservationSet(mask.rows, mask.cols, mask.sample_rate, std::move(observed)),
      std::move(outliers), {}};
  out.stats = sparsity_stats(mask.rows, mask.cols, mask.sample_rate, out.outliers);
  return out;
}

AssumptionReport check_assumptions(const GroundTruth& gt, const ObservationSet& obs,
                                   const SparsityStats& stats) {
  AssumptionReport rep;
  rep.mu = gt.incoherence.mu;
  rep.kappa = gt.incoherence.kappa;
  rep.alpha_hat = stats.alpha_hat;
  rep.p = obs.sample_rate();
  rep.n = std::max(obs.rows(), obs.cols());
  rep.r = gt.rank();
  const double n = static_cast<double>(rep.n);
  const double r = static_cast<double>(rep.r);
  const double denom = std::pow(rep.kappa, 4) * std::pow(rep.mu, 3) * r * r * r * std::log(n);
  rep.sampling_ratio = denom > 0.0 ? rep.p * n / denom : std::numeric_limits<double>::infinity();
  rep.outlier_ratio = rep.alpha_hat * rep.kappa * rep.kappa * rep.mu * rep.mu * r * r;
  return rep;
}

Instance make_instance(Index n1, Index n2, Index r, double p, double alpha, std::uint64_t seed) {
  Instance inst{gen_ground_truth(n1, n2, r, seed), {}};
  const Mask mask = sample_mask(n1, n2, p, seed);
  inst.data = inject_outliers(inst.truth, mask, alpha, seed);
  inst.truth.s_star = inst.data.outliers;
  return inst;
}

void write_truth(std::ostream& out, const GroundTruth& gt) {
  write_dense(out, gt.l_star);
  out << "outliers " << gt.s_star.size() << '\n';
  for (const Entry& e : gt.s_star) out << e.row << ' ' << e.col << ' ' << format_real(e.value) << '\n';
}

GroundTruth read_truth(std::istream& in, Index r, std::string_view source) {
  Matrix l_star = read_dense(in, source);
  detail::LineReader reader(in, source);
  std::string line;
  std::vector<Entry> outliers;
  if (reader.next(line)) {
    auto head = detail::split_ws(line);
    if (head.size() != 2 || head[0] != "outliers") reader.fail("expected 'outliers K'");
    const long long count = detail::parse_integer(head[1], reader);
    if (count < 0) reader.fail("negative outlier count");
    for (long long k = 0; k < count; ++k) {
      if (!reader.next(line)) reader.fail("expected " + std::to_string(count) + " outlier lines");
      auto tok = detail::split_ws(line);
      if (tok.size() != 3) reader.fail("expected 'i j value'");
      Entry e{detail::parse_integer(tok[0], reader), detail::parse_integer(tok[1], reader),
              detail::parse_real(tok[2], reader)};
      if (e.row < 0 || e.row >= l_star.rows() || e.col < 0 || e.col >= l_star.cols()) {
        reader.fail("outlier index out of range");
      }
      if (!outliers.empty() && !(outliers.back().cell() < e.cell())) {
        reader.fail("outliers must be strictly sorted by (i, j)");
      }
      outliers.push_back(e);
    }
  }
  GroundTruth gt = ground_truth_from(std::move(l_star), r);
  gt.s_star = std::move(outliers);
  return gt;
}

void save_truth(const std::string& path, const GroundTruth& gt) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_truth(out, gt);
  if (!out) throw IoError("write failed for '" + path + "'");
}

GroundTruth load_truth(const std::string& path, Index r) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_truth(in, r, path);
}

}  // namespace rmc
