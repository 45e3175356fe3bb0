#include "rmc/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmc/errors.hpp"

namespace rmc {

ThresholdKind ThresholdKind::scad(double a) {
  if (!(a > 2.0) || !std::isfinite(a)) {
    throw ParameterError("SCAD parameter a must be > 2, got " + std::to_string(a));
  }
  return ThresholdKind(Variant::Scad, a);
}

ThresholdKind ThresholdKind::parse(std::string_view name, double scad_a) {
  if (name == "soft") return soft();
  if (name == "scad") return scad(scad_a);
  if (name == "hard") return hard();
  throw ParameterError("unknown threshold '" + std::string(name) + "' (soft|scad|hard)");
}

double ThresholdKind::lipschitz_k() const {
  switch (variant_) {
    case Variant::Soft: return 1.0;
    case Variant::Scad: return (a_ - 1.0) / (a_ - 2.0);
    case Variant::Hard: return 0.0;
  }
  return 0.0;
}

double ThresholdKind::offset_b() const { return variant_ == Variant::Hard ? 0.0 : 1.0; }

std::string ThresholdKind::name() const {
  switch (variant_) {
    case Variant::Soft: return "soft";
    case Variant::Scad: return "scad";
    case Variant::Hard: return "hard";
  }
  return "?";
}

double ThresholdKind::operator()(double lambda, double x) const {
  const double ax = std::abs(x);
  if (ax <= lambda) return 0.0;
  double mag = ax;
  switch (variant_) {
    case Variant::Soft:
      mag = ax - lambda;
      break;
    case Variant::Scad:
      if (ax <= 2.0 * lambda) {
        mag = ax - lambda;
      } else if (ax < a_ * lambda) {
        mag = ((a_ - 1.0) * ax - a_ * lambda) / (a_ - 2.0);
      }
      break;
    case Variant::Hard:
      break;
  }
  return std::copysign(mag, x);
}

double apply_scalar(const ThresholdKind& kind, double lambda, double x) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("threshold lambda must be positive, got " + std::to_string(lambda));
  }
  return kind(lambda, x);
}

ObservationSet apply_sparse(const ThresholdKind& kind, double lambda,
                            const ObservationSet& residual) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("threshold lambda must be positive, got " + std::to_string(lambda));
  }
  std::vector<double> values;
  values.reserve(residual.size());
  for (const Entry& e : residual.entries()) values.push_back(kind(lambda, e.value));
  return residual.with_values(values);
}

bool PropertyReport::conforms_to(const ThresholdKind& kind) const {
  constexpr double kTol = 1e-12;
  return kind.conforming() && p1_holds && !p2_unbounded &&
         p2_max_ratio <= kind.lipschitz_k() + kTol &&
         p3_max_offset_ratio <= kind.offset_b() + kTol;
}

namespace {

std::vector<double> knots_for(const ThresholdKind& kind, double lambda) {
  std::vector<double> k{lambda, 2.0 * lambda};
  if (kind.variant() == ThresholdKind::Variant::Scad) k.push_back(kind.scad_a() * lambda);
  const std::size_t n = k.size();
  for (std::size_t i = 0; i < n; ++i) k.push_back(-k[i]);
  return k;
}

double reach_scale(const ThresholdKind& kind) {
  return kind.variant() == ThresholdKind::Variant::Scad ? kind.scad_a() : 2.0;
}

void validate_lambdas(std::span<const double> lambdas) {
  if (lambdas.empty()) throw ParameterError("verify_properties: no lambdas given");
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ParameterError("verify_properties: lambda must be > 0");
  }
}

// Bisects [lo, hi] toward the larger jump. A continuous function sees the
// jump vanish with the gap; a discontinuity keeps it.
bool jump_persists(const ThresholdKind& kind, double lambda, double lo, double hi) {
  const double initial = std::abs(kind(lambda, hi) - kind(lambda, lo));
  if (initial == 0.0) return false;
  for (int it = 0; it < 60 && hi - lo > 1e-14 * lambda; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double left = std::abs(kind(lambda, mid) - kind(lambda, lo));
    const double right = std::abs(kind(lambda, hi) - kind(lambda, mid));
    if (left >= right) hi = mid; else lo = mid;
  }
  return std::abs(kind(lambda, hi) - kind(lambda, lo)) >= 0.5 * initial;
}

}  // namespace

std::vector<double> make_property_grid(const ThresholdKind& kind, std::span<const double> lambdas) {
  validate_lambdas(lambdas);
  const double lmin = *std::min_element(lambdas.begin(), lambdas.end());
  const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
  const double h = lmin / 128.0;
  const double reach = 2.0 * reach_scale(kind) * lmax;
  const auto steps = static_cast<long long>(std::ceil(reach / h));

  std::vector<double> knots;
  for (double l : lambdas) {
    auto k = knots_for(kind, l);
    knots.insert(knots.end(), k.begin(), k.end());
  }
  std::sort(knots.begin(), knots.end());

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(2 * steps + 1) + knots.size());
  for (long long i = -steps; i <= steps; ++i) {
    const double x = static_cast<double>(i) * h;
    // Drop points that nearly coincide with a knot; the knot replaces them.
    auto it = std::lower_bound(knots.begin(), knots.end(), x);
    bool near = false;
    if (it != knots.end() && *it - x < 0.25 * h && *it != x) near = true;
    if (it != knots.begin() && x - *std::prev(it) < 0.25 * h && *std::prev(it) != x) near = true;
    if (!near) grid.push_back(x);
  }
  grid.insert(grid.end(), knots.begin(), knots.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

PropertyReport verify_properties(const ThresholdKind& kind, std::span<const double> lambdas,
                                 std::span<const double> xs) {
  validate_lambdas(lambdas);
  if (xs.size() < 2) throw ParameterError("verify_properties: grid needs at least two points");
  const double lmin = *std::min_element(lambdas.begin(), lambdas.end());
  const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
  const double reach = 2.0 * reach_scale(kind) * lmax;

  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw ParameterError("verify_properties: grid must be strictly increasing");
    if (xs[i] - xs[i - 1] > lmin / 100.0 * (1.0 + 1e-12)) {
      throw ParameterError("verify_properties: grid spacing exceeds lambda_min / 100");
    }
  }
  if (xs.front() > -reach || xs.back() < reach) {
    throw ParameterError("verify_properties: grid does not cover [-" + std::to_string(reach) +
                         ", " + std::to_string(reach) + "]");
  }
  for (double l : lambdas) {
    for (double k : knots_for(kind, l)) {
      if (!std::binary_search(xs.begin(), xs.end(), k)) {
        throw ParameterError("verify_properties: grid is missing knot " + std::to_string(k));
      }
    }
  }

  PropertyReport rep;
  std::vector<double> t(xs.size());
  for (double l : lambdas) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      t[i] = kind(l, xs[i]);
      if (std::abs(xs[i]) <= l && t[i] != 0.0) rep.p1_holds = false;
      rep.p3_max_offset_ratio = std::max(rep.p3_max_offset_ratio, std::abs(t[i] - xs[i]) / l);
    }
    double worst = -1.0;
    std::size_t wi = 0, wj = 1;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = i + 1; j < xs.size(); ++j) {
        const double ratio = std::abs(t[j] - t[i]) / (xs[j] - xs[i]);
        if (ratio > worst) {
          worst = ratio;
          wi = i;
          wj = j;
        }
      }
    }
    rep.p2_max_ratio = std::max(rep.p2_max_ratio, worst);
    if (jump_persists(kind, l, xs[wi], xs[wj])) rep.p2_unbounded = true;
    rep.samples += xs.size();
  }
  return rep;
}

}  // namespace rmc
