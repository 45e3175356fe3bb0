#pragma once

// Entrywise thresholding operators T_lambda.
//
// A conforming operator satisfies, for every lambda > 0:
//   (P1) T(x) = 0 whenever |x| <= lambda;
//   (P2) |T(x) - T(y)| <= K |x - y| for all x, y;
//   (P3) |T(x) - x| <= B lambda for all x.
// Soft (K = 1, B = 1) and SCAD with a > 2 (K = (a-1)/(a-2), B = 1) conform.
// Hard thresholding is discontinuous at |x| = lambda, breaks P2 and is
// reported as non-conforming.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmc/observations.hpp"

namespace rmc {

class ThresholdKind {
 public:
  enum class Variant { Soft, Scad, Hard };

  static ThresholdKind soft() { return ThresholdKind(Variant::Soft, 0.0); }
  /// Throws ParameterError unless a > 2.
  static ThresholdKind scad(double a = 3.0);
  static ThresholdKind hard() { return ThresholdKind(Variant::Hard, 0.0); }
  /// "soft" | "scad" | "hard".
  static ThresholdKind parse(std::string_view name, double scad_a = 3.0);

  Variant variant() const { return variant_; }
  double scad_a() const { return a_; }
  bool conforming() const { return variant_ != Variant::Hard; }
  /// P2 constant K; 0 for Hard, which has none.
  double lipschitz_k() const;
  /// P3 constant B; 0 for Hard.
  double offset_b() const;
  std::string name() const;

  /// Unchecked evaluation; lambda must already be validated.
  double operator()(double lambda, double x) const;

 private:
  ThresholdKind(Variant v, double a) : variant_(v), a_(a) {}

  Variant variant_;
  double a_;
};

/// T_lambda(x) for `kind`. Throws ParameterError if lambda <= 0.
double apply_scalar(const ThresholdKind& kind, double lambda, double x);

/// Entrywise T_lambda over an observation set; the index set is unchanged
/// and zero results stay as explicit entries.
ObservationSet apply_sparse(const ThresholdKind& kind, double lambda,
                            const ObservationSet& residual);

struct PropertyReport {
  bool p1_holds = true;
  double p2_max_ratio = 0.0;
  /// Set when the worst P2 pair straddles a jump: the difference quotient
  /// keeps growing as the pair is bisected toward the discontinuity.
  bool p2_unbounded = false;
  double p3_max_offset_ratio = 0.0;
  std::size_t samples = 0;

  /// p1 exact, P2/P3 ratios within the kind's constants plus 1e-12.
  bool conforms_to(const ThresholdKind& kind) const;
};

/// Sorted grid covering [-2 s lambda_max, 2 s lambda_max] (s = a for SCAD,
/// 2 otherwise) with spacing lambda_min / 100 and every knot inserted
/// exactly.
std::vector<double> make_property_grid(const ThresholdKind& kind, std::span<const double> lambdas);

/// Exhaustive check of P1-P3 on a grid.
///
/// P1 is checked on every grid point with |x| <= lambda, P2 on every pair
/// of grid points and P3 on every grid point. Throws ParameterError if the
/// grid is unsorted, too coarse, too narrow or misses a knot.
PropertyReport verify_properties(const ThresholdKind& kind, std::span<const double> lambdas,
                                 std::span<const double> xs);

}  // namespace rmc
