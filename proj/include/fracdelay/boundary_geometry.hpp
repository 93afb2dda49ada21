#pragma once

// Stability boundary of x(t) = x0 + sum phi(t-1-j) [(a-1) x(j) + b x(j-tau)]
// in the complex a-plane.  With z = e^{it} on the unit circle the
// characteristic equation z (1 - 1/z)^alpha - (a - 1) - b z^-tau = 0 solves to
//
//   gamma(t) = 1 + (2 sin(t/2))^alpha e^{i(alpha pi/2 + (1 - alpha/2) t)} - b e^{-i tau t},
//
// t in [0, 2 pi].  The system is asymptotically stable exactly when gamma
// winds once, anticlockwise, around a.

#include <complex>
#include <cstddef>
#include <vector>

namespace fracdelay {

using cplx = std::complex<double>;

inline constexpr double kBoundaryTolerance = 1e-6;

cplx gamma_eval(double alpha, double b, int tau, double t);
/// d gamma / dt.  Unbounded at t = 0 and 2 pi when alpha < 1.
cplx gamma_derivative(double alpha, double b, int tau, double t);
cplx gamma_second_derivative(double alpha, double b, int tau, double t);

struct CurveSample {
  double t;
  cplx point;
  cplx tangent;
};

/// Closed polyline through gamma.  samples.front() is t = 0 and
/// samples.back() is t = 2 pi, both exactly at 1 - b.
struct BoundaryCurve {
  double alpha = 1.0;
  double b = 0.0;
  int tau = 1;
  std::vector<CurveSample> samples;

  std::size_t size() const { return samples.size(); }
};

/// Uniform grid of `base_resolution` intervals, then bisected wherever the
/// polyline turns by more than 5 degrees, bulges off the chord, or |gamma'|
/// drops below 1e-3 of its median.  Throws RefinementBudgetExceeded past
/// 64 * base_resolution samples.
BoundaryCurve sample_curve(double alpha, double b, int tau, std::size_t base_resolution = 1024);

double distance_to_curve(const BoundaryCurve& curve, cplx a);

/// Signed number of turns of gamma around a.  Throws PointOnCurve when a is
/// within `tolerance` of the polyline.
int winding_number(const BoundaryCurve& curve, cplx a, double tolerance = kBoundaryTolerance);

enum class Classification { Stable, Unstable, Boundary };
const char* to_string(Classification c);

struct StabilityVerdict {
  int winding = 0;
  Classification classification = Classification::Unstable;
  double distance_to_curve = 0.0;
  /// winding >= 2; reported Unstable.
  bool multiply_covered = false;
};

StabilityVerdict classify_point(const BoundaryCurve& curve, cplx a);
/// Samples the curve at the default resolution first.
StabilityVerdict classify_point(double alpha, double b, int tau, cplx a);

struct SelfIntersection {
  double t1;
  double t2;
  cplx point;
  /// Newton on gamma(t1) = gamma(t2) reached |residual| < 1e-10.
  bool polished;
  double residual;
};

/// Pairs t1 < t2 with gamma(t1) = gamma(t2), sorted by t1.  The trivial
/// closure (0, 2 pi) is left out; a contact of the t = 0 vertex with the rest
/// of the curve is reported with t1 = 0.
std::vector<SelfIntersection> find_self_intersections(const BoundaryCurve& curve);

/// Parameters in (0, 2 pi) where |gamma'| < 1e-8, sorted.
std::vector<double> find_cusps(const BoundaryCurve& curve);
std::vector<double> find_cusps(double alpha, double b, int tau);

/// z (1 - 1/z)^alpha - (a - 1) - b z^-tau, principal branch.
cplx char_residual(double alpha, cplx a, double b, int tau, cplx z);

/// |det M(z) - z^tau * char_residual| for the (tau+1)-dimensional first-order
/// form of the delay system (state x(t), x(t-1), ..., x(t-tau)).
double determinant_equivalence(double alpha, cplx a, double b, int tau, cplx z);

// ---------------------------------------------------------------------------
// Winding census over an a-plane grid

struct WindingComponent {
  int winding;
  std::size_t cells;
};

struct WindingCensus {
  std::size_t grid = 0;
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  /// Row-major winding of every grid node, y outer.
  std::vector<int> windings;
  /// Bounded 8-connected components of equal winding (the outer component
  /// touching the frame is dropped).
  std::vector<WindingComponent> components;

  int stable() const;
  int unstable() const;
};

/// grid x grid nodes over the curve's bounding box padded by 5% per side.
WindingCensus winding_census(const BoundaryCurve& curve, std::size_t grid = 400);

// ---------------------------------------------------------------------------
// Exact census: faces of the planar graph whose vertices are the
// self-intersections of gamma.  Adjacent faces differ in winding by one, the
// face left of the curve being the higher.

struct CurveFace {
  int winding;
  double area;
};

struct FaceCensus {
  /// Bounded faces only.
  std::vector<CurveFace> faces;

  int stable() const;
  int unstable() const;
};

/// Throws ComputationError when gamma touches its own t = 0 vertex.
FaceCensus face_census(const BoundaryCurve& curve);

}  // namespace fracdelay
