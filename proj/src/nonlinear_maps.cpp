#include "fracdelay/nonlinear_maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracdelay/boundary_geometry.hpp"
#include "fracdelay/errors.hpp"
#include "fracdelay/fractional_kernel.hpp"
#include "fracdelay/parallel.hpp"

namespace fracdelay {

namespace {

constexpr double kPi = std::numbers::pi;

double residual_of(const MapModel& map, double b, double x) { return std::abs(map.eval(x) + b * x - x); }

// Roots of c2 x^2 + c1 x + c0, cancellation-free.
std::vector<double> quadratic_roots(double c2, double c1, double c0) {
  if (c2 == 0.0) {
    if (c1 == 0.0) return {};
    return {-c0 / c1};
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) return {};
  const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
  if (q == 0.0) return {0.0};
  return {q / c2, c0 / q};
}

double polish(const MapModel& map, double b, double x) {
  for (int it = 0; it < 8; ++it) {
    const auto d = map.derivative(x);
    if (!d) break;
    const double g = map.eval(x) + b * x - x;
    const double dg = *d + b - 1.0;
    if (dg == 0.0 || g == 0.0) break;
    const double nx = x - g / dg;
    if (residual_of(map, b, nx) >= residual_of(map, b, x)) break;
    x = nx;
  }
  return x;
}

}  // namespace

std::vector<FixedPointRecord> fixed_points(const MapModel& map, double b) {
  if (!std::isfinite(b)) throw DomainError("b must be finite");
  std::vector<double> xs;
  switch (map.kind()) {
    case MapKind::Logistic: {
      const double lambda = std::get<LogisticMap>(map.variant()).lambda;
      xs.push_back(0.0);
      if (lambda != 0.0) xs.push_back(1.0 - (1.0 - b) / lambda);
      break;
    }
    case MapKind::Cubic: {
      const double beta = std::get<CubicMap>(map.variant()).beta;
      xs.push_back(0.0);
      if (beta != 0.0) {
        const double s = 1.0 - b / beta;
        if (s > 0.0) {
          xs.push_back(std::sqrt(s));
          xs.push_back(-std::sqrt(s));
        }
      }
      break;
    }
    case MapKind::Henon: {
      const double A = std::get<HenonMap>(map.variant()).A;
      xs = quadratic_roots(A, 1.0 - b, -1.0);
      break;
    }
    case MapKind::Lozi: {
      const double A = std::get<LoziMap>(map.variant()).A;
      if (1.0 + A - b > 0.0) xs.push_back(1.0 / (1.0 + A - b));
      if (1.0 - A - b < 0.0) xs.push_back(1.0 / (1.0 - A - b));
      break;
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<FixedPointRecord> out;
  for (double x : xs) {
    x = polish(map, b, x);
    out.push_back({x, map.derivative(x), b, residual_of(map, b, x)});
  }
  return out;
}

// ---------------------------------------------------------------------------

double RegionCurves::line_a1(double b) const { return 1.0 - b; }

double RegionCurves::line_a2(double b) const {
  return 1.0 - std::pow(2.0, alpha) - (tau % 2 == 0 ? 1.0 : -1.0) * b;
}

std::optional<std::pair<double, double>> RegionCurves::parametric(double t) const {
  const double st = std::sin(tau * t);
  if (std::abs(st) < 1e-12) return std::nullopt;
  const double s = t <= kPi ? std::sin(0.5 * t) : std::sin(0.5 * (2.0 * kPi - t));
  const double amp = std::pow(2.0 * s, alpha);
  const double b = -amp * std::sin(0.5 * kPi * alpha + (1.0 - 0.5 * alpha) * t) / st;
  const double a = 1.0 + amp * std::sin(0.5 * (kPi * alpha + (2.0 * (tau + 1) - alpha) * t)) / st;
  return std::pair{b, a};
}

std::vector<std::array<double, 3>> RegionCurves::sample_parametric(std::size_t n) const {
  std::vector<std::array<double, 3>> out;
  out.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = kPi * static_cast<double>(k) / static_cast<double>(n + 1);
    if (const auto p = parametric(t)) out.push_back({t, p->first, p->second});
  }
  return out;
}

RegionCurves region_curves(double alpha, int tau) {
  require_order(alpha);
  if (tau < 1) throw DomainError("delay tau must be >= 1");
  return {alpha, tau};
}

std::vector<double> real_axis_crossings(double alpha, int tau, double b) {
  require_order(alpha);
  if (tau < 1) throw DomainError("delay tau must be >= 1");
  auto im = [&](double t) { return gamma_eval(alpha, b, tau, t).imag(); };
  std::vector<double> out{1.0 - b, gamma_eval(alpha, b, tau, kPi).real()};
  constexpr int n = 4096;
  double t0 = kPi / n, f0 = im(t0);
  for (int k = 2; k < n; ++k) {
    const double t1 = kPi * k / n, f1 = im(t1);
    if (f0 == 0.0) {
      out.push_back(gamma_eval(alpha, b, tau, t0).real());
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      double lo = t0, hi = t1, flo = f0;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = im(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(gamma_eval(alpha, b, tau, 0.5 * (lo + hi)).real());
    }
    t0 = t1;
    f0 = f1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::pair<double, double>> stable_interval(double alpha, int tau, double b) {
  const auto xs = real_axis_crossings(alpha, tau, b);
  const BoundaryCurve curve = sample_curve(alpha, b, tau, 4096);
  std::optional<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (xs[i + 1] - xs[i] < 1e-12) continue;
    const auto v = classify_point(curve, cplx(0.5 * (xs[i] + xs[i + 1]), 0.0));
    if (v.classification != Classification::Stable) continue;
    if (!out) out = std::pair{xs[i], xs[i + 1]};
    out->first = std::min(out->first, xs[i]);
    out->second = std::max(out->second, xs[i + 1]);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t SweepResult::scored() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.excluded; }));
}

std::size_t SweepResult::agreed() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.excluded && r.agree; }));
}

double SweepResult::agreement() const {
  const std::size_t n = scored();
  return n == 0 ? 1.0 : static_cast<double>(agreed()) / static_cast<double>(n);
}

SweepResult predict_and_verify(MapKind kind, double alpha, int tau, double b, double param_min, double param_max,
                               std::size_t samples, const SweepOptions& options) {
  require_order(alpha);
  if (tau < 1) throw DomainError("delay tau must be >= 1");
  if (samples < 1) throw DomainError("sweep needs at least one sample");
  if (!(param_min <= param_max)) throw DomainError("sweep range must satisfy min <= max");
  if (options.steps < 1) throw DomainError("steps must be >= 1");

  const double tol = options.tol > 0.0 ? options.tol
                                       : (kind == MapKind::Henon || kind == MapKind::Lozi ? 1e-5 : 1e-4);
  SweepResult result;
  result.interval = stable_interval(alpha, tau, b);

  struct Job {
    double param;
    FixedPointRecord fp;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < samples; ++i) {
    const double p = samples == 1 ? param_min
                                  : param_min + (param_max - param_min) * static_cast<double>(i) /
                                                    static_cast<double>(samples - 1);
    for (const auto& fp : fixed_points(MapModel::from_parameter(kind, p, b), b)) jobs.push_back({p, fp});
  }

  const FractionalKernel kernel(alpha);
  kernel.coefficients(options.steps);
  result.rows.resize(jobs.size());
  parallel_for(jobs.size(), resolve_thread_count(options.threads), [&](std::size_t i) {
    const auto& job = jobs[i];
    SweepRow row{job.param, job.fp.x_star, job.fp.a_lin, false, Outcome::Undetermined, false, true};
    if (job.fp.a_lin) {
      const double a = *job.fp.a_lin;
      if (result.interval) {
        const auto [lo, hi] = *result.interval;
        row.predicted = a > lo && a < hi;
        row.excluded = std::abs(a - lo) < options.margin || std::abs(a - hi) < options.margin;
      } else {
        row.excluded = false;
      }
      const double scale = std::max(1.0, std::abs(job.fp.x_star));
      const double dx = options.offset * scale;
      const auto map = MapModel::from_parameter(kind, job.param, b);
      const auto sys = NonlinearDelaySystem::with_constant_history(map, b, tau, alpha, job.fp.x_star + dx);
      const auto traj = simulate_nonlinear(sys, options.steps, kernel);
      row.simulated =
          verdict_near_equilibrium(traj.states, job.fp.x_star, tol * scale, options.dwell, 0.5 * dx).outcome;
      row.agree = row.predicted == (row.simulated == Outcome::ConvergedToFixedPoint);
    }
    result.rows[i] = row;
  });
  return result;
}

}  // namespace fracdelay
