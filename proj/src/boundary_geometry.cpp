#include "fracdelay/boundary_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

#include "fracdelay/errors.hpp"
#include "fracdelay/fractional_kernel.hpp"

namespace fracdelay {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_curve_params(double alpha, double b, int tau) {
  require_order(alpha);
  if (tau < 1) throw DomainError("delay tau must be >= 1, got " + std::to_string(tau));
  if (!std::isfinite(b)) throw DomainError("b must be finite");
}

// sin(t/2) and cos(t/2), taken from the reflected angle past pi so that
// t = 2 pi lands on sin = 0 exactly and the curve closes.
struct HalfAngle {
  double s;
  double c;
};

HalfAngle half_angle(double t) {
  if (t <= kPi) return {std::sin(0.5 * t), std::cos(0.5 * t)};
  const double r = 0.5 * (kTwoPi - t);
  return {std::sin(r), -std::cos(r)};
}

// P(t) = (2 sin(t/2))^alpha e^{i theta}, theta = alpha pi/2 + (1 - alpha/2) t.
cplx power_term(double alpha, double t, const HalfAngle& h) {
  if (h.s <= 0.0) return 0.0;
  return std::polar(std::pow(2.0 * h.s, alpha), 0.5 * alpha * kPi + (1.0 - 0.5 * alpha) * t);
}

// P'/P
cplx log_derivative(double alpha, const HalfAngle& h) {
  return {0.5 * alpha * h.c / h.s, 1.0 - 0.5 * alpha};
}

double angle_between(cplx u, cplx v) {
  const double nu = std::abs(u), nv = std::abs(v);
  if (nu == 0.0 || nv == 0.0) return kPi;
  return std::abs(std::arg(v / u));
}

double segment_distance(cplx p, cplx q, cplx a) {
  const cplx d = q - p;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(a - p);
  const double u = std::clamp(((a - p) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(a - (p + u * d));
}

double cross(cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); }

}  // namespace

cplx gamma_eval(double alpha, double b, int tau, double t) {
  const HalfAngle h = half_angle(t);
  return 1.0 + power_term(alpha, t, h) - b * std::polar(1.0, -static_cast<double>(tau) * t);
}

cplx gamma_derivative(double alpha, double b, int tau, double t) {
  const HalfAngle h = half_angle(t);
  const double ft = static_cast<double>(tau);
  const cplx delay = cplx(0.0, ft * b) * std::polar(1.0, -ft * t);
  if (h.s <= 0.0) {
    if (alpha == 1.0) return cplx(0.0, 1.0) * std::polar(1.0, t) + delay;
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  return power_term(alpha, t, h) * log_derivative(alpha, h) + delay;
}

cplx gamma_second_derivative(double alpha, double b, int tau, double t) {
  const HalfAngle h = half_angle(t);
  const double ft = static_cast<double>(tau);
  const cplx delay = ft * ft * b * std::polar(1.0, -ft * t);
  if (h.s <= 0.0) {
    if (alpha == 1.0) return -std::polar(1.0, t) + delay;
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  const cplx p = power_term(alpha, t, h);
  const cplx l = log_derivative(alpha, h);
  const double dl = -0.25 * alpha / (h.s * h.s);
  return p * (l * l + dl) + delay;
}

// ---------------------------------------------------------------------------

BoundaryCurve sample_curve(double alpha, double b, int tau, std::size_t base_resolution) {
  require_curve_params(alpha, b, tau);
  if (base_resolution < 256) throw DomainError("base_resolution must be >= 256");

  const std::size_t budget = 64 * base_resolution;
  const double base_dt = kTwoPi / static_cast<double>(base_resolution);
  const double min_dt = base_dt / 4096.0;
  const double max_turn = 5.0 * kPi / 180.0;

  auto eval = [&](double t) { return gamma_eval(alpha, b, tau, t); };

  std::vector<double> ts(base_resolution + 1);
  // pi * (2k/N): k = N/2 gives pi and k = N gives 2 pi without rounding.
  for (std::size_t k = 0; k <= base_resolution; ++k) {
    ts[k] = kPi * (2.0 * static_cast<double>(k) / static_cast<double>(base_resolution));
  }
  std::vector<cplx> pts(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) pts[k] = eval(ts[k]);

  std::vector<double> speeds;
  speeds.reserve(base_resolution);
  for (std::size_t k = 1; k < base_resolution; ++k) speeds.push_back(std::abs(gamma_derivative(alpha, b, tau, ts[k])));
  std::nth_element(speeds.begin(), speeds.begin() + speeds.size() / 2, speeds.end());
  const double slow = 1e-3 * speeds[speeds.size() / 2];

  for (;;) {
    const std::size_t n = ts.size();
    std::vector<char> split(n - 1, 0);
    std::vector<cplx> mids(n - 1);
    bool any = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double dt = ts[i + 1] - ts[i];
      if (dt <= min_dt) continue;
      const double tm = 0.5 * (ts[i] + ts[i + 1]);
      mids[i] = eval(tm);
      bool s = angle_between(mids[i] - pts[i], pts[i + 1] - mids[i]) > max_turn;
      if (!s && dt > base_dt / 64.0) {
        const double v0 = i == 0 ? 0.0 : std::abs(gamma_derivative(alpha, b, tau, ts[i]));
        const double v1 = i + 2 == n ? 0.0 : std::abs(gamma_derivative(alpha, b, tau, ts[i + 1]));
        const double vm = std::abs(gamma_derivative(alpha, b, tau, tm));
        s = (i > 0 && v0 < slow) || (i + 2 < n && v1 < slow) || vm < slow;
      }
      split[i] = s;
      any = any || s;
    }
    // Turning at the shared vertex of consecutive segments.
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (angle_between(pts[i] - pts[i - 1], pts[i + 1] - pts[i]) <= max_turn) continue;
      for (std::size_t j : {i - 1, i}) {
        if (!split[j] && ts[j + 1] - ts[j] > min_dt) {
          split[j] = 1;
          mids[j] = eval(0.5 * (ts[j] + ts[j + 1]));
          any = true;
        }
      }
    }
    if (!any) break;

    std::vector<double> nts;
    std::vector<cplx> npts;
    nts.reserve(2 * n);
    npts.reserve(2 * n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      nts.push_back(ts[i]);
      npts.push_back(pts[i]);
      if (split[i]) {
        nts.push_back(0.5 * (ts[i] + ts[i + 1]));
        npts.push_back(mids[i]);
      }
    }
    nts.push_back(ts.back());
    npts.push_back(pts.back());
    if (nts.size() > budget) {
      throw RefinementBudgetExceeded("curve refinement needs more than " + std::to_string(budget) + " samples");
    }
    ts = std::move(nts);
    pts = std::move(npts);
  }

  BoundaryCurve curve{alpha, b, tau, {}};
  curve.samples.reserve(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    curve.samples.push_back({ts[k], pts[k], gamma_derivative(alpha, b, tau, ts[k])});
  }
  curve.samples.front().point = cplx(1.0 - b, 0.0);
  curve.samples.back().point = cplx(1.0 - b, 0.0);
  return curve;
}

double distance_to_curve(const BoundaryCurve& curve, cplx a) {
  double best = std::numeric_limits<double>::infinity();
  const auto& s = curve.samples;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) best = std::min(best, segment_distance(s[i].point, s[i + 1].point, a));
  return best;
}

namespace {

int crossing_count(const BoundaryCurve& curve, cplx a) {
  int w = 0;
  const auto& s = curve.samples;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const cplx p = s[i].point, q = s[i + 1].point;
    if (p.imag() <= a.imag()) {
      if (q.imag() > a.imag() && cross(q - p, a - p) > 0.0) ++w;
    } else if (q.imag() <= a.imag() && cross(q - p, a - p) < 0.0) {
      --w;
    }
  }
  return w;
}

}  // namespace

int winding_number(const BoundaryCurve& curve, cplx a, double tolerance) {
  const double d = distance_to_curve(curve, a);
  if (d < tolerance) throw PointOnCurve(d);
  return crossing_count(curve, a);
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Stable: return "stable";
    case Classification::Unstable: return "unstable";
    case Classification::Boundary: return "boundary";
  }
  return "?";
}

StabilityVerdict classify_point(const BoundaryCurve& curve, cplx a) {
  StabilityVerdict v;
  v.distance_to_curve = distance_to_curve(curve, a);
  if (v.distance_to_curve < kBoundaryTolerance) {
    v.classification = Classification::Boundary;
    return v;
  }
  v.winding = crossing_count(curve, a);
  v.multiply_covered = v.winding >= 2;
  v.classification = v.winding == 1 ? Classification::Stable : Classification::Unstable;
  return v;
}

StabilityVerdict classify_point(double alpha, double b, int tau, cplx a) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw DomainError("a must be finite");
  return classify_point(sample_curve(alpha, b, tau), a);
}

// ---------------------------------------------------------------------------

namespace {

struct Polish {
  double t1, t2;
  double residual;
  bool ok;
};

Polish newton_pair(const BoundaryCurve& c, double t1, double t2) {
  auto gap = [&](double u1, double u2) { return gamma_eval(c.alpha, c.b, c.tau, u1) - gamma_eval(c.alpha, c.b, c.tau, u2); };
  cplx f = gap(t1, t2);
  for (int it = 0; it < 50 && std::abs(f) >= 1e-14; ++it) {
    const cplx d1 = gamma_derivative(c.alpha, c.b, c.tau, t1);
    const cplx d2 = -gamma_derivative(c.alpha, c.b, c.tau, t2);
    const double det = cross(d1, d2);
    if (!std::isfinite(det) || det == 0.0) break;
    // [d1 d2] (dt1, dt2)^T = -f, damped so the residual drops and t stays inside (0, 2 pi).
    const double dt1 = -cross(f, d2) / det;
    const double dt2 = -cross(d1, f) / det;
    double lambda = 1.0;
    bool moved = false;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      const double n1 = t1 + lambda * dt1, n2 = t2 + lambda * dt2;
      if (!(n1 > 0.0 && n2 < kTwoPi && n1 < n2)) continue;
      const cplx nf = gap(n1, n2);
      if (std::abs(nf) < std::abs(f)) {
        t1 = n1;
        t2 = n2;
        f = nf;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  const double r = std::abs(f);
  return {t1, t2, r, r < 1e-10};
}

// Closest point of the curve to gamma(0) near t, by Newton on
// Re(conj(gamma(t) - gamma(0)) gamma'(t)) = 0.
Polish vertex_contact(const BoundaryCurve& c, double t) {
  const cplx g0(1.0 - c.b, 0.0);
  for (int it = 0; it < 50; ++it) {
    const cplx d = gamma_eval(c.alpha, c.b, c.tau, t) - g0;
    const cplx g1 = gamma_derivative(c.alpha, c.b, c.tau, t);
    const cplx g2 = gamma_second_derivative(c.alpha, c.b, c.tau, t);
    const double f = (std::conj(d) * g1).real();
    const double df = std::norm(g1) + (std::conj(d) * g2).real();
    if (df == 0.0 || !std::isfinite(df)) break;
    const double step = f / df;
    t -= step;
    if (std::abs(step) < 1e-16) break;
  }
  const double r = std::abs(gamma_eval(c.alpha, c.b, c.tau, t) - g0);
  return {0.0, t, r, r < 1e-10};
}

}  // namespace

std::vector<SelfIntersection> find_self_intersections(const BoundaryCurve& curve) {
  const auto& s = curve.samples;
  const std::size_t nseg = s.size() - 1;
  std::vector<SelfIntersection> found;

  double xmin = s[0].point.real(), xmax = xmin, ymin = s[0].point.imag(), ymax = ymin;
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    xmin = std::min(xmin, s[i].point.real());
    xmax = std::max(xmax, s[i].point.real());
    ymin = std::min(ymin, s[i].point.imag());
    ymax = std::max(ymax, s[i].point.imag());
    if (i > 0) total += std::abs(s[i].point - s[i - 1].point);
  }
  const double h = std::max(4.0 * total / static_cast<double>(nseg), 1e-12);
  const double contact_tol = 1e-9 * std::max(1.0, std::max(xmax - xmin, ymax - ymin));

  auto key = [&](long cx, long cy) { return (static_cast<long long>(cx) << 32) ^ static_cast<long long>(cy & 0xffffffff); };
  std::unordered_map<long long, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < nseg; ++i) {
    const cplx p = s[i].point, q = s[i + 1].point;
    const long x0 = static_cast<long>(std::floor((std::min(p.real(), q.real()) - xmin) / h));
    const long x1 = static_cast<long>(std::floor((std::max(p.real(), q.real()) - xmin) / h));
    const long y0 = static_cast<long>(std::floor((std::min(p.imag(), q.imag()) - ymin) / h));
    const long y1 = static_cast<long>(std::floor((std::max(p.imag(), q.imag()) - ymin) / h));
    for (long cx = x0; cx <= x1; ++cx)
      for (long cy = y0; cy <= y1; ++cy) cells[key(cx, cy)].push_back(i);
  }

  auto add = [&](double t1, double t2, bool polished, double residual) {
    found.push_back({t1, t2, gamma_eval(curve.alpha, curve.b, curve.tau, t1), polished, residual});
  };

  std::vector<std::pair<std::size_t, std::size_t>> tested;
  for (auto& [k, segs] : cells) {
    for (std::size_t a = 0; a < segs.size(); ++a) {
      for (std::size_t bb = a + 1; bb < segs.size(); ++bb) {
        const std::size_t i = std::min(segs[a], segs[bb]);
        const std::size_t j = std::max(segs[a], segs[bb]);
        if (j - i <= 1 || (i == 0 && j == nseg - 1)) continue;
        const cplx p = s[i].point, r = s[i + 1].point - p;
        const cplx q = s[j].point, d = s[j + 1].point - q;
        const double den = cross(r, d);
        if (den == 0.0) continue;
        const double u = cross(q - p, d) / den;
        const double v = cross(q - p, r) / den;
        if (u < 0.0 || u >= 1.0 || v < 0.0 || v >= 1.0) continue;
        tested.emplace_back(i, j);
      }
    }
  }
  std::sort(tested.begin(), tested.end());
  tested.erase(std::unique(tested.begin(), tested.end()), tested.end());

  for (auto [i, j] : tested) {
    const cplx p = s[i].point, r = s[i + 1].point - p;
    const cplx q = s[j].point, d = s[j + 1].point - q;
    const double den = cross(r, d);
    const double u = cross(q - p, d) / den;
    const double v = cross(q - p, r) / den;
    const double t1 = s[i].t + u * (s[i + 1].t - s[i].t);
    const double t2 = s[j].t + v * (s[j + 1].t - s[j].t);
    const bool at_vertex = i == 0 || j == nseg - 1;
    if (!at_vertex) {
      const Polish pol = newton_pair(curve, t1, t2);
      if (pol.ok) {
        add(pol.t1, pol.t2, true, pol.residual);
        continue;
      }
      add(t1, t2, false, std::abs(gamma_eval(curve.alpha, curve.b, curve.tau, t1) -
                                  gamma_eval(curve.alpha, curve.b, curve.tau, t2)));
      continue;
    }
    const double other = i == 0 ? t2 : t1;
    const Polish pol = vertex_contact(curve, other);
    if (pol.ok) {
      add(0.0, pol.t2, true, pol.residual);
    } else {
      const Polish np = newton_pair(curve, t1, t2);
      if (np.ok) add(np.t1, np.t2, true, np.residual);
      else add(t1, t2, false, std::abs(gamma_eval(curve.alpha, curve.b, curve.tau, t1) - gamma_eval(curve.alpha, curve.b, curve.tau, t2)));
    }
  }

  // Contacts of the t = 0 corner that the crossing test can miss by rounding.
  const cplx g0 = s.front().point;
  for (std::size_t j = 1; j + 1 < nseg; ++j) {
    if (segment_distance(s[j].point, s[j + 1].point, g0) >= contact_tol) continue;
    const Polish pol = vertex_contact(curve, 0.5 * (s[j].t + s[j + 1].t));
    if (pol.ok) add(0.0, pol.t2, true, pol.residual);
  }

  // gamma(2 pi - t) = conj(gamma(t)).  Near t = 2 pi the parameter keeps
  // few digits and Newton can stall, so polished crossings are mirrored.
  const std::size_t n_found = found.size();
  for (std::size_t k = 0; k < n_found; ++k) {
    const auto x = found[k];
    if (!x.polished) continue;
    if (x.t1 == 0.0) found.push_back({0.0, kTwoPi - x.t2, std::conj(x.point), true, x.residual});
    else found.push_back({kTwoPi - x.t2, kTwoPi - x.t1, std::conj(x.point), true, x.residual});
  }

  std::stable_sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.polished > y.polished; });
  const double near = 1e-3 * std::max(1.0, std::max(xmax - xmin, ymax - ymin));
  std::vector<SelfIntersection> out;
  for (const auto& x : found) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const SelfIntersection& y) {
      if (std::abs(x.t1 - y.t1) < 1e-6 && std::abs(x.t2 - y.t2) < 1e-6) return true;
      return !x.polished && std::abs(x.point - y.point) < near;
    });
    if (!dup) out.push_back(x);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.t1 != y.t1 ? x.t1 < y.t1 : x.t2 < y.t2;
  });
  return out;
}

std::vector<double> find_cusps(double alpha, double b, int tau) {
  require_curve_params(alpha, b, tau);
  constexpr std::size_t m = 8192;
  // d/dt |gamma'|^2 / 2; a cusp is a zero of |gamma'|, hence a minimum.
  auto slope = [&](double t) {
    return (std::conj(gamma_derivative(alpha, b, tau, t)) * gamma_second_derivative(alpha, b, tau, t)).real();
  };
  std::vector<double> out;
  double t_prev = kPi * (2.0 / m);
  double f_prev = slope(t_prev);
  for (std::size_t k = 2; k < m; ++k) {
    const double t = kPi * (2.0 * static_cast<double>(k) / m);
    const double f = slope(t);
    if (f_prev < 0.0 && f >= 0.0) {
      double lo = t_prev, hi = t;
      if (f == 0.0) {
        lo = hi = t;
      }
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (slope(mid) < 0.0 ? lo : hi) = mid;
      }
      const double tc = std::abs(gamma_derivative(alpha, b, tau, lo)) < std::abs(gamma_derivative(alpha, b, tau, hi)) ? lo : hi;
      if (std::abs(gamma_derivative(alpha, b, tau, tc)) < 1e-8) out.push_back(tc);
    }
    t_prev = t;
    f_prev = f;
  }
  return out;
}

std::vector<double> find_cusps(const BoundaryCurve& curve) { return find_cusps(curve.alpha, curve.b, curve.tau); }

// ---------------------------------------------------------------------------

cplx char_residual(double alpha, cplx a, double b, int tau, cplx z) {
  if (z == 0.0) throw DomainError("characteristic expression is undefined at z = 0");
  return z * std::pow(1.0 - 1.0 / z, alpha) - (a - 1.0) - b * std::pow(z, -tau);
}

double determinant_equivalence(double alpha, cplx a, double b, int tau, cplx z) {
  if (tau < 1) throw DomainError("delay tau must be >= 1");
  if (z == 0.0) throw DomainError("characteristic expression is undefined at z = 0");
  const std::size_t n = static_cast<std::size_t>(tau) + 1;
  // Row 0: [z(1-1/z)^alpha - (a-1), 0, ..., 0, -b]; rows k >= 1: -1 at k-1, z at k.
  std::vector<cplx> m(n * n, 0.0);
  m[0] = z * std::pow(1.0 - 1.0 / z, alpha) - (a - 1.0);
  m[n - 1] -= b;
  for (std::size_t k = 1; k < n; ++k) {
    m[k * n + k - 1] = -1.0;
    m[k * n + k] = z;
  }
  // Gaussian elimination with partial pivoting.
  cplx det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    if (m[piv * n + c] == 0.0) {
      det = 0.0;
      break;
    }
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m[c * n + k], m[piv * n + k]);
      det = -det;
    }
    det *= m[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const cplx f = m[r * n + c] / m[c * n + c];
      for (std::size_t k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
    }
  }
  return std::abs(det - std::pow(z, tau) * char_residual(alpha, a, b, tau, z));
}

// ---------------------------------------------------------------------------

int WindingCensus::stable() const {
  return static_cast<int>(std::count_if(components.begin(), components.end(), [](const auto& c) { return c.winding == 1; }));
}

int WindingCensus::unstable() const {
  return static_cast<int>(std::count_if(components.begin(), components.end(), [](const auto& c) { return c.winding != 1; }));
}

WindingCensus winding_census(const BoundaryCurve& curve, std::size_t grid) {
  if (grid < 2) throw DomainError("census grid must be >= 2");
  const auto& s = curve.samples;
  WindingCensus out;
  out.grid = grid;
  out.x_min = out.x_max = s[0].point.real();
  out.y_min = out.y_max = s[0].point.imag();
  for (const auto& p : s) {
    out.x_min = std::min(out.x_min, p.point.real());
    out.x_max = std::max(out.x_max, p.point.real());
    out.y_min = std::min(out.y_min, p.point.imag());
    out.y_max = std::max(out.y_max, p.point.imag());
  }
  const double px = 0.05 * (out.x_max - out.x_min), py = 0.05 * (out.y_max - out.y_min);
  out.x_min -= px;
  out.x_max += px;
  out.y_min -= py;
  out.y_max += py;
  const double g1 = static_cast<double>(grid - 1);
  auto xs = [&](std::size_t i) { return out.x_min + (out.x_max - out.x_min) * static_cast<double>(i) / g1; };
  auto ys = [&](std::size_t i) { return out.y_min + (out.y_max - out.y_min) * static_cast<double>(i) / g1; };

  // One scanline per row: crossings sorted by x, winding of a node is the
  // signed count of crossings to its right.
  out.windings.assign(grid * grid, 0);
  std::vector<std::pair<double, int>> hits;
  for (std::size_t r = 0; r < grid; ++r) {
    const double y = ys(r);
    hits.clear();
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const cplx p = s[i].point, q = s[i + 1].point;
      const bool up = p.imag() <= y && q.imag() > y;
      const bool down = p.imag() > y && q.imag() <= y;
      if (!up && !down) continue;
      const double xc = p.real() + (y - p.imag()) * (q.real() - p.real()) / (q.imag() - p.imag());
      hits.emplace_back(xc, up ? 1 : -1);
    }
    std::sort(hits.begin(), hits.end());
    int right = 0;
    for (const auto& hcross : hits) right += hcross.second;
    std::size_t h = 0;
    for (std::size_t c = 0; c < grid; ++c) {
      const double x = xs(c);
      while (h < hits.size() && hits[h].first <= x) right -= hits[h++].second;
      out.windings[r * grid + c] = right;
    }
  }

  std::vector<char> seen(grid * grid, 0);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < grid * grid; ++start) {
    if (seen[start]) continue;
    const int w = out.windings[start];
    std::size_t cells = 0;
    bool border = false;
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      ++cells;
      const std::size_t r = cur / grid, c = cur % grid;
      if (r == 0 || c == 0 || r + 1 == grid || c + 1 == grid) border = true;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const long nr = static_cast<long>(r) + dr, nc = static_cast<long>(c) + dc;
          if (nr < 0 || nc < 0 || nr >= static_cast<long>(grid) || nc >= static_cast<long>(grid)) continue;
          const std::size_t nb = static_cast<std::size_t>(nr) * grid + static_cast<std::size_t>(nc);
          if (seen[nb] || out.windings[nb] != w) continue;
          seen[nb] = 1;
          stack.push_back(nb);
        }
      }
    }
    if (!border) out.components.push_back({w, cells});
  }
  return out;
}

}  // namespace fracdelay

// ---------------------------------------------------------------------------

namespace fracdelay {

int FaceCensus::stable() const {
  return static_cast<int>(std::count_if(faces.begin(), faces.end(), [](const auto& f) { return f.winding == 1; }));
}

int FaceCensus::unstable() const {
  return static_cast<int>(std::count_if(faces.begin(), faces.end(), [](const auto& f) { return f.winding != 1; }));
}

FaceCensus face_census(const BoundaryCurve& curve) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const auto& s = curve.samples;
  const auto crossings = find_self_intersections(curve);

  // Vertex events along t.  The t = 0 corner is a vertex of degree two.
  struct Event {
    double t;
    std::size_t vertex;
    cplx point;
  };
  std::vector<Event> events{{0.0, 0, s.front().point}};
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    const auto& x = crossings[i];
    if (x.t1 <= 0.0) throw ComputationError("face census: gamma passes through its t = 0 vertex");
    events.push_back({x.t1, i + 1, x.point});
    events.push_back({x.t2, i + 1, x.point});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (!(events[i].t > events[i - 1].t && events[i].t < two_pi)) {
      throw ComputationError("face census: crossing parameters not resolvable in double precision");
    }
  }
  const std::size_t n_edges = events.size();
  const std::size_t n_vertices = crossings.size() + 1;

  // Half-edge 2e runs along the curve over edge e, 2e + 1 against it.
  auto event_t = [&](std::size_t e, bool end) {
    if (!end) return events[e].t;
    return e + 1 == n_edges ? two_pi : events[e + 1].t;
  };
  auto origin = [&](std::size_t h) {
    const std::size_t e = h / 2;
    return h % 2 == 0 ? events[e].vertex : events[(e + 1) % n_edges].vertex;
  };
  const double h_step = 1e-7;
  auto direction = [&](std::size_t h) {
    const std::size_t e = h / 2;
    const bool fwd = h % 2 == 0;
    const double t = fwd ? event_t(e, false) : event_t(e, true);
    const double span = event_t(e, true) - event_t(e, false);
    const double dt = std::min(h_step, 0.25 * span);
    const cplx p = gamma_eval(curve.alpha, curve.b, curve.tau, t);
    const cplx q = gamma_eval(curve.alpha, curve.b, curve.tau, fwd ? t + dt : t - dt);
    return std::arg(q - p);
  };

  const std::size_t n_half = 2 * n_edges;
  std::vector<double> angle(n_half);
  std::vector<std::vector<std::size_t>> outgoing(n_vertices);
  for (std::size_t h = 0; h < n_half; ++h) {
    angle[h] = direction(h);
    outgoing[origin(h)].push_back(h);
  }
  auto next = [&](std::size_t h) {
    const std::size_t twin = h ^ 1;
    std::size_t best = twin;
    double best_rot = 10.0;
    for (std::size_t g : outgoing[origin(twin)]) {
      if (g == twin) continue;
      double rot = std::fmod(angle[twin] - angle[g] + 2.0 * two_pi, two_pi);
      if (rot < best_rot) {
        best_rot = rot;
        best = g;
      }
    }
    return best;
  };

  // Shoelace contribution of one half-edge, using the sampled polyline.
  auto edge_area = [&](std::size_t h) {
    const std::size_t e = h / 2;
    const double t0 = event_t(e, false), t1 = event_t(e, true);
    std::vector<cplx> pts{events[e].point};
    auto lo = std::upper_bound(s.begin(), s.end(), t0, [](double t, const CurveSample& c) { return t < c.t; });
    for (auto it = lo; it != s.end() && it->t < t1; ++it) pts.push_back(it->point);
    pts.push_back(events[(e + 1) % n_edges].point);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) acc += cross(pts[i], pts[i + 1]);
    return h % 2 == 0 ? 0.5 * acc : -0.5 * acc;
  };

  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> face_of(n_half, none);
  std::vector<double> area;
  for (std::size_t h0 = 0; h0 < n_half; ++h0) {
    if (face_of[h0] != none) continue;
    const std::size_t f = area.size();
    double acc = 0.0;
    std::size_t h = h0, guard = 0;
    while (face_of[h] == none) {
      if (++guard > n_half) throw ComputationError("face census: face trace did not close");
      face_of[h] = f;
      acc += edge_area(h);
      h = next(h);
    }
    if (h != h0) throw ComputationError("face census: inconsistent half-edge cycle");
    area.push_back(acc);
  }

  const std::size_t n_faces = area.size();
  const std::size_t outer = static_cast<std::size_t>(std::min_element(area.begin(), area.end()) - area.begin());
  std::vector<int> winding(n_faces, 0);
  std::vector<char> known(n_faces, 0);
  known[outer] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t e = 0; e < n_edges; ++e) {
      const std::size_t left = face_of[2 * e], right = face_of[2 * e + 1];
      if (known[right] && !known[left]) {
        winding[left] = winding[right] + 1;
        known[left] = changed = true;
      } else if (known[left] && !known[right]) {
        winding[right] = winding[left] - 1;
        known[right] = changed = true;
      }
    }
  }

  FaceCensus out;
  for (std::size_t f = 0; f < n_faces; ++f) {
    if (f != outer) out.faces.push_back({winding[f], area[f]});
  }
  return out;
}

}  // namespace fracdelay
