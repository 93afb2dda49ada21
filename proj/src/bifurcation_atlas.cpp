#include "fracdelay/bifurcation_atlas.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "fracdelay/boundary_geometry.hpp"
#include "fracdelay/errors.hpp"
#include "fracdelay/parallel.hpp"

namespace fracdelay {

namespace {

constexpr double kPi = std::numbers::pi;

void require_open_order(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("branch order alpha must lie in (0, 1)");
}

void require_atlas_tau(int tau) {
  if (tau != 1 && tau != 2) throw DomainError("named branches exist for tau = 1 and tau = 2 only");
}

// Labels of the cusp roots in (0, pi], in increasing t.
std::vector<int> cusp_labels(int tau) { return tau == 1 ? std::vector<int>{3, 1, 4} : std::vector<int>{5, 4, 6, 3}; }

double bisect(auto&& f, double lo, double hi, double flo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

bool has_closed_form(int label, int tau) {
  return (tau == 1 && (label == 2 || label == 5)) || (tau == 2 && (label == 2 || label == 7));
}

double g_closed_form(int label, int tau, double alpha) {
  require_open_order(alpha);
  const double a = alpha;
  if (tau == 1 && label == 2) return std::pow(2.0, a - 1.0);
  if (tau == 1 && label == 5) {
    return -std::pow(2.0, a) * std::pow(std::cos(kPi / (3.0 - a)), a) / std::sin(kPi * (a - 1.0) / (a - 3.0)) *
           std::sin(kPi / (3.0 - a));
  }
  if (tau == 2 && label == 2) {
    return -std::pow(2.0, a) * std::pow(std::cos(kPi / (8.0 - 2.0 * a)), a) * std::cos(kPi / (a - 4.0)) /
           std::sin(2.0 * kPi * (a - 3.0) / (a - 4.0));
  }
  if (tau == 2 && label == 7) {
    return std::pow(2.0, a) * std::pow(std::cos(3.0 * kPi / (8.0 - 2.0 * a)), a) * std::cos(3.0 * kPi / (a - 4.0)) /
           std::cos(3.0 * kPi * a / (8.0 - 2.0 * a));
  }
  throw DomainError("g" + std::to_string(label) + " for tau = " + std::to_string(tau) + " has no closed form");
}

double closed_form_contact_parameter(int label, int tau, double alpha) {
  require_open_order(alpha);
  if (tau == 1 && label == 2) return kPi;
  if (tau == 1 && label == 5) return kPi * (1.0 - alpha) / (3.0 - alpha);
  if (tau == 2 && label == 2) return kPi * (3.0 - alpha) / (4.0 - alpha);
  if (tau == 2 && label == 7) return kPi * (1.0 - alpha) / (4.0 - alpha);
  throw DomainError("g" + std::to_string(label) + " for tau = " + std::to_string(tau) + " has no closed form");
}

double cusp_condition(int tau, double alpha, double t) {
  const double k = 2.0 * tau;
  return std::cos(0.5 * (kPi * alpha + (k + 3.0 - alpha) * t)) +
         (alpha - 1.0) * std::cos(0.5 * (kPi * alpha + (k + 1.0 - alpha) * t));
}

namespace {
double cusp_condition_dt(int tau, double alpha, double t) {
  const double k = 2.0 * tau;
  return -0.5 * (k + 3.0 - alpha) * std::sin(0.5 * (kPi * alpha + (k + 3.0 - alpha) * t)) -
         (alpha - 1.0) * 0.5 * (k + 1.0 - alpha) * std::sin(0.5 * (kPi * alpha + (k + 1.0 - alpha) * t));
}
}  // namespace

double cusp_b(int tau, double alpha, double t) {
  // gamma' = P' + i tau b e^{-i tau t} = 0  =>  b = -Im(P' e^{i tau t}) / tau.
  const cplx dp = gamma_derivative(alpha, 0.0, tau, t);
  return -(dp * std::polar(1.0, tau * t)).imag() / tau;
}

double real_crossing_b(int tau, double alpha, double t) {
  const double s = t <= kPi ? std::sin(0.5 * t) : std::sin(0.5 * (2.0 * kPi - t));
  const double theta = 0.5 * kPi * alpha + (1.0 - 0.5 * alpha) * t;
  return -std::pow(2.0 * s, alpha) * std::sin(theta) / std::sin(tau * t);
}

std::optional<CuspRoot> CuspSolution::branch(int label) const {
  for (const auto& [l, r] : labeled)
    if (l == label) return r;
  return std::nullopt;
}

CuspSolution cusp_branch_solve(int tau, double alpha) {
  require_atlas_tau(tau);
  require_open_order(alpha);
  auto f = [&](double t) { return cusp_condition(tau, alpha, t); };

  // The condition is symmetric under t -> 2 pi - t and vanishes at pi, so
  // bracket (0, pi) on the lower half of a 2048-point grid and mirror.
  constexpr int half = 1024;
  std::vector<double> lower;
  double t0 = kPi / half, f0 = f(t0);
  for (int k = 2; k < half; ++k) {
    const double t1 = kPi * k / half, f1 = f(t1);
    if (f0 == 0.0) {
      lower.push_back(t0);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      double r = bisect(f, t0, t1, f0);
      const double d = cusp_condition_dt(tau, alpha, r);
      if (d != 0.0) {
        const double nr = r - f(r) / d;
        if (nr > t0 && nr < t1 && std::abs(f(nr)) <= std::abs(f(r))) r = nr;
      }
      lower.push_back(r);
    }
    t0 = t1;
    f0 = f1;
  }
  lower.push_back(kPi);

  CuspSolution sol;
  for (double t : lower) sol.roots.push_back({t, cusp_b(tau, alpha, t), std::abs(f(t))});
  for (auto it = lower.rbegin(); it != lower.rend(); ++it) {
    if (*it == kPi) continue;
    const double t = 2.0 * kPi - *it;
    sol.roots.push_back({t, cusp_b(tau, alpha, t), std::abs(f(t))});
  }

  const auto labels = cusp_labels(tau);
  if (lower.size() != labels.size()) {
    sol.topology_change = true;
    return sol;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) sol.labeled.emplace_back(labels[i], sol.roots[i]);
  return sol;
}

std::optional<ContactPoint> pi_contact_branch_solve(double alpha) {
  require_open_order(alpha);
  // Eq. for Re gamma(pi) = Re gamma(t) with b from Im gamma(t) = 0, times cos t
  // to clear the pole at pi/2.  t = pi is a trivial root and is left out.
  auto h = [&](double t) {
    return std::cos(t) + std::cos(0.5 * ((4.0 - alpha) * t + kPi * alpha)) * std::pow(std::sin(0.5 * t), alpha);
  };
  constexpr int n = 2048;
  const double top = 0.75 * kPi;
  double t0 = top / n, f0 = h(t0);
  for (int k = 2; k <= n; ++k) {
    const double t1 = top * k / n, f1 = h(t1);
    if ((f0 < 0.0) != (f1 < 0.0)) {
      const double t = bisect(h, t0, t1, f0);
      const double b = real_crossing_b(2, alpha, t);
      const double gap = std::abs(gamma_eval(alpha, b, 2, kPi) - gamma_eval(alpha, b, 2, t));
      return ContactPoint{t, b, gap};
    }
    t0 = t1;
    f0 = f1;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<SelfIntersection> upper_crossings(double alpha, double b) {
  std::vector<SelfIntersection> out;
  for (const auto& x : find_self_intersections(sample_curve(alpha, b, 2, 4096))) {
    if (x.point.imag() > 1e-9 && x.t2 < kPi) out.push_back(x);
  }
  return out;
}

std::array<double, 3> tangency_residual(double alpha, const std::array<double, 3>& v) {
  const auto [ta, tb, b] = v;
  const cplx d = gamma_eval(alpha, b, 2, ta) - gamma_eval(alpha, b, 2, tb);
  const cplx c = std::conj(gamma_derivative(alpha, b, 2, ta)) * gamma_derivative(alpha, b, 2, tb);
  const double nc = std::abs(c);
  return {d.real(), d.imag(), nc > 0.0 ? c.imag() / nc : 0.0};
}

double norm3(const std::array<double, 3>& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

// Gaussian elimination with partial pivoting; false when singular.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3>& x) {
  for (int c = 0; c < 3; ++c) {
    int p = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    if (m[p][c] == 0.0 || !std::isfinite(m[p][c])) return false;
    std::swap(m[p], m[c]);
    std::swap(x[p], x[c]);
    for (int r = c + 1; r < 3; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 3; ++k) m[r][k] -= f * m[c][k];
      x[r] -= f * x[c];
    }
  }
  for (int c = 2; c >= 0; --c) {
    for (int k = c + 1; k < 3; ++k) x[c] -= m[c][k] * x[k];
    x[c] /= m[c][c];
  }
  return true;
}

std::optional<TangencyPoint> tangency_newton(double alpha, std::array<double, 3> v) {
  auto r = tangency_residual(alpha, v);
  for (int it = 0; it < 60 && norm3(r) > 1e-15; ++it) {
    std::array<std::array<double, 3>, 3> jac{};
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(v[k]));
      auto vp = v, vm = v;
      vp[k] += h;
      vm[k] -= h;
      const auto rp = tangency_residual(alpha, vp), rm = tangency_residual(alpha, vm);
      for (int i = 0; i < 3; ++i) jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
    }
    std::array<double, 3> step{-r[0], -r[1], -r[2]};
    if (!solve3(jac, step)) return std::nullopt;
    for (int k = 0; k < 3; ++k) v[k] += step[k];
    r = tangency_residual(alpha, v);
    if (norm3(step) < 1e-15) break;
  }
  const double res = norm3(r);
  if (!(res < 1e-12)) return std::nullopt;
  if (!(v[0] > 0.0 && v[0] < v[1] && v[1] < kPi)) return std::nullopt;
  if (!(gamma_eval(alpha, v[2], 2, v[0]).imag() > 0.0)) return std::nullopt;
  if (!(v[2] > g_closed_form(2, 2, alpha))) return std::nullopt;
  return TangencyPoint{v[0], v[1], v[2], res};
}

}  // namespace

std::optional<TangencyPoint> tangency_branch_solve(double alpha, const std::optional<TangencyPoint>& guess) {
  require_open_order(alpha);
  if (guess) {
    if (auto p = tangency_newton(alpha, {guess->t_a, guess->t_b, guess->b})) return p;
  }
  const double g2 = g_closed_form(2, 2, alpha);
  double lo = g2 + 1e-4, hi = g2 + 0.5;
  if (upper_crossings(alpha, lo).size() < 2 || upper_crossings(alpha, hi).size() >= 2) return std::nullopt;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (upper_crossings(alpha, mid).size() >= 2 ? lo : hi) = mid;
  }
  const auto u = upper_crossings(alpha, lo);
  if (u.size() < 2) return std::nullopt;
  double ta = 0.0, tb = 0.0;
  for (const auto& x : u) {
    ta += x.t1;
    tb += x.t2;
  }
  ta /= static_cast<double>(u.size());
  tb /= static_cast<double>(u.size());
  return tangency_newton(alpha, {ta, tb, lo});
}

// ---------------------------------------------------------------------------

int branch_count(int tau) {
  require_atlas_tau(tau);
  return tau == 1 ? 5 : 8;
}

std::optional<double> branch_value(int tau, int label, double alpha) {
  require_atlas_tau(tau);
  require_open_order(alpha);
  if (label < 1 || label > branch_count(tau)) throw DomainError("no branch g" + std::to_string(label));
  if (has_closed_form(label, tau)) return g_closed_form(label, tau, alpha);
  if (tau == 2 && label == 1) {
    const auto p = tangency_branch_solve(alpha);
    return p ? std::optional<double>(p->b) : std::nullopt;
  }
  if (tau == 2 && label == 8) {
    const auto p = pi_contact_branch_solve(alpha);
    return p ? std::optional<double>(p->b) : std::nullopt;
  }
  const auto r = cusp_branch_solve(tau, alpha).branch(label);
  return r ? std::optional<double>(r->b) : std::nullopt;
}

AlphaStar alpha_star(int tau, double tol) {
  require_atlas_tau(tau);
  const int la = tau == 1 ? 3 : 5;
  const int lb = tau == 1 ? 4 : 6;
  auto diff = [&](double a) {
    const auto s = cusp_branch_solve(tau, a);
    const auto x = s.branch(la), y = s.branch(lb);
    if (!x || !y) throw BranchError("cusp branches undefined at alpha = " + std::to_string(a));
    return x->b - y->b;
  };
  double lo = 0.02, flo = diff(lo);
  for (int k = 1; k <= 49; ++k) {
    const double hi = 0.02 + 0.02 * k;
    const double fhi = diff(hi);
    if ((flo < 0.0) != (fhi < 0.0)) {
      double a = lo, b = hi, fa = flo;
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = diff(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double as = 0.5 * (a + b);
      return {as, cusp_branch_solve(tau, as).branch(la)->b};
    }
    lo = hi;
    flo = fhi;
  }
  throw BranchError("branches g" + std::to_string(la) + " and g" + std::to_string(lb) + " do not cross in (0, 1)");
}

const char* to_string(Provenance p) { return p == Provenance::ClosedForm ? "closed-form" : "root-found"; }

Atlas build_atlas(int tau, std::size_t n_alpha, unsigned threads) {
  require_atlas_tau(tau);
  if (n_alpha < 2) throw DomainError("atlas needs at least 2 alpha points");
  std::vector<double> grid(n_alpha);
  for (std::size_t i = 0; i < n_alpha; ++i) grid[i] = 0.01 + 0.98 * static_cast<double>(i) / static_cast<double>(n_alpha - 1);

  const int nb = branch_count(tau);
  Atlas atlas;
  atlas.tau = tau;
  for (int l = 1; l <= nb; ++l) {
    atlas.branches.push_back({l, tau, has_closed_form(l, tau) ? Provenance::ClosedForm : Provenance::RootFound, grid,
                              std::vector<std::optional<double>>(n_alpha)});
  }

  std::vector<std::size_t> root_counts(n_alpha);
  parallel_for(n_alpha, resolve_thread_count(threads), [&](std::size_t i) {
    const double a = grid[i];
    const auto cusps = cusp_branch_solve(tau, a);
    std::size_t lower = 0;
    for (const auto& r : cusps.roots) lower += r.t <= kPi ? 1 : 0;
    root_counts[i] = lower;
    for (int l = 1; l <= nb; ++l) {
      auto& slot = atlas.branches[static_cast<std::size_t>(l - 1)].b_values[i];
      if (has_closed_form(l, tau)) {
        slot = g_closed_form(l, tau, a);
      } else if (tau == 2 && l == 8) {
        if (const auto p = pi_contact_branch_solve(a)) slot = p->b;
      } else if (!(tau == 2 && l == 1)) {
        if (const auto r = cusps.branch(l)) slot = r->b;
      }
    }
  });

  if (tau == 2) {
    // Continuation in alpha; the contact only exists at small alpha.
    std::optional<TangencyPoint> prev;
    for (std::size_t i = 0; i < n_alpha; ++i) {
      const auto p = tangency_branch_solve(grid[i], prev);
      if (p) atlas.branches[0].b_values[i] = p->b;
      prev = p;
      if (!p && i > 0 && atlas.branches[0].b_values[i - 1]) break;
    }
  }

  for (std::size_t i = 1; i < n_alpha; ++i) {
    if (root_counts[i] != root_counts[i - 1]) {
      atlas.diagnostics.push_back({grid[i - 1], grid[i], root_counts[i - 1], root_counts[i]});
    }
  }
  atlas.star = alpha_star(tau);
  return atlas;
}

// ---------------------------------------------------------------------------

namespace {

struct CensusRow {
  const char* name;
  int stable;
  int unstable;  // -1: not asserted
};

constexpr std::array<CensusRow, 7> kCensus1{{
    {"A", 0, 1}, {"B", 2, 1}, {"C", 1, 0}, {"D1", 1, 2}, {"D2", 1, 1}, {"E", 1, 3}, {"F", 0, -1},
}};

constexpr std::array<CensusRow, 10> kCensus2{{
    {"A", 0, -1}, {"B", 2, 5}, {"C", 1, 3}, {"D", 1, 2}, {"E", 1, 0},
    {"F1", 1, 2}, {"F2", 1, 2}, {"G", 1, 4}, {"H", 1, -1}, {"I", 0, -1},
}};

}  // namespace

std::vector<std::string> region_names(int tau) {
  require_atlas_tau(tau);
  std::vector<std::string> out;
  if (tau == 1)
    for (const auto& r : kCensus1) out.emplace_back(r.name);
  else
    for (const auto& r : kCensus2) out.emplace_back(r.name);
  return out;
}

RegionLabel region_census(int tau, const std::string& name) {
  require_atlas_tau(tau);
  auto find = [&](const auto& table) -> RegionLabel {
    for (const auto& r : table) {
      if (name == r.name) {
        RegionLabel l{tau, r.name, r.stable, std::nullopt};
        if (r.unstable >= 0) l.expected_unstable = r.unstable;
        return l;
      }
    }
    throw DomainError("no region '" + name + "' for tau = " + std::to_string(tau));
  };
  return tau == 1 ? find(kCensus1) : find(kCensus2);
}

RegionVerdict label_region(int tau, double alpha, double b, double margin) {
  require_atlas_tau(tau);
  require_open_order(alpha);
  const int nb = branch_count(tau);
  std::vector<std::optional<double>> g(static_cast<std::size_t>(nb + 1));
  const auto cusps = cusp_branch_solve(tau, alpha);
  if (cusps.topology_change) throw BranchError("cusp root count changed at alpha = " + std::to_string(alpha));
  for (int l = 1; l <= nb; ++l) {
    if (has_closed_form(l, tau)) g[l] = g_closed_form(l, tau, alpha);
    else if (tau == 2 && l == 1) g[l] = branch_value(2, 1, alpha);
    else if (tau == 2 && l == 8) g[l] = branch_value(2, 8, alpha);
    else g[l] = cusps.branch(l)->b;
  }

  RegionVerdict v;
  for (int l = 1; l <= nb; ++l) {
    if (g[l] && std::abs(b - *g[l]) < margin) {
      v.on_branch = l;
      return v;
    }
  }

  std::string name;
  if (tau == 1) {
    const double lo34 = std::min(*g[3], *g[4]), hi34 = std::max(*g[3], *g[4]);
    if (b > *g[1]) name = "A";
    else if (b > *g[2]) name = "B";
    else if (b > hi34) name = "C";
    else if (b > lo34) name = *g[4] < *g[3] ? "D1" : "D2";
    else if (b > *g[5]) name = "E";
    else name = "F";
  } else {
    const double lo56 = std::min(*g[5], *g[6]), hi56 = std::max(*g[5], *g[6]);
    if (g[1] ? b > *g[1] : b > *g[2]) name = "A";
    else if (b > *g[2]) name = "B";
    else if (b > *g[3]) name = "C";
    else if (b > *g[4]) name = "D";
    else if (b > hi56) name = "E";
    else if (b > lo56) name = *g[6] < *g[5] ? "F1" : "F2";
    else if (b >= *g[7]) name = "G";
    else if (b > *g[8]) name = "H";
    else name = "I";
  }
  v.region = region_census(tau, name);
  return v;
}

}  // namespace fracdelay
