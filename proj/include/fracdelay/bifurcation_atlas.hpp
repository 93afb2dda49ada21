#pragma once

// Bifurcation branches b = g_k(alpha) of the boundary curve for tau = 1
// (g1..g5) and tau = 2 (g1..g8), the alpha* crossing points, and the
// region taxonomy of the (alpha, b) plane.
//
// Branch numbering, top to bottom in b at fixed alpha:
//
//   tau = 1   g1 (cusp pair)  g2 = 2^(alpha-1) (gamma(0) = gamma(pi))
//             g3 (cusp pair, right)  g4 (single cusp at t = pi, left)
//             g5 (gamma(0) = gamma(t0), closed form)
//   tau = 2   g1 (tangential self-contact, small alpha only)
//             g2, g7 (gamma(0) = gamma(t1), closed form)
//             g3 (cusp at t = pi)  g4, g5 (cusp pairs, right)
//             g6 (cusp pair, left)  g8 (gamma(pi) = gamma(t2))

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fracdelay {

/// Printed closed forms: tau = 1 labels 2 and 5, tau = 2 labels 2 and 7.
/// DomainError for any other label.
double g_closed_form(int label, int tau, double alpha);
bool has_closed_form(int label, int tau);

/// Parameter of the contact that defines a closed-form branch (t0 for
/// tau = 1 g5, t1 for tau = 2 g2/g7; pi for tau = 1 g2).
double closed_form_contact_parameter(int label, int tau, double alpha);

/// Cusp condition Re(P'(t) e^{i tau t}) = 0, scaled to the bounded form
/// cos((pi alpha + (2 tau + 3 - alpha) t)/2) + (alpha - 1) cos((pi alpha + (2 tau + 1 - alpha) t)/2).
double cusp_condition(int tau, double alpha, double t);
/// b that makes gamma'(t) = 0 once t satisfies the cusp condition.
double cusp_b(int tau, double alpha, double t);

/// b for which gamma(t) lies on the real axis (sin(tau t) != 0).
double real_crossing_b(int tau, double alpha, double t);

struct CuspRoot {
  double t;
  double b;
  double residual;  ///< |cusp_condition| at t
};

struct CuspSolution {
  /// Every root in (0, 2 pi), sorted by t.  Roots past pi mirror those below.
  std::vector<CuspRoot> roots;
  /// (label, root) for the roots in (0, pi], empty when the root count
  /// differs from the anchor at alpha = 0.5.
  std::vector<std::pair<int, CuspRoot>> labeled;
  bool topology_change = false;

  std::optional<CuspRoot> branch(int label) const;
};

/// tau in {1, 2}.  Roots bracketed on a 2048-point grid, then bisection and
/// a Newton step.
CuspSolution cusp_branch_solve(int tau, double alpha);

struct ContactPoint {
  double t;
  double b;
  double gap;  ///< |gamma(pi) - gamma(t)| at the returned b
};

/// tau = 2 g8: gamma(pi) = gamma(t2) with gamma(t2) real.  Empty when no root.
std::optional<ContactPoint> pi_contact_branch_solve(double alpha);

struct TangencyPoint {
  double t_a;
  double t_b;
  double b;
  double residual;
};

/// tau = 2 g1: the b above g2 at which the last two upper-half-plane
/// self-intersections merge into a tangential contact.  `guess` seeds a
/// Newton continuation; without it (or when it fails) the contact is
/// bracketed by counting intersections.  Empty where the branch does not
/// exist (alpha above roughly 0.245).
std::optional<TangencyPoint> tangency_branch_solve(double alpha, const std::optional<TangencyPoint>& guess = {});

/// g_k(alpha), whatever its provenance.  Empty inside a gap.
std::optional<double> branch_value(int tau, int label, double alpha);

int branch_count(int tau);

struct AlphaStar {
  double alpha;
  double b;
};

/// tau = 1: g3 = g4.  tau = 2: g5 = g6.  Bisection to |d alpha| < tol.
AlphaStar alpha_star(int tau, double tol = 1e-12);

// ---------------------------------------------------------------------------

enum class Provenance { ClosedForm, RootFound };
const char* to_string(Provenance p);

struct BifurcationBranch {
  int label = 0;
  int tau = 1;
  Provenance provenance = Provenance::RootFound;
  std::vector<double> alpha_grid;
  std::vector<std::optional<double>> b_values;
};

struct TopologyChange {
  double alpha_before;
  double alpha_after;
  std::size_t roots_before;
  std::size_t roots_after;
};

struct Atlas {
  int tau = 1;
  std::vector<BifurcationBranch> branches;
  AlphaStar star{};
  std::vector<TopologyChange> diagnostics;
};

/// `n_alpha` points evenly spread over [0.01, 0.99].
Atlas build_atlas(int tau, std::size_t n_alpha = 400, unsigned threads = 0);

// ---------------------------------------------------------------------------

struct RegionLabel {
  int tau = 1;
  std::string name;
  int expected_stable = 0;
  /// Empty where the count is not asserted.
  std::optional<int> expected_unstable;
};

/// The census table for one region; DomainError for unknown names.
RegionLabel region_census(int tau, const std::string& name);
std::vector<std::string> region_names(int tau);

struct RegionVerdict {
  std::optional<RegionLabel> region;
  /// Set when b is within `margin` of branch g_k; region is then empty.
  std::optional<int> on_branch;
};

RegionVerdict label_region(int tau, double alpha, double b, double margin = 1e-4);

}  // namespace fracdelay
