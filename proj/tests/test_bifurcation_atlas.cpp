#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fracdelay/bifurcation_atlas.hpp"
#include "fracdelay/boundary_geometry.hpp"
#include "fracdelay/errors.hpp"

using namespace fracdelay;

namespace {

constexpr double kPi = std::numbers::pi;

// Printed cusp-branch parametrisations b1(t) (tau = 1) and b2(t) (tau = 2).
double b_printed(int tau, double alpha, double t) {
  const double lead = tau == 1 ? -std::pow(2.0, alpha - 1.0) / std::cos(t) : -std::pow(2.0, alpha - 2.0) / std::cos(2.0 * t);
  return lead * std::pow(std::sin(0.5 * t), alpha - 1.0) *
         ((alpha - 1.0) * std::sin(0.5 * (t + kPi * alpha - t * alpha)) + std::sin(0.5 * (3.0 * t + kPi * alpha - t * alpha)));
}

}  // namespace

TEST_SUITE("bifurcation_atlas") {

TEST_CASE("closed forms") {
  for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.95}) CHECK(g_closed_form(2, 1, alpha) == doctest::Approx(std::pow(2.0, alpha - 1.0)).epsilon(1e-15));
  CHECK(g_closed_form(5, 1, 0.5) == doctest::Approx(-1.272019649514069).epsilon(1e-13));
  CHECK(has_closed_form(7, 2));
  CHECK_FALSE(has_closed_form(3, 1));
  CHECK_THROWS_AS(g_closed_form(3, 1, 0.5), DomainError);
}

TEST_CASE("closed-form branches are contacts with the t = 0 vertex") {
  const std::pair<int, int> cases[] = {{2, 1}, {5, 1}, {2, 2}, {7, 2}};
  for (auto [label, tau] : cases) {
    for (double alpha : {0.2, 0.5, 0.8}) {
      CAPTURE(label);
      CAPTURE(tau);
      CAPTURE(alpha);
      const double b = g_closed_form(label, tau, alpha);
      const double t = closed_form_contact_parameter(label, tau, alpha);
      CHECK(std::abs(gamma_eval(alpha, b, tau, 0.0) - gamma_eval(alpha, b, tau, t)) < 1e-12);
    }
  }
}

TEST_CASE("cusp roots satisfy gamma' = 0 and the printed b(t)") {
  for (int tau : {1, 2}) {
    for (double alpha : {0.15, 0.4, 0.6, 0.9}) {
      const auto sol = cusp_branch_solve(tau, alpha);
      REQUIRE(!sol.roots.empty());
      bool has_pi = false;
      for (const auto& r : sol.roots) {
        CHECK(std::abs(cusp_condition(tau, alpha, r.t)) < 1e-12);
        CHECK(std::abs(gamma_derivative(alpha, r.b, tau, r.t)) < 1e-9);
        has_pi = has_pi || std::abs(r.t - kPi) < 1e-12;
        if (r.t < kPi - 1e-6 && std::abs(std::cos(tau * r.t)) > 1e-3) {
          CHECK(r.b == doctest::Approx(b_printed(tau, alpha, r.t)).epsilon(1e-9));
        }
      }
      CHECK(has_pi);
      CHECK_FALSE(sol.topology_change);
      CHECK(sol.labeled.size() == (tau == 1 ? 3u : 4u));
    }
  }
}

TEST_CASE("real crossing b puts gamma on the real axis") {
  for (int tau : {1, 2}) {
    for (double t : {0.3, 1.0, 2.5}) {
      const double b = real_crossing_b(tau, 0.6, t);
      CHECK(std::abs(gamma_eval(0.6, b, tau, t).imag()) < 1e-12);
    }
  }
}

TEST_CASE("branch ordering at alpha = 0.5") {
  auto g = [](int tau, int k) { return *branch_value(tau, k, 0.5); };
  CHECK(g(1, 1) > g(1, 2));
  CHECK(g(1, 2) > g(1, 4));
  CHECK(g(1, 4) > g(1, 3));  // alpha above alpha*: g3 < g4
  CHECK(g(1, 3) > g(1, 5));
  CHECK_FALSE(branch_value(2, 1, 0.5).has_value());
  CHECK(g(2, 2) > g(2, 3));
  CHECK(g(2, 6) > g(2, 7));
  CHECK(g(2, 7) > g(2, 8));
  CHECK(branch_count(1) == 5);
  CHECK(branch_count(2) == 8);
}

TEST_CASE("alpha* crossings") {
  const auto s1 = alpha_star(1);
  CHECK(s1.alpha == doctest::Approx(0.486).epsilon(0.005 / 0.486));
  CHECK(*branch_value(1, 3, s1.alpha) == doctest::Approx(*branch_value(1, 4, s1.alpha)).epsilon(1e-8));
  const auto s2 = alpha_star(2);
  CHECK(*branch_value(2, 5, s2.alpha) == doctest::Approx(*branch_value(2, 6, s2.alpha)).epsilon(1e-8));
  CHECK(s2.b == doctest::Approx(-0.5).epsilon(0.02));
  CHECK(*branch_value(1, 4, 0.3) < *branch_value(1, 3, 0.3));
}

TEST_CASE("g8 contact gamma(pi) = gamma(t2)") {
  for (double alpha : {0.2, 0.5, 0.8}) {
    const auto c = pi_contact_branch_solve(alpha);
    REQUIRE(c);
    CHECK(c->t > 0.0);
    CHECK(c->t < 0.75 * kPi);
    CHECK(c->gap < 1e-10);
    CHECK(std::abs(gamma_eval(alpha, c->b, 2, c->t).imag()) < 1e-10);
  }
}

TEST_CASE("g1 for tau = 2 is a tangency that exists only for small alpha") {
  const auto p = tangency_branch_solve(0.1);
  REQUIRE(p);
  CHECK(p->residual < 1e-8);
  CHECK(std::abs(gamma_eval(0.1, p->b, 2, p->t_a) - gamma_eval(0.1, p->b, 2, p->t_b)) < 1e-8);
  CHECK(p->b > *branch_value(2, 2, 0.1));
  CHECK_FALSE(tangency_branch_solve(0.35).has_value());
}

TEST_CASE("region labels") {
  const double g1 = *branch_value(1, 1, 0.5), g2 = *branch_value(1, 2, 0.5);
  const auto v = label_region(1, 0.5, 0.5 * (g1 + g2));
  REQUIRE(v.region);
  CHECK(v.region->name == "B");
  CHECK(v.region->expected_stable == 2);
  CHECK(*v.region->expected_unstable == 1);
  const auto on = label_region(1, 0.5, g2);
  CHECK_FALSE(on.region.has_value());
  CHECK(on.on_branch == 2);
  CHECK(label_region(1, 0.2, 0.5 * (*branch_value(1, 3, 0.2) + *branch_value(1, 4, 0.2))).region->name == "D1");
  CHECK(label_region(1, 0.8, 0.5 * (*branch_value(1, 3, 0.8) + *branch_value(1, 4, 0.8))).region->name == "D2");
  CHECK_FALSE(region_census(1, "F").expected_unstable.has_value());
  CHECK_THROWS_AS(region_census(1, "Z"), DomainError);
  CHECK(region_names(2).size() == 10);
}

TEST_CASE("atlas is deterministic and labelled") {
  const auto a = build_atlas(2, 60, 1);
  const auto b = build_atlas(2, 60, 3);
  REQUIRE(a.branches.size() == 8);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(a.branches[k].label == static_cast<int>(k + 1));
    CHECK(a.branches[k].b_values == b.branches[k].b_values);
  }
  CHECK(a.branches[1].provenance == Provenance::ClosedForm);
  CHECK(a.branches[2].provenance == Provenance::RootFound);
  CHECK(a.branches[0].b_values.front().has_value());
  CHECK_FALSE(a.branches[0].b_values.back().has_value());
  CHECK(a.star.alpha == doctest::Approx(alpha_star(2).alpha).epsilon(1e-9));
}

}
