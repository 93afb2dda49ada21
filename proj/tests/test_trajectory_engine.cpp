#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fracdelay/errors.hpp"
#include "fracdelay/trajectory_engine.hpp"

using namespace fracdelay;

namespace {

double phi_oracle(double alpha, long n) {
  return std::exp(std::lgamma(n + alpha) - std::lgamma(alpha) - std::lgamma(n + 1.0));
}

// Direct transcription of the linear sum with lgamma coefficients.
std::vector<cplx> linear_oracle(double alpha, cplx a, double b, int tau, cplx x0, std::size_t steps) {
  std::vector<cplx> x(steps + 1);
  auto at = [&](long j) { return j < 0 ? x0 : x[static_cast<std::size_t>(j)]; };
  x[0] = x0;
  for (std::size_t t = 1; t <= steps; ++t) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < t; ++j) {
      s += phi_oracle(alpha, static_cast<long>(t - 1 - j)) * ((a - 1.0) * x[j] + b * at(static_cast<long>(j) - tau));
    }
    x[t] = x0 + s;
  }
  return x;
}

}  // namespace

TEST_SUITE("trajectory_engine") {

TEST_CASE("alpha = 1 reduces to the classical delay recursion") {
  const cplx a(0.4, 0.3);
  const double b = -0.2;
  for (int tau : {1, 2, 3}) {
    const auto sys = LinearDelaySystem::with_constant_history(1.0, a, b, tau, 1.0);
    const auto traj = simulate_linear(sys, 300);
    std::vector<cplx> ref(301);
    ref[0] = 1.0;
    for (std::size_t t = 1; t <= 300; ++t) {
      const long d = static_cast<long>(t) - 1 - tau;
      ref[t] = a * ref[t - 1] + b * (d < 0 ? cplx(1.0) : ref[static_cast<std::size_t>(d)]);
    }
    for (std::size_t t = 0; t <= 300; t += 13) CHECK(std::abs(traj.states[t] - ref[t]) <= 1e-12 * (1.0 + std::abs(ref[t])));
  }
}

TEST_CASE("matches the direct sum for fractional order") {
  const cplx a(0.2, -0.4);
  const auto sys = LinearDelaySystem::with_constant_history(0.55, a, 0.3, 2, cplx(0.7, 0.1));
  const auto traj = simulate_linear(sys, 250);
  const auto ref = linear_oracle(0.55, a, 0.3, 2, cplx(0.7, 0.1), 250);
  REQUIRE(traj.states.size() == 251);
  double worst = 0.0;
  for (std::size_t t = 0; t <= 250; ++t) worst = std::max(worst, std::abs(traj.states[t] - ref[t]));
  CHECK(worst < 1e-11);
}

TEST_CASE("nonlinear step matches the direct sum") {
  const double alpha = 0.7, b = 0.1, lambda = 2.5;
  const int tau = 1;
  const auto sys = NonlinearDelaySystem::with_constant_history(MapModel::logistic(lambda), b, tau, alpha, 0.3);
  const auto traj = simulate_nonlinear(sys, 120);
  std::vector<double> x(121);
  x[0] = 0.3;
  auto at = [&](long j) { return j < 0 ? 0.3 : x[static_cast<std::size_t>(j)]; };
  for (std::size_t t = 1; t <= 120; ++t) {
    double s = 0.0;
    for (std::size_t j = 1; j <= t; ++j) {
      const double xp = x[j - 1];
      s += phi_oracle(alpha, static_cast<long>(t - j)) * (lambda * xp * (1.0 - xp) + b * at(static_cast<long>(j) - tau - 1) - xp);
    }
    x[t] = 0.3 + s;
  }
  for (std::size_t t = 0; t <= 120; ++t) CHECK(traj.states[t] == doctest::Approx(x[t]).epsilon(1e-11));
}

TEST_CASE("shared kernel gives identical results and must match the order") {
  const auto sys = LinearDelaySystem::with_constant_history(0.4, cplx(0.5, 0.0), 0.1, 1);
  FractionalKernel k(0.4);
  CHECK(simulate_linear(sys, 500).states == simulate_linear(sys, 500, k).states);
  FractionalKernel wrong(0.5);
  CHECK_THROWS_AS(simulate_linear(sys, 10, wrong), DomainError);
}

TEST_CASE("divergence stops the run") {
  const auto sys = LinearDelaySystem::with_constant_history(0.5, cplx(5.0, 0.0), 0.0, 1);
  const auto traj = simulate_linear(sys, 10000);
  CHECK(traj.diverged);
  CHECK(traj.states.size() < 10001);
  CHECK(detect_verdict(std::span<const cplx>(traj.states), DetectOptions{}).outcome == Outcome::Diverged);
}

TEST_CASE("memory truncation equal to the run length changes nothing") {
  const auto sys = LinearDelaySystem::with_constant_history(0.3, cplx(0.1, 0.2), -0.3, 2);
  SimulationOptions o;
  o.memory_length = 1000;
  CHECK(simulate_linear(sys, 400, o).states == simulate_linear(sys, 400).states);
}

TEST_CASE("verdict rules") {
  DetectOptions opts;
  opts.target = cplx(0.0);
  std::vector<cplx> settle(400);
  for (std::size_t t = 0; t < settle.size(); ++t) settle[t] = std::pow(0.9, static_cast<double>(t));
  CHECK(detect_verdict(std::span<const cplx>(settle), opts).outcome == Outcome::ConvergedToFixedPoint);

  std::vector<cplx> ring(400);
  for (std::size_t t = 0; t < ring.size(); ++t) ring[t] = std::polar(1.0, 0.3 * static_cast<double>(t));
  CHECK(detect_verdict(std::span<const cplx>(ring), opts).outcome == Outcome::Bounded);

  std::vector<cplx> grow(400);
  for (std::size_t t = 0; t < grow.size(); ++t) grow[t] = std::pow(1.01, static_cast<double>(t));
  CHECK(detect_verdict(std::span<const cplx>(grow), opts).outcome == Outcome::Undetermined);

  std::vector<double> blow{1.0, 1e13};
  CHECK(detect_verdict(std::span<const double>(blow), DetectOptions{}).outcome == Outcome::Diverged);

  std::vector<double> nan{1.0, std::nan("")};
  CHECK(detect_verdict(std::span<const double>(nan), DetectOptions{}).outcome == Outcome::Diverged);
}

TEST_CASE("settling away from the equilibrium is not convergence") {
  std::vector<double> traj(500, 2.0);
  CHECK(verdict_near_equilibrium(traj, 2.0, 1e-5, 100, 0.01).outcome == Outcome::ConvergedToFixedPoint);
  CHECK(verdict_near_equilibrium(traj, 0.0, 1e-5, 100, 0.01).outcome == Outcome::Bounded);
}

TEST_CASE("validation") {
  auto sys = LinearDelaySystem::with_constant_history(0.5, cplx(0.1), 0.1, 1);
  sys.tau = 0;
  CHECK_THROWS_AS(simulate_linear(sys, 10), DomainError);
  CHECK_THROWS_AS(LinearDelaySystem::with_constant_history(1.2, cplx(0.1), 0.1, 1).validate(), DomainError);
}

TEST_CASE("grid scan is deterministic across thread counts") {
  GridScanRequest req;
  req.x = {-1.0, 1.0, 7};
  req.y = {-1.0, 1.0, 5};
  req.alpha = 0.6;
  req.b = 0.2;
  req.steps = 600;
  const auto one = grid_scan(req, 1);
  const auto four = grid_scan(req, 4);
  REQUIRE(one.cells.size() == 35);
  for (std::size_t i = 0; i < one.cells.size(); ++i) {
    CHECK(one.cells[i].outcome == four.cells[i].outcome);
    CHECK(one.cells[i].final_deviation == four.cells[i].final_deviation);
  }
  // a = 0 lies inside the region at alpha = 0.6, b = 0.2; decay is only
  // algebraic, so 600 steps need not reach the tolerance.
  const auto inside = one.at(3, 2).outcome;
  CHECK((inside == Outcome::ConvergedToFixedPoint || inside == Outcome::Bounded));
  CHECK(one.at(0, 0).outcome == Outcome::Diverged);
}

TEST_CASE("one-by-one grid") {
  GridScanRequest req;
  req.plane = ScanPlane::BA;
  req.model = ScanModel::Logistic;
  req.x = {0.1, 0.1, 1};
  req.y = {0.2, 0.2, 1};
  req.steps = 500;
  const auto r = grid_scan(req, 1);
  REQUIRE(r.cells.size() == 1);
  CHECK(r.cells[0].outcome == Outcome::ConvergedToFixedPoint);
}

}
