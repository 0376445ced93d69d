// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.

#include <catch2/catch_amalgamated.hpp>

#include "invopt/instances.hpp"
#include "invopt/inverse.hpp"
#include "support/oracles.hpp"

using namespace invopt;
using namespace invopt::testing;

TEST_CASE("forward solves reproduce the worked optima") {
  auto ex1 = builtinExample1();
  {
    Vector a(2);
    a << 0.5, 0.5;
    ParetoSample s = solveFop(ex1, WeightVector(a));
    REQUIRE(s.kernel.status == SolveStatus::Optimal);
    CHECK_THAT(s.x[0], Catch::Matchers::WithinAbs(golden::kXa, 1e-8));
    CHECK_THAT(s.x[1], Catch::Matchers::WithinAbs(golden::kXa, 1e-8));
  }
  {
    Vector a(2);
    a << 1.0, 0.0;
    ParetoSample s = solveFop(ex1, WeightVector(a));
    REQUIRE(s.kernel.status == SolveStatus::Optimal);
    CHECK_THAT(s.x[0], Catch::Matchers::WithinAbs(1.067, 5e-3));
    CHECK_THAT(s.x[1], Catch::Matchers::WithinAbs(1.641, 5e-3));
    CHECK_THAT(s.objectiveValues[0], Catch::Matchers::WithinAbs(7.244, 5e-3));
    CHECK_THAT(s.objectiveValues[1], Catch::Matchers::WithinAbs(11.910, 5e-3));
  }
  {
    Vector zero = Vector::Zero(2);
    CHECK_THROWS_AS(solveFop(ex1, WeightVector(zero)), ZeroWeightVector);
    Vector negative(2);
    negative << 1.0, -0.5;
    CHECK_THROWS_AS(WeightVector(negative), ZeroWeightVector);
  }
}

TEST_CASE("Pareto sweep: grid placement, monotone trade-off, weak Pareto") {
  auto ex1 = builtinExample1();
  auto samples = sweepPareto(ex1, 11);
  REQUIRE(samples.size() == 11);
  // alpha = (0.5, 0.5) sits at the middle of the grid
  const auto& mid = samples[5];
  CHECK_THAT(mid.alpha.alpha[0], Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(mid.x[0], Catch::Matchers::WithinAbs(golden::kXa, 1e-6));
  CHECK_THAT(mid.x[1], Catch::Matchers::WithinAbs(golden::kXa, 1e-6));

  auto fine = sweepPareto(ex1, 101);
  for (size_t i = 1; i < fine.size(); ++i) {
    REQUIRE(fine[i].kernel.status == SolveStatus::Optimal);
    // alpha1 rises along the grid: f1 must not increase, f2 must not decrease
    CHECK(fine[i].objectiveValues[0] <= fine[i - 1].objectiveValues[0] + 1e-8);
    CHECK(fine[i].objectiveValues[1] >= fine[i - 1].objectiveValues[1] - 1e-8);
  }

  // weak Pareto: no feasible point strictly dominates a sweep sample
  std::mt19937_64 rng(7);
  for (size_t i = 0; i < fine.size(); i += 10) {
    for (int trial = 0; trial < 200; ++trial) {
      const double r = std::sqrt(unitReal(rng));
      const double th = 2.0 * M_PI * unitReal(rng);
      Vector y(2);
      y << 2.0 + r * std::cos(th), 2.0 + r * std::sin(th);
      const bool strictlyDominates =
          ex1.objectives[0].value(y) < fine[i].objectiveValues[0] - 1e-8 &&
          ex1.objectives[1].value(y) < fine[i].objectiveValues[1] - 1e-8;
      CHECK_FALSE(strictlyDominates);
    }
  }
}

TEST_CASE("sweep of a single-objective problem repeats the unique optimum") {
  auto ex1 = builtinExample1();
  ForwardProblem single({ex1.objectives[0]}, {ex1.inequalities[0]});
  auto samples = sweepPareto(single, 5);
  REQUIRE(samples.size() == 5);
  for (const auto& s : samples) {
    CHECK_THAT(s.x[0], Catch::Matchers::WithinAbs(samples[0].x[0], 1e-9));
    CHECK_THAT(s.x[1], Catch::Matchers::WithinAbs(samples[0].x[1], 1e-9));
  }
}

TEST_CASE("sweep with three objectives uses seeded simplex draws") {
  auto ex1 = builtinExample1();
  ForwardProblem p3({ex1.objectives[0], ex1.objectives[1],
                     ConvexFunction::quadratic(Matrix(3.0 * Matrix::Identity(2, 2)))},
                    {ex1.inequalities[0]});
  auto a = sweepPareto(p3, 7, 42);
  auto b = sweepPareto(p3, 7, 42);
  auto c = sweepPareto(p3, 7, 43);
  REQUIRE(a.size() == 7);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i].alpha.alpha - b[i].alpha.alpha).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(a[i].alpha.alpha.sum() - 1.0) <= 1e-12);
    CHECK(a[i].alpha.alpha.minCoeff() > 0.0);
  }
  bool anyDiffer = false;
  for (size_t i = 0; i < a.size(); ++i) {
    anyDiffer = anyDiffer || (a[i].alpha.alpha - c[i].alpha.alpha).cwiseAbs().maxCoeff() > 0;
  }
  CHECK(anyDiffer);
}

TEST_CASE("membership verdicts with constraint slacks") {
  auto ex1 = builtinExample1();
  auto pts = example1Points();
  auto atB = membership(ex1, pts.b);
  CHECK(atB.feasible);
  CHECK_THAT(atB.inequalityValues[0], Catch::Matchers::WithinAbs(-0.42, 1e-12));

  auto atC = membership(ex1, pts.c);
  CHECK_FALSE(atC.feasible);
  CHECK_THAT(atC.inequalityValues[0], Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(atC.maxViolation, Catch::Matchers::WithinAbs(1.0, 1e-12));

  auto atA = membership(ex1, pts.a);
  CHECK(atA.feasible);
  CHECK(std::abs(atA.inequalityValues[0]) <= 1e-12);  // boundary point
}

TEST_CASE("classical inverse on the three worked points") {
  auto ex1 = builtinExample1();
  auto pts = example1Points();
  auto atA = classicalInverse(ex1, pts.a);
  REQUIRE(atA.weights.has_value());
  CHECK_THAT(atA.weights->alpha[0], Catch::Matchers::WithinAbs(0.5, 1e-6));
  CHECK_THAT(atA.weights->alpha[1], Catch::Matchers::WithinAbs(0.5, 1e-6));

  CHECK_FALSE(classicalInverse(ex1, pts.b).weights.has_value());
  CHECK_FALSE(classicalInverse(ex1, pts.c).weights.has_value());
}

TEST_CASE("re-solve consistency for sweep samples") {
  auto ex1 = builtinExample1();
  for (const auto& s : sweepPareto(ex1, 9)) {
    REQUIRE(s.kernel.status == SolveStatus::Optimal);
    CHECK(resolveConsistency(ex1, s.alpha, s.x) <= 1e-6);
  }
}

TEST_CASE("classical inverse succeeds exactly when the relative model returns one") {
  auto ex1 = builtinExample1();
  auto pts = example1Points();
  std::vector<Vector> feasiblePoints{pts.a, pts.b};
  std::mt19937_64 rng(12);
  for (int extra = 0; extra < 4; ++extra) {
    Vector a(2);
    a[0] = uniformReal(rng, 0.1, 0.9);
    a[1] = 1.0 - a[0];
    feasiblePoints.push_back(solveFop(ex1, WeightVector(a)).x);  // Pareto
    const double r = 0.9 * std::sqrt(unitReal(rng));
    const double th = 2.0 * M_PI * unitReal(rng);
    Vector inner(2);
    inner << 2.0 + r * std::cos(th), 2.0 + r * std::sin(th);
    feasiblePoints.push_back(inner);  // interior, hence not Pareto
  }
  for (const auto& x : feasiblePoints) {
    const bool classicalFound = classicalInverse(ex1, x).weights.has_value();
    InverseResult rel = solveIopRelative(ex1, x);
    REQUIRE(rel.status == SolveStatus::Optimal);
    CHECK(classicalFound == (std::abs(rel.epsilonStar - 1.0) <= 1e-6));
  }
}
