// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.

#include <catch2/catch_amalgamated.hpp>

#include "invopt/instances.hpp"
#include "invopt/kernel.hpp"
#include "support/oracles.hpp"

using namespace invopt;
using namespace invopt::testing;

namespace {

// residuals recomputed independently of the solver's own bookkeeping
void verifyCertificate(const SmoothProgram& p, const KernelSolution& s, double tol = 1e-8) {
  REQUIRE(s.status == SolveStatus::Optimal);
  Vector stat = p.objective.gradient(s.x);
  for (Index l = 0; l < p.numInequalities(); ++l) {
    stat += s.dual.sigma[l] * p.inequalities[static_cast<size_t>(l)].gradient(s.x);
  }
  if (p.eqA.rows() > 0) stat -= p.eqA.transpose() * s.dual.pi;
  CHECK(stat.cwiseAbs().maxCoeff() <= tol);
  for (Index l = 0; l < p.numInequalities(); ++l) {
    const double gv = p.inequalities[static_cast<size_t>(l)].value(s.x);
    CHECK(gv <= tol);
    CHECK(std::abs(s.dual.sigma[l] * gv) <= tol);
    CHECK(s.dual.sigma[l] >= -1e-12);
  }
  if (p.eqA.rows() > 0) CHECK((p.eqA * s.x - p.eqB).cwiseAbs().maxCoeff() <= tol);
}

}  // namespace

TEST_CASE("phase one finds interiors and certifies empty ones") {
  auto ex1 = builtinExample1();
  SmoothProgram disk(ConvexFunction::linear(Vector::Zero(2)), {ex1.inequalities[0]});
  auto interior = phaseOne(disk);
  REQUIRE(interior.has_value());
  CHECK(ex1.inequalities[0].value(*interior) <= -1e-6);

  Vector plus(1), minus(1);
  plus << 1.0;
  minus << -1.0;
  SmoothProgram empty(ConvexFunction::linear(Vector::Zero(1)),
                      {ConvexFunction::linear(plus, 0.0), ConvexFunction::linear(minus, 1.0)});
  CHECK_FALSE(phaseOne(empty).has_value());

  // simplex interior: x1 + x2 = 1, x >= 0
  Matrix A(1, 2);
  A << 1.0, 1.0;
  Vector e1(2), e2(2);
  e1 << -1.0, 0.0;
  e2 << 0.0, -1.0;
  SmoothProgram simplex(ConvexFunction::linear(Vector::Zero(2)),
                        {ConvexFunction::linear(e1, 0.0), ConvexFunction::linear(e2, 0.0)}, A,
                        Vector::Ones(1));
  auto onSimplex = phaseOne(simplex);
  REQUIRE(onSimplex.has_value());
  CHECK(std::abs((*onSimplex)[0] + (*onSimplex)[1] - 1.0) <= 1e-9);
  CHECK((*onSimplex).minCoeff() > 0.0);
}

TEST_CASE("one-variable quadratic with analytic KKT") {
  Matrix Q(1, 1);
  Q << 2.0;
  Vector c(1);
  c << -1.0;
  SmoothProgram p(ConvexFunction::quadratic(Q), {ConvexFunction::linear(c, 1.0)});
  KernelSolution s = solve(p);
  verifyCertificate(p, s);
  CHECK_THAT(s.x[0], Catch::Matchers::WithinAbs(1.0, 1e-9));
  CHECK_THAT(s.dual.sigma[0], Catch::Matchers::WithinAbs(2.0, 1e-8));
  CHECK(s.iterations <= 200);
}

TEST_CASE("single-objective solves over the disk hit the worked optima") {
  auto ex1 = builtinExample1();
  {
    SmoothProgram p(ex1.objectives[0], {ex1.inequalities[0]});
    KernelSolution s = solve(p);
    verifyCertificate(p, s);
    // rounded values as printed alongside the example
    CHECK_THAT(s.x[0], Catch::Matchers::WithinAbs(1.067, 5e-3));
    CHECK_THAT(s.x[1], Catch::Matchers::WithinAbs(1.641, 5e-3));
    // frozen oracle values
    CHECK_THAT(s.x[0], Catch::Matchers::WithinAbs(golden::kArgminF1X1, 1e-9));
    CHECK_THAT(s.x[1], Catch::Matchers::WithinAbs(golden::kArgminF1X2, 1e-9));
  }
  {
    SmoothProgram p(ConvexFunction::quadratic(Matrix(5.0 * Matrix::Identity(2, 2))),
                    {ex1.inequalities[0]});
    KernelSolution s = solve(p);
    verifyCertificate(p, s);
    CHECK_THAT(s.x[0], Catch::Matchers::WithinAbs(golden::kXa, 1e-9));
    CHECK_THAT(s.x[1], Catch::Matchers::WithinAbs(golden::kXa, 1e-9));
  }
}

TEST_CASE("duality gap certificate on random quadratic instances") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    RandomInstance inst = randomQuadraticInstance(seed, seed % 3 == 0);
    const auto& p = inst.problem;
    Vector w = Vector::Constant(p.numObjectives(), 1.0 / p.numObjectives());
    ConvexFunction obj = combineWeighted(p.objectives, w);
    SmoothProgram sp(obj, p.inequalities, p.eqA, p.eqB);
    KernelSolution s = solve(sp);
    verifyCertificate(sp, s);

    // Lagrangian dual value at the returned multipliers
    Matrix H = obj.hessian();
    Vector lin = obj.gradient(Vector::Zero(p.nVars));
    double constant = obj.value(Vector::Zero(p.nVars));
    for (Index l = 0; l < sp.numInequalities(); ++l) {
      const auto& g = sp.inequalities[static_cast<size_t>(l)];
      H += s.dual.sigma[l] * g.hessian();
      lin += s.dual.sigma[l] * g.gradient(Vector::Zero(p.nVars));
      constant += s.dual.sigma[l] * g.value(Vector::Zero(p.nVars));
    }
    if (p.eqA.rows() > 0) {
      lin -= p.eqA.transpose() * s.dual.pi;
      constant += s.dual.pi.dot(p.eqB);
    }
    Vector minimizer = H.ldlt().solve(-lin);
    const double dualValue = 0.5 * minimizer.dot(H * minimizer) + lin.dot(minimizer) + constant;
    const double primalValue = obj.value(s.x);
    CHECK(primalValue - dualValue <= 1e-6);
    CHECK(primalValue - dualValue >= -1e-8);
  }
}

TEST_CASE("oracle equivalence on random two-variable instances") {
  int checked = 0;
  for (uint64_t seed = 100; checked < 50; ++seed) {
    RandomInstance inst = randomQuadraticInstance(seed, false);
    if (inst.problem.nVars != 2) continue;
    ++checked;
    const auto& p = inst.problem;
    Vector w(p.numObjectives());
    std::mt19937_64 rng(seed);
    for (Index k = 0; k < w.size(); ++k) w[k] = uniformReal(rng, 0.2, 1.0);
    ConvexFunction obj = combineWeighted(p.objectives, w);
    SmoothProgram sp(obj, p.inequalities, p.eqA, p.eqB);
    KernelSolution s = solve(sp);
    verifyCertificate(sp, s);

    auto feasible = [&](const Vector& x) {
      for (const auto& g : p.inequalities) {
        if (g.value(x) > 0.0) return false;
      }
      return true;
    };
    Vector lo = inst.interior.array() - 2.5;
    Vector hi = inst.interior.array() + 2.5;
    GridResult oracle = boxGridMinimize([&](const Vector& x) { return obj.value(x); }, feasible,
                                        lo, hi, 5e-3);
    REQUIRE(oracle.x.size() == 2);
    CHECK(std::abs(obj.value(s.x) - oracle.value) <= 1e-3);
  }
}

TEST_CASE("equality-only programs") {
  // min ||x||^2 s.t. x1 + x2 = 2  ->  (1, 1), pi = 2
  Matrix A(1, 2);
  A << 1.0, 1.0;
  SmoothProgram p(ConvexFunction::quadratic(Matrix(2.0 * Matrix::Identity(2, 2))), {}, A,
                  Vector::Constant(1, 2.0));
  KernelSolution s = solve(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK_THAT(s.x[0], Catch::Matchers::WithinAbs(1.0, 1e-10));
  CHECK_THAT(s.dual.pi[0], Catch::Matchers::WithinAbs(2.0, 1e-10));

  // unbounded linear objective
  Vector c(2);
  c << 1.0, -1.0;
  SmoothProgram ub(ConvexFunction::linear(c), {}, A, Vector::Constant(1, 2.0));
  CHECK(solve(ub).status == SolveStatus::Unbounded);
}

TEST_CASE("unbounded barrier descent is detected") {
  // min x1 with only x1 <= ... unbounded below over a half-plane
  Vector c(2);
  c << 1.0, 0.0;
  Vector row(2);
  row << 1.0, 0.0;
  SmoothProgram p(ConvexFunction::linear(c), {ConvexFunction::linear(row, -10.0)});
  KernelSolution s = solve(p);
  CHECK(s.status == SolveStatus::Unbounded);
}

TEST_CASE("infeasible inequality system propagates from phase one") {
  Vector plus(1), minus(1);
  plus << 1.0;
  minus << -1.0;
  Matrix Q(1, 1);
  Q << 2.0;
  SmoothProgram p(ConvexFunction::quadratic(Q),
                  {ConvexFunction::linear(plus, 0.0), ConvexFunction::linear(minus, 1.0)});
  CHECK(solve(p).status == SolveStatus::Infeasible);
}

TEST_CASE("kernel certification counter stays clean") {
  CHECK(certificationFailures().load() == 0);
}
