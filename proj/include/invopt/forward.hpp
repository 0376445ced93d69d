// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// Forward-side operations: solve FOP(alpha), sweep the Pareto frontier, test
// membership, and the classical KKT-feasibility inverse that returns a weight
// vector only when the input point is already Pareto optimal.

#pragma once

#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "invopt/kernel.hpp"
#include "invopt/linprog.hpp"

namespace invopt {

struct KernelSummary {
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  double barrierGapFinal = 0.0;
};

struct ParetoSample {
  WeightVector alpha;
  Vector x;
  Vector objectiveValues;
  KernelSummary kernel;
};

namespace detail {

// Scalarized smooth program for FOP(alpha). Hinge objectives with positive
// weight are lifted; zero-weight hinge blocks are dropped so the barrier has
// no unbounded slab to wander in.
struct ScalarizedFop {
  SmoothProgram program;
  Index baseVars;
};

inline ScalarizedFop scalarizeFop(const ForwardProblem& p, const Vector& alpha) {
  const Index n = p.nVars;
  Index extra = 0;
  std::vector<std::pair<Index, Index>> zBlocks(p.objectives.size(), {-1, 0});
  for (Index k = 0; k < p.numObjectives(); ++k) {
    if (alpha[k] > 0.0 && p.objectives[k].kind() == FunctionKind::HingeSquared) {
      const auto* h = p.objectives[k].asHingeSquared();
      zBlocks[static_cast<size_t>(k)] = {n + extra, h->M.rows()};
      extra += h->M.rows();
    }
  }
  const Index total = n + extra;

  Matrix Q = Matrix::Zero(total, total);
  Vector q = Vector::Zero(total);
  double d = 0.0;
  bool quadratic = extra > 0;
  for (Index k = 0; k < p.numObjectives(); ++k) {
    if (alpha[k] <= 0.0) continue;
    const auto& [offset, rows] = zBlocks[static_cast<size_t>(k)];
    if (offset >= 0) {
      Q.block(offset, offset, rows, rows) += 2.0 * alpha[k] * Matrix::Identity(rows, rows);
    } else if (const auto* quad = p.objectives[k].asQuadratic()) {
      Q.topLeftCorner(n, n) += alpha[k] * quad->Q;
      q.head(n) += alpha[k] * quad->q;
      d += alpha[k] * quad->d;
      quadratic = true;
    } else {
      const auto* lin = p.objectives[k].asLinear();
      q.head(n) += alpha[k] * lin->c;
      d += alpha[k] * lin->d;
    }
  }
  ConvexFunction objective = quadratic
                                 ? ConvexFunction::quadratic(std::move(Q), std::move(q), d)
                                 : ConvexFunction::linear(Vector(q.head(total)), d);

  std::vector<ConvexFunction> ineqs;
  for (const auto& g : p.inequalities) {
    if (const auto* h = g.asHingeSquared()) {
      for (Index i = 0; i < h->M.rows(); ++i) {
        Vector c = Vector::Zero(total);
        c.head(n) = h->M.row(i).transpose();
        ineqs.push_back(ConvexFunction::linear(std::move(c), -h->t[i]));
      }
    } else {
      ineqs.push_back(g.embedded(total, 0));
    }
  }
  for (Index k = 0; k < p.numObjectives(); ++k) {
    const auto& [offset, rows] = zBlocks[static_cast<size_t>(k)];
    if (offset < 0) continue;
    const auto* h = p.objectives[k].asHingeSquared();
    for (Index i = 0; i < rows; ++i) {
      Vector c = Vector::Zero(total);
      c.head(n) = h->M.row(i).transpose();
      c[offset + i] = -1.0;
      ineqs.push_back(ConvexFunction::linear(std::move(c), -h->t[i]));
      Vector cz = Vector::Zero(total);
      cz[offset + i] = -1.0;
      ineqs.push_back(ConvexFunction::linear(std::move(cz), 0.0));
    }
  }
  Matrix A(p.eqA.rows(), total);
  if (p.eqA.rows() > 0) {
    A.setZero();
    A.leftCols(n) = p.eqA;
  }
  return {SmoothProgram(std::move(objective), std::move(ineqs), std::move(A), p.eqB), n};
}

}  // namespace detail

inline ParetoSample solveFop(const ForwardProblem& p, const WeightVector& alpha,
                             const KernelOptions& opts = {}) {
  if (alpha.alpha.size() != p.numObjectives()) {
    throw DimensionMismatch("solveFop: weight count");
  }
  if (alpha.isZero()) throw ZeroWeightVector("solveFop: weight vector is zero");

  auto scalarized = detail::scalarizeFop(p, alpha.alpha);
  KernelSolution sol = solve(scalarized.program, opts);
  ParetoSample sample;
  sample.alpha = alpha;
  sample.kernel = {sol.status, sol.iterations, sol.barrierGapFinal};
  if (sol.x.size() >= scalarized.baseVars) {
    sample.x = sol.x.head(scalarized.baseVars);
    sample.objectiveValues = p.objectiveValues(sample.x);
  }
  return sample;
}

inline std::vector<ParetoSample> sweepPareto(const ForwardProblem& p, int gridSize,
                                             uint64_t seed = 0, const KernelOptions& opts = {},
                                             int jobs = 1) {
  if (gridSize < 2) throw InvalidProblem("sweepPareto: gridSize must be >= 2");
  const Index K = p.numObjectives();
  std::vector<Vector> alphas;
  if (K == 1) {
    alphas.assign(static_cast<size_t>(gridSize), Vector::Ones(1));
  } else if (K == 2) {
    for (int i = 0; i < gridSize; ++i) {
      const double a = static_cast<double>(i) / (gridSize - 1);
      Vector v(2);
      v << a, 1.0 - a;
      alphas.push_back(v);
    }
  } else {
    // seeded Dirichlet(1,...,1) draws
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() {
      return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    for (int i = 0; i < gridSize; ++i) {
      Vector v(K);
      for (Index k = 0; k < K; ++k) v[k] = -std::log(unit());
      alphas.push_back(v / v.sum());
    }
  }

  std::vector<ParetoSample> samples(alphas.size());
  auto worker = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      samples[i] = solveFop(p, WeightVector(alphas[i]), opts);
    }
  };
  const int threadCount = std::max(1, std::min<int>(jobs, static_cast<int>(alphas.size())));
  if (threadCount == 1) {
    worker(0, alphas.size());
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (alphas.size() + threadCount - 1) / threadCount;
    for (int tIdx = 0; tIdx < threadCount; ++tIdx) {
      const size_t b = static_cast<size_t>(tIdx) * chunk;
      const size_t e = std::min(alphas.size(), b + chunk);
      if (b < e) pool.emplace_back(worker, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return samples;
}

struct MembershipReport {
  bool feasible = false;
  double maxViolation = 0.0;
  Vector inequalityValues;    // g_l(x); feasible rows are <= 1e-8
  Vector equalityResiduals;   // eqA x - eqB
};

/// Boundary points within +-1e-8 of a constraint count as feasible.
inline MembershipReport membership(const ForwardProblem& p, const Vector& x) {
  MembershipReport r;
  r.inequalityValues.resize(p.numInequalities());
  for (Index l = 0; l < p.numInequalities(); ++l) {
    r.inequalityValues[l] = p.inequalities[static_cast<size_t>(l)].value(x);
  }
  r.equalityResiduals = p.eqA.rows() > 0 ? Vector(p.eqA * x - p.eqB) : Vector(0);
  double v = 0.0;
  if (r.inequalityValues.size() > 0) v = std::max(v, r.inequalityValues.maxCoeff());
  if (r.equalityResiduals.size() > 0) v = std::max(v, r.equalityResiduals.cwiseAbs().maxCoeff());
  r.maxViolation = std::max(0.0, v);
  r.feasible = v <= 1e-8;
  return r;
}

struct ClassicalInverseOutcome {
  std::optional<WeightVector> weights;  // empty: only alpha = 0 solves the system
  Vector sigma;
  Vector pi;
};

/// KKT feasibility system at xhat, augmented with sum(alpha) = 1 to exclude
/// the trivial zero vector. Infeasibility of the augmented system certifies
/// that alpha = 0 is the only solution, i.e. xhat is not in Omega.
inline ClassicalInverseOutcome classicalInverse(const ForwardProblem& p, const Vector& xhat) {
  const Index n = p.nVars;
  const Index K = p.numObjectives();
  const Index L = p.numInequalities();
  const Index m = p.eqA.rows();
  const Index vars = K + L + m;

  LinearProgram lp;
  lp.cost = Vector::Zero(vars);
  lp.eqA = Matrix::Zero(n + 1, vars);
  lp.eqB = Vector::Zero(n + 1);
  for (Index k = 0; k < K; ++k) {
    lp.eqA.col(k).head(n) = p.objectives[static_cast<size_t>(k)].gradient(xhat);
  }
  for (Index l = 0; l < L; ++l) {
    lp.eqA.col(K + l).head(n) = p.inequalities[static_cast<size_t>(l)].gradient(xhat);
  }
  if (m > 0) lp.eqA.block(0, K + L, n, m) = -p.eqA.transpose();
  lp.eqA.row(n).head(K).setOnes();
  lp.eqB[n] = 1.0;
  lp.lower = Vector::Constant(vars, 0.0);
  lp.upper = Vector::Constant(vars, kInf);
  lp.lower.tail(m).setConstant(-kInf);
  // complementarity sigma_l g_l(xhat) = 0: inactive rows (|g| beyond the
  // boundary tolerance) pin sigma_l to zero, active rows leave it free
  for (Index l = 0; l < L; ++l) {
    if (std::abs(p.inequalities[static_cast<size_t>(l)].value(xhat)) > 1e-8) {
      lp.upper[K + l] = 0.0;
    }
  }

  LpSolution sol = solveLp(lp);
  ClassicalInverseOutcome out;
  if (sol.status != SolveStatus::Optimal) return out;
  out.weights = WeightVector(Vector(sol.x.head(K).cwiseMax(0.0)));
  out.sigma = sol.x.segment(K, L);
  out.pi = sol.x.tail(m);
  return out;
}

/// Theorem 1(b) harness: relative difference between alpha'f(x*) and the
/// re-solved forward optimum alpha'f(x(alpha)).
inline double resolveConsistency(const ForwardProblem& p, const WeightVector& alpha,
                                 const Vector& xStar, const KernelOptions& opts = {}) {
  ParetoSample fresh = solveFop(p, alpha, opts);
  const Vector a = alpha.alpha;
  const double ref = a.dot(p.objectiveValues(xStar));
  const double re = a.dot(fresh.objectiveValues);
  return std::abs(re - ref) / (1.0 + std::abs(ref));
}

}  // namespace invopt
