// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// Exact trade-off-preserving inverse models. Given a (possibly non-Pareto,
// possibly infeasible) input point, minimize the common scaled deviation
// epsilon over the feasible set; the imputed weights are the multipliers of
// the K epigraph constraints. The relative specialization works in ratio form
// (epsilon* = 1 at a Pareto input), general/absolute in deviation form
// (epsilon* = 0 there).

#pragma once

#include <vector>

#include "invopt/forward.hpp"

namespace invopt {

enum class PreservationVerdict { Perfect, PartialWithZeroWeights, NotPreserved };

inline const char* toString(PreservationVerdict v) {
  switch (v) {
    case PreservationVerdict::Perfect: return "perfect";
    case PreservationVerdict::PartialWithZeroWeights: return "partial_with_zero_weights";
    case PreservationVerdict::NotPreserved: return "not_preserved";
  }
  return "unknown";
}

struct InverseOptions {
  KernelOptions kernel;
  double tightnessTol = 1e-7;       // absolute slack for the Perfect verdict
  double weightZeroTol = 1e-7;      // alpha below this counts as zero
  double degeneracyGapTol = 1e-3;   // near-tightness (in epsilon units) for the degeneracy flag
};

struct InverseResult {
  double epsilonStar = 0.0;
  Vector alphaRaw;            // normalized so that sum_k mu_k alphaRaw_k = 1
  WeightVector alphaStar;     // L1-normalized weights
  Vector xStar;
  DualCertificate dual;       // alpha = alphaRaw; sigma/pi for the remaining rows
  Vector scaledDeviations;    // ratios f_k(x*)/f_k(xhat), or (f_k(x*)-f_k(xhat))/mu_k
  double deviationVariance = 0.0;
  std::vector<bool> tight;         // epigraph constraint k active within tightnessTol
  std::vector<bool> degenerate;    // near-tight with zero weight
  PreservationVerdict verdict = PreservationVerdict::NotPreserved;
  SolveStatus status = SolveStatus::MaxIterations;
  ScalingScheme scheme;
  int iterations = 0;
  bool trustRegionApplied = false;  // linearized models only
  bool trustRegionBinding = false;
};

namespace detail {

inline void finishInverseResult(const ForwardProblem& p, const Vector& xhat,
                                const InverseOptions& opts, InverseResult* r) {
  const Index K = p.numObjectives();
  const Vector fHat = p.objectiveValues(xhat);
  const Vector fStar = p.objectiveValues(r->xStar);
  r->scaledDeviations.resize(K);
  r->tight.assign(static_cast<size_t>(K), false);
  r->degenerate.assign(static_cast<size_t>(K), false);
  const bool relative = r->scheme.kind == ScalingKind::Relative;
  for (Index k = 0; k < K; ++k) {
    double slack;  // epigraph slack of the exact model, in objective units
    if (relative) {
      r->scaledDeviations[k] = fStar[k] / fHat[k];
      slack = r->epsilonStar * fHat[k] - fStar[k];
    } else {
      const double mu = r->scheme.mu[k];
      const double diff = fStar[k] - fHat[k];
      r->scaledDeviations[k] = (mu > 0.0) ? diff / mu : diff;
      slack = mu * r->epsilonStar - diff;
    }
    r->tight[static_cast<size_t>(k)] = std::abs(slack) <= opts.tightnessTol;
    const bool zeroWeight = r->alphaStar.alpha.size() == K &&
                            r->alphaStar.alpha[k] <= opts.weightZeroTol;
    const double gapInEpsUnits =
        relative ? (r->epsilonStar - r->scaledDeviations[k])
                 : (r->scheme.mu[k] > 0.0 ? r->epsilonStar - r->scaledDeviations[k]
                                          : std::abs(fHat[k] - fStar[k]));
    r->degenerate[static_cast<size_t>(k)] =
        zeroWeight && std::abs(gapInEpsUnits) <= opts.degeneracyGapTol *
                                                     std::max(1.0, std::abs(r->epsilonStar));
  }
  const double mean = r->scaledDeviations.mean();
  r->deviationVariance = (r->scaledDeviations.array() - mean).square().mean();

  bool allTight = true;
  bool positiveLoose = false;
  for (Index k = 0; k < K; ++k) {
    if (!r->tight[static_cast<size_t>(k)]) {
      allTight = false;
      if (r->alphaStar.alpha[k] > opts.weightZeroTol) positiveLoose = true;
    }
  }
  if (allTight) {
    r->verdict = PreservationVerdict::Perfect;
  } else if (!positiveLoose) {
    r->verdict = PreservationVerdict::PartialWithZeroWeights;
  } else {
    r->verdict = PreservationVerdict::NotPreserved;
  }
}

}  // namespace detail

/// General / absolute: minimize eps s.t. mu_k eps >= f_k(x) - f_k(xhat);
/// relative: minimize eps s.t. eps f_k(xhat) >= f_k(x). The input point enters
/// only through f(xhat) and may be infeasible.
inline InverseResult solveIop(const ForwardProblem& p, const Vector& xhat,
                              const ScalingScheme& scheme, const InverseOptions& opts = {}) {
  const Index K = p.numObjectives();
  if (scheme.mu.size() != K) throw DimensionMismatch("solveIop: scheme size");
  const bool relative = scheme.kind == ScalingKind::Relative;
  const Vector fHat = p.objectiveValues(xhat);
  if (relative && (fHat.array() <= 1e-12).any()) {
    throw NonPositiveObjective("solveIop: relative preservation needs f_k(xhat) > 0");
  }

  EpigraphLift lift = epigraphReformulate(p);
  const Index N = lift.lifted.nVars;  // epsilon is appended as the last variable
  const Index total = N + 1;

  std::vector<ConvexFunction> rows;
  rows.reserve(static_cast<size_t>(K) + lift.lifted.inequalities.size());
  for (Index k = 0; k < K; ++k) {
    ConvexFunction fk = lift.lifted.objectives[static_cast<size_t>(k)].embedded(total, 0);
    const double epsCoeff = relative ? fHat[k] : scheme.mu[k];
    const double offset = relative ? 0.0 : fHat[k];
    if (const auto* lin = fk.asLinear()) {
      Vector c = lin->c;
      c[N] = -epsCoeff;
      rows.push_back(ConvexFunction::linear(std::move(c), lin->d - offset));
    } else {
      const auto* quad = fk.asQuadratic();
      Vector q = quad->q;
      q[N] = -epsCoeff;
      rows.push_back(ConvexFunction::quadratic(quad->Q, std::move(q), quad->d - offset));
    }
  }
  for (const auto& g : lift.lifted.inequalities) rows.push_back(g.embedded(total, 0));

  Matrix A(lift.lifted.eqA.rows(), total);
  if (A.rows() > 0) {
    A.setZero();
    A.leftCols(N) = lift.lifted.eqA;
  }
  Vector cost = Vector::Zero(total);
  cost[N] = 1.0;
  SmoothProgram program(ConvexFunction::linear(std::move(cost)), std::move(rows), std::move(A),
                        lift.lifted.eqB);

  InverseResult out;
  out.scheme = scheme;

  // Strict start: interior point of the hard rows (forward constraints plus
  // any zero-mu epigraph rows), then epsilon comfortably above the soft rows.
  {
    std::vector<ConvexFunction> hard = lift.lifted.inequalities;
    for (Index k = 0; k < K; ++k) {
      if (!relative && scheme.mu[k] == 0.0) {
        ConvexFunction fk = lift.lifted.objectives[static_cast<size_t>(k)];
        if (const auto* lin = fk.asLinear()) {
          hard.push_back(ConvexFunction::linear(lin->c, lin->d - fHat[k]));
        } else {
          const auto* quad = fk.asQuadratic();
          hard.push_back(ConvexFunction::quadratic(quad->Q, quad->q, quad->d - fHat[k]));
        }
      }
    }
    SmoothProgram hardProgram(ConvexFunction::linear(Vector::Zero(N)), std::move(hard),
                              lift.lifted.eqA, lift.lifted.eqB);
    auto interior = phaseOne(hardProgram, opts.kernel);
    if (!interior.has_value()) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    Vector y0 = Vector::Zero(total);
    y0.head(N) = *interior;
    double epsNeeded = relative ? 0.0 : -kInf;
    for (Index k = 0; k < K; ++k) {
      const double fv = lift.lifted.objectives[static_cast<size_t>(k)].value(*interior);
      if (relative) {
        epsNeeded = std::max(epsNeeded, fv / fHat[k]);
      } else if (scheme.mu[k] > 0.0) {
        epsNeeded = std::max(epsNeeded, (fv - fHat[k]) / scheme.mu[k]);
      }
    }
    y0[N] = epsNeeded + 1.0;
    KernelSolution sol = solve(program, opts.kernel, &y0);
    out.status = sol.status;
    out.iterations = sol.iterations;
    if (sol.status != SolveStatus::Optimal) {
      if (sol.x.size() == total) out.xStar = lift.projectBack(Vector(sol.x.head(N)));
      return out;
    }
    out.epsilonStar = sol.x[N];
    out.xStar = lift.projectBack(Vector(sol.x.head(N)));

    Vector alphaKernel = sol.dual.sigma.head(K);
    // rescale so that sum_k mu_k alpha_k = 1 (the ratio-form rows carry
    // f_k(xhat) = mu_k f_ref(xhat) in place of mu_k)
    out.alphaRaw = relative ? Vector(alphaKernel * fHat[scheme.referenceObjective])
                            : alphaKernel;
    out.alphaStar = WeightVector(Vector(alphaKernel.cwiseMax(0.0)));
    if (out.alphaStar.alpha.sum() > 0.0) {
      out.alphaStar = WeightVector(out.alphaStar.l1Normalized());
    }
    out.dual.alpha = out.alphaRaw;
    out.dual.sigma = sol.dual.sigma.tail(sol.dual.sigma.size() - K);
    out.dual.pi = sol.dual.pi;
    out.dual.kktResiduals = sol.dual.kktResiduals;
  }
  detail::finishInverseResult(p, xhat, opts, &out);
  return out;
}

/// Eq.-style convenience wrapper: relative trade-off preservation.
inline InverseResult solveIopRelative(const ForwardProblem& p, const Vector& xhat,
                                      const InverseOptions& opts = {}) {
  return solveIop(p, xhat, relativeScheme(p, xhat), opts);
}

/// Absolute trade-off preservation (mu = ones).
inline InverseResult solveIopAbsolute(const ForwardProblem& p, const Vector& xhat,
                                      const InverseOptions& opts = {}) {
  return solveIop(p, xhat, absoluteScheme(p.numObjectives()), opts);
}

/// Relative duality gap of a candidate weight vector with respect to a
/// feasible xhat, reported in the ratio convention alpha'f(x(alpha)) /
/// alpha'f(xhat) <= 1; its maximum over weight vectors is epsilon*_r.
inline double relativeGap(const ForwardProblem& p, const Vector& xhat,
                          const WeightVector& alpha, const KernelOptions& opts = {}) {
  if (alpha.isZero()) throw ZeroWeightVector("relativeGap: zero weight vector");
  if (!membership(p, xhat).feasible) throw InfeasibleInput("relativeGap: xhat not in X");
  ParetoSample s = solveFop(p, alpha, opts);
  return alpha.alpha.dot(s.objectiveValues) / alpha.alpha.dot(p.objectiveValues(xhat));
}

/// Absolute duality gap alpha'f(xhat) - alpha'f(x(alpha)) >= 0 for feasible
/// xhat, with alpha L1-normalized; its minimum over weights is -epsilon*_a.
inline double absoluteGap(const ForwardProblem& p, const Vector& xhat,
                          const WeightVector& alpha, const KernelOptions& opts = {}) {
  if (alpha.isZero()) throw ZeroWeightVector("absoluteGap: zero weight vector");
  if (!membership(p, xhat).feasible) throw InfeasibleInput("absoluteGap: xhat not in X");
  WeightVector unit(alpha.l1Normalized());
  ParetoSample s = solveFop(p, unit, opts);
  return unit.alpha.dot(p.objectiveValues(xhat)) - unit.alpha.dot(s.objectiveValues);
}

/// Max-abs residual of the exact inverse model's KKT system at a candidate
/// point with candidate multipliers (normalization, stationarity, both
/// complementarity families, primal feasibility).
inline double iopKktResidual(const ForwardProblem& p, const Vector& xhat,
                             const ScalingScheme& scheme, double epsilon, const Vector& x,
                             const Vector& alphaRaw, const Vector& sigma, const Vector& pi) {
  const Index K = p.numObjectives();
  const bool relative = scheme.kind == ScalingKind::Relative;
  const Vector fHat = p.objectiveValues(xhat);
  const Vector fX = p.objectiveValues(x);
  // work in the solved form's multipliers: ratio rows carry f_k(xhat)
  Vector alphaRow = relative ? Vector(alphaRaw / fHat[scheme.referenceObjective]) : alphaRaw;

  double residual = 0.0;
  double norm = 1.0;
  for (Index k = 0; k < K; ++k) {
    norm -= alphaRow[k] * (relative ? fHat[k] : scheme.mu[k]);
  }
  residual = std::max(residual, std::abs(norm));

  Vector stat = Vector::Zero(p.nVars);
  for (Index k = 0; k < K; ++k) {
    stat.noalias() += alphaRow[k] * p.objectives[static_cast<size_t>(k)].gradient(x);
  }
  for (Index l = 0; l < p.numInequalities(); ++l) {
    stat.noalias() += sigma[l] * p.inequalities[static_cast<size_t>(l)].gradient(x);
  }
  if (p.eqA.rows() > 0) stat.noalias() -= p.eqA.transpose() * pi;
  residual = std::max(residual, stat.cwiseAbs().maxCoeff());

  for (Index k = 0; k < K; ++k) {
    const double rowValue = relative ? (fX[k] - epsilon * fHat[k])
                                     : (fX[k] - fHat[k] - scheme.mu[k] * epsilon);
    residual = std::max(residual, std::abs(alphaRow[k] * rowValue));
    residual = std::max(residual, std::max(0.0, rowValue));  // primal feasibility of row k
  }
  for (Index l = 0; l < p.numInequalities(); ++l) {
    const double gv = p.inequalities[static_cast<size_t>(l)].value(x);
    residual = std::max(residual, std::abs(sigma[l] * gv));
    residual = std::max(residual, std::max(0.0, gv));
  }
  if (p.eqA.rows() > 0) {
    residual = std::max(residual, (p.eqA * x - p.eqB).cwiseAbs().maxCoeff());
  }
  return residual;
}

}  // namespace invopt
