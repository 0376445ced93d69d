// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// First-order outer approximation of the exact inverse model (an LP), and the
// trust-region successive linear programming loop that drives it toward the
// exact solution.

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "invopt/inverse.hpp"
#include "invopt/linprog.hpp"

namespace invopt {

struct LiopInstance {
  ForwardProblem base;
  Vector xhat;
  Vector xtilde;  // linearization point
  ScalingScheme scheme;
  std::optional<double> trustKappa;  // box half-width around xhat

  LiopInstance(ForwardProblem p, Vector xh, Vector xt, ScalingScheme s,
               std::optional<double> kappa = std::nullopt)
      : base(std::move(p)),
        xhat(std::move(xh)),
        xtilde(std::move(xt)),
        scheme(std::move(s)),
        trustKappa(kappa) {
    if (xhat.size() != base.nVars || xtilde.size() != base.nVars) {
      throw DimensionMismatch("LiopInstance: point dimensions");
    }
    if (trustKappa.has_value() && *trustKappa <= 0.0) {
      throw InvalidProblem("LiopInstance: trust kappa must be positive");
    }
  }
};

inline double defaultTrustKappa(const Vector& xhat) {
  return std::max(1.0, xhat.cwiseAbs().maxCoeff());
}

namespace detail {

struct LiopLp {
  LinearProgram lp;
  Index n = 0;
};

inline LiopLp buildLiopLp(const ForwardProblem& p, const Vector& xhat, const Vector& xtilde,
                          const ScalingScheme& scheme, const std::optional<double>& kappa,
                          const Vector& boxCenter) {
  const Index n = p.nVars;
  const Index K = p.numObjectives();
  const Index L = p.numInequalities();
  const bool relative = scheme.kind == ScalingKind::Relative;
  const Vector fHat = p.objectiveValues(xhat);

  LiopLp out;
  out.n = n;
  LinearProgram& lp = out.lp;
  lp.cost = Vector::Zero(n + 1);
  lp.cost[n] = 1.0;
  lp.ineqG = Matrix::Zero(K + L, n + 1);
  lp.ineqH = Vector::Zero(K + L);
  for (Index k = 0; k < K; ++k) {
    const auto& f = p.objectives[static_cast<size_t>(k)];
    Vector grad = f.gradient(xtilde);
    const double ft = f.value(xtilde);
    lp.ineqG.row(k).head(n) = grad.transpose();
    lp.ineqG(k, n) = relative ? -fHat[k] : -scheme.mu[k];
    lp.ineqH[k] = grad.dot(xtilde) - ft + (relative ? 0.0 : fHat[k]);
  }
  for (Index l = 0; l < L; ++l) {
    const auto& g = p.inequalities[static_cast<size_t>(l)];
    Vector grad = g.gradient(xtilde);
    lp.ineqG.row(K + l).head(n) = grad.transpose();
    lp.ineqH[K + l] = grad.dot(xtilde) - g.value(xtilde);
  }
  if (p.eqA.rows() > 0) {
    lp.eqA = Matrix::Zero(p.eqA.rows(), n + 1);
    lp.eqA.leftCols(n) = p.eqA;
    lp.eqB = p.eqB;
  }
  lp.lower = Vector::Constant(n + 1, -kInf);
  lp.upper = Vector::Constant(n + 1, kInf);
  if (kappa.has_value()) {
    lp.lower.head(n) = boxCenter.array() - *kappa;
    lp.upper.head(n) = boxCenter.array() + *kappa;
  }
  return out;
}

inline InverseResult liopResultFromLp(const ForwardProblem& p, const Vector& xhat,
                                      const ScalingScheme& scheme, const LpSolution& sol,
                                      const std::optional<double>& kappa,
                                      const Vector& boxCenter, const InverseOptions& opts) {
  const Index n = p.nVars;
  const Index K = p.numObjectives();
  InverseResult out;
  out.scheme = scheme;
  out.status = sol.status;
  out.trustRegionApplied = kappa.has_value();
  if (sol.status != SolveStatus::Optimal) return out;

  out.epsilonStar = sol.x[n];
  out.xStar = sol.x.head(n);
  Vector alphaRows = sol.dualIneq.head(K);
  const bool relative = scheme.kind == ScalingKind::Relative;
  out.alphaRaw = relative
                     ? Vector(alphaRows * p.objectives[static_cast<size_t>(
                                              scheme.referenceObjective)].value(xhat))
                     : alphaRows;
  Vector clamped = alphaRows.cwiseMax(0.0);
  out.alphaStar = WeightVector(clamped);
  if (clamped.sum() > 0.0) out.alphaStar = WeightVector(out.alphaStar.l1Normalized());
  out.dual.alpha = out.alphaRaw;
  out.dual.sigma = sol.dualIneq.tail(sol.dualIneq.size() - K);
  out.dual.pi = sol.dualEq;
  if (kappa.has_value()) {
    const double edge = *kappa - 1e-9;
    out.trustRegionBinding =
        ((out.xStar - boxCenter).cwiseAbs().array() >= edge).any();
  }
  detail::finishInverseResult(p, xhat, opts, &out);
  return out;
}

}  // namespace detail

/// Solve LIOP(xhat, xtilde). An unbounded LP triggers automatic insertion of
/// the default trust region around xhat.
inline InverseResult solveLiop(const LiopInstance& inst, const InverseOptions& opts = {}) {
  auto built = detail::buildLiopLp(inst.base, inst.xhat, inst.xtilde, inst.scheme,
                                   inst.trustKappa, inst.xhat);
  LpSolution sol = solveLp(built.lp);
  if (sol.status == SolveStatus::Unbounded && !inst.trustKappa.has_value()) {
    const double kappa = defaultTrustKappa(inst.xhat);
    auto boxed = detail::buildLiopLp(inst.base, inst.xhat, inst.xtilde, inst.scheme, kappa,
                                     inst.xhat);
    LpSolution boxedSol = solveLp(boxed.lp);
    return detail::liopResultFromLp(inst.base, inst.xhat, inst.scheme, boxedSol, kappa,
                                    inst.xhat, opts);
  }
  return detail::liopResultFromLp(inst.base, inst.xhat, inst.scheme, sol, inst.trustKappa,
                                  inst.xhat, opts);
}

struct SlpOptions {
  double initialDelta = -1.0;  // <= 0: 0.1 * max(1, ||xhat||_inf)
  double shrink = 0.5;
  double expand = 2.0;
  double acceptThreshold = 0.25;  // eta1
  double expandThreshold = 0.75;  // eta2
  double penaltyRho = 1e3;        // l1 feasibility penalty in the merit
  double stepTol = 1e-3;          // l2 norm between consecutive iterates
  int maxIterations = 100;
  InverseOptions inverse;
};

enum class SlpTermination { StepNorm, MaxIterations, LpFailure };

inline const char* toString(SlpTermination t) {
  switch (t) {
    case SlpTermination::StepNorm: return "step_norm";
    case SlpTermination::MaxIterations: return "max_iterations";
    case SlpTermination::LpFailure: return "lp_failure";
  }
  return "unknown";
}

struct SlpIterate {
  Vector x;
  double epsilon = 0.0;  // LP optimal value at this step
  double delta = 0.0;
  bool stepAccepted = false;
  double merit = 0.0;
};

struct SlpTrace {
  std::vector<SlpIterate> iterates;
  SlpTermination terminationReason = SlpTermination::MaxIterations;
  InverseResult finalResult;
};

/// l1-penalty merit: max_k (f_k(x) - f_k(xhat)) / mu_k plus rho times
/// constraint violation. For the relative scheme the deviation term equals
/// f_ref(xhat) (max_k f_k(x)/f_k(xhat) - 1).
inline double slpMerit(const ForwardProblem& p, const Vector& xhat, const ScalingScheme& scheme,
                       double rho, const Vector& x) {
  const Vector fHat = p.objectiveValues(xhat);
  const Vector fX = p.objectiveValues(x);
  double dev = -kInf;
  double hardViolation = 0.0;
  for (Index k = 0; k < p.numObjectives(); ++k) {
    if (scheme.mu[k] > 0.0) {
      dev = std::max(dev, (fX[k] - fHat[k]) / scheme.mu[k]);
    } else {
      hardViolation += std::max(0.0, fX[k] - fHat[k]);
    }
  }
  if (dev == -kInf) dev = 0.0;  // every row hard
  double violation = hardViolation;
  for (const auto& g : p.inequalities) violation += std::max(0.0, g.value(x));
  if (p.eqA.rows() > 0) violation += (p.eqA * x - p.eqB).cwiseAbs().sum();
  return dev + rho * violation;
}

namespace detail {

// LP epsilon in the merit's deviation units. Relative rows carry f_k(xhat) in
// place of mu_k = f_k(xhat)/f_ref(xhat), so epsilon maps to f_ref (eps - 1).
inline double modelDeviation(const ForwardProblem& p, const Vector& xhat,
                             const ScalingScheme& scheme, double epsilonLp) {
  if (scheme.kind != ScalingKind::Relative) return epsilonLp;
  return p.objectives[static_cast<size_t>(scheme.referenceObjective)].value(xhat) *
         (epsilonLp - 1.0);
}

// Second-order correction: minimum-norm restoration step onto the violated
// constraints, removing the O(delta^2) infeasibility the linearized step
// leaves on curved boundaries.
inline Vector feasibilityRestore(const ForwardProblem& p, Vector x) {
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<Index> violated;
    for (Index l = 0; l < p.numInequalities(); ++l) {
      if (p.inequalities[static_cast<size_t>(l)].value(x) > 1e-12) violated.push_back(l);
    }
    const Index m = p.eqA.rows();
    double eqViol = m > 0 ? (p.eqA * x - p.eqB).cwiseAbs().maxCoeff() : 0.0;
    if (violated.empty() && eqViol <= 1e-12) break;
    Matrix J(static_cast<Index>(violated.size()) + m, p.nVars);
    Vector r(J.rows());
    for (size_t i = 0; i < violated.size(); ++i) {
      const auto& g = p.inequalities[static_cast<size_t>(violated[i])];
      J.row(static_cast<Index>(i)) = g.gradient(x).transpose();
      r[static_cast<Index>(i)] = g.value(x);
    }
    if (m > 0) {
      J.bottomRows(m) = p.eqA;
      r.tail(m) = p.eqA * x - p.eqB;
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(J);
    Vector d = cod.solve(-r);
    if (!d.allFinite() || d.norm() > 1.0) break;  // restoration blew up; keep the raw step
    x += d;
  }
  return x;
}

}  // namespace detail

inline SlpTrace runSlp(const ForwardProblem& p, const Vector& xhat, const ScalingScheme& scheme,
                       const SlpOptions& opts = {}) {
  SlpTrace trace;
  const double rho = opts.penaltyRho;
  double delta = opts.initialDelta > 0.0 ? opts.initialDelta
                                         : 0.1 * std::max(1.0, xhat.cwiseAbs().maxCoeff());

  bool allLinear = true;
  for (const auto& f : p.objectives) allLinear = allLinear && f.kind() == FunctionKind::Linear;
  for (const auto& g : p.inequalities) allLinear = allLinear && g.kind() == FunctionKind::Linear;
  if (allLinear) {
    // the model is its own linearization: one LIOP solve is exact
    InverseResult r = solveLiop(LiopInstance(p, xhat, xhat, scheme), opts.inverse);
    trace.finalResult = r;
    trace.terminationReason =
        r.status == SolveStatus::Optimal ? SlpTermination::StepNorm : SlpTermination::LpFailure;
    if (r.status == SolveStatus::Optimal) {
      trace.iterates.push_back({r.xStar, r.epsilonStar, delta, true,
                                slpMerit(p, xhat, scheme, rho, r.xStar)});
    }
    return trace;
  }

  Vector x = xhat;  // the input solution seeds the iteration
  double merit = slpMerit(p, xhat, scheme, rho, x);
  InverseResult lastAccepted;
  bool haveResult = false;

  for (int it = 0; it < opts.maxIterations; ++it) {
    auto built = detail::buildLiopLp(p, xhat, x, scheme, delta, x);
    LpSolution sol = solveLp(built.lp);
    if (sol.status != SolveStatus::Optimal) {
      trace.terminationReason = SlpTermination::LpFailure;
      if (haveResult) trace.finalResult = lastAccepted;
      return trace;
    }
    InverseResult candidate =
        detail::liopResultFromLp(p, xhat, scheme, sol, delta, x, opts.inverse);
    // second-order correction pulls the trial point back onto curved
    // boundaries before the merit is judged
    Vector xNew = detail::feasibilityRestore(p, candidate.xStar);
    const double meritNew = slpMerit(p, xhat, scheme, rho, xNew);
    const double stepNorm = (xNew - x).norm();

    if (stepNorm < opts.stepTol && !candidate.trustRegionBinding) {
      // genuine model fixed point: record and stop
      const bool improved = meritNew <= merit + 1e-12;
      trace.iterates.push_back({xNew, candidate.epsilonStar, delta, improved, meritNew});
      if (improved) {
        x = xNew;
        lastAccepted = candidate;
        haveResult = true;
      }
      if (haveResult) {
        trace.finalResult = lastAccepted;
        trace.finalResult.xStar = x;
      } else {
        trace.finalResult = candidate;
      }
      trace.terminationReason = SlpTermination::StepNorm;
      return trace;
    }

    // model merit of the trial step (its linearized constraints hold exactly,
    // so the model merit is the LP value in deviation units); the model merit
    // at the current iterate equals the true merit
    const double modelDev = detail::modelDeviation(p, xhat, scheme, candidate.epsilonStar);
    const double predicted = merit - modelDev;
    const double actual = merit - meritNew;
    const double ratio = predicted > 1e-15 ? actual / predicted : 0.0;
    const bool accept = actual > 1e-12;

    trace.iterates.push_back({xNew, candidate.epsilonStar, delta, accept, meritNew});
    if (accept) {
      const double acceptedStep = stepNorm;
      x = xNew;
      merit = meritNew;
      lastAccepted = candidate;
      lastAccepted.xStar = x;
      haveResult = true;
      if (ratio > opts.expandThreshold) delta *= opts.expand;
      else if (ratio < opts.acceptThreshold) delta *= opts.shrink;
      if (acceptedStep < opts.stepTol) {
        trace.terminationReason = SlpTermination::StepNorm;
        trace.finalResult = lastAccepted;
        return trace;
      }
    } else {
      delta *= opts.shrink;
      if (delta < 1e-10) {
        trace.terminationReason = SlpTermination::StepNorm;
        if (haveResult) {
          trace.finalResult = lastAccepted;
          trace.finalResult.xStar = x;
        }
        return trace;
      }
    }
  }
  trace.terminationReason = SlpTermination::MaxIterations;
  if (haveResult) {
    trace.finalResult = lastAccepted;
    trace.finalResult.xStar = x;
  }
  return trace;
}

}  // namespace invopt
