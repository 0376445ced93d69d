// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// KKT-residual inverse family: relax the input point's KKT conditions, allow
// residuals (delta: stationarity, gamma: inequality complementarity, rho:
// equality complementarity) and minimize a penalty over them under a weight
// normalization. Includes the exact bridges to the linearized inverse model's
// dual.

#pragma once

#include <optional>
#include <vector>

#include "invopt/linear_inverse.hpp"

namespace invopt {

enum class KesPenalty { SumOfSquares, L1, GapLinear };

inline const char* toString(KesPenalty p) {
  switch (p) {
    case KesPenalty::SumOfSquares: return "sos";
    case KesPenalty::L1: return "l1";
    case KesPenalty::GapLinear: return "gaplinear";
  }
  return "unknown";
}

struct KesNormalization {
  enum class Kind { FixWeight, MuWeighted, L1Unit };
  Kind kind = Kind::FixWeight;
  Index fixIndex = 0;
  std::optional<ScalingScheme> scheme;

  static KesNormalization fixWeight(Index k) { return {Kind::FixWeight, k, std::nullopt}; }
  static KesNormalization muWeighted(ScalingScheme s) {
    return {Kind::MuWeighted, 0, std::move(s)};
  }
  static KesNormalization l1Unit() { return {Kind::L1Unit, 0, std::nullopt}; }
};

struct KesConfig {
  KesPenalty penalty = KesPenalty::SumOfSquares;
  KesNormalization normalization = KesNormalization::fixWeight(0);
  bool includeEqResiduals = true;  // track rho = pi_j (a_j'xhat - b_j)
  // With a feasible xhat, replaces the GapLinear objective by |gamma|_1 +
  // |rho|_1 (the two coincide there).
  bool feasibleL1Form = false;
  // Weight the stationarity residual by the instance's gradient scale in the
  // SumOfSquares / L1 penalties, making the penalty balance invariant to a
  // common rescaling of the problem data.
  bool scaleStationarity = true;
  KernelOptions kernel;
};

struct KesResiduals {
  Vector delta;   // stationarity residual (n)
  Vector gamma;   // sigma_l g_l(xhat) (L)
  Vector rho;     // pi_j (a_j'xhat - b_j) (m, empty when not tracked)
  double penaltyValue = 0.0;
};

struct KesOutcome {
  WeightVector weights;  // L1-normalized
  Vector alphaRaw;
  KesResiduals residuals;
  DualCertificate certificate;  // the imputed forward multipliers (alpha, sigma, pi)
  SolveStatus status = SolveStatus::MaxIterations;
};

namespace detail {

struct KesSystem {
  Matrix S;      // n x (K+L+m): [grad f | grad g | -A']
  Vector gHat;   // g_l(xhat)
  Vector eqRes;  // A xhat - b
  double gradScale = 1.0;
  Index K = 0, L = 0, m = 0, n = 0;

  Vector normalizationRow(const KesNormalization& norm) const {
    Vector row = Vector::Zero(K + L + m);
    switch (norm.kind) {
      case KesNormalization::Kind::FixWeight:
        if (norm.fixIndex < 0 || norm.fixIndex >= K) {
          throw InvalidProblem("KES: fixed weight index out of range");
        }
        row[norm.fixIndex] = 1.0;
        break;
      case KesNormalization::Kind::MuWeighted:
        if (!norm.scheme.has_value() || norm.scheme->mu.size() != K) {
          throw InvalidProblem("KES: MuWeighted normalization needs a scheme of size K");
        }
        row.head(K) = norm.scheme->mu;
        break;
      case KesNormalization::Kind::L1Unit:
        row.head(K).setOnes();
        break;
    }
    return row;
  }
};

inline KesSystem buildKesSystem(const ForwardProblem& p, const Vector& xhat) {
  KesSystem sys;
  sys.K = p.numObjectives();
  sys.L = p.numInequalities();
  sys.m = p.eqA.rows();
  sys.n = p.nVars;
  sys.S.resize(sys.n, sys.K + sys.L + sys.m);
  for (Index k = 0; k < sys.K; ++k) {
    sys.S.col(k) = p.objectives[static_cast<size_t>(k)].gradient(xhat);
  }
  sys.gHat.resize(sys.L);
  for (Index l = 0; l < sys.L; ++l) {
    sys.S.col(sys.K + l) = p.inequalities[static_cast<size_t>(l)].gradient(xhat);
    sys.gHat[l] = p.inequalities[static_cast<size_t>(l)].value(xhat);
  }
  if (sys.m > 0) {
    sys.S.rightCols(sys.m) = -p.eqA.transpose();
    sys.eqRes = p.eqA * xhat - p.eqB;
  } else {
    sys.eqRes = Vector(0);
  }
  sys.gradScale = std::max(1.0, sys.S.size() > 0 ? sys.S.cwiseAbs().maxCoeff() : 1.0);
  return sys;
}

}  // namespace detail

inline KesOutcome solveKes(const ForwardProblem& p, const Vector& xhat, const KesConfig& cfg) {
  detail::KesSystem sys = detail::buildKesSystem(p, xhat);
  const Index K = sys.K, L = sys.L, m = sys.m, n = sys.n;
  const Index vars = K + L + m;
  const bool trackRho = cfg.includeEqResiduals && m > 0;
  Vector normRow = sys.normalizationRow(cfg.normalization);
  const double s = cfg.scaleStationarity ? sys.gradScale : 1.0;

  KesOutcome out;
  Vector u;  // (alpha, sigma, pi)

  if (cfg.penalty == KesPenalty::SumOfSquares) {
    // phi = ||delta/s||^2 + ||gamma||^2 + ||rho||^2, a convex QP in u
    Matrix Q = (2.0 / (s * s)) * (sys.S.transpose() * sys.S);
    for (Index l = 0; l < L; ++l) Q(K + l, K + l) += 2.0 * sys.gHat[l] * sys.gHat[l];
    if (trackRho) {
      for (Index j = 0; j < m; ++j) {
        Q(K + L + j, K + L + j) += 2.0 * sys.eqRes[j] * sys.eqRes[j];
      }
    }
    std::vector<ConvexFunction> rows;
    for (Index i = 0; i < K + L; ++i) {
      Vector c = Vector::Zero(vars);
      c[i] = -1.0;
      rows.push_back(ConvexFunction::linear(std::move(c), 0.0));
    }
    Matrix A(1, vars);
    A.row(0) = normRow.transpose();
    SmoothProgram qp(ConvexFunction::quadratic(std::move(Q), Vector::Zero(vars)),
                     std::move(rows), std::move(A), Vector::Ones(1));
    // strict start: positive alpha satisfying the normalization, sigma = 1
    const double normSum = normRow.head(K).sum();
    if (normSum <= 0.0) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    Vector u0 = Vector::Zero(vars);
    u0.head(K).setConstant(1.0 / normSum);
    u0.segment(K, L).setOnes();
    KernelSolution sol = solve(qp, cfg.kernel, &u0);
    out.status = sol.status;
    if (sol.status != SolveStatus::Optimal) return out;
    u = sol.x;
  } else {
    // LP forms. GapLinear: delta = 0 enforced, objective -gamma'e + rho'e.
    // L1: split delta and rho into positive parts; |gamma_l| = |g_l| sigma_l.
    const bool gapLinear = cfg.penalty == KesPenalty::GapLinear;
    const Index deltaSplit = gapLinear ? 0 : 2 * n;
    const Index rhoSplit = trackRho ? 2 * m : 0;
    const Index total = vars + deltaSplit + rhoSplit;

    LinearProgram lp;
    lp.cost = Vector::Zero(total);
    lp.lower = Vector::Constant(total, 0.0);
    lp.upper = Vector::Constant(total, kInf);
    lp.lower.segment(K + L, m).setConstant(-kInf);  // pi free

    const Index nEq = 1 + n + (rhoSplit > 0 ? m : 0);
    lp.eqA = Matrix::Zero(nEq, total);
    lp.eqB = Vector::Zero(nEq);
    Index row = 0;
    lp.eqA.row(row).head(vars) = normRow.transpose();
    lp.eqB[row] = 1.0;
    ++row;
    // stationarity rows: S u = delta (0 when gapLinear, split otherwise)
    for (Index i = 0; i < n; ++i) {
      lp.eqA.row(row).head(vars) = sys.S.row(i);
      if (!gapLinear) {
        lp.eqA(row, vars + 2 * i) = -1.0;      // delta_i^+
        lp.eqA(row, vars + 2 * i + 1) = 1.0;   // delta_i^-
      }
      lp.eqB[row] = 0.0;
      ++row;
    }
    if (rhoSplit > 0) {
      for (Index j = 0; j < m; ++j) {
        lp.eqA(row, K + L + j) = sys.eqRes[j];
        lp.eqA(row, vars + deltaSplit + 2 * j) = -1.0;
        lp.eqA(row, vars + deltaSplit + 2 * j + 1) = 1.0;
        ++row;
      }
    }
    if (gapLinear && !cfg.feasibleL1Form) {
      // -gamma'e + rho'e
      for (Index l = 0; l < L; ++l) lp.cost[K + l] = -sys.gHat[l];
      if (trackRho) {
        for (Index j = 0; j < m; ++j) {
          lp.cost[vars + 2 * j] = 1.0;
          lp.cost[vars + 2 * j + 1] = -1.0;
        }
      }
    } else {
      // |delta|_1 / s (L1 only) + |gamma|_1 + |rho|_1
      if (!gapLinear) {
        for (Index i = 0; i < 2 * n; ++i) lp.cost[vars + i] = 1.0 / s;
      }
      for (Index l = 0; l < L; ++l) lp.cost[K + l] = std::abs(sys.gHat[l]);
      if (trackRho) {
        for (Index j = 0; j < 2 * m; ++j) lp.cost[vars + deltaSplit + j] = 1.0;
      }
    }
    LpSolution sol = solveLp(lp);
    out.status = sol.status;
    if (sol.status != SolveStatus::Optimal) return out;
    u = sol.x.head(vars);
  }

  Vector alpha = u.head(K).cwiseMax(0.0);
  Vector sigma = u.segment(K, L).cwiseMax(0.0);
  Vector pi = u.tail(m);
  out.alphaRaw = alpha;
  out.weights = WeightVector(alpha);
  if (alpha.sum() > 0.0) out.weights = WeightVector(out.weights.l1Normalized());

  out.residuals.delta = sys.S * u;
  out.residuals.gamma = sys.gHat.array() * sigma.array();
  out.residuals.rho = trackRho ? Vector(sys.eqRes.array() * pi.array()) : Vector(0);
  switch (cfg.penalty) {
    case KesPenalty::SumOfSquares:
      out.residuals.penaltyValue = out.residuals.delta.squaredNorm() / (s * s) +
                                   out.residuals.gamma.squaredNorm() +
                                   out.residuals.rho.squaredNorm();
      break;
    case KesPenalty::L1:
      out.residuals.penaltyValue = out.residuals.delta.lpNorm<1>() / s +
                                   out.residuals.gamma.lpNorm<1>() +
                                   out.residuals.rho.lpNorm<1>();
      break;
    case KesPenalty::GapLinear:
      out.residuals.penaltyValue = cfg.feasibleL1Form
                                       ? out.residuals.gamma.lpNorm<1>() +
                                             out.residuals.rho.lpNorm<1>()
                                       : -out.residuals.gamma.sum() + out.residuals.rho.sum();
      break;
  }
  out.certificate.alpha = alpha;
  out.certificate.sigma = sigma;
  out.certificate.pi = pi;
  out.certificate.kktResiduals.stationarity =
      out.residuals.delta.size() > 0 ? out.residuals.delta.cwiseAbs().maxCoeff() : 0.0;
  double comp = out.residuals.gamma.size() > 0 ? out.residuals.gamma.cwiseAbs().maxCoeff() : 0.0;
  if (out.residuals.rho.size() > 0) {
    comp = std::max(comp, out.residuals.rho.cwiseAbs().maxCoeff());
  }
  out.certificate.kktResiduals.complementarity = comp;
  double feas = 0.0;
  for (const auto& g : p.inequalities) feas = std::max(feas, g.value(xhat));
  if (m > 0) feas = std::max(feas, sys.eqRes.cwiseAbs().maxCoeff());
  out.certificate.kktResiduals.feasibility = std::max(0.0, feas);
  return out;
}

struct BridgeReport {
  WeightVector kesWeights;
  WeightVector liopWeights;
  double distance = kInf;  // L-infinity between the L1-normalized weights
  SolveStatus kesStatus = SolveStatus::MaxIterations;
  SolveStatus liopStatus = SolveStatus::MaxIterations;
};

/// KES with the gap-linear penalty and mu-weighted normalization solves the
/// dual of LIOP(xhat); their weight vectors must coincide.
inline BridgeReport kesLiopBridge(const ForwardProblem& p, const Vector& xhat,
                                  const ScalingScheme& scheme, const KesConfig& base = {}) {
  KesConfig cfg = base;
  cfg.penalty = KesPenalty::GapLinear;
  cfg.normalization = KesNormalization::muWeighted(scheme);
  KesOutcome kes = solveKes(p, xhat, cfg);

  InverseResult liop = solveLiop(LiopInstance(p, xhat, xhat, scheme));

  BridgeReport out;
  out.kesStatus = kes.status;
  out.liopStatus = liop.status;
  if (kes.status != SolveStatus::Optimal || liop.status != SolveStatus::Optimal) return out;
  out.kesWeights = WeightVector(kes.weights.l1Normalized());
  out.liopWeights = WeightVector(liop.alphaStar.l1Normalized());
  out.distance = (out.kesWeights.alpha - out.liopWeights.alpha).cwiseAbs().maxCoeff();
  return out;
}

/// The degenerate scaling mu = e_kFix turns the linearized inverse model into
/// KES with the weight of objective kFix fixed to one.
inline BridgeReport kesAsDegenerateIop(const ForwardProblem& p, const Vector& xhat, Index kFix,
                                       const KesConfig& base = {}) {
  const Index K = p.numObjectives();
  Vector mu = Vector::Zero(K);
  mu[kFix] = 1.0;
  ScalingScheme scheme = generalScheme(std::move(mu), kFix);

  KesConfig cfg = base;
  cfg.penalty = KesPenalty::GapLinear;
  cfg.normalization = KesNormalization::fixWeight(kFix);
  KesOutcome kes = solveKes(p, xhat, cfg);

  InverseResult liop = solveLiop(LiopInstance(p, xhat, xhat, scheme));

  BridgeReport out;
  out.kesStatus = kes.status;
  out.liopStatus = liop.status;
  if (kes.status != SolveStatus::Optimal || liop.status != SolveStatus::Optimal) return out;
  out.kesWeights = WeightVector(kes.weights.l1Normalized());
  out.liopWeights = WeightVector(liop.alphaStar.l1Normalized());
  out.distance = (out.kesWeights.alpha - out.liopWeights.alpha).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace invopt
