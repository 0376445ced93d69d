// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// Dense two-phase primal simplex with Bland's rule and exact dual extraction.
// Deliberately simple: desk-scale problems, deterministic pivoting, duals read
// from the final basis.

#pragma once

#include <algorithm>
#include <vector>

#include "invopt/types.hpp"

namespace invopt {

/// minimize cost'x  subject to  ineqG x <= ineqH,  eqA x = eqB,
/// lower <= x <= upper (+-inf allowed; empty bound vectors mean free).
struct LinearProgram {
  Vector cost;
  Matrix ineqG;
  Vector ineqH;
  Matrix eqA;
  Vector eqB;
  Vector lower;
  Vector upper;

  Index numVars() const { return cost.size(); }
};

struct LpSolution {
  Vector x;
  Vector dualIneq;  // >= 0; convention: cost + ineqG'dualIneq + eqA'dualEq (+ bound duals) = 0
  Vector dualEq;
  SolveStatus status = SolveStatus::MaxIterations;
  double objective = 0.0;
};

namespace detail {

struct SimplexTableau {
  Matrix body;               // m x (numCols + 1), last column = rhs
  Vector costRow;            // reduced costs, size numCols
  std::vector<Index> basis;  // basic variable per row
  std::vector<bool> rowActive;
  Index numCols = 0;

  void pivot(Index r, Index c) {
    body.row(r) /= body(r, c);
    for (Index i = 0; i < body.rows(); ++i) {
      if (i == r || !rowActive[static_cast<size_t>(i)]) continue;
      const double factor = body(i, c);
      if (factor != 0.0) body.row(i) -= factor * body.row(r);
    }
    const double cf = costRow[c];
    if (cf != 0.0) {
      costRow -= cf * body.row(r).head(numCols).transpose();
    }
    basis[static_cast<size_t>(r)] = c;
  }
};

// Bland's rule: entering = lowest eligible index, leaving = ratio test with
// ties broken by lowest basic-variable index. Returns false on optimality,
// throws never; sets *unbounded when no leaving row exists.
inline bool blandStep(SimplexTableau& t, const std::vector<bool>& canEnter,
                      bool* unbounded) {
  constexpr double kReducedCostTol = 1e-9;
  constexpr double kPivotTol = 1e-9;
  *unbounded = false;
  Index entering = -1;
  for (Index j = 0; j < t.numCols; ++j) {
    if (canEnter[static_cast<size_t>(j)] && t.costRow[j] < -kReducedCostTol) {
      entering = j;
      break;
    }
  }
  if (entering < 0) return false;

  Index leaving = -1;
  double bestRatio = 0.0;
  for (Index i = 0; i < t.body.rows(); ++i) {
    if (!t.rowActive[static_cast<size_t>(i)]) continue;
    const double a = t.body(i, entering);
    if (a <= kPivotTol) continue;
    const double ratio = t.body(i, t.numCols) / a;
    if (leaving < 0 || ratio < bestRatio - 1e-12 ||
        (ratio < bestRatio + 1e-12 &&
         t.basis[static_cast<size_t>(i)] < t.basis[static_cast<size_t>(leaving)])) {
      leaving = i;
      bestRatio = ratio;
    }
  }
  if (leaving < 0) {
    *unbounded = true;
    return false;
  }
  t.pivot(leaving, entering);
  return true;
}

}  // namespace detail

inline LpSolution solveLp(const LinearProgram& lp) {
  const Index n = lp.numVars();
  if (lp.ineqG.size() > 0 && lp.ineqG.cols() != n) {
    throw DimensionMismatch("solveLp: ineqG column count");
  }
  if (lp.eqA.size() > 0 && lp.eqA.cols() != n) {
    throw DimensionMismatch("solveLp: eqA column count");
  }
  const Index mG = lp.ineqG.rows();
  const Index mE = lp.eqA.rows();
  if (lp.ineqH.size() != mG || lp.eqB.size() != mE) {
    throw DimensionMismatch("solveLp: right-hand side sizes");
  }
  const bool hasBounds = lp.lower.size() > 0 || lp.upper.size() > 0;
  if (hasBounds && (lp.lower.size() != n || lp.upper.size() != n)) {
    throw DimensionMismatch("solveLp: bound vector sizes");
  }
  if (hasBounds && (lp.lower.array() > lp.upper.array()).any()) {
    throw InvalidProblem("solveLp: lower bound exceeds upper bound");
  }

  // Fold finite bounds into extra <= rows so dual bookkeeping is uniform.
  std::vector<std::pair<Index, double>> boundRows;  // (+-(j+1), rhs)
  if (hasBounds) {
    for (Index j = 0; j < n; ++j) {
      if (std::isfinite(lp.upper[j])) boundRows.push_back({j + 1, lp.upper[j]});
      if (std::isfinite(lp.lower[j])) boundRows.push_back({-(j + 1), -lp.lower[j]});
    }
  }
  const Index mB = static_cast<Index>(boundRows.size());
  const Index mIneq = mG + mB;
  const Index m = mIneq + mE;

  // Row system over split variables (p, q, slacks): rows scaled to unit
  // inf-norm, negated where needed so every rhs is nonnegative.
  Matrix G(m, n);
  Vector h(m);
  for (Index i = 0; i < mG; ++i) {
    G.row(i) = lp.ineqG.row(i);
    h[i] = lp.ineqH[i];
  }
  for (Index i = 0; i < mB; ++i) {
    const auto& [signedVar, rhs] = boundRows[static_cast<size_t>(i)];
    G.row(mG + i).setZero();
    G(mG + i, std::abs(signedVar) - 1) = signedVar > 0 ? 1.0 : -1.0;
    h[mG + i] = rhs;
  }
  for (Index i = 0; i < mE; ++i) {
    G.row(mIneq + i) = lp.eqA.row(i);
    h[mIneq + i] = lp.eqB[i];
  }
  Vector rowScale(m);
  Vector rowFlip(m);
  for (Index i = 0; i < m; ++i) {
    double s = std::max(G.row(i).cwiseAbs().maxCoeff(), std::abs(h[i]));
    rowScale[i] = (s > 0.0) ? s : 1.0;
    G.row(i) /= rowScale[i];
    h[i] /= rowScale[i];
    rowFlip[i] = (h[i] < 0.0) ? -1.0 : 1.0;
    G.row(i) *= rowFlip[i];
    h[i] *= rowFlip[i];
  }

  // Columns: p (n) | q (n) | slack (mIneq) | artificial (m).
  const Index colP = 0, colQ = n, colS = 2 * n, colArt = 2 * n + mIneq;
  const Index numCols = colArt + m;

  detail::SimplexTableau t;
  t.numCols = numCols;
  t.body = Matrix::Zero(m, numCols + 1);
  t.basis.resize(static_cast<size_t>(m));
  t.rowActive.assign(static_cast<size_t>(m), true);
  for (Index i = 0; i < m; ++i) {
    t.body.block(i, colP, 1, n) = G.row(i);
    t.body.block(i, colQ, 1, n) = -G.row(i);
    if (i < mIneq) t.body(i, colS + i) = rowFlip[i];
    t.body(i, colArt + i) = 1.0;
    t.body(i, numCols) = h[i];
    t.basis[static_cast<size_t>(i)] = colArt + i;
  }

  LpSolution out;
  out.x = Vector::Zero(n);
  out.dualIneq = Vector::Zero(mG);
  out.dualEq = Vector::Zero(mE);

  // Phase 1: drive out the artificial objective.
  t.costRow = Vector::Zero(numCols);
  for (Index i = 0; i < m; ++i) {
    t.costRow.head(numCols) -= t.body.row(i).head(numCols).transpose();
  }

  std::vector<bool> canEnter(static_cast<size_t>(numCols), true);
  constexpr long kMaxPivots = 2000000;
  long pivots = 0;
  bool unbounded = false;
  while (detail::blandStep(t, canEnter, &unbounded)) {
    if (++pivots > kMaxPivots) throw std::runtime_error("solveLp: pivot limit exceeded");
  }
  double artificialSum = 0.0;
  for (Index i = 0; i < m; ++i) {
    if (t.basis[static_cast<size_t>(i)] >= colArt) artificialSum += t.body(i, numCols);
  }
  if (artificialSum > 1e-9) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  // Pivot remaining artificials out of the basis; drop dependent rows.
  for (Index i = 0; i < m; ++i) {
    if (!t.rowActive[static_cast<size_t>(i)] || t.basis[static_cast<size_t>(i)] < colArt) {
      continue;
    }
    Index enter = -1;
    for (Index j = 0; j < colArt; ++j) {
      if (std::abs(t.body(i, j)) > 1e-9) {
        enter = j;
        break;
      }
    }
    if (enter >= 0) {
      t.pivot(i, enter);
    } else {
      t.rowActive[static_cast<size_t>(i)] = false;
    }
  }

  // Phase 2: original objective over (p, q); artificials are barred.
  Vector cost = Vector::Zero(numCols);
  cost.segment(colP, n) = lp.cost;
  cost.segment(colQ, n) = -lp.cost;
  t.costRow = cost;
  for (Index i = 0; i < m; ++i) {
    if (!t.rowActive[static_cast<size_t>(i)]) continue;
    const Index b = t.basis[static_cast<size_t>(i)];
    const double cb = cost[b];
    if (cb != 0.0) t.costRow -= cb * t.body.row(i).head(numCols).transpose();
  }
  for (Index j = colArt; j < numCols; ++j) canEnter[static_cast<size_t>(j)] = false;

  while (detail::blandStep(t, canEnter, &unbounded)) {
    if (++pivots > kMaxPivots) throw std::runtime_error("solveLp: pivot limit exceeded");
  }
  if (unbounded) {
    out.status = SolveStatus::Unbounded;
    return out;
  }

  // Recover x = p - q.
  Vector z = Vector::Zero(numCols);
  for (Index i = 0; i < m; ++i) {
    if (t.rowActive[static_cast<size_t>(i)]) {
      z[t.basis[static_cast<size_t>(i)]] = t.body(i, numCols);
    }
  }
  out.x = z.segment(colP, n) - z.segment(colQ, n);
  out.objective = lp.cost.dot(out.x);

  // Simplex prices: reduced cost of artificial column r equals -y_r. Undo row
  // flips/scaling, then negate to match the sign convention
  //   cost + ineqG'dualIneq + eqA'dualEq + (bound duals) = 0, dualIneq >= 0.
  Vector yAll(m);
  for (Index i = 0; i < m; ++i) {
    const double price = -t.costRow[colArt + i];
    yAll[i] = -price * rowFlip[i] / rowScale[i];
  }
  out.dualIneq = yAll.head(mG);
  out.dualEq = yAll.tail(mE);
  out.status = SolveStatus::Optimal;

  // Self-certification: stationarity, complementary slackness, strong duality.
  {
    Vector boundDualTerm = Vector::Zero(n);
    double dualObjective = 0.0;
    for (Index i = 0; i < mB; ++i) {
      const auto& [signedVar, rhs] = boundRows[static_cast<size_t>(i)];
      const Index j = std::abs(signedVar) - 1;
      const double y = yAll[mG + i];
      boundDualTerm[j] += (signedVar > 0 ? 1.0 : -1.0) * y;
      dualObjective -= rhs * y;
    }
    Vector stat = lp.cost + boundDualTerm;
    if (mG > 0) stat += lp.ineqG.transpose() * out.dualIneq;
    if (mE > 0) stat += lp.eqA.transpose() * out.dualEq;
    dualObjective -= (mG > 0 ? lp.ineqH.dot(out.dualIneq) : 0.0);
    dualObjective -= (mE > 0 ? lp.eqB.dot(out.dualEq) : 0.0);

    double slackViolation = 0.0;
    double primalViolation = 0.0;
    bool dualNonneg = true;
    if (mG > 0) {
      Vector slack = lp.ineqG * out.x - lp.ineqH;
      primalViolation = std::max(primalViolation, slack.maxCoeff());
      slackViolation = (out.dualIneq.array() * slack.array()).abs().maxCoeff();
      dualNonneg = out.dualIneq.minCoeff() >= -1e-9;
    }
    if (mE > 0) {
      primalViolation = std::max(primalViolation, (lp.eqA * out.x - lp.eqB).cwiseAbs().maxCoeff());
    }
    const double scale = 1.0 + std::abs(out.objective);
    const double tol = 1e-7 * scale;
    if (!(stat.cwiseAbs().maxCoeff() <= tol && slackViolation <= tol &&
          primalViolation <= tol &&
          std::abs(out.objective - dualObjective) <= 1e-8 * scale && dualNonneg)) {
      certificationFailures().fetch_add(1);
      out.status = SolveStatus::MaxIterations;
    }
  }
  return out;
}

}  // namespace invopt
