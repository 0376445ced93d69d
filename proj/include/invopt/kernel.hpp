// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// Self-contained primal-dual solver for smooth convex programs (linear or
// quadratic objective and inequalities, linear equalities). Log-barrier path
// following with Newton steps, explicit phase-one, multiplier recovery at the
// final barrier parameter, and an active-set Newton polish that sharpens both
// the primal point and the certificate.

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "invopt/model.hpp"
#include "invopt/types.hpp"

namespace invopt {

struct KernelOptions {
  double tolerance = 1e-8;             // KKT residual target for Optimal
  double tInitial = 1.0;               // first barrier parameter
  double tFactor = 10.0;               // centering multiplier per outer step
  double complementarityTarget = 1e-9; // drives the final barrier parameter
  int maxNewtonSteps = 200;
  double armijoSlope = 0.01;
  double armijoBackoff = 0.5;
  double phaseOneMargin = 1e-6;        // required interior margin
  double unboundedBelow = -1e12;       // objective divergence threshold
  bool polish = true;
};

/// Solve target after epigraph lifting: no hinge-squared members.
struct SmoothProgram {
  ConvexFunction objective;
  std::vector<ConvexFunction> inequalities;
  Matrix eqA;
  Vector eqB;
  Index nVars = 0;

  SmoothProgram(ConvexFunction obj, std::vector<ConvexFunction> ineqs, Matrix A, Vector b)
      : objective(std::move(obj)),
        inequalities(std::move(ineqs)),
        eqA(std::move(A)),
        eqB(std::move(b)),
        nVars(objective.dim()) {
    if (objective.kind() == FunctionKind::HingeSquared) {
      throw InvalidProblem("SmoothProgram: lift hinge-squared objectives first");
    }
    for (const auto& g : inequalities) {
      if (g.kind() == FunctionKind::HingeSquared) {
        throw InvalidProblem("SmoothProgram: lift hinge-squared constraints first");
      }
      if (g.dim() != nVars) throw DimensionMismatch("SmoothProgram: constraint dims");
    }
    if (eqA.size() == 0) {
      eqA.resize(0, nVars);
      eqB.resize(0);
    }
    if (eqA.cols() != nVars || eqA.rows() != eqB.size()) {
      throw DimensionMismatch("SmoothProgram: equality system dims");
    }
  }

  SmoothProgram(ConvexFunction obj, std::vector<ConvexFunction> ineqs)
      : SmoothProgram(std::move(obj), std::move(ineqs), Matrix(), Vector()) {}

  Index numInequalities() const { return static_cast<Index>(inequalities.size()); }
};

struct KernelSolution {
  Vector x;
  DualCertificate dual;  // sigma = inequality multipliers, pi = equality multipliers
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  double barrierGapFinal = 0.0;
};

namespace detail {

// Symmetric KKT solve [H A'; A 0] [dx; w] = [r1; r2] with escalating
// regularization until the unregularized residual is acceptable.
inline bool solveKkt(const Matrix& H, const Matrix& A, const Vector& r1, const Vector& r2,
                     Vector* dx, Vector* w) {
  const Index n = H.rows();
  const Index m = A.rows();
  Matrix K(n + m, n + m);
  K.setZero();
  K.topLeftCorner(n, n) = H;
  if (m > 0) {
    K.topRightCorner(n, m) = A.transpose();
    K.bottomLeftCorner(m, n) = A;
  }
  Vector rhs(n + m);
  rhs.head(n) = r1;
  rhs.tail(m) = r2;
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  const double rhsScale = 1.0 + rhs.cwiseAbs().maxCoeff();
  // A regularized solve is still a strict descent direction; the residual is
  // checked against the system actually factored.
  for (double reg : {0.0, 1e-12, 1e-10, 1e-8, 1e-6}) {
    Matrix Kreg = K;
    Kreg.topLeftCorner(n, n).diagonal().array() += reg * scale;
    if (m > 0) Kreg.bottomRightCorner(m, m).diagonal().array() -= reg * scale;
    Eigen::PartialPivLU<Matrix> lu(Kreg);
    Vector sol = lu.solve(rhs);
    if (!sol.allFinite()) continue;
    if ((Kreg * sol - rhs).cwiseAbs().maxCoeff() <= 1e-8 * rhsScale) {
      *dx = sol.head(n);
      *w = sol.tail(m);
      return true;
    }
  }
  // last resort: rank-revealing least squares on the unregularized system
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(K);
  Vector sol = cod.solve(rhs);
  if (!sol.allFinite()) return false;
  *dx = sol.head(n);
  *w = sol.tail(m);
  return true;
}

// Inequality rows split into a stacked linear block and individual quadratic
// rows; the barrier Hessian of the linear block reduces to one weighted GEMM.
struct BarrierWorkspace {
  const SmoothProgram* p = nullptr;
  Matrix linG;     // stacked gradients of linear rows
  Vector linD;     // constants of linear rows
  std::vector<Index> linRows;
  std::vector<Index> quadRows;

  explicit BarrierWorkspace(const SmoothProgram& prog) : p(&prog) {
    for (Index l = 0; l < prog.numInequalities(); ++l) {
      if (prog.inequalities[l].kind() == FunctionKind::Linear) {
        linRows.push_back(l);
      } else {
        quadRows.push_back(l);
      }
    }
    linG.resize(static_cast<Index>(linRows.size()), prog.nVars);
    linD.resize(static_cast<Index>(linRows.size()));
    for (size_t i = 0; i < linRows.size(); ++i) {
      const auto* f = prog.inequalities[static_cast<size_t>(linRows[i])].asLinear();
      linG.row(static_cast<Index>(i)) = f->c.transpose();
      linD[static_cast<Index>(i)] = f->d;
    }
  }

  Vector constraintValues(const Vector& x) const {
    Vector g(p->numInequalities());
    if (linG.rows() > 0) {
      Vector gl = linG * x + linD;
      for (size_t i = 0; i < linRows.size(); ++i) g[linRows[i]] = gl[static_cast<Index>(i)];
    }
    for (Index l : quadRows) g[l] = p->inequalities[static_cast<size_t>(l)].value(x);
    return g;
  }

  bool strictlyFeasible(const Vector& x) const {
    Vector g = constraintValues(x);
    return g.size() == 0 || g.maxCoeff() < 0.0;
  }

  // psi_t(x) = t f(x) - sum log(-g_l(x)); returns false outside the domain
  bool eval(double t, const Vector& x, double* psi, Vector* grad, Matrix* hess) const {
    Vector g = constraintValues(x);
    if (g.size() > 0 && g.maxCoeff() >= 0.0) return false;
    const Index n = p->nVars;
    double val = t * p->objective.value(x);
    Vector gr = t * p->objective.gradient(x);
    Matrix He;
    if (hess != nullptr) {
      He = (p->objective.kind() == FunctionKind::Quadratic)
               ? Matrix(t * p->objective.asQuadratic()->Q)
               : Matrix(Matrix::Zero(n, n));
    }
    if (linG.rows() > 0) {
      Vector gl(linRows.size());
      for (size_t i = 0; i < linRows.size(); ++i) gl[static_cast<Index>(i)] = g[linRows[i]];
      val -= gl.array().abs().log().sum();
      Vector w = (-gl).cwiseInverse();  // 1/(-g) > 0
      gr.noalias() += linG.transpose() * w;
      if (hess != nullptr) {
        Matrix scaled = w.asDiagonal() * linG;
        He.noalias() += scaled.transpose() * scaled;
      }
    }
    for (Index l : quadRows) {
      const auto& fn = p->inequalities[static_cast<size_t>(l)];
      const double gv = g[l];
      val -= std::log(-gv);
      Vector gg = fn.gradient(x);
      const double inv = 1.0 / (-gv);
      gr.noalias() += inv * gg;
      if (hess != nullptr) {
        He.noalias() += (inv * inv) * (gg * gg.transpose());
        He.noalias() += inv * fn.asQuadratic()->Q;
      }
    }
    *psi = val;
    *grad = std::move(gr);
    if (hess != nullptr) *hess = std::move(He);
    return true;
  }
};

struct NewtonOutcome {
  bool converged = false;
  bool unbounded = false;
  Vector eqMultiplier;  // w of the last KKT solve
};

// Equality-constrained Newton minimization of psi_t. earlyExit(x) may stop the
// loop once the caller has what it needs (phase one).
template <typename EarlyExit>
inline NewtonOutcome newtonMinimize(const BarrierWorkspace& ws, double t, Vector& x,
                                    const KernelOptions& opts, int* stepBudget,
                                    EarlyExit earlyExit) {
  NewtonOutcome out;
  const Index m = ws.p->eqA.rows();
  out.eqMultiplier = Vector::Zero(m);
  double psi = 0.0;
  Vector grad;
  Matrix hess;
  const double innerTol = 0.05 * opts.tolerance * t;
  while (*stepBudget > 0) {
    if (earlyExit(x)) {
      out.converged = true;
      return out;
    }
    if (!ws.eval(t, x, &psi, &grad, &hess)) return out;  // left the domain (should not happen)
    Vector dx, w;
    Vector r2 = (m > 0) ? Vector(ws.p->eqB - ws.p->eqA * x) : Vector(0);
    if (!detail::solveKkt(hess, ws.p->eqA, -grad, r2, &dx, &w)) return out;
    out.eqMultiplier = w;
    // stationarity left after this step: grad + A'w = -H dx
    const double residual = (hess * dx).cwiseAbs().maxCoeff();
    const double decrement = dx.dot(hess * dx);
    const bool eqOk =
        m == 0 || r2.cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + ws.p->eqB.cwiseAbs().maxCoeff());
    if (eqOk && (residual <= innerTol || decrement <= 2e-16 * (1.0 + std::abs(psi)))) {
      out.converged = true;
      return out;
    }
    const double slope = grad.dot(dx);
    double step = 1.0;
    double psiNew = 0.0;
    Vector gradNew;
    bool accepted = false;
    for (int ls = 0; ls < 80; ++ls) {
      Vector xNew = x + step * dx;
      if (ws.eval(t, xNew, &psiNew, &gradNew, nullptr) &&
          psiNew <= psi + opts.armijoSlope * step * slope) {
        x = std::move(xNew);
        accepted = true;
        break;
      }
      step *= opts.armijoBackoff;
    }
    --(*stepBudget);
    if (!accepted) {
      // numerically stuck; report converged-as-is and let the caller verify
      out.converged = true;
      return out;
    }
    if (ws.p->objective.value(x) < opts.unboundedBelow) {
      out.unbounded = true;
      return out;
    }
  }
  return out;
}

inline KktResiduals computeResiduals(const SmoothProgram& p, const Vector& x,
                                     const Vector& lambda, const Vector& pi) {
  KktResiduals r;
  Vector stat = p.objective.gradient(x);
  for (Index l = 0; l < p.numInequalities(); ++l) {
    stat.noalias() += lambda[l] * p.inequalities[static_cast<size_t>(l)].gradient(x);
  }
  if (p.eqA.rows() > 0) stat.noalias() -= p.eqA.transpose() * pi;
  r.stationarity = stat.size() > 0 ? stat.cwiseAbs().maxCoeff() : 0.0;
  double comp = 0.0, feas = 0.0;
  for (Index l = 0; l < p.numInequalities(); ++l) {
    const double gv = p.inequalities[static_cast<size_t>(l)].value(x);
    comp = std::max(comp, std::abs(lambda[l] * gv));
    feas = std::max(feas, gv);
  }
  r.complementarity = comp;
  r.feasibility = std::max(0.0, feas);
  if (p.eqA.rows() > 0) {
    r.feasibility = std::max(r.feasibility, (p.eqA * x - p.eqB).cwiseAbs().maxCoeff());
  }
  return r;
}

// Minimum-norm multipliers for the exact-KKT least-squares system at x.
inline void projectMultipliers(const SmoothProgram& p, const Vector& x, Vector* lambda,
                               Vector* pi) {
  const Index L = p.numInequalities();
  const Index m = p.eqA.rows();
  if (L + m == 0) return;
  const Index n = p.nVars;
  Matrix M(n + L, L + m);
  M.setZero();
  Vector rhs(n + L);
  for (Index l = 0; l < L; ++l) {
    M.col(l).head(n) = p.inequalities[static_cast<size_t>(l)].gradient(x);
    M(n + l, l) = p.inequalities[static_cast<size_t>(l)].value(x);
  }
  if (m > 0) M.topRightCorner(n, m) = -p.eqA.transpose();
  rhs.head(n) = -p.objective.gradient(x);
  rhs.tail(L).setZero();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);
  Vector sol = cod.solve(rhs);
  if (!sol.allFinite()) return;
  Vector lam = sol.head(L).cwiseMax(0.0);
  Vector piNew = sol.tail(m);
  KktResiduals before = computeResiduals(p, x, *lambda, *pi);
  KktResiduals after = computeResiduals(p, x, lam, piNew);
  if (after.maxAbs() <= before.maxAbs()) {
    *lambda = std::move(lam);
    *pi = std::move(piNew);
  }
}

// Newton refinement on the active-set KKT equations. Quadratic local
// convergence turns the barrier's 1e-9-gap iterate into a near-exact solution;
// every change is safeguarded and reverted when it does not verify.
inline void polishSolution(const SmoothProgram& p, double tFinal, Vector* x, Vector* lambda,
                           Vector* pi) {
  const Index n = p.nVars;
  const Index L = p.numInequalities();
  const Index m = p.eqA.rows();
  std::vector<Index> active;
  for (Index l = 0; l < L; ++l) {
    const double slack = -p.inequalities[static_cast<size_t>(l)].value(*x);
    const double thresh = std::sqrt(std::max(1.0, (*lambda)[l]) / tFinal);
    if (slack <= thresh) active.push_back(l);
  }
  const Index a = static_cast<Index>(active.size());
  Vector xNew = *x;
  Vector lamA(a);
  for (Index i = 0; i < a; ++i) lamA[i] = std::max((*lambda)[active[static_cast<size_t>(i)]], 0.0);
  Vector piNew = *pi;

  auto kktValue = [&](const Vector& xx, const Vector& la, const Vector& pp) {
    Vector F(n + a + m);
    Vector stat = p.objective.gradient(xx);
    for (Index i = 0; i < a; ++i) {
      stat.noalias() += la[i] * p.inequalities[static_cast<size_t>(active[static_cast<size_t>(i)])].gradient(xx);
    }
    if (m > 0) stat.noalias() -= p.eqA.transpose() * pp;
    F.head(n) = stat;
    for (Index i = 0; i < a; ++i) {
      F[n + i] = p.inequalities[static_cast<size_t>(active[static_cast<size_t>(i)])].value(xx);
    }
    if (m > 0) F.tail(m) = p.eqA * xx - p.eqB;
    return F;
  };

  Vector F = kktValue(xNew, lamA, piNew);
  double fNorm = F.size() > 0 ? F.cwiseAbs().maxCoeff() : 0.0;
  for (int it = 0; it < 8 && fNorm > 1e-14; ++it) {
    Matrix H = p.objective.kind() == FunctionKind::Quadratic
                   ? Matrix(p.objective.asQuadratic()->Q)
                   : Matrix(Matrix::Zero(n, n));
    Matrix Ga(a, n);
    for (Index i = 0; i < a; ++i) {
      const auto& fn = p.inequalities[static_cast<size_t>(active[static_cast<size_t>(i)])];
      Ga.row(i) = fn.gradient(xNew).transpose();
      if (fn.kind() == FunctionKind::Quadratic) H.noalias() += lamA[i] * fn.asQuadratic()->Q;
    }
    Matrix J(n + a + m, n + a + m);
    J.setZero();
    J.topLeftCorner(n, n) = H;
    if (a > 0) {
      J.block(0, n, n, a) = Ga.transpose();
      J.block(n, 0, a, n) = Ga;
    }
    if (m > 0) {
      J.block(0, n + a, n, m) = -p.eqA.transpose();
      J.block(n + a, 0, m, n) = p.eqA;
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(J);
    Vector delta = cod.solve(-F);
    if (!delta.allFinite()) break;
    Vector xTry = xNew + delta.head(n);
    Vector lamTry = lamA + delta.segment(n, a);
    Vector piTry = piNew + delta.tail(m);
    Vector Ftry = kktValue(xTry, lamTry, piTry);
    const double fTryNorm = Ftry.size() > 0 ? Ftry.cwiseAbs().maxCoeff() : 0.0;
    if (fTryNorm >= fNorm) break;
    xNew = std::move(xTry);
    lamA = std::move(lamTry);
    piNew = std::move(piTry);
    F = std::move(Ftry);
    fNorm = fTryNorm;
  }

  // safeguards: multiplier signs, feasibility of the rows left inactive
  if (a > 0 && lamA.minCoeff() < -1e-9) return;
  Vector lamFull = Vector::Zero(L);
  for (Index i = 0; i < a; ++i) lamFull[active[static_cast<size_t>(i)]] = std::max(lamA[i], 0.0);
  for (Index l = 0; l < L; ++l) {
    if (p.inequalities[static_cast<size_t>(l)].value(xNew) > 1e-10) return;
  }
  KktResiduals before = computeResiduals(p, *x, *lambda, *pi);
  KktResiduals after = computeResiduals(p, xNew, lamFull, piNew);
  if (after.maxAbs() <= before.maxAbs()) {
    *x = std::move(xNew);
    *lambda = std::move(lamFull);
    *pi = std::move(piNew);
  }
}

// Direct path for programs with no inequalities.
inline KernelSolution equalityOnlySolve(const SmoothProgram& p, const KernelOptions& opts) {
  KernelSolution out;
  const Index n = p.nVars;
  const Index m = p.eqA.rows();
  out.dual.sigma = Vector(0);
  out.dual.alpha = Vector(0);
  if (p.objective.kind() == FunctionKind::Quadratic) {
    const auto* f = p.objective.asQuadratic();
    Vector dx, w;
    Vector x0 = Vector::Zero(n);
    if (detail::solveKkt(f->Q, p.eqA, -(f->Q * x0 + f->q), m > 0 ? Vector(p.eqB - p.eqA * x0) : Vector(0), &dx, &w)) {
      out.x = x0 + dx;
      out.dual.pi = -w;
      out.iterations = 1;
      out.dual.kktResiduals = computeResiduals(p, out.x, Vector(0), out.dual.pi);
      if (out.dual.kktResiduals.maxAbs() <= opts.tolerance) {
        out.status = SolveStatus::Optimal;
      } else {
        out.status = SolveStatus::Unbounded;  // curvature missing along feasible directions
      }
      return out;
    }
    out.status = SolveStatus::Unbounded;
    return out;
  }
  // linear objective: bounded iff the gradient lies in range(eqA')
  const auto* f = p.objective.asLinear();
  if (m == 0) {
    if (f->c.cwiseAbs().maxCoeff() <= opts.tolerance) {
      out.x = Vector::Zero(n);
      out.dual.pi = Vector(0);
      out.status = SolveStatus::Optimal;
      out.dual.kktResiduals = computeResiduals(p, out.x, Vector(0), out.dual.pi);
      return out;
    }
    out.status = SolveStatus::Unbounded;
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(p.eqA.transpose());
  Vector pi = cod.solve(f->c);
  if ((p.eqA.transpose() * pi - f->c).cwiseAbs().maxCoeff() > opts.tolerance) {
    out.status = SolveStatus::Unbounded;
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> codA(p.eqA);
  out.x = codA.solve(p.eqB);
  out.dual.pi = pi;
  out.iterations = 1;
  out.dual.kktResiduals = computeResiduals(p, out.x, Vector(0), pi);
  out.status = out.dual.kktResiduals.maxAbs() <= opts.tolerance ? SolveStatus::Optimal
                                                                : SolveStatus::MaxIterations;
  return out;
}

}  // namespace detail

/// Strictly feasible point (g_l <= -margin, eqA x = eqB) or nothing when the
/// inequality system admits no interior. Infeasibility is declared when the
/// minimized auxiliary slack stays above -1e-9.
inline std::optional<Vector> phaseOne(const SmoothProgram& p, const KernelOptions& opts = {}) {
  const Index n = p.nVars;
  const Index m = p.eqA.rows();
  Vector x0;
  if (m > 0) {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(p.eqA);
    x0 = cod.solve(p.eqB);
    if ((p.eqA * x0 - p.eqB).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + p.eqB.cwiseAbs().maxCoeff())) {
      return std::nullopt;  // inconsistent equality system
    }
  } else {
    x0 = Vector::Zero(n);
  }
  if (p.numInequalities() == 0) return x0;

  // auxiliary program over (x, s): minimize s subject to g_l(x) - s <= 0
  std::vector<ConvexFunction> ineqs;
  ineqs.reserve(p.inequalities.size());
  for (const auto& g : p.inequalities) {
    ConvexFunction e = g.embedded(n + 1, 0);
    if (const auto* lin = e.asLinear()) {
      Vector c = lin->c;
      c[n] = -1.0;
      ineqs.push_back(ConvexFunction::linear(std::move(c), lin->d));
    } else {
      const auto* quad = e.asQuadratic();
      Vector q = quad->q;
      q[n] = -1.0;
      ineqs.push_back(ConvexFunction::quadratic(quad->Q, std::move(q), quad->d));
    }
  }
  Matrix A(m, n + 1);
  if (m > 0) {
    A.setZero();
    A.leftCols(n) = p.eqA;
  }
  Vector cs = Vector::Zero(n + 1);
  cs[n] = 1.0;
  SmoothProgram aux(ConvexFunction::linear(std::move(cs)), std::move(ineqs), std::move(A),
                    p.eqB);

  double gMax = 0.0;
  for (const auto& g : p.inequalities) gMax = std::max(gMax, g.value(x0));
  Vector y(n + 1);
  y.head(n) = x0;
  y[n] = gMax + std::max(1.0, 0.1 * std::abs(gMax));

  detail::BarrierWorkspace ws(aux);
  const double enough = -std::max(100.0 * opts.phaseOneMargin, 1e-3);
  int budget = opts.maxNewtonSteps;
  double t = opts.tInitial;
  while (true) {
    auto outcome = detail::newtonMinimize(ws, t, y, opts, &budget,
                                          [&](const Vector& yy) { return yy[n] <= enough; });
    if (y[n] <= enough) {
      // deep interior reached; re-check against the requested margin
      Vector x = y.head(n);
      bool ok = true;
      for (const auto& g : p.inequalities) ok = ok && g.value(x) <= -opts.phaseOneMargin;
      if (ok) return x;
    }
    if (outcome.unbounded) break;  // slack diverges: interior is fat, y already deep
    if (1.0 / t <= std::max(1e-10, 0.1 * opts.phaseOneMargin) || budget <= 0 ||
        !outcome.converged) {
      break;
    }
    t *= opts.tFactor;
  }
  if (y[n] <= -1e-9) return Vector(y.head(n));
  return std::nullopt;
}

/// Solve to the KKT tolerance, returning primal point and multipliers. The
/// multiplier convention is  grad f + sum sigma_l grad g_l - eqA' pi = 0.
inline KernelSolution solve(const SmoothProgram& p, const KernelOptions& opts = {},
                            const Vector* strictStart = nullptr) {
  KernelSolution out;
  const Index n = p.nVars;
  const Index L = p.numInequalities();
  const Index m = p.eqA.rows();
  if (L == 0) return detail::equalityOnlySolve(p, opts);

  detail::BarrierWorkspace ws(p);
  Vector x;
  if (strictStart != nullptr && strictStart->size() == n && ws.strictlyFeasible(*strictStart) &&
      (m == 0 || (p.eqA * *strictStart - p.eqB).cwiseAbs().maxCoeff() <=
                     1e-10 * (1.0 + p.eqB.cwiseAbs().maxCoeff()))) {
    x = *strictStart;
  } else {
    auto x0 = phaseOne(p, opts);
    if (!x0.has_value()) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    x = std::move(*x0);
  }

  int budget = opts.maxNewtonSteps;
  double t = opts.tInitial;
  Vector lambda = Vector::Zero(L);
  Vector pi = Vector::Zero(m);
  while (true) {
    auto outcome =
        detail::newtonMinimize(ws, t, x, opts, &budget, [](const Vector&) { return false; });
    if (outcome.unbounded) {
      out.status = SolveStatus::Unbounded;
      out.x = x;
      out.iterations = opts.maxNewtonSteps - budget;
      return out;
    }
    Vector g = ws.constraintValues(x);
    for (Index l = 0; l < L; ++l) lambda[l] = 1.0 / (t * (-g[l]));
    pi = (m > 0) ? Vector(-outcome.eqMultiplier / t) : Vector(0);
    if (1.0 / t <= opts.complementarityTarget) break;
    if (budget <= 0) break;
    t *= opts.tFactor;
  }
  out.barrierGapFinal = static_cast<double>(L) / t;
  out.iterations = opts.maxNewtonSteps - budget;

  if (opts.polish) detail::polishSolution(p, t, &x, &lambda, &pi);
  KktResiduals res = detail::computeResiduals(p, x, lambda, pi);
  if (res.stationarity > 0.1 * opts.tolerance) {
    detail::projectMultipliers(p, x, &lambda, &pi);
    res = detail::computeResiduals(p, x, lambda, pi);
  }

  out.x = std::move(x);
  out.dual.alpha = Vector(0);
  out.dual.sigma = std::move(lambda);
  out.dual.pi = std::move(pi);
  out.dual.kktResiduals = res;
  const bool dualFeasible = out.dual.sigma.size() == 0 || out.dual.sigma.minCoeff() >= -1e-12;
  if (res.maxAbs() <= opts.tolerance && dualFeasible) {
    out.status = SolveStatus::Optimal;
  } else {
    out.status = SolveStatus::MaxIterations;
    if (res.maxAbs() <= opts.tolerance && !dualFeasible) certificationFailures().fetch_add(1);
  }
  return out;
}

}  // namespace invopt
