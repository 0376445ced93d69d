// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// Domain types for multi-objective convex forward problems: structured convex
// functions with exact gradients, the weighted-sum forward problem shell,
// trade-off scaling schemes, and dual certificates.

#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "invopt/types.hpp"

namespace invopt {

// f(x) = c'x + d
struct LinearFn {
  Vector c;
  double d = 0.0;
};

// f(x) = 1/2 x'Qx + q'x + d, Q symmetric PSD
struct QuadraticFn {
  Matrix Q;
  Vector q;
  double d = 0.0;
};

// f(x) = ||(Mx - t)_+||_2^2
struct HingeSquaredFn {
  Matrix M;
  Vector t;
};

enum class FunctionKind { Linear, Quadratic, HingeSquared };

/// A convex function from a closed, explicit class. The class is closed under
/// the operations the inverse models need (weighted sums after epigraph
/// lifting), and every member has an exact gradient.
class ConvexFunction {
 public:
  static ConvexFunction linear(Vector c, double d = 0.0) {
    ConvexFunction f;
    f.dim_ = c.size();
    f.fn_ = LinearFn{std::move(c), d};
    return f;
  }

  /// 1/2 x'Qx + q'x + d. Q is symmetrized, then rejected unless its smallest
  /// eigenvalue is >= -1e-10.
  static ConvexFunction quadratic(Matrix Q, Vector q, double d = 0.0) {
    if (Q.rows() != Q.cols() || Q.rows() != q.size()) {
      throw DimensionMismatch("quadratic: Q must be square and match q");
    }
    Matrix sym = 0.5 * (Q + Q.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-10) {
      throw InvalidProblem("quadratic: Q is not positive semidefinite");
    }
    ConvexFunction f;
    f.dim_ = q.size();
    f.fn_ = QuadraticFn{std::move(sym), std::move(q), d};
    return f;
  }

  static ConvexFunction quadratic(Matrix Q) {
    Vector q = Vector::Zero(Q.rows());
    return quadratic(std::move(Q), std::move(q), 0.0);
  }

  static ConvexFunction hingeSquared(Matrix M, Vector t) {
    if (M.rows() != t.size()) {
      throw DimensionMismatch("hingeSquared: row counts of M and t differ");
    }
    ConvexFunction f;
    f.dim_ = M.cols();
    f.fn_ = HingeSquaredFn{std::move(M), std::move(t)};
    return f;
  }

  Index dim() const { return dim_; }

  FunctionKind kind() const {
    if (std::holds_alternative<LinearFn>(fn_)) return FunctionKind::Linear;
    if (std::holds_alternative<QuadraticFn>(fn_)) return FunctionKind::Quadratic;
    return FunctionKind::HingeSquared;
  }

  double value(const Vector& x) const {
    checkDim(x);
    if (const auto* f = std::get_if<LinearFn>(&fn_)) {
      return f->c.dot(x) + f->d;
    }
    if (const auto* f = std::get_if<QuadraticFn>(&fn_)) {
      return 0.5 * x.dot(f->Q * x) + f->q.dot(x) + f->d;
    }
    const auto& f = std::get<HingeSquaredFn>(fn_);
    return (f.M * x - f.t).cwiseMax(0.0).squaredNorm();
  }

  Vector gradient(const Vector& x) const {
    checkDim(x);
    if (const auto* f = std::get_if<LinearFn>(&fn_)) {
      return f->c;
    }
    if (const auto* f = std::get_if<QuadraticFn>(&fn_)) {
      return f->Q * x + f->q;
    }
    const auto& f = std::get<HingeSquaredFn>(fn_);
    Vector r = (f.M * x - f.t).cwiseMax(0.0);
    return 2.0 * f.M.transpose() * r;
  }

  /// Hessian where it exists (linear/quadratic only).
  Matrix hessian() const {
    if (const auto* f = std::get_if<QuadraticFn>(&fn_)) return f->Q;
    if (std::holds_alternative<LinearFn>(fn_)) return Matrix::Zero(dim_, dim_);
    throw InvalidProblem("hessian: hinge-squared has no constant Hessian");
  }

  /// Same function over a larger variable vector, reading its inputs from
  /// columns [offset, offset + dim).
  ConvexFunction embedded(Index totalDim, Index offset) const {
    if (offset < 0 || offset + dim_ > totalDim) {
      throw DimensionMismatch("embedded: block out of range");
    }
    if (const auto* f = std::get_if<LinearFn>(&fn_)) {
      Vector c = Vector::Zero(totalDim);
      c.segment(offset, dim_) = f->c;
      return linear(std::move(c), f->d);
    }
    if (const auto* f = std::get_if<QuadraticFn>(&fn_)) {
      Matrix Q = Matrix::Zero(totalDim, totalDim);
      Q.block(offset, offset, dim_, dim_) = f->Q;
      Vector q = Vector::Zero(totalDim);
      q.segment(offset, dim_) = f->q;
      ConvexFunction g;
      g.dim_ = totalDim;
      g.fn_ = QuadraticFn{std::move(Q), std::move(q), f->d};
      return g;
    }
    const auto& f = std::get<HingeSquaredFn>(fn_);
    Matrix M = Matrix::Zero(f.M.rows(), totalDim);
    M.middleCols(offset, dim_) = f.M;
    return hingeSquared(std::move(M), f.t);
  }

  const LinearFn* asLinear() const { return std::get_if<LinearFn>(&fn_); }
  const QuadraticFn* asQuadratic() const { return std::get_if<QuadraticFn>(&fn_); }
  const HingeSquaredFn* asHingeSquared() const { return std::get_if<HingeSquaredFn>(&fn_); }

 private:
  ConvexFunction() = default;

  void checkDim(const Vector& x) const {
    if (x.size() != dim_) {
      throw DimensionMismatch("ConvexFunction: argument has wrong dimension");
    }
  }

  std::variant<LinearFn, QuadraticFn, HingeSquaredFn> fn_;
  Index dim_ = 0;
};

/// Weighted sum of linear/quadratic functions (callers lift hinges first).
inline ConvexFunction combineWeighted(const std::vector<ConvexFunction>& fs,
                                      const Vector& weights) {
  if (static_cast<Index>(fs.size()) != weights.size() || fs.empty()) {
    throw DimensionMismatch("combineWeighted: weights must match functions");
  }
  const Index n = fs.front().dim();
  bool anyQuadratic = false;
  for (const auto& f : fs) {
    if (f.dim() != n) throw DimensionMismatch("combineWeighted: mixed dims");
    if (f.kind() == FunctionKind::HingeSquared) {
      throw InvalidProblem("combineWeighted: hinge-squared must be lifted first");
    }
    if (f.kind() == FunctionKind::Quadratic) anyQuadratic = true;
  }
  Vector c = Vector::Zero(n);
  double d = 0.0;
  if (!anyQuadratic) {
    for (Index k = 0; k < weights.size(); ++k) {
      const auto* lin = fs[k].asLinear();
      c += weights[k] * lin->c;
      d += weights[k] * lin->d;
    }
    return ConvexFunction::linear(std::move(c), d);
  }
  Matrix Q = Matrix::Zero(n, n);
  for (Index k = 0; k < weights.size(); ++k) {
    if (const auto* quad = fs[k].asQuadratic()) {
      Q += weights[k] * quad->Q;
      c += weights[k] * quad->q;
      d += weights[k] * quad->d;
    } else {
      const auto* lin = fs[k].asLinear();
      c += weights[k] * lin->c;
      d += weights[k] * lin->d;
    }
  }
  return ConvexFunction::quadratic(std::move(Q), std::move(c), d);
}

/// The forward problem FOP(alpha): minimize sum_k alpha_k f_k(x) subject to
/// g_l(x) <= 0 and eqA x = eqB. Slater's condition is assumed and enforced by
/// the solver's phase-one routine at solve time.
struct ForwardProblem {
  std::vector<ConvexFunction> objectives;
  std::vector<ConvexFunction> inequalities;
  Matrix eqA;
  Vector eqB;
  Index nVars = 0;

  ForwardProblem() = default;

  ForwardProblem(std::vector<ConvexFunction> objs, std::vector<ConvexFunction> ineqs,
                 Matrix A, Vector b)
      : objectives(std::move(objs)),
        inequalities(std::move(ineqs)),
        eqA(std::move(A)),
        eqB(std::move(b)) {
    if (objectives.empty()) throw InvalidProblem("ForwardProblem: needs K >= 1 objectives");
    nVars = objectives.front().dim();
    for (const auto& f : objectives) {
      if (f.dim() != nVars) throw DimensionMismatch("ForwardProblem: objective dims differ");
    }
    for (const auto& g : inequalities) {
      if (g.dim() != nVars) throw DimensionMismatch("ForwardProblem: constraint dims differ");
    }
    if (eqA.size() == 0) {
      eqA.resize(0, nVars);
      eqB.resize(0);
    }
    if (eqA.cols() != nVars || eqA.rows() != eqB.size()) {
      throw DimensionMismatch("ForwardProblem: equality system dims inconsistent");
    }
    if (eqA.rows() > 0) {
      Eigen::ColPivHouseholderQR<Matrix> qr(eqA.transpose());
      qr.setThreshold(1e-10 * std::max(1.0, eqA.norm()));
      if (qr.rank() < eqA.rows()) {
        throw InvalidProblem("ForwardProblem: eqA must have full row rank");
      }
    }
  }

  ForwardProblem(std::vector<ConvexFunction> objs, std::vector<ConvexFunction> ineqs)
      : ForwardProblem(std::move(objs), std::move(ineqs), Matrix(), Vector()) {}

  Index numObjectives() const { return static_cast<Index>(objectives.size()); }
  Index numInequalities() const { return static_cast<Index>(inequalities.size()); }
  Index numEqualities() const { return eqA.rows(); }

  Vector objectiveValues(const Vector& x) const {
    Vector f(numObjectives());
    for (Index k = 0; k < f.size(); ++k) f[k] = objectives[k].value(x);
    return f;
  }
};

/// Nonnegative objective weights. Reported form is L1-normalized.
struct WeightVector {
  Vector alpha;

  WeightVector() = default;
  explicit WeightVector(Vector a) : alpha(std::move(a)) {
    if ((alpha.array() < 0.0).any()) {
      throw ZeroWeightVector("WeightVector: weights must be nonnegative");
    }
  }

  bool isZero(double tol = 0.0) const { return alpha.size() == 0 || alpha.maxCoeff() <= tol; }

  Vector l1Normalized() const {
    const double s = alpha.sum();
    if (s <= 0.0) throw ZeroWeightVector("WeightVector: cannot normalize zero vector");
    return alpha / s;
  }
};

enum class ScalingKind { General, Relative, Absolute };

inline const char* toString(ScalingKind k) {
  switch (k) {
    case ScalingKind::General: return "general";
    case ScalingKind::Relative: return "relative";
    case ScalingKind::Absolute: return "absolute";
  }
  return "unknown";
}

/// Trade-off scaling factors. mu_k = u_{k~ k} measured against the reference
/// objective; pairwise factors are induced as u_{k1 k2} = mu_{k2} / mu_{k1}.
struct ScalingScheme {
  ScalingKind kind = ScalingKind::Absolute;
  Vector mu;
  Index referenceObjective = 0;

  Index numObjectives() const { return mu.size(); }

  double pairwiseFactor(Index k1, Index k2) const { return mu[k2] / mu[k1]; }
};

inline ScalingScheme absoluteScheme(Index numObjectives) {
  return ScalingScheme{ScalingKind::Absolute, Vector::Ones(numObjectives), 0};
}

inline ScalingScheme generalScheme(Vector mu, Index referenceObjective = 0) {
  if ((mu.array() < 0.0).any()) throw InvalidProblem("generalScheme: mu must be >= 0");
  if (referenceObjective < 0 || referenceObjective >= mu.size()) {
    throw InvalidProblem("generalScheme: reference objective out of range");
  }
  return ScalingScheme{ScalingKind::General, std::move(mu), referenceObjective};
}

/// mu_k = f_k(xhat) / f_kRef(xhat). Requires every objective to be strictly
/// positive at xhat; relative preservation is undefined otherwise.
inline ScalingScheme relativeScheme(const ForwardProblem& p, const Vector& xhat,
                                    Index kRef = 0) {
  if (kRef < 0 || kRef >= p.numObjectives()) {
    throw InvalidProblem("relativeScheme: reference objective out of range");
  }
  Vector f = p.objectiveValues(xhat);
  if ((f.array() <= 1e-12).any()) {
    throw NonPositiveObjective("relativeScheme: objective value at xhat is not positive");
  }
  return ScalingScheme{ScalingKind::Relative, f / f[kRef], kRef};
}

struct KktResiduals {
  double stationarity = 0.0;
  double complementarity = 0.0;
  double feasibility = 0.0;

  double maxAbs() const {
    return std::max({stationarity, complementarity, feasibility});
  }
};

/// Lagrange multipliers in the forward problem's convention:
///   sum_k alpha_k grad f_k(x) + sum_l sigma_l grad g_l(x) - eqA' pi = 0.
struct DualCertificate {
  Vector alpha;   // multipliers of objective / epigraph constraints
  Vector sigma;   // multipliers of g_l <= 0 (nonnegative)
  Vector pi;      // multipliers of equality rows
  KktResiduals kktResiduals;
};

/// Epigraph lifting of hinge-squared terms. Each hinge objective
/// ||(Mx - t)_+||^2 becomes ||z||^2 over fresh variables z with
/// z >= Mx - t, z >= 0; hinge constraints collapse to Mx <= t.
struct EpigraphLift {
  ForwardProblem lifted;
  Index baseVars = 0;
  bool identity = true;
  // per-objective z-block (offset, rows), offset < 0 when not lifted
  std::vector<std::pair<Index, Index>> zBlocks;

  Vector projectBack(const Vector& y) const { return y.head(baseVars); }

  /// Extend a base-space point with z = (Mx - t)_+ + pad per lifted block.
  Vector liftPoint(const ForwardProblem& original, const Vector& x, double pad = 0.0) const {
    Vector y = Vector::Zero(lifted.nVars);
    y.head(baseVars) = x;
    for (Index k = 0; k < original.numObjectives(); ++k) {
      const auto& [offset, rows] = zBlocks[k];
      if (offset < 0) continue;
      const auto* h = original.objectives[k].asHingeSquared();
      y.segment(offset, rows) = (h->M * x - h->t).cwiseMax(0.0).array() + pad;
    }
    return y;
  }
};

inline EpigraphLift epigraphReformulate(const ForwardProblem& p) {
  EpigraphLift out;
  out.baseVars = p.nVars;
  out.zBlocks.assign(p.objectives.size(), {-1, 0});

  Index extra = 0;
  for (Index k = 0; k < p.numObjectives(); ++k) {
    if (const auto* h = p.objectives[k].asHingeSquared()) {
      out.zBlocks[k] = {p.nVars + extra, h->M.rows()};
      extra += h->M.rows();
    }
  }
  bool hingeConstraints = false;
  for (const auto& g : p.inequalities) {
    if (g.kind() == FunctionKind::HingeSquared) hingeConstraints = true;
  }
  if (extra == 0 && !hingeConstraints) {
    out.lifted = p;
    out.identity = true;
    return out;
  }
  out.identity = false;

  const Index total = p.nVars + extra;
  std::vector<ConvexFunction> objectives;
  objectives.reserve(p.objectives.size());
  for (Index k = 0; k < p.numObjectives(); ++k) {
    const auto& [offset, rows] = out.zBlocks[k];
    if (offset < 0) {
      objectives.push_back(p.objectives[k].embedded(total, 0));
    } else {
      Matrix Q = Matrix::Zero(total, total);
      Q.block(offset, offset, rows, rows) = 2.0 * Matrix::Identity(rows, rows);
      objectives.push_back(ConvexFunction::quadratic(std::move(Q), Vector::Zero(total)));
    }
  }

  std::vector<ConvexFunction> inequalities;
  for (const auto& g : p.inequalities) {
    if (const auto* h = g.asHingeSquared()) {
      // ||(Mx - t)_+||^2 <= 0  <=>  Mx <= t
      for (Index i = 0; i < h->M.rows(); ++i) {
        Vector c = Vector::Zero(total);
        c.head(p.nVars) = h->M.row(i).transpose();
        inequalities.push_back(ConvexFunction::linear(std::move(c), -h->t[i]));
      }
    } else {
      inequalities.push_back(g.embedded(total, 0));
    }
  }
  for (Index k = 0; k < p.numObjectives(); ++k) {
    const auto& [offset, rows] = out.zBlocks[k];
    if (offset < 0) continue;
    const auto* h = p.objectives[k].asHingeSquared();
    for (Index i = 0; i < rows; ++i) {
      // M_i x - t_i - z_i <= 0
      Vector c = Vector::Zero(total);
      c.head(p.nVars) = h->M.row(i).transpose();
      c[offset + i] = -1.0;
      inequalities.push_back(ConvexFunction::linear(std::move(c), -h->t[i]));
      // -z_i <= 0
      Vector cz = Vector::Zero(total);
      cz[offset + i] = -1.0;
      inequalities.push_back(ConvexFunction::linear(std::move(cz), 0.0));
    }
  }

  Matrix A(p.eqA.rows(), total);
  if (p.eqA.rows() > 0) {
    A.setZero();
    A.leftCols(p.nVars) = p.eqA;
  }
  out.lifted = ForwardProblem(std::move(objectives), std::move(inequalities),
                              std::move(A), p.eqB);
  return out;
}

}  // namespace invopt
