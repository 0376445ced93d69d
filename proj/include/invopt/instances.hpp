// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// Instance library: the bi-objective disk example used throughout the test
// suites, and a seeded synthetic fluence-planning family (hinge-squared
// overdose objectives, per-structure dose bands, beamlet smoothing rows).

#pragma once

#include <random>
#include <string>
#include <vector>

#include "invopt/forward.hpp"

namespace invopt {

/// f1 = 4x1^2 + x2^2, f2 = x1^2 + 4x2^2 over the disk (x1-2)^2+(x2-2)^2 <= 1.
inline ForwardProblem builtinExample1() {
  Matrix Q1(2, 2), Q2(2, 2);
  Q1 << 8.0, 0.0, 0.0, 2.0;
  Q2 << 2.0, 0.0, 0.0, 8.0;
  Matrix Qd = 2.0 * Matrix::Identity(2, 2);
  Vector qd(2);
  qd << -4.0, -4.0;
  std::vector<ConvexFunction> objectives{ConvexFunction::quadratic(Q1),
                                         ConvexFunction::quadratic(Q2)};
  std::vector<ConvexFunction> constraints{ConvexFunction::quadratic(Qd, qd, 7.0)};
  return ForwardProblem(std::move(objectives), std::move(constraints));
}

struct Example1Points {
  Vector a, b, c, d, e;
};

inline Example1Points example1Points() {
  Example1Points p;
  const double t = (4.0 - std::sqrt(2.0)) / 2.0;
  p.a = Vector(2);
  p.a << t, t;
  p.b = Vector(2);
  p.b << 1.7, 1.3;
  p.c = Vector(2);
  p.c << 1.0, 1.0;
  p.d = Vector(2);
  p.d << 1.725, 1.121;
  p.e = Vector(2);
  p.e << 1.789, 1.096;
  return p;
}

struct InstanceInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PlanningInstance {
  std::vector<Matrix> doseMatrices;  // K healthy structures, tumor last
  Vector thresholds;                 // theta_k, healthy structures only
  Vector lowerBounds;                // per structure and tumor (scalar band edges)
  Vector upperBounds;
  double beta = 2.0;
  std::vector<std::string> structureNames;
  uint64_t seed = 0;
  double tumorBandWidth = 0.05;
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline Matrix uniformMatrix(std::mt19937_64& rng, Index rows, Index cols, double hi) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) M(i, j) = hi * uniform01(rng);
  }
  return M;
}

}  // namespace detail

/// Deterministic synthetic planning instance. Healthy-structure dose matrices
/// are scaled so the mean dose at x = e sits at the structure threshold; the
/// tumor band starts at +-5% of the mean tumor dose there and widens until the
/// instance has a strict interior.
inline std::pair<ForwardProblem, PlanningInstance> genPlanning(uint64_t seed, Index n,
                                                               Index mPerStructure, Index K) {
  if (n < 2 || mPerStructure < 1 || K < 2) {
    throw InvalidProblem("genPlanning: need n >= 2, m >= 1, K >= 2");
  }
  std::mt19937_64 rng(seed);
  PlanningInstance inst;
  inst.seed = seed;
  inst.beta = 2.0;
  inst.thresholds.resize(K);
  static const char* kNames[5] = {"bladder", "rectum", "femoral_l", "femoral_r", "ring"};
  for (Index k = 0; k < K; ++k) {
    inst.structureNames.push_back(k < 5 ? kNames[k] : "structure_" + std::to_string(k));
    inst.thresholds[k] = (k == 2 || k == 3) ? 30.0 : 50.0;  // femoral heads run cooler
  }
  inst.structureNames.push_back("tumor");

  for (Index k = 0; k < K; ++k) {
    // entries U[0, 2 theta/n]: the mean row dose at x = e lands at theta
    inst.doseMatrices.push_back(
        detail::uniformMatrix(rng, mPerStructure, n, 2.0 * inst.thresholds[k] / n));
  }
  const double tumorMean = 60.0;
  inst.doseMatrices.push_back(
      detail::uniformMatrix(rng, mPerStructure, n, 2.0 * tumorMean / n));
  const Matrix& tumor = inst.doseMatrices.back();

  inst.lowerBounds = Vector::Zero(K + 1);
  inst.upperBounds = Vector::Constant(K + 1, 81.9);

  const Vector ones = Vector::Ones(n);
  const double dbar = (tumor * ones).mean();

  auto buildProblem = [&](double bandWidth) {
    std::vector<ConvexFunction> objectives;
    for (Index k = 0; k < K; ++k) {
      objectives.push_back(ConvexFunction::hingeSquared(
          inst.doseMatrices[static_cast<size_t>(k)], Vector::Constant(mPerStructure, inst.thresholds[k])));
    }
    std::vector<ConvexFunction> rows;
    const double lT = (1.0 - bandWidth) * dbar;
    const double uT = (1.0 + bandWidth) * dbar;
    for (Index i = 0; i < mPerStructure; ++i) {
      rows.push_back(ConvexFunction::linear(tumor.row(i).transpose(), -uT));
      rows.push_back(ConvexFunction::linear(Vector(-tumor.row(i).transpose()), lT));
    }
    for (Index k = 0; k < K; ++k) {
      const Matrix& D = inst.doseMatrices[static_cast<size_t>(k)];
      for (Index i = 0; i < mPerStructure; ++i) {
        rows.push_back(ConvexFunction::linear(D.row(i).transpose(), -81.9));
      }
    }
    // 0 <= x <= beta * mean(x): smoothing rows keep any beamlet near the mean
    for (Index i = 0; i < n; ++i) {
      Vector c = Vector::Constant(n, -inst.beta / static_cast<double>(n));
      c[i] += 1.0;
      rows.push_back(ConvexFunction::linear(std::move(c), 0.0));
    }
    for (Index i = 0; i < n; ++i) {
      Vector c = Vector::Zero(n);
      c[i] = -1.0;
      rows.push_back(ConvexFunction::linear(std::move(c), 0.0));
    }
    return ForwardProblem(std::move(objectives), std::move(rows));
  };

  double bandWidth = 0.05;
  for (int attempt = 0; attempt < 24; ++attempt) {
    ForwardProblem p = buildProblem(bandWidth);
    SmoothProgram feas(ConvexFunction::linear(Vector::Zero(n)),
                       [&] {
                         std::vector<ConvexFunction> linearRows;
                         for (const auto& g : p.inequalities) linearRows.push_back(g);
                         return linearRows;
                       }(),
                       p.eqA, p.eqB);
    if (phaseOne(feas).has_value()) {
      inst.tumorBandWidth = bandWidth;
      return {std::move(p), std::move(inst)};
    }
    bandWidth *= 1.6;
  }
  throw InstanceInfeasible("genPlanning: no strict interior even with a wide tumor band");
}

}  // namespace invopt
