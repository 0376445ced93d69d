// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <stdexcept>
#include <string>

namespace invopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIterations };

inline const char* toString(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidProblem : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonPositiveObjective : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ZeroWeightVector : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InfeasibleInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Count of optimality certificates that failed their internal verification.
/// Every solver re-checks its KKT / strong-duality conditions before stamping
/// a result Optimal; a nonzero count means a solver tried to certify a bad
/// solution. The test suites assert this stays zero.
inline std::atomic<long>& certificationFailures() {
  static std::atomic<long> count{0};
  return count;
}

}  // namespace invopt
