// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "invopt/document.hpp"

namespace invopt {

/// Variances below 2^-14 count as perfect trade-off preservation and are
/// displayed as zero.
inline constexpr double kPerfectPreservationThreshold = 6.103515625e-05;  // 2^-14

inline double displayVariance(double v) {
  return v < kPerfectPreservationThreshold ? 0.0 : v;
}

struct TradeoffReport {
  std::string model;
  std::vector<std::string> objectiveNames;
  Vector alpha;  // L1-normalized
  Vector fXhat;
  Vector fXstar;
  Vector scaledDeviations;
  std::vector<bool> tight;
  double epsilonStar = 0.0;
  double deviationVariance = 0.0;
  bool perfectPreservation = false;
  std::string verdict;
  double crossModelEpsilonGap = std::numeric_limits<double>::quiet_NaN();
  double crossModelAlphaDistance = std::numeric_limits<double>::quiet_NaN();
  double wallSeconds = 0.0;
  int iterations = 0;
};

inline TradeoffReport buildTradeoffReport(const ForwardProblem& p, const Vector& xhat,
                                          const InverseResult& r, const std::string& model,
                                          std::vector<std::string> names, double wallSeconds) {
  TradeoffReport rep;
  rep.model = model;
  if (names.empty()) {
    for (Index k = 0; k < p.numObjectives(); ++k) {
      names.push_back("f" + std::to_string(k + 1));
    }
  }
  rep.objectiveNames = std::move(names);
  rep.alpha = r.alphaStar.alpha;
  rep.fXhat = p.objectiveValues(xhat);
  rep.fXstar = r.xStar.size() == p.nVars ? p.objectiveValues(r.xStar) : Vector();
  rep.scaledDeviations = r.scaledDeviations;
  rep.tight = r.tight;
  rep.epsilonStar = r.epsilonStar;
  rep.deviationVariance = r.deviationVariance;
  rep.perfectPreservation = r.deviationVariance < kPerfectPreservationThreshold;
  rep.verdict = toString(r.verdict);
  rep.wallSeconds = wallSeconds;
  rep.iterations = r.iterations;
  return rep;
}

inline std::string toCsv(const TradeoffReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "objective,alpha,f_xhat,f_xstar,ratio,tight,epsilon,variance\n";
  for (size_t k = 0; k < r.objectiveNames.size(); ++k) {
    const Index i = static_cast<Index>(k);
    os << r.objectiveNames[k] << ',' << r.alpha[i] << ',' << r.fXhat[i] << ','
       << (r.fXstar.size() > i ? r.fXstar[i] : std::numeric_limits<double>::quiet_NaN()) << ','
       << (r.scaledDeviations.size() > i ? r.scaledDeviations[i]
                                         : std::numeric_limits<double>::quiet_NaN())
       << ',' << (k < r.tight.size() && r.tight[k] ? 1 : 0) << ',' << r.epsilonStar << ','
       << displayVariance(r.deviationVariance) << '\n';
  }
  return os.str();
}

inline std::string toJson(const TradeoffReport& r) {
  Json j;
  j["model"] = r.model;
  j["epsilon"] = r.epsilonStar;
  j["variance"] = r.deviationVariance;
  j["varianceDisplayed"] = displayVariance(r.deviationVariance);
  j["perfectPreservation"] = r.perfectPreservation;
  j["verdict"] = r.verdict;
  Json rows = Json::array();
  for (size_t k = 0; k < r.objectiveNames.size(); ++k) {
    const Index i = static_cast<Index>(k);
    Json row;
    row["objective"] = r.objectiveNames[k];
    row["alpha"] = r.alpha[i];
    row["f_xhat"] = r.fXhat[i];
    if (r.fXstar.size() > i) row["f_xstar"] = r.fXstar[i];
    if (r.scaledDeviations.size() > i) row["ratio"] = r.scaledDeviations[i];
    row["tight"] = k < r.tight.size() && r.tight[k];
    rows.push_back(std::move(row));
  }
  j["objectives"] = std::move(rows);
  if (!std::isnan(r.crossModelEpsilonGap)) j["crossModelEpsilonGap"] = r.crossModelEpsilonGap;
  if (!std::isnan(r.crossModelAlphaDistance)) {
    j["crossModelAlphaDistance"] = r.crossModelAlphaDistance;
  }
  j["wallSeconds"] = r.wallSeconds;
  j["iterations"] = r.iterations;
  return j.dump(2) + "\n";
}

/// Sweep CSV: rows strictly ordered by alpha1; byte-identical across reruns
/// with the same seed.
inline std::string sweepToCsv(const std::vector<ParetoSample>& samples) {
  std::ostringstream os;
  os.precision(17);
  const Index K = samples.empty() ? 0 : samples.front().alpha.alpha.size();
  os << "sample";
  for (Index k = 0; k < K; ++k) os << ",alpha" << (k + 1);
  for (Index k = 0; k < K; ++k) os << ",f" << (k + 1);
  os << ",status\n";
  std::vector<size_t> order(samples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return samples[a].alpha.alpha[0] < samples[b].alpha.alpha[0];
  });
  for (size_t row = 0; row < order.size(); ++row) {
    const auto& s = samples[order[row]];
    os << row;
    for (Index k = 0; k < K; ++k) os << ',' << s.alpha.alpha[k];
    for (Index k = 0; k < K; ++k) {
      os << ',' << (s.objectiveValues.size() > k ? s.objectiveValues[k]
                                                 : std::numeric_limits<double>::quiet_NaN());
    }
    os << ',' << toString(s.kernel.status) << '\n';
  }
  return os.str();
}

}  // namespace invopt
