// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// Problem-document serialization: one UTF-8 JSON text per instance, matrices
// as row-major arrays, canonical key order so emit(parse(s)) reproduces s.

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "invopt/kes.hpp"

namespace invopt {

using Json = nlohmann::ordered_json;

struct SolverDoc {
  double tolerance = 1e-8;
  double complementarityTarget = 1e-9;
  int maxNewtonSteps = 200;
  std::optional<double> kappa;
  double slpStepTol = 1e-3;
  int slpMaxIterations = 100;
  int jobs = 1;
};

struct KesDoc {
  std::string penalty = "sos";  // sos | l1 | gaplinear
  std::string normalization = "fix";  // fix | mu | l1
  Index fixIndex = 0;
  bool includeEqResiduals = true;
  bool feasibleL1Form = false;
  bool scaleStationarity = true;
};

struct ProblemDocument {
  std::string schemaVersion = "1";
  std::string model = "iop_r";  // iop|iop_r|iop_a|liop|slp|kes|classical|forward|sweep
  uint64_t seed = 0;
  ForwardProblem problem;
  Vector xhat;
  std::optional<Vector> alpha;
  std::optional<int> sweepGrid;
  std::optional<ScalingScheme> scheme;
  std::optional<KesDoc> kes;
  SolverDoc solver;
};

namespace detail {

inline Json vectorToJson(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Vector vectorFromJson(const Json& a) {
  Vector v(static_cast<Index>(a.size()));
  Index i = 0;
  for (const auto& x : a) v[i++] = x.get<double>();
  return v;
}

inline Json matrixToJson(const Matrix& M) {
  Json j;
  j["rows"] = M.rows();
  j["cols"] = M.cols();
  Json data = Json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index k = 0; k < M.cols(); ++k) data.push_back(M(i, k));
  }
  j["data"] = std::move(data);
  return j;
}

inline Matrix matrixFromJson(const Json& j) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  if (static_cast<Index>(data.size()) != rows * cols) {
    throw InvalidProblem("document: matrix payload size mismatch");
  }
  Matrix M(rows, cols);
  Index idx = 0;
  for (const auto& x : data) {
    M(idx / cols, idx % cols) = x.get<double>();
    ++idx;
  }
  return M;
}

inline Json functionToJson(const ConvexFunction& f) {
  Json j;
  if (const auto* lin = f.asLinear()) {
    j["kind"] = "linear";
    j["c"] = vectorToJson(lin->c);
    j["d"] = lin->d;
  } else if (const auto* quad = f.asQuadratic()) {
    j["kind"] = "quadratic";
    j["Q"] = matrixToJson(quad->Q);
    j["q"] = vectorToJson(quad->q);
    j["d"] = quad->d;
  } else {
    const auto* h = f.asHingeSquared();
    j["kind"] = "hinge_squared";
    j["M"] = matrixToJson(h->M);
    j["t"] = vectorToJson(h->t);
  }
  return j;
}

inline ConvexFunction functionFromJson(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") {
    return ConvexFunction::linear(vectorFromJson(j.at("c")), j.at("d").get<double>());
  }
  if (kind == "quadratic") {
    return ConvexFunction::quadratic(matrixFromJson(j.at("Q")), vectorFromJson(j.at("q")),
                                     j.at("d").get<double>());
  }
  if (kind == "hinge_squared") {
    return ConvexFunction::hingeSquared(matrixFromJson(j.at("M")), vectorFromJson(j.at("t")));
  }
  throw InvalidProblem("document: unknown function kind '" + kind + "'");
}

}  // namespace detail

inline Json problemToJson(const ForwardProblem& p) {
  Json j;
  j["nVars"] = p.nVars;
  Json objs = Json::array();
  for (const auto& f : p.objectives) objs.push_back(detail::functionToJson(f));
  j["objectives"] = std::move(objs);
  Json ineqs = Json::array();
  for (const auto& g : p.inequalities) ineqs.push_back(detail::functionToJson(g));
  j["inequalities"] = std::move(ineqs);
  j["eqA"] = detail::matrixToJson(p.eqA);
  j["eqB"] = detail::vectorToJson(p.eqB);
  return j;
}

inline ForwardProblem problemFromJson(const Json& j) {
  std::vector<ConvexFunction> objectives;
  for (const auto& f : j.at("objectives")) objectives.push_back(detail::functionFromJson(f));
  std::vector<ConvexFunction> inequalities;
  for (const auto& g : j.at("inequalities")) inequalities.push_back(detail::functionFromJson(g));
  ForwardProblem p(std::move(objectives), std::move(inequalities),
                   detail::matrixFromJson(j.at("eqA")), detail::vectorFromJson(j.at("eqB")));
  if (p.nVars != j.at("nVars").get<Index>()) {
    throw InvalidProblem("document: nVars disagrees with the function dimensions");
  }
  return p;
}

inline std::string toJson(const ProblemDocument& doc) {
  Json j;
  j["schemaVersion"] = doc.schemaVersion;
  j["model"] = doc.model;
  j["seed"] = doc.seed;
  j["problem"] = problemToJson(doc.problem);
  j["xhat"] = detail::vectorToJson(doc.xhat);
  if (doc.alpha.has_value()) j["alpha"] = detail::vectorToJson(*doc.alpha);
  if (doc.sweepGrid.has_value()) j["sweepGrid"] = *doc.sweepGrid;
  if (doc.scheme.has_value()) {
    Json s;
    s["kind"] = toString(doc.scheme->kind);
    s["mu"] = detail::vectorToJson(doc.scheme->mu);
    s["referenceObjective"] = doc.scheme->referenceObjective;
    j["scheme"] = std::move(s);
  }
  if (doc.kes.has_value()) {
    Json k;
    k["penalty"] = doc.kes->penalty;
    k["normalization"] = doc.kes->normalization;
    k["fixIndex"] = doc.kes->fixIndex;
    k["includeEqResiduals"] = doc.kes->includeEqResiduals;
    k["feasibleL1Form"] = doc.kes->feasibleL1Form;
    k["scaleStationarity"] = doc.kes->scaleStationarity;
    j["kes"] = std::move(k);
  }
  Json s;
  s["tolerance"] = doc.solver.tolerance;
  s["complementarityTarget"] = doc.solver.complementarityTarget;
  s["maxNewtonSteps"] = doc.solver.maxNewtonSteps;
  s["kappa"] = doc.solver.kappa.has_value() ? Json(*doc.solver.kappa) : Json(nullptr);
  s["slpStepTol"] = doc.solver.slpStepTol;
  s["slpMaxIterations"] = doc.solver.slpMaxIterations;
  s["jobs"] = doc.solver.jobs;
  j["solver"] = std::move(s);
  return j.dump(2) + "\n";
}

inline ProblemDocument fromJson(const std::string& text) {
  Json j = Json::parse(text);
  ProblemDocument doc;
  doc.schemaVersion = j.at("schemaVersion").get<std::string>();
  doc.model = j.at("model").get<std::string>();
  doc.seed = j.at("seed").get<uint64_t>();
  doc.problem = problemFromJson(j.at("problem"));
  doc.xhat = detail::vectorFromJson(j.at("xhat"));
  if (j.contains("alpha")) doc.alpha = detail::vectorFromJson(j.at("alpha"));
  if (j.contains("sweepGrid")) doc.sweepGrid = j.at("sweepGrid").get<int>();
  if (j.contains("scheme")) {
    const auto& s = j.at("scheme");
    const std::string kind = s.at("kind").get<std::string>();
    ScalingScheme scheme;
    scheme.kind = kind == "relative"  ? ScalingKind::Relative
                  : kind == "general" ? ScalingKind::General
                                      : ScalingKind::Absolute;
    scheme.mu = detail::vectorFromJson(s.at("mu"));
    scheme.referenceObjective = s.at("referenceObjective").get<Index>();
    doc.scheme = scheme;
  }
  if (j.contains("kes")) {
    const auto& k = j.at("kes");
    KesDoc kd;
    kd.penalty = k.at("penalty").get<std::string>();
    kd.normalization = k.at("normalization").get<std::string>();
    kd.fixIndex = k.at("fixIndex").get<Index>();
    kd.includeEqResiduals = k.at("includeEqResiduals").get<bool>();
    kd.feasibleL1Form = k.at("feasibleL1Form").get<bool>();
    kd.scaleStationarity = k.at("scaleStationarity").get<bool>();
    doc.kes = kd;
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    doc.solver.tolerance = s.at("tolerance").get<double>();
    doc.solver.complementarityTarget = s.at("complementarityTarget").get<double>();
    doc.solver.maxNewtonSteps = s.at("maxNewtonSteps").get<int>();
    if (!s.at("kappa").is_null()) doc.solver.kappa = s.at("kappa").get<double>();
    doc.solver.slpStepTol = s.at("slpStepTol").get<double>();
    doc.solver.slpMaxIterations = s.at("slpMaxIterations").get<int>();
    doc.solver.jobs = s.at("jobs").get<int>();
  }
  return doc;
}

}  // namespace invopt
