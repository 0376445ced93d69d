// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// Command-line front end: forward solves, Pareto sweeps, the inverse model
// family, instance generation, and a per-document verification battery.
// Exit codes: 0 success, 1 solver failure, 2 bad input.

#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "invopt/instances.hpp"
#include "invopt/report.hpp"

namespace invopt {

namespace cli_detail {

inline Vector parseCommaList(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) vals.push_back(std::stod(tok));
  }
  Vector v(static_cast<Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Index>(i)] = vals[i];
  return v;
}

struct CommonArgs {
  int example = 0;
  std::string problemPath;
  std::string xhatText;
  std::string outPath;
  std::string format = "json";
  uint64_t seed = 0;
  int jobs = 1;
};

inline void addCommon(CLI::App* cmd, CommonArgs* args, bool needsPoint) {
  cmd->add_option("--example", args->example, "built-in example id (1)");
  cmd->add_option("--problem", args->problemPath, "problem document path (JSON)");
  if (needsPoint) cmd->add_option("--xhat", args->xhatText, "input point, comma-separated");
  cmd->add_option("--out", args->outPath, "output file (default: stdout)");
  cmd->add_option("--format", args->format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", args->seed, "random seed");
  cmd->add_option("--jobs", args->jobs, "parallel jobs for independent solves")
      ->check(CLI::PositiveNumber);
}

struct LoadedProblem {
  ForwardProblem problem;
  Vector xhat;
  std::optional<ProblemDocument> doc;
};

inline LoadedProblem loadProblem(const CommonArgs& args) {
  if (args.example != 0 && !args.problemPath.empty()) {
    throw CLI::ValidationError("--example and --problem are mutually exclusive");
  }
  if (args.example == 1) {
    LoadedProblem lp{builtinExample1(), Vector(), std::nullopt};
    if (!args.xhatText.empty()) lp.xhat = parseCommaList(args.xhatText);
    return lp;
  }
  if (args.example != 0) {
    throw CLI::ValidationError("unknown --example id (only 1 is built in)");
  }
  if (args.problemPath.empty()) {
    throw CLI::ValidationError("one of --example or --problem is required");
  }
  std::ifstream in(args.problemPath);
  if (!in) throw CLI::ValidationError("cannot open " + args.problemPath);
  std::stringstream buf;
  buf << in.rdbuf();
  ProblemDocument doc = fromJson(buf.str());
  LoadedProblem lp{doc.problem, doc.xhat, std::move(doc)};
  if (!args.xhatText.empty()) lp.xhat = parseCommaList(args.xhatText);
  return lp;
}

inline void writeOutput(const CommonArgs& args, const std::string& text) {
  if (args.outPath.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(args.outPath);
  if (!out) throw CLI::ValidationError("cannot write " + args.outPath);
  out << text;
}

inline ScalingScheme resolveScheme(const ForwardProblem& p, const Vector& xhat,
                                   const std::string& name, const std::string& muText,
                                   Index kRef) {
  if (name == "absolute") return absoluteScheme(p.numObjectives());
  if (name == "general") {
    if (muText.empty()) throw CLI::ValidationError("--scheme general requires --mu");
    return generalScheme(parseCommaList(muText), kRef);
  }
  return relativeScheme(p, xhat, kRef);
}

inline int kesPenaltyFrom(const std::string& s, KesPenalty* out) {
  if (s == "sos") *out = KesPenalty::SumOfSquares;
  else if (s == "l1") *out = KesPenalty::L1;
  else if (s == "gaplinear") *out = KesPenalty::GapLinear;
  else return 2;
  return 0;
}

// Property battery for `verify`: finite-difference gradients, scaling-scheme
// identities, solver certification, inverse-model invariants, round-trip.
inline int runVerify(const LoadedProblem& lp, uint64_t seed, std::ostream& os) {
  const ForwardProblem& p = lp.problem;
  int failures = 0;
  auto report = [&](const std::string& name, bool pass, const std::string& detail = "") {
    os << (pass ? "PASS " : "FAIL ") << name;
    if (!pass && !detail.empty()) os << ": " << detail;
    os << "\n";
    if (!pass) ++failures;
  };

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto unit = [&rng]() { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };

  {  // gradients against central finite differences
    double worst = 0.0;
    std::vector<const ConvexFunction*> fns;
    for (const auto& f : p.objectives) fns.push_back(&f);
    for (const auto& g : p.inequalities) fns.push_back(&g);
    for (const auto* f : fns) {
      for (int trial = 0; trial < 8; ++trial) {
        Vector x(p.nVars);
        for (Index i = 0; i < p.nVars; ++i) x[i] = 4.0 * unit() - 2.0;
        Vector grad = f->gradient(x);
        const double h = 1e-6;
        for (Index i = 0; i < p.nVars; ++i) {
          Vector xp = x, xm = x;
          xp[i] += h;
          xm[i] -= h;
          const double fd = (f->value(xp) - f->value(xm)) / (2.0 * h);
          worst = std::max(worst, std::abs(fd - grad[i]) /
                                      (1.0 + grad.cwiseAbs().maxCoeff()));
        }
      }
    }
    report("gradient-finite-difference", worst <= 1e-5, "worst " + std::to_string(worst));
  }

  Vector xhat = lp.xhat;
  if (xhat.size() != p.nVars) {
    report("input-point", false, "xhat missing or of wrong dimension");
    return failures == 0 ? 0 : 1;
  }

  {  // forward solve with uniform weights + certification
    WeightVector uniform(Vector::Constant(p.numObjectives(),
                                          1.0 / static_cast<double>(p.numObjectives())));
    ParetoSample s = solveFop(p, uniform);
    report("forward-uniform-weights", s.kernel.status == SolveStatus::Optimal,
           toString(s.kernel.status));
  }

  bool relativeOk = true;
  try {
    ScalingScheme scheme = relativeScheme(p, xhat);
    double worst = 0.0;
    for (Index k1 = 0; k1 < p.numObjectives(); ++k1) {
      worst = std::max(worst, std::abs(scheme.pairwiseFactor(k1, k1) - 1.0));
      for (Index k2 = 0; k2 < p.numObjectives(); ++k2) {
        worst = std::max(worst, std::abs(scheme.pairwiseFactor(k1, k2) *
                                             scheme.pairwiseFactor(k2, k1) -
                                         1.0));
        for (Index k3 = 0; k3 < p.numObjectives(); ++k3) {
          worst = std::max(worst, std::abs(scheme.pairwiseFactor(k1, k2) *
                                               scheme.pairwiseFactor(k2, k3) -
                                           scheme.pairwiseFactor(k1, k3)));
        }
      }
    }
    report("scaling-scheme-identities", worst <= 1e-12, "worst " + std::to_string(worst));
  } catch (const NonPositiveObjective&) {
    relativeOk = false;
    os << "SKIP scaling-scheme-identities (nonpositive objective at xhat)\n";
  }

  if (relativeOk) {
    InverseResult r = solveIopRelative(p, xhat);
    report("iop-relative-solve", r.status == SolveStatus::Optimal, toString(r.status));
    if (r.status == SolveStatus::Optimal) {
      const double norm = std::abs(r.scheme.mu.dot(r.alphaRaw) - 1.0);
      report("iop-relative-weight-normalization", norm <= 1e-6, std::to_string(norm));
      double corollaryGap = 0.0;
      for (Index k = 0; k < p.numObjectives(); ++k) {
        if (r.alphaStar.alpha[k] > 1e-7) {
          corollaryGap = std::max(corollaryGap,
                                  std::abs(r.scaledDeviations[k] - r.epsilonStar));
        }
      }
      report("iop-relative-tightness", corollaryGap <= 1e-6, std::to_string(corollaryGap));
      const double gap = resolveConsistency(p, r.alphaStar, r.xStar);
      report("iop-relative-resolve-consistency", gap <= 1e-6, std::to_string(gap));
    }
  }
  {
    InverseResult r = solveIopAbsolute(p, xhat);
    report("iop-absolute-solve", r.status == SolveStatus::Optimal, toString(r.status));
  }
  if (lp.doc.has_value()) {
    const std::string once = toJson(*lp.doc);
    const std::string twice = toJson(fromJson(once));
    report("document-round-trip", once == twice);
  }
  report("solver-certification-counter", certificationFailures().load() == 0,
         std::to_string(certificationFailures().load()));
  return failures == 0 ? 0 : 1;
}

}  // namespace cli_detail

inline int runCli(int argc, const char* const* argv) {
  using cli_detail::CommonArgs;
  CLI::App app{"trade-off preserving inverse multi-objective optimization toolkit"};
  app.require_subcommand(1);

  CommonArgs fwdArgs;
  std::string fwdAlpha;
  auto* fwd = app.add_subcommand("forward", "solve FOP(alpha)");
  cli_detail::addCommon(fwd, &fwdArgs, false);
  fwd->add_option("--alpha", fwdAlpha, "objective weights, comma-separated")->required();

  CommonArgs sweepArgs;
  int sweepGrid = 11;
  auto* sweep = app.add_subcommand("sweep", "sample the Pareto frontier");
  cli_detail::addCommon(sweep, &sweepArgs, false);
  sweep->add_option("--grid", sweepGrid, "number of weight samples")->check(CLI::PositiveNumber);

  CommonArgs invArgs;
  std::string model = "iop_r";
  std::string schemeName = "relative";
  std::string muText;
  Index kRef = 1;
  Index kesFix = 1;
  std::string kesPenalty = "sos";
  double kappa = 0.0;
  double slpStepTol = 1e-3;
  auto* inv = app.add_subcommand("invert", "impute objective weights");
  cli_detail::addCommon(inv, &invArgs, true);
  inv->add_option("--model", model, "iop|iop_r|iop_a|liop|slp|kes")
      ->check(CLI::IsMember({"iop", "iop_r", "iop_a", "liop", "slp", "kes"}));
  inv->add_option("--scheme", schemeName, "relative|absolute|general")
      ->check(CLI::IsMember({"relative", "absolute", "general"}));
  inv->add_option("--mu", muText, "general-scheme scaling factors");
  inv->add_option("--kref", kRef, "reference objective (1-based)");
  inv->add_option("--kes-fix", kesFix, "KES: weight fixed to one (1-based)");
  inv->add_option("--kes-penalty", kesPenalty, "sos|l1|gaplinear")
      ->check(CLI::IsMember({"sos", "l1", "gaplinear"}));
  inv->add_option("--kappa", kappa, "trust-region half-width for liop");
  inv->add_option("--slp-step-tol", slpStepTol, "SLP step-norm termination");

  CommonArgs classicalArgs;
  auto* classical = app.add_subcommand("classical", "KKT feasibility inverse");
  cli_detail::addCommon(classical, &classicalArgs, true);

  CommonArgs genArgs;
  Index genN = 20, genM = 50, genK = 5;
  auto* gen = app.add_subcommand("gen-instance", "generate a synthetic planning instance");
  cli_detail::addCommon(gen, &genArgs, false);
  gen->add_option("--n", genN, "beamlet count")->check(CLI::PositiveNumber);
  gen->add_option("--m", genM, "voxels per structure")->check(CLI::PositiveNumber);
  gen->add_option("--k", genK, "number of healthy-structure objectives")
      ->check(CLI::PositiveNumber);

  CommonArgs verifyArgs;
  auto* verify = app.add_subcommand("verify", "run the property battery on a document");
  cli_detail::addCommon(verify, &verifyArgs, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fwd->parsed()) {
      auto lp = cli_detail::loadProblem(fwdArgs);
      WeightVector alpha(cli_detail::parseCommaList(fwdAlpha));
      ParetoSample s = solveFop(lp.problem, alpha);
      if (s.kernel.status != SolveStatus::Optimal) {
        std::cerr << "forward solve failed: " << toString(s.kernel.status) << "\n";
        return 1;
      }
      Json j;
      j["alpha"] = cli_detail::parseCommaList(fwdAlpha).size() > 0
                       ? detail::vectorToJson(alpha.alpha)
                       : Json::array();
      j["x"] = detail::vectorToJson(s.x);
      j["f"] = detail::vectorToJson(s.objectiveValues);
      j["status"] = toString(s.kernel.status);
      j["iterations"] = s.kernel.iterations;
      cli_detail::writeOutput(fwdArgs, j.dump(2) + "\n");
      return 0;
    }

    if (sweep->parsed()) {
      auto lp = cli_detail::loadProblem(sweepArgs);
      auto samples = sweepPareto(lp.problem, sweepGrid, sweepArgs.seed, {}, sweepArgs.jobs);
      int failed = 0;
      for (const auto& s : samples) {
        if (s.kernel.status != SolveStatus::Optimal) ++failed;
      }
      if (sweepArgs.format == "csv") {
        cli_detail::writeOutput(sweepArgs, sweepToCsv(samples));
      } else {
        Json arr = Json::array();
        for (const auto& s : samples) {
          Json row;
          row["alpha"] = detail::vectorToJson(s.alpha.alpha);
          row["x"] = detail::vectorToJson(s.x);
          row["f"] = detail::vectorToJson(s.objectiveValues);
          row["status"] = toString(s.kernel.status);
          arr.push_back(std::move(row));
        }
        cli_detail::writeOutput(sweepArgs, arr.dump(2) + "\n");
      }
      return failed == 0 ? 0 : 1;
    }

    if (inv->parsed()) {
      auto lp = cli_detail::loadProblem(invArgs);
      if (lp.xhat.size() != lp.problem.nVars) {
        std::cerr << "invert: --xhat of dimension " << lp.problem.nVars << " required\n";
        return 2;
      }
      const auto t0 = std::chrono::steady_clock::now();
      auto seconds = [&t0]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      };

      if (model == "kes") {
        KesConfig cfg;
        if (cli_detail::kesPenaltyFrom(kesPenalty, &cfg.penalty) != 0) return 2;
        if (kesFix < 1 || kesFix > lp.problem.numObjectives()) {
          std::cerr << "invert: --kes-fix out of range\n";
          return 2;
        }
        cfg.normalization = KesNormalization::fixWeight(kesFix - 1);
        KesOutcome kes = solveKes(lp.problem, lp.xhat, cfg);
        if (kes.status != SolveStatus::Optimal) {
          std::cerr << "kes solve failed: " << toString(kes.status) << "\n";
          return 1;
        }
        ParetoSample plan = solveFop(lp.problem, kes.weights);
        Json j;
        j["model"] = "kes";
        j["alpha"] = detail::vectorToJson(kes.weights.alpha);
        j["penalty"] = kesPenalty;
        j["penaltyValue"] = kes.residuals.penaltyValue;
        j["stationarityResidual"] = kes.certificate.kktResiduals.stationarity;
        if (plan.kernel.status == SolveStatus::Optimal) {
          Vector fHat = lp.problem.objectiveValues(lp.xhat);
          Vector ratios = plan.objectiveValues.array() / fHat.array();
          const double mean = ratios.mean();
          const double var = (ratios.array() - mean).square().mean();
          j["f_xhat"] = detail::vectorToJson(fHat);
          j["f_xstar"] = detail::vectorToJson(plan.objectiveValues);
          j["ratios"] = detail::vectorToJson(ratios);
          j["ratioVariance"] = var;
          j["ratioVarianceDisplayed"] = displayVariance(var);
        }
        j["wallSeconds"] = seconds();
        cli_detail::writeOutput(invArgs, j.dump(2) + "\n");
        return 0;
      }

      ScalingScheme scheme =
          model == "iop_a" ? absoluteScheme(lp.problem.numObjectives())
          : model == "iop_r"
              ? relativeScheme(lp.problem, lp.xhat, kRef - 1)
              : cli_detail::resolveScheme(lp.problem, lp.xhat, schemeName, muText, kRef - 1);

      InverseResult result;
      int iterations = 0;
      if (model == "liop") {
        std::optional<double> box;
        if (inv->count("--kappa") > 0) box = kappa;
        result = solveLiop(LiopInstance(lp.problem, lp.xhat, lp.xhat, scheme, box));
      } else if (model == "slp") {
        SlpOptions so;
        so.stepTol = slpStepTol;
        SlpTrace trace = runSlp(lp.problem, lp.xhat, scheme, so);
        result = trace.finalResult;
        iterations = static_cast<int>(trace.iterates.size());
        if (trace.terminationReason == SlpTermination::LpFailure) {
          std::cerr << "slp: LP failure\n";
          return 1;
        }
      } else {
        result = solveIop(lp.problem, lp.xhat, scheme);
      }
      if (result.status != SolveStatus::Optimal) {
        std::cerr << "invert failed: " << toString(result.status) << "\n";
        return 1;
      }
      TradeoffReport rep =
          buildTradeoffReport(lp.problem, lp.xhat, result, model, {}, seconds());
      if (iterations > 0) rep.iterations = iterations;
      cli_detail::writeOutput(invArgs,
                              invArgs.format == "csv" ? toCsv(rep) : toJson(rep));
      return 0;
    }

    if (classical->parsed()) {
      auto lp = cli_detail::loadProblem(classicalArgs);
      if (lp.xhat.size() != lp.problem.nVars) {
        std::cerr << "classical: --xhat required\n";
        return 2;
      }
      auto outcome = classicalInverse(lp.problem, lp.xhat);
      Json j;
      j["model"] = "classical";
      if (outcome.weights.has_value()) {
        j["verdict"] = "weights_found";
        j["alpha"] = detail::vectorToJson(outcome.weights->alpha);
      } else {
        j["verdict"] = "only_zero_solution";
      }
      cli_detail::writeOutput(classicalArgs, j.dump(2) + "\n");
      return 0;
    }

    if (gen->parsed()) {
      auto [problem, inst] = genPlanning(genArgs.seed, genN, genM, genK);
      ProblemDocument doc;
      doc.model = "forward";
      doc.seed = genArgs.seed;
      doc.problem = std::move(problem);
      doc.xhat = Vector::Ones(genN);
      Json meta;
      meta["structures"] = inst.structureNames;
      meta["tumorBandWidth"] = inst.tumorBandWidth;
      std::cerr << "generated planning instance: " << meta.dump() << "\n";
      cli_detail::writeOutput(genArgs, toJson(doc));
      return 0;
    }

    if (verify->parsed()) {
      auto lp = cli_detail::loadProblem(verifyArgs);
      std::ostringstream os;
      const int rc = cli_detail::runVerify(lp, verifyArgs.seed, os);
      cli_detail::writeOutput(verifyArgs, os.str());
      return rc;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InstanceInfeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

inline int runCli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("invopt");
  for (const auto& a : args) argv.push_back(a.c_str());
  return runCli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace invopt
