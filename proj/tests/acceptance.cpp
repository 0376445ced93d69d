// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// its wall time; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "invopt/invopt.hpp"
#include "support/oracles.hpp"

using namespace invopt;
using namespace invopt::testing;

namespace {

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    } else if (!ok) {
      detail += "; " + what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s %2d %-28s %7.2fs%s%s\n", c.pass ? "PASS" : "FAIL", id, name.c_str(), seconds,
              c.pass ? "" : "  ", c.pass ? "" : c.detail.c_str());
  std::fflush(stdout);
  if (!c.pass) ++failures;
}

double near(double a, double b) { return std::abs(a - b); }

double planVariance(const ForwardProblem& p, const Vector& xhat, const WeightVector& alpha) {
  ParetoSample plan = solveFop(p, alpha);
  if (plan.kernel.status != SolveStatus::Optimal) return kInf;
  Vector ratios = plan.objectiveValues.array() / p.objectiveValues(xhat).array();
  const double mean = ratios.mean();
  return (ratios.array() - mean).square().mean();
}

}  // namespace

int main() {
  auto ex1 = builtinExample1();
  auto pts = example1Points();

  criterion(1, "example-2-golden", [&](Check& c) {
    KesConfig cfg;
    cfg.normalization = KesNormalization::fixWeight(0);
    KesOutcome first = solveKes(ex1, pts.b, cfg);
    c.require(first.status == SolveStatus::Optimal, "KES fix1 not optimal");
    c.require(near(first.weights.alpha[0], 1.0) <= 1e-4 &&
                  near(first.weights.alpha[1], 0.0) <= 1e-4,
              "KES fix1 weights not (1,0)");
    ParetoSample plan1 = solveFop(ex1, WeightVector(first.weights.l1Normalized()));
    c.require(near(plan1.objectiveValues[0], 7.244) <= 5e-3 &&
                  near(plan1.objectiveValues[1], 11.910) <= 5e-3,
              "fix1 plan objective vector off");

    cfg.normalization = KesNormalization::fixWeight(1);
    KesOutcome second = solveKes(ex1, pts.b, cfg);
    c.require(second.status == SolveStatus::Optimal, "KES fix2 not optimal");
    c.require(near(second.weights.alpha[0], 0.0) <= 1e-4 &&
                  near(second.weights.alpha[1], 1.0) <= 1e-4,
              "KES fix2 weights not (0,1)");
    ParetoSample plan2 = solveFop(ex1, WeightVector(second.weights.l1Normalized()));
    c.require(near(plan2.objectiveValues[0], 11.910) <= 5e-3 &&
                  near(plan2.objectiveValues[1], 7.244) <= 5e-3,
              "fix2 plan objective vector off");
  });

  criterion(2, "example-1-classical", [&](Check& c) {
    auto atA = classicalInverse(ex1, pts.a);
    c.require(atA.weights.has_value(), "no weights at the Pareto point");
    if (atA.weights.has_value()) {
      c.require(near(atA.weights->alpha[0], 0.5) <= 1e-6 &&
                    near(atA.weights->alpha[1], 0.5) <= 1e-6,
                "weights differ from (0.5, 0.5)");
    }
    c.require(!classicalInverse(ex1, pts.b).weights.has_value(), "interior point not rejected");
    c.require(!classicalInverse(ex1, pts.c).weights.has_value(),
              "infeasible point not rejected");
  });

  criterion(3, "example-3-golden", [&](Check& c) {
    Vector fd = ex1.objectiveValues(pts.d);
    Vector fe = ex1.objectiveValues(pts.e);
    c.require(near(fd[0], 13.160) <= 5e-3 && near(fd[1], 8.004) <= 5e-3,
              "f(xhat_d) off the printed values");
    c.require(near(fe[0], 14.000) <= 5e-3 && near(fe[1], 8.004) <= 5e-3,
              "f(xhat_e) off the printed values");
    InverseResult rd = solveIopRelative(ex1, pts.d);
    InverseResult re = solveIopRelative(ex1, pts.e);
    c.require(rd.status == SolveStatus::Optimal && re.status == SolveStatus::Optimal,
              "solve failed");
    c.require(near(rd.alphaStar.alpha[0], 0.0) <= 1e-4 &&
                  near(rd.alphaStar.alpha[1], 1.0) <= 1e-4,
              "alpha(d) differs from (0,1)");
    c.require(near(re.alphaStar.alpha[0], 0.0) <= 1e-4 &&
                  near(re.alphaStar.alpha[1], 1.0) <= 1e-4,
              "alpha(e) differs from (0,1)");
    c.require((rd.xStar - re.xStar).cwiseAbs().maxCoeff() <= 1e-5,
              "the two runs disagree on x*");
    c.require(rd.degenerate.size() == 2 && rd.degenerate[0],
              "first objective not flagged degenerate for xhat_d");
    c.require(!re.degenerate[0], "xhat_e spuriously flagged degenerate");
  });

  criterion(4, "theorem-1b-resolve", [&](Check& c) {
    for (const Vector& pt : {pts.a, pts.b, pts.c, pts.d, pts.e}) {
      InverseResult rel = solveIopRelative(ex1, pt);
      InverseResult abs = solveIopAbsolute(ex1, pt);
      c.require(rel.status == SolveStatus::Optimal && abs.status == SolveStatus::Optimal,
                "example solve failed");
      c.require(resolveConsistency(ex1, rel.alphaStar, rel.xStar) <= 1e-6,
                "relative re-solve drifted on a worked point");
      c.require(resolveConsistency(ex1, abs.alphaStar, abs.xStar) <= 1e-6,
                "absolute re-solve drifted on a worked point");
    }
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      RandomInstance inst = randomQuadraticInstance(seed, seed % 4 == 0);
      InverseResult rel = solveIopRelative(inst.problem, inst.xhat);
      InverseResult abs = solveIopAbsolute(inst.problem, inst.xhat);
      c.require(rel.status == SolveStatus::Optimal && abs.status == SolveStatus::Optimal,
                "random solve failed (seed " + std::to_string(seed) + ")");
      c.require(resolveConsistency(inst.problem, rel.alphaStar, rel.xStar) <= 1e-6,
                "relative re-solve drifted (seed " + std::to_string(seed) + ")");
      c.require(resolveConsistency(inst.problem, abs.alphaStar, abs.xStar) <= 1e-6,
                "absolute re-solve drifted (seed " + std::to_string(seed) + ")");
    }
  });

  criterion(5, "corollary-1-2-equal-deviation", [&](Check& c) {
    auto checkOne = [&](const ForwardProblem& p, const Vector& xhat, bool relative,
                        const std::string& tag) {
      InverseResult r = relative ? solveIopRelative(p, xhat) : solveIopAbsolute(p, xhat);
      c.require(r.status == SolveStatus::Optimal, tag + ": solve failed");
      if (r.alphaStar.alpha.minCoeff() <= 1e-7) return;  // premise not met
      c.require(r.deviationVariance < 1e-10, tag + ": deviation variance too large");
      c.require(r.deviationVariance < kPerfectPreservationThreshold,
                tag + ": misses the perfect-preservation threshold");
    };
    checkOne(ex1, pts.b, true, "example rel");
    checkOne(ex1, pts.b, false, "example abs");
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      RandomInstance inst = randomQuadraticInstance(seed, false);
      checkOne(inst.problem, inst.xhat, true, "seed " + std::to_string(seed) + " rel");
      checkOne(inst.problem, inst.xhat, false, "seed " + std::to_string(seed) + " abs");
    }
  });

  criterion(6, "outer-approximation-bound", [&](Check& c) {
    auto boundOne = [&](const ForwardProblem& p, const Vector& xhat, const ScalingScheme& s,
                        const std::string& tag) {
      InverseResult lin = solveLiop(LiopInstance(p, xhat, xhat, s));
      InverseResult exact = solveIop(p, xhat, s);
      c.require(lin.status == SolveStatus::Optimal && exact.status == SolveStatus::Optimal,
                tag + ": solve failed");
      c.require(!lin.trustRegionBinding, tag + ": trust region bound the linearization");
      c.require(lin.epsilonStar <= exact.epsilonStar + 1e-8, tag + ": lower bound violated");
    };
    boundOne(ex1, pts.b, relativeScheme(ex1, pts.b), "example");
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      RandomInstance inst = randomQuadraticInstance(seed, false);
      boundOne(inst.problem, inst.xhat, relativeScheme(inst.problem, inst.xhat),
               "quad seed " + std::to_string(seed));
    }
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      RandomInstance inst = randomLinearInstance(seed);
      ScalingScheme s = relativeScheme(inst.problem, inst.xhat);
      InverseResult lin = solveLiop(LiopInstance(inst.problem, inst.xhat, inst.xhat, s));
      InverseResult exact = solveIop(inst.problem, inst.xhat, s);
      c.require(lin.status == SolveStatus::Optimal && exact.status == SolveStatus::Optimal,
                "linear seed " + std::to_string(seed) + ": solve failed");
      c.require(std::abs(lin.epsilonStar - exact.epsilonStar) <= 1e-8,
                "linear seed " + std::to_string(seed) + ": models not equivalent");
    }
  });

  criterion(7, "gap-extremum-oracle", [&](Check& c) {
    InverseResult rel = solveIopRelative(ex1, pts.b);
    InverseResult abs = solveIopAbsolute(ex1, pts.b);
    c.require(rel.status == SolveStatus::Optimal && abs.status == SolveStatus::Optimal,
              "solve failed");
    double minRelGap = kInf;  // Eq.-19 form alpha'f(xhat) / alpha'f(x(alpha)) >= 1
    double minAbsGap = kInf;
    for (int i = 0; i <= 1000; ++i) {
      Vector a(2);
      a[0] = static_cast<double>(i) / 1000.0;
      a[1] = 1.0 - a[0];
      WeightVector w(a);
      minRelGap = std::min(minRelGap, 1.0 / relativeGap(ex1, pts.b, w));
      minAbsGap = std::min(minAbsGap, absoluteGap(ex1, pts.b, w));
    }
    c.require(near(minRelGap, 1.0 / rel.epsilonStar) <= 5e-3,
              "relative gap extremum misses 1/epsilon*");
    c.require(near(minAbsGap, -abs.epsilonStar) <= 5e-3,
              "absolute gap extremum misses -epsilon*");
  });

  criterion(8, "kes-liop-bridges", [&](Check& c) {
    auto bridgeBoth = [&](const ForwardProblem& p, const Vector& xhat, const std::string& tag) {
      for (bool relative : {true, false}) {
        ScalingScheme s =
            relative ? relativeScheme(p, xhat) : absoluteScheme(p.numObjectives());
        BridgeReport br = kesLiopBridge(p, xhat, s);
        c.require(br.distance <= 1e-6, tag + (relative ? " rel" : " abs") +
                                           ": dual bridge distance " +
                                           std::to_string(br.distance));
      }
      for (Index k = 0; k < std::min<Index>(2, p.numObjectives()); ++k) {
        BridgeReport br = kesAsDegenerateIop(p, xhat, k);
        c.require(br.distance <= 1e-6, tag + ": degenerate bridge distance " +
                                           std::to_string(br.distance));
      }
    };
    bridgeBoth(ex1, pts.b, "example");
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      RandomInstance quad = randomQuadraticInstance(seed, seed % 3 == 0);
      bridgeBoth(quad.problem, quad.xhat, "quad " + std::to_string(seed));
      RandomInstance lin = randomLinearInstance(seed);
      bridgeBoth(lin.problem, lin.xhat, "lin " + std::to_string(seed));
    }
  });

  criterion(9, "brute-force-iop-oracle", [&](Check& c) {
    for (const auto& [tag, pt] : {std::pair<std::string, Vector>{"b", pts.b}, {"c", pts.c}}) {
      InverseResult rel = solveIopRelative(ex1, pt);
      Vector fHat = ex1.objectiveValues(pt);
      GridResult relOracle = diskGridMinimize([&](const Vector& x) {
        return (ex1.objectiveValues(x).array() / fHat.array()).maxCoeff();
      });
      c.require(near(rel.epsilonStar, relOracle.value) <= 1e-3,
                tag + ": relative epsilon misses the grid oracle");

      InverseResult abs = solveIopAbsolute(ex1, pt);
      GridResult absOracle = diskGridMinimize([&](const Vector& x) {
        return (ex1.objectiveValues(x) - fHat).maxCoeff();
      });
      c.require(near(abs.epsilonStar, absOracle.value) <= 1e-3,
                tag + ": absolute epsilon misses the grid oracle");
    }
  });

  criterion(10, "slp-convergence", [&](Check& c) {
    auto slpOne = [&](const ForwardProblem& p, const Vector& xhat, const std::string& tag) {
      ScalingScheme scheme = relativeScheme(p, xhat);
      SlpTrace t = runSlp(p, xhat, scheme);
      c.require(t.terminationReason == SlpTermination::StepNorm,
                tag + ": did not terminate on step norm");
      c.require(t.iterates.size() <= 100, tag + ": too many iterations");
      InverseResult exact = solveIop(p, xhat, scheme);
      c.require(exact.status == SolveStatus::Optimal, tag + ": exact solve failed");
      c.require(near(t.finalResult.epsilonStar, exact.epsilonStar) <= 1e-2,
                tag + ": epsilon differs from the exact model by " +
                    std::to_string(near(t.finalResult.epsilonStar, exact.epsilonStar)));
      const double residual = iopKktResidual(
          p, xhat, scheme, t.finalResult.epsilonStar, t.finalResult.xStar,
          t.finalResult.alphaRaw, t.finalResult.dual.sigma, t.finalResult.dual.pi);
      c.require(residual <= 1e-4,
                tag + ": KKT residual " + std::to_string(residual) + " at the fixed point");
    };
    slpOne(ex1, pts.b, "example");
    for (uint64_t seed = 31; seed <= 40; ++seed) {
      RandomInstance inst = randomQuadraticInstance(seed, false);
      slpOne(inst.problem, inst.xhat, "seed " + std::to_string(seed));
    }
  });

  criterion(11, "planning-surrogate", [&](Check& c) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      const std::string tag = "instance " + std::to_string(seed);
      auto [p, inst] = genPlanning(seed, 20, 50, 5);
      std::mt19937_64 rng(seed * 7919 + 3);
      Vector a0(5);
      for (Index k = 0; k < 5; ++k) a0[k] = 0.2 + 0.8 * unitReal(rng);
      a0 /= a0.sum();
      ParetoSample pareto = solveFop(p, WeightVector(a0));
      c.require(pareto.kernel.status == SolveStatus::Optimal, tag + ": frontier solve failed");
      if (pareto.kernel.status != SolveStatus::Optimal) continue;
      Vector xhat = pareto.x;
      for (Index i = 0; i < xhat.size(); ++i) xhat[i] *= 1.0 + 0.05 * unitReal(rng);

      InverseResult iop = solveIopRelative(p, xhat);
      c.require(iop.status == SolveStatus::Optimal, tag + ": exact inverse failed");
      if (iop.status != SolveStatus::Optimal) continue;
      c.require(iop.deviationVariance < 0.01,
                tag + ": exact-model ratio variance " + std::to_string(iop.deviationVariance));

      ScalingScheme scheme = relativeScheme(p, xhat);
      SlpTrace slp = runSlp(p, xhat, scheme);
      InverseResult liop = solveLiop(LiopInstance(p, xhat, xhat, scheme));
      c.require(slp.terminationReason == SlpTermination::StepNorm &&
                    liop.status == SolveStatus::Optimal,
                tag + ": approximate models failed");

      Index kPrime = 0;
      iop.alphaStar.alpha.maxCoeff(&kPrime);
      KesConfig cfg;
      cfg.normalization = KesNormalization::fixWeight(kPrime);
      KesOutcome kes = solveKes(p, xhat, cfg);
      c.require(kes.status == SolveStatus::Optimal, tag + ": KES failed");
      c.require(kes.weights.alpha[kPrime] >= 0.5,
                tag + ": KES concentration " + std::to_string(kes.weights.alpha[kPrime]));

      const double varIop = planVariance(p, xhat, iop.alphaStar);
      const double varSlp = planVariance(p, xhat, slp.finalResult.alphaStar);
      const double varLiop = planVariance(p, xhat, liop.alphaStar);
      const double varKes = planVariance(p, xhat, kes.weights);
      const bool ordered = varIop < varSlp && varSlp <= varLiop && varLiop < varKes;
      c.require(ordered, tag + ": variance ordering violated (iop " + std::to_string(varIop) +
                             ", slp " + std::to_string(varSlp) + ", liop " +
                             std::to_string(varLiop) + ", kes " + std::to_string(varKes) + ")");
    }
  });

  criterion(12, "solver-hygiene", [&](Check& c) {
    // independent re-verification of one certificate from each solver
    {
      auto lifted = epigraphReformulate(ex1);
      Vector w(2);
      w << 0.3, 0.7;
      SmoothProgram sp(combineWeighted(lifted.lifted.objectives, w),
                       lifted.lifted.inequalities, lifted.lifted.eqA, lifted.lifted.eqB);
      KernelSolution s = solve(sp);
      c.require(s.status == SolveStatus::Optimal, "kernel sample not optimal");
      Vector stat = sp.objective.gradient(s.x);
      for (Index l = 0; l < sp.numInequalities(); ++l) {
        stat += s.dual.sigma[l] * sp.inequalities[static_cast<size_t>(l)].gradient(s.x);
      }
      c.require(stat.cwiseAbs().maxCoeff() <= 1e-8, "kernel stationarity recheck failed");
    }
    {
      LinearProgram lp;
      lp.cost = Vector::Constant(1, -1.0);
      lp.ineqG = Matrix::Ones(1, 1);
      lp.ineqH = Vector::Ones(1);
      LpSolution s = solveLp(lp);
      c.require(s.status == SolveStatus::Optimal &&
                    std::abs(s.objective + lp.ineqH.dot(s.dualIneq)) <= 1e-9,
                "lp strong-duality recheck failed");
    }
    c.require(certificationFailures().load() == 0,
              std::to_string(certificationFailures().load()) + " certification failures");
  });

  std::printf("%d/%d criteria passed\n", 12 - failures, 12);
  return failures == 0 ? 0 : 1;
}
