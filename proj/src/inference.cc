// Copyright 2026 The qcoin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qcoin/inference.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcoin/error.h"

namespace qcoin {
namespace {

void CheckProbability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kDomainError, "probability outside [0, 1]");
  }
}

void CheckLevel(double level, const char* name) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::kDomainError,
                std::string(name) + " must lie strictly between 0 and 1");
  }
}

// Stirling-series remainder lgamma(n + 1) - (n + 1/2) log n + n - log sqrt(2 pi).
double StirlingError(double n) {
  constexpr double kS0 = 1.0 / 12, kS1 = 1.0 / 360, kS2 = 1.0 / 1260,
                   kS3 = 1.0 / 1680, kS4 = 1.0 / 1188;
  if (n == 0) return 0.0;
  if (n <= 15) {
    return std::lgamma(n + 1) - (n + 0.5) * std::log(n) + n -
           0.5 * std::log(2 * std::numbers::pi);
  }
  const double nn = n * n;
  if (n > 500) return (kS0 - kS1 / nn) / n;
  if (n > 80) return (kS0 - (kS1 - kS2 / nn) / nn) / n;
  if (n > 35) return (kS0 - (kS1 - (kS2 - kS3 / nn) / nn) / nn) / n;
  return (kS0 - (kS1 - (kS2 - (kS3 - kS4 / nn) / nn) / nn) / nn) / n;
}

// x log(x / m) + m - x without cancellation near x == m.
double Deviance(double x, double m) {
  if (std::abs(x - m) < 0.1 * (x + m)) {
    double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
    return s;
  }
  return x * std::log(x / m) + m - x;
}

// Saddle-point binomial density (Loader's form), relative error near 1e-15.
double PmfUnchecked(std::uint64_t k, std::uint64_t n, double p) {
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double q = 1.0 - p;
  const double nd = static_cast<double>(n);
  const double x = static_cast<double>(k);
  if (k == 0) {
    if (n == 0) return 1.0;
    return std::exp(p < 0.1 ? -Deviance(nd, nd * q) - nd * p
                            : nd * std::log1p(-p));
  }
  if (k == n) {
    return std::exp(q < 0.1 ? -Deviance(nd, nd * p) - nd * q
                            : nd * std::log(p));
  }
  const double lc = StirlingError(nd) - StirlingError(x) -
                    StirlingError(nd - x) - Deviance(x, nd * p) -
                    Deviance(nd - x, nd * q);
  const double lf = std::log(2 * std::numbers::pi) + std::log(x) +
                    std::log1p(-x / nd);
  return std::exp(lc - 0.5 * lf);
}

}  // namespace

void HypothesisProbs::Validate() const {
  if (!(p0_h0 > 0.0 && p0_h0 < p0_h1 && p0_h1 < 1.0)) {
    throw Error(ErrorCode::kDomainError, "need 0 < p0_h0 < p0_h1 < 1");
  }
}

std::string_view DecisionName(Decision d) {
  switch (d) {
    case Decision::kAcceptH1:
      return "AcceptH1";
    case Decision::kRetainH0:
      return "RetainH0";
    case Decision::kInProgress:
      return "InProgress";
  }
  return "?";
}

double EstimateP0(std::uint64_t positive_count, std::uint64_t total) {
  if (total == 0) throw Error(ErrorCode::kEmptyCampaign, "no experiments");
  if (positive_count > total) {
    throw Error(ErrorCode::kDomainError, "more positives than experiments");
  }
  return static_cast<double>(positive_count) / static_cast<double>(total);
}

double BinomialPmf(std::uint64_t k, std::uint64_t n, double p) {
  CheckProbability(p);
  if (k > n) throw Error(ErrorCode::kDomainError, "k exceeds n");
  return PmfUnchecked(k, n, p);
}

double BinomialCdf(std::uint64_t k0, std::uint64_t n, double p) {
  CheckProbability(p);
  if (k0 > n) throw Error(ErrorCode::kDomainError, "k0 exceeds N");
  if (k0 == n) return 1.0;
  long double sum = 0;
  for (std::uint64_t k = 0; k <= k0; ++k) sum += PmfUnchecked(k, n, p);
  return std::min(1.0, static_cast<double>(sum));
}

double BinomialUpperTail(std::uint64_t k0, std::uint64_t n, double p) {
  CheckProbability(p);
  if (k0 > n) throw Error(ErrorCode::kDomainError, "k0 exceeds N");
  long double sum = 0;
  for (std::uint64_t k = n; k > k0; --k) sum += PmfUnchecked(k, n, p);
  return std::min(1.0, static_cast<double>(sum));
}

double TailAtLeast(std::uint64_t k_e, std::uint64_t n, double p,
                   TailReading reading) {
  CheckProbability(p);
  if (k_e > n) throw Error(ErrorCode::kDomainError, "k_e exceeds N");
  if (reading == TailReading::kMoreThan) return 1.0 - BinomialCdf(k_e, n, p);
  if (k_e == 0) return 1.0;
  return 1.0 - BinomialCdf(k_e - 1, n, p);
}

DecisionPlan FindPlan(const HypothesisProbs& probs, double alpha, double gamma,
                      std::uint64_t n_max) {
  probs.Validate();
  CheckLevel(alpha, "alpha");
  CheckLevel(gamma, "gamma");
  if (n_max == 0) throw Error(ErrorCode::kDomainError, "n_max must be >= 1");

  for (std::uint64_t n = 1; n <= n_max; ++n) {
    // Walk k0 downwards while the H0 tail P(k > k0 - 1) stays below alpha.
    // The H1 tail only grows as k0 drops, so the smallest admissible k0 is
    // the only candidate worth checking.
    long double tail0 = 0, tail1 = 0;  // P(k > k0)
    std::uint64_t k0 = n;
    while (k0 > 0) {
      const long double next0 = tail0 + PmfUnchecked(k0, n, probs.p0_h0);
      if (!(next0 < alpha)) break;
      tail0 = next0;
      tail1 += PmfUnchecked(k0, n, probs.p0_h1);
      --k0;
    }
    if (!(tail0 < alpha)) continue;
    if (tail1 >= gamma) {
      return DecisionPlan{probs, alpha, gamma, n, k0};
    }
  }
  throw Error(ErrorCode::kNoPlanWithinBudget,
              "no plan with N <= " + std::to_string(n_max));
}

const std::array<ReferencePlanRow, 16> kReferencePlanTable = {{
    {0.05, 0.80, 3, 0},  {0.01, 0.80, 3, 1},  {0.005, 0.80, 3, 1},
    {0.001, 0.80, 3, 1}, {0.05, 0.90, 3, 0},  {0.01, 0.90, 4, 1},
    {0.005, 0.90, 4, 1}, {0.001, 0.90, 4, 1}, {0.05, 0.95, 4, 0},
    {0.01, 0.95, 4, 1},  {0.005, 0.95, 4, 1}, {0.001, 0.95, 4, 1},
    {0.05, 0.99, 4, 0},  {0.01, 0.99, 5, 1},  {0.005, 0.99, 5, 1},
    {0.001, 0.99, 6, 2},
}};

std::vector<PlanCell> PlanGrid(const HypothesisProbs& probs,
                               std::span<const double> alphas,
                               std::span<const double> gammas,
                               std::uint64_t n_max) {
  const bool reference_probs = probs.p0_h0 == kReferencePlanProbs.p0_h0 &&
                               probs.p0_h1 == kReferencePlanProbs.p0_h1;
  std::vector<PlanCell> cells;
  cells.reserve(alphas.size() * gammas.size());
  for (double gamma : gammas) {
    for (double alpha : alphas) {
      PlanCell cell{FindPlan(probs, alpha, gamma, n_max), std::nullopt};
      if (reference_probs) {
        for (const auto& row : kReferencePlanTable) {
          if (std::abs(row.alpha - alpha) < 1e-12 &&
              std::abs(row.gamma - gamma) < 1e-12) {
            cell.reference = std::make_pair(row.n_req, row.k0);
          }
        }
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

std::vector<PlanCell> ReferencePlanGrid(const HypothesisProbs& probs) {
  static constexpr double kAlphas[] = {0.05, 0.01, 0.005, 0.001};
  static constexpr double kGammas[] = {0.80, 0.90, 0.95, 0.99};
  return PlanGrid(probs, kAlphas, kGammas);
}

Verdict MakeVerdict(std::uint64_t k_e, std::uint64_t n_done,
                    const DecisionPlan& plan, VerdictMode mode, double delta) {
  if (k_e > n_done) {
    throw Error(ErrorCode::kDomainError, "k_e exceeds experiments done");
  }
  Verdict v{k_e, n_done, Decision::kInProgress, false, delta};
  const bool complete = n_done >= plan.n_req;
  if (k_e > plan.k0) {
    if (complete) {
      v.decision = Decision::kAcceptH1;
    } else if (mode == VerdictMode::kEarly) {
      v.decision = Decision::kAcceptH1;
      v.early = true;
    }
  } else if (complete) {
    v.decision = Decision::kRetainH0;
  }
  return v;
}

}  // namespace qcoin
