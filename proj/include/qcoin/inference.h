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


#ifndef QCOIN_INFERENCE_H_
#define QCOIN_INFERENCE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace qcoin {

struct HypothesisProbs {
  double p0_h0 = 0;  // chance of a positive deficit under local realism
  double p0_h1 = 0;  // same chance for the quantum alternative

  // Throws kDomainError unless 0 < p0_h0 < p0_h1 < 1.
  void Validate() const;
};

struct DecisionPlan {
  HypothesisProbs probs;
  double alpha = 0;
  double gamma = 0;
  std::uint64_t n_req = 0;
  std::uint64_t k0 = 0;
};

enum class Decision { kAcceptH1, kRetainH0, kInProgress };
std::string_view DecisionName(Decision d);  // "AcceptH1", ...

enum class VerdictMode {
  kEarly,         // accept as soon as k_e > k0
  kConservative,  // wait for n_req experiments
};

struct Verdict {
  std::uint64_t k_e = 0;
  std::uint64_t n_done = 0;
  Decision decision = Decision::kInProgress;
  bool early = false;  // accepted before n_req experiments
  double delta = 0;
};

// positive_count / total. kEmptyCampaign for total == 0, kDomainError when
// positive_count > total.
double EstimateP0(std::uint64_t positive_count, std::uint64_t total);

// Exact binomial, evaluated term by term in log space. kDomainError for
// k > n or p outside [0, 1].
double BinomialPmf(std::uint64_t k, std::uint64_t n, double p);
double BinomialCdf(std::uint64_t k0, std::uint64_t n, double p);

// P(k > k0), summed directly over the upper terms so tiny tails keep their
// relative precision.
double BinomialUpperTail(std::uint64_t k0, std::uint64_t n, double p);

enum class TailReading {
  kAtLeast,   // P(k >= k_e)
  kMoreThan,  // P(k > k_e)
};

// kAtLeast: 1 - BinomialCdf(k_e - 1, n, p), and 1 for k_e == 0.
// kMoreThan: 1 - BinomialCdf(k_e, n, p).
// kDomainError for k_e > n.
double TailAtLeast(std::uint64_t k_e, std::uint64_t n, double p,
                   TailReading reading = TailReading::kAtLeast);

// Smallest N <= n_max with a k0 such that P_H0(k > k0) < alpha and
// P_H1(k > k0) >= gamma; the smallest such k0 is returned.
// kDomainError for bad inputs, kNoPlanWithinBudget if nothing fits.
DecisionPlan FindPlan(const HypothesisProbs& probs, double alpha, double gamma,
                      std::uint64_t n_max = 10000);

struct PlanCell {
  DecisionPlan plan;
  // Printed (n_req, k0) for this (alpha, gamma) when the reference table
  // applies to `probs`.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> reference;
  bool matches() const {
    return reference && reference->first == plan.n_req &&
           reference->second == plan.k0;
  }
};

struct ReferencePlanRow {
  double alpha;
  double gamma;
  std::uint64_t n_req;
  std::uint64_t k0;
};

// Published grid for p0_h0 = 0.012, p0_h1 = 0.85, gamma-major order.
extern const std::array<ReferencePlanRow, 16> kReferencePlanTable;
inline constexpr HypothesisProbs kReferencePlanProbs{0.012, 0.85};

// Cells in gamma-major order (all alphas for gammas[0] first).
std::vector<PlanCell> PlanGrid(const HypothesisProbs& probs,
                               std::span<const double> alphas,
                               std::span<const double> gammas,
                               std::uint64_t n_max = 10000);

// The reference alpha/gamma grid.
std::vector<PlanCell> ReferencePlanGrid(const HypothesisProbs& probs);

// kDomainError when k_e > n_done.
Verdict MakeVerdict(std::uint64_t k_e, std::uint64_t n_done,
                    const DecisionPlan& plan,
                    VerdictMode mode = VerdictMode::kEarly, double delta = 0);

}  // namespace qcoin

#endif  // QCOIN_INFERENCE_H_
