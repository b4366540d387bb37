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

#include <gtest/gtest.h>

#include <cmath>

#include "oracle.h"
#include "qcoin/error.h"

namespace qcoin {
namespace {

constexpr HypothesisProbs kCoin{0.012, 0.85};

template <typename Fn>
ErrorCode CodeOf(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no qcoin::Error thrown";
  return ErrorCode::kCancelled;
}

TEST(EstimateP0Test, Ratios) {
  EXPECT_DOUBLE_EQ(EstimateP0(108, 10000), 0.0108);
  EXPECT_DOUBLE_EQ(EstimateP0(0, 100), 0.0);
  EXPECT_NEAR(EstimateP0(500, 10000), 0.05, 1e-15);
  EXPECT_EQ(CodeOf([] { EstimateP0(0, 0); }), ErrorCode::kEmptyCampaign);
  EXPECT_EQ(CodeOf([] { EstimateP0(5, 4); }), ErrorCode::kDomainError);
}

TEST(BinomialTest, CdfValues) {
  EXPECT_DOUBLE_EQ(BinomialCdf(3, 3, 0.4), 1.0);
  EXPECT_NEAR(BinomialCdf(0, 3, 0.012), std::pow(0.988, 3), 1e-12);
  EXPECT_NEAR(BinomialCdf(0, 3, 0.012), 0.96443, 1e-5);
  // 0.15^6 + 6 * 0.85 * 0.15^5 + 15 * 0.85^2 * 0.15^4
  EXPECT_NEAR(BinomialCdf(2, 6, 0.85), 0.00588, 1e-4);
  EXPECT_DOUBLE_EQ(BinomialCdf(0, 5, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(BinomialCdf(4, 5, 1.0), 0.0);
}

TEST(BinomialTest, Errors) {
  EXPECT_EQ(CodeOf([] { BinomialCdf(4, 3, 0.5); }), ErrorCode::kDomainError);
  EXPECT_EQ(CodeOf([] { BinomialCdf(1, 3, 1.5); }), ErrorCode::kDomainError);
  EXPECT_EQ(CodeOf([] { BinomialPmf(1, 3, -0.1); }), ErrorCode::kDomainError);
}

TEST(BinomialTest, PmfMatchesDirectProduct) {
  for (std::uint64_t n : {1u, 7u, 40u, 300u}) {
    for (double p : {0.012, 0.052, 0.5, 0.85}) {
      for (std::uint64_t k = 0; k <= n; k += 1 + n / 13) {
        const double want = static_cast<double>(oracle::Pmf(k, n, p));
        EXPECT_NEAR(BinomialPmf(k, n, p), want, 1e-12 + 1e-9 * want);
      }
    }
  }
}

TEST(BinomialTest, PmfSumsToOne) {
  for (std::uint64_t n : {1u, 10u, 1000u, 10000u}) {
    for (double p : {0.012, 0.5, 0.85}) {
      long double s = 0;
      for (std::uint64_t k = 0; k <= n; ++k) s += BinomialPmf(k, n, p);
      EXPECT_NEAR(static_cast<double>(s), 1.0, 1e-12) << n << " " << p;
    }
  }
}

TEST(BinomialTest, CdfMonotonicity) {
  for (std::uint64_t n : {5u, 50u}) {
    for (std::uint64_t k = 0; k < n; ++k) {
      EXPECT_LE(BinomialCdf(k, n, 0.3), BinomialCdf(k + 1, n, 0.3) + 1e-15);
      EXPECT_GE(BinomialCdf(k, n, 0.3), BinomialCdf(k, n, 0.35));
      // The cdf can round to 1 in double; its complement keeps the strict
      // ordering visible.
      EXPECT_LT(BinomialUpperTail(k, n, 0.3), BinomialUpperTail(k, n, 0.35));
    }
  }
}

TEST(BinomialTest, LargeN) {
  // Mean 5e5, sd ~ 500: the cdf at the mean is close to one half.
  EXPECT_NEAR(BinomialCdf(500000, 1000000, 0.5), 0.5, 1e-3);
}

TEST(TailTest, Values) {
  EXPECT_DOUBLE_EQ(TailAtLeast(1, 1, 0.5), 0.5);
  EXPECT_NEAR(TailAtLeast(3, 6, 0.012), 3.3e-5, 1e-6);
  EXPECT_NEAR(TailAtLeast(1, 3, 0.012), 0.0356, 1e-4);
  EXPECT_DOUBLE_EQ(TailAtLeast(0, 6, 0.3), 1.0);
  EXPECT_NEAR(TailAtLeast(2, 6, 0.012, TailReading::kMoreThan),
              TailAtLeast(3, 6, 0.012), 1e-15);
  EXPECT_EQ(CodeOf([] { TailAtLeast(7, 6, 0.3); }), ErrorCode::kDomainError);
}

TEST(TailTest, ComplementsCdfExactly) {
  for (std::uint64_t n : {1u, 6u, 31u, 312u}) {
    for (double p : {0.012, 0.052, 0.85}) {
      for (std::uint64_t k = 1; k <= n; ++k) {
        ASSERT_EQ(TailAtLeast(k, n, p) + BinomialCdf(k - 1, n, p), 1.0)
            << n << " " << p << " " << k;
      }
    }
  }
}

TEST(TailTest, UpperTailMatchesDirectSum) {
  for (std::uint64_t k0 = 0; k0 < 8; ++k0) {
    const double want = static_cast<double>(oracle::Upper(k0, 275, 0.012));
    EXPECT_NEAR(BinomialUpperTail(k0, 275, 0.012), want, 1e-12 * want + 1e-300);
  }
}

TEST(PlanTest, ReferenceDesigns) {
  DecisionPlan p = FindPlan(kCoin, 0.01, 0.80);
  EXPECT_EQ(p.n_req, 3u);
  EXPECT_EQ(p.k0, 1u);
  p = FindPlan(kCoin, 0.001, 0.99);
  EXPECT_EQ(p.n_req, 6u);
  EXPECT_EQ(p.k0, 2u);
  p = FindPlan(kCoin, 0.01, 0.95);
  EXPECT_EQ(p.n_req, 4u);
  EXPECT_EQ(p.k0, 1u);
  p = FindPlan(kCoin, 0.01, 0.99);
  EXPECT_EQ(p.n_req, 5u);
  EXPECT_EQ(p.k0, 1u);
}

TEST(PlanTest, DesignAtSixSatisfiesBothConditions) {
  EXPECT_NEAR(BinomialUpperTail(2, 6, 0.012), 3.3e-5, 1e-6);
  EXPECT_NEAR(BinomialUpperTail(2, 6, 0.85), 0.994, 1e-3);
  EXPECT_NEAR(BinomialUpperTail(1, 3, 0.012), 4.3e-4, 1e-5);
  EXPECT_NEAR(BinomialUpperTail(1, 3, 0.85), 0.939, 1e-3);
}

TEST(PlanTest, MatchesBruteForceSearch) {
  const double alphas[] = {0.05, 0.01, 0.005, 0.001};
  const double gammas[] = {0.8, 0.9, 0.95, 0.99};
  for (HypothesisProbs probs : {kCoin, HypothesisProbs{0.1, 0.6},
                                HypothesisProbs{0.012, 0.3}}) {
    for (double a : alphas) {
      for (double g : gammas) {
        const auto want = oracle::FindPlan(probs.p0_h0, probs.p0_h1, a, g, 200);
        ASSERT_TRUE(want.has_value());
        const DecisionPlan got = FindPlan(probs, a, g);
        EXPECT_EQ(got.n_req, want->n_req) << a << " " << g;
        EXPECT_EQ(got.k0, want->k0) << a << " " << g;
      }
    }
  }
}

TEST(PlanTest, Minimality) {
  const DecisionPlan p = FindPlan({0.012, 0.052}, 0.01, 0.95);
  const std::uint64_t n = p.n_req - 1;
  for (std::uint64_t k0 = 0; k0 <= n; ++k0) {
    EXPECT_FALSE(oracle::Upper(k0, n, 0.012) < 0.01 &&
                 oracle::Upper(k0, n, 0.052) >= 0.95)
        << k0;
  }
  EXPECT_LT(oracle::Upper(p.k0, p.n_req, 0.012), 0.01);
  EXPECT_GE(oracle::Upper(p.k0, p.n_req, 0.052), 0.95);
}

TEST(PlanTest, MonotoneInLevels) {
  std::uint64_t previous = 0;
  for (double a : {0.05, 0.01, 0.005, 0.001}) {
    const auto n = FindPlan({0.05, 0.3}, a, 0.9).n_req;
    EXPECT_GE(n, previous);
    previous = n;
  }
  previous = 0;
  for (double g : {0.8, 0.9, 0.95, 0.99}) {
    const auto n = FindPlan({0.05, 0.3}, 0.01, g).n_req;
    EXPECT_GE(n, previous);
    previous = n;
  }
}

TEST(PlanTest, Errors) {
  EXPECT_EQ(CodeOf([] { FindPlan({0.5, 0.4}, 0.01, 0.9); }),
            ErrorCode::kDomainError);
  EXPECT_EQ(CodeOf([] { FindPlan(kCoin, 0.0, 0.9); }), ErrorCode::kDomainError);
  EXPECT_EQ(CodeOf([] { FindPlan(kCoin, 0.01, 1.0); }), ErrorCode::kDomainError);
  EXPECT_EQ(CodeOf([] { FindPlan({0.012, 0.052}, 0.01, 0.95, 100); }),
            ErrorCode::kNoPlanWithinBudget);
}

TEST(PlanGridTest, SingletonEqualsFindPlan) {
  const double a[] = {0.001};
  const double g[] = {0.99};
  const auto cells = PlanGrid(kCoin, a, g);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].plan.n_req, 6u);
  EXPECT_EQ(cells[0].plan.k0, 2u);
  ASSERT_TRUE(cells[0].reference.has_value());
  EXPECT_TRUE(cells[0].matches());
}

TEST(PlanGridTest, ReferenceGrid) {
  const auto cells = ReferencePlanGrid(kCoin);
  ASSERT_EQ(cells.size(), 16u);
  int matches = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EXPECT_DOUBLE_EQ(cells[i].plan.alpha, kReferencePlanTable[i].alpha);
    EXPECT_DOUBLE_EQ(cells[i].plan.gamma, kReferencePlanTable[i].gamma);
    matches += cells[i].matches();
  }
  EXPECT_GE(matches, 9);
  // Away from the reference probabilities nothing is annotated.
  for (const auto& c : ReferencePlanGrid({0.02, 0.85})) {
    EXPECT_FALSE(c.reference.has_value());
  }
}

TEST(VerdictTest, Decisions) {
  DecisionPlan plan;
  plan.n_req = 6;
  plan.k0 = 2;
  EXPECT_EQ(MakeVerdict(3, 6, plan).decision, Decision::kAcceptH1);
  EXPECT_FALSE(MakeVerdict(3, 6, plan).early);
  EXPECT_EQ(MakeVerdict(1, 6, plan).decision, Decision::kRetainH0);
  EXPECT_EQ(MakeVerdict(0, 2, plan).decision, Decision::kInProgress);
  EXPECT_EQ(MakeVerdict(2, 7, plan).decision, Decision::kRetainH0);
  EXPECT_EQ(CodeOf([&] { MakeVerdict(3, 2, plan); }), ErrorCode::kDomainError);
}

TEST(VerdictTest, EarlyAcceptance) {
  DecisionPlan plan;
  plan.n_req = 6;
  plan.k0 = 2;
  const Verdict early = MakeVerdict(3, 4, plan, VerdictMode::kEarly);
  EXPECT_EQ(early.decision, Decision::kAcceptH1);
  EXPECT_TRUE(early.early);
  const Verdict wait = MakeVerdict(3, 4, plan, VerdictMode::kConservative);
  EXPECT_EQ(wait.decision, Decision::kInProgress);
  EXPECT_FALSE(wait.early);
  EXPECT_EQ(DecisionName(Decision::kAcceptH1), "AcceptH1");
  EXPECT_EQ(DecisionName(Decision::kRetainH0), "RetainH0");
  EXPECT_EQ(DecisionName(Decision::kInProgress), "InProgress");
}

}  // namespace
}  // namespace qcoin
