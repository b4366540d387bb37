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


#include "qcoin/quantum.h"

#include <gtest/gtest.h>

#include <cmath>

#include "oracle.h"
#include "qcoin/error.h"

namespace qcoin {
namespace {

TEST(SingletTest, AgreementProbability) {
  EXPECT_DOUBLE_EQ(SingletProbSame(0.0), 0.0);
  EXPECT_NEAR(SingletProbSame(90.0), 0.5, 1e-15);
  EXPECT_NEAR(SingletProbSame(180.0), 1.0, 1e-15);
  EXPECT_NEAR(SingletProbSame(60.0), 0.25, 1e-15);
  EXPECT_THROW(SingletProbSame(-1.0), Error);
  EXPECT_THROW(SingletProbSame(181.0), Error);
}

TEST(SingletTest, ConditionalEntropyValues) {
  EXPECT_NEAR(QuantumConditionalEntropy(90.0), 1.0, 1e-15);
  // sin^2(15 deg) = 0.0669873; h of that.
  EXPECT_NEAR(QuantumConditionalEntropy(30.0), 0.3545789027, 1e-9);
}

TEST(DeficitCurveTest, MatchesCosineOracle) {
  for (double theta = 0.0; theta <= 180.0; theta += 0.37) {
    EXPECT_NEAR(QuantumDeficit(theta), oracle::SingletDeficit(theta), 1e-12)
        << theta;
  }
}

TEST(DeficitCurveTest, ReferenceValues) {
  EXPECT_DOUBLE_EQ(QuantumDeficit(0.0), 0.0);
  EXPECT_NEAR(QuantumDeficit(50.0), 0.2359, 1e-4);
  EXPECT_NEAR(QuantumDeficit(85.0), 0.01338, 1e-4);
  EXPECT_NEAR(QuantumDeficit(90.0), -0.06374, 1e-4);
  EXPECT_LT(QuantumDeficit(120.0), 0.0);
}

TEST(AngleConfigTest, Bounds) {
  EXPECT_DOUBLE_EQ(AngleConfig::Make(90).sub_angle(), 30.0);
  EXPECT_THROW(AngleConfig::Make(0), Error);
  EXPECT_THROW(AngleConfig::Make(180), Error);
}

TEST(ViolationFractionTest, KnownRanges) {
  EXPECT_NEAR(ViolationFraction(0, 100, 0.01), 0.8592, 1e-4);
  // Every midpoint inside (0, 1e-3) lies below the crossing.
  EXPECT_DOUBLE_EQ(ViolationFraction(0, 1e-3, 1e-4), 1.0);
  EXPECT_DOUBLE_EQ(ViolationFraction(100, 180, 0.5), 0.0);
}

TEST(ViolationFractionTest, BadRanges) {
  EXPECT_THROW(ViolationFraction(10, 5, 0.1), Error);
  EXPECT_THROW(ViolationFraction(0, 100, 0.0), Error);
  EXPECT_THROW(ViolationFraction(-1, 100, 0.1), Error);
  EXPECT_THROW(ViolationFraction(0, 200, 0.1), Error);
}

TEST(ViolationFractionTest, MatchesCrossingOverRange) {
  // With a uniform grid the fraction tends to crossing / range.
  const double crossing = CrossingAngle();
  EXPECT_NEAR(ViolationFraction(0, 100, 0.001), crossing / 100, 1e-4);
}

TEST(CrossingTest, RootOfCurve) {
  const double x = CrossingAngle(1e-9);
  EXPECT_GE(x, 85.5);
  EXPECT_LE(x, 86.5);
  EXPECT_NEAR(x, 85.924, 1e-3);
  EXPECT_GT(QuantumDeficit(x - 1e-6), 0.0);
  EXPECT_LT(QuantumDeficit(x + 1e-6), 0.0);
  EXPECT_THROW(CrossingAngle(0.0), Error);
}

TEST(MaximumTest, LocatesPeak) {
  const DeficitMaximum m = MaxQuantumDeficit();
  EXPECT_NEAR(m.deficit, 0.2369, 1e-4);
  EXPECT_NEAR(m.theta, 52.37, 0.01);
  for (double t = 1.0; t < 85.0; t += 0.5) {
    EXPECT_LE(QuantumDeficit(t), m.deficit + 1e-15);
  }
}

TEST(SampleCurveTest, MidpointGrid) {
  const auto pts = SampleCurve(0, 1, 0.25);
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_DOUBLE_EQ(pts[0].theta, 0.125);
  EXPECT_DOUBLE_EQ(pts[3].theta, 0.875);
  EXPECT_EQ(SampleCurve(0, 100, 0.01).size(), 10000u);
}

}  // namespace
}  // namespace qcoin
