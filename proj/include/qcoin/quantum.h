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


#ifndef QCOIN_QUANTUM_H_
#define QCOIN_QUANTUM_H_

#include <vector>

namespace qcoin {

// Spin-1/2 singlet reference curve. Angles are in degrees at this interface.
// Four coplanar unit vectors a, b', a', b are spaced theta/3 apart, so the
// pair (a, b) sits at theta and the three chained pairs at theta/3.

struct AngleConfig {
  double theta = 90.0;

  // Throws kDomainError unless 0 < theta < 180.
  static AngleConfig Make(double theta);
  double sub_angle() const { return theta / 3.0; }
};

struct CurvePoint {
  double theta = 0;
  double deficit = 0;
};

// Probability that the two measured bits agree: sin^2(theta / 2).
// Throws kDomainError outside [0, 180].
double SingletProbSame(double theta_degrees);

// h(SingletProbSame(theta)).
double QuantumConditionalEntropy(double theta_degrees);

// H(theta) - 3 H(theta / 3); positive values violate the inequality.
double QuantumDeficit(double theta_degrees);

// Fraction of midpoint grid angles theta_min + (i + 1/2) step inside
// [theta_min, theta_max) with a positive deficit. Throws kDomainError unless
// 0 <= theta_min < theta_max <= 180 and step > 0.
double ViolationFraction(double theta_min, double theta_max, double step);

// Root of QuantumDeficit in (10, 120) degrees by bisection. Throws
// kDomainError for a nonpositive tolerance and kBracketError without a sign
// change.
double CrossingAngle(double tolerance_degrees = 1e-6);

struct DeficitMaximum {
  double theta = 0;
  double deficit = 0;
};

// Argmax over (0, crossing): 0.01 degree grid, refined by golden section.
DeficitMaximum MaxQuantumDeficit();

// Points theta_min + (i + 1/2) step, i.e. the grid ViolationFraction uses.
std::vector<CurvePoint> SampleCurve(double theta_min, double theta_max,
                                    double step);

}  // namespace qcoin

#endif  // QCOIN_QUANTUM_H_
