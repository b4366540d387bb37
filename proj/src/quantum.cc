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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcoin/entropy.h"
#include "qcoin/error.h"

namespace qcoin {
namespace {

double Radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

void CheckAngle(double theta) {
  if (!(theta >= 0.0 && theta <= 180.0)) {
    throw Error(ErrorCode::kDomainError, "angle outside [0, 180] degrees");
  }
}

}  // namespace

AngleConfig AngleConfig::Make(double theta) {
  if (!(theta > 0.0 && theta < 180.0)) {
    throw Error(ErrorCode::kDomainError, "theta must lie in (0, 180)");
  }
  return AngleConfig{theta};
}

double SingletProbSame(double theta_degrees) {
  CheckAngle(theta_degrees);
  const double s = std::sin(Radians(theta_degrees) / 2.0);
  return std::min(1.0, s * s);
}

double QuantumConditionalEntropy(double theta_degrees) {
  return BinaryEntropy(SingletProbSame(theta_degrees));
}

double QuantumDeficit(double theta_degrees) {
  CheckAngle(theta_degrees);
  return QuantumConditionalEntropy(theta_degrees) -
         3.0 * QuantumConditionalEntropy(theta_degrees / 3.0);
}

std::vector<CurvePoint> SampleCurve(double theta_min, double theta_max,
                                    double step) {
  if (!(theta_min >= 0.0 && theta_min < theta_max && theta_max <= 180.0)) {
    throw Error(ErrorCode::kDomainError, "need 0 <= min < max <= 180");
  }
  if (!(step > 0.0)) throw Error(ErrorCode::kDomainError, "step must be > 0");
  const auto count =
      static_cast<std::size_t>(std::llround(std::ceil((theta_max - theta_min) / step - 1e-9)));
  std::vector<CurvePoint> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = theta_min + (static_cast<double>(i) + 0.5) * step;
    if (theta >= theta_max) break;
    points.push_back({theta, QuantumDeficit(theta)});
  }
  return points;
}

double ViolationFraction(double theta_min, double theta_max, double step) {
  const auto points = SampleCurve(theta_min, theta_max, step);
  if (points.empty()) throw Error(ErrorCode::kDomainError, "empty grid");
  std::size_t positive = 0;
  for (const auto& p : points) positive += p.deficit > 0.0;
  return static_cast<double>(positive) / points.size();
}

double CrossingAngle(double tolerance_degrees) {
  if (!(tolerance_degrees > 0.0)) {
    throw Error(ErrorCode::kDomainError, "tolerance must be positive");
  }
  double lo = 10.0, hi = 120.0;
  double f_lo = QuantumDeficit(lo);
  if ((f_lo > 0) == (QuantumDeficit(hi) > 0)) {
    throw Error(ErrorCode::kBracketError, "no sign change in (10, 120)");
  }
  while (hi - lo > tolerance_degrees) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = QuantumDeficit(mid);
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

DeficitMaximum MaxQuantumDeficit() {
  const double crossing = CrossingAngle();
  DeficitMaximum best{0.0, 0.0};
  for (double theta = 0.01; theta < crossing; theta += 0.01) {
    const double d = QuantumDeficit(theta);
    if (d > best.deficit) best = {theta, d};
  }
  // Golden-section refinement inside the neighbouring grid cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::max(0.0, best.theta - 0.01);
  double hi = std::min(crossing, best.theta + 0.01);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = QuantumDeficit(x1), f2 = QuantumDeficit(x2);
  while (hi - lo > 1e-9) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = QuantumDeficit(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = QuantumDeficit(x1);
    }
  }
  const double theta = 0.5 * (lo + hi);
  const double d = QuantumDeficit(theta);
  if (d > best.deficit) best = {theta, d};
  return best;
}

}  // namespace qcoin
