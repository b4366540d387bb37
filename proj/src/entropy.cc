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


#include "qcoin/entropy.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "qcoin/error.h"

namespace qcoin {
namespace {

constexpr std::size_t kLogTableSize = 4096;

// log2 of small integers; table and fallback agree bit for bit.
double Log2Count(std::uint64_t k) {
  static const auto table = [] {
    std::array<double, kLogTableSize> t{};
    for (std::size_t i = 1; i < kLogTableSize; ++i)
      t[i] = std::log2(static_cast<double>(i));
    return t;
  }();
  return k < kLogTableSize ? table[k] : std::log2(static_cast<double>(k));
}

}  // namespace

double BinaryEntropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kDomainError, "probability outside [0, 1]");
  }
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double ConditionalEntropy(std::span<const BitPair> pairs) {
  if (pairs.empty()) return 0.0;
  std::array<std::array<std::uint64_t, 2>, 2> n{};  // [y][x]
  for (const auto& [x, y] : pairs) ++n[y & 1][x & 1];
  const double total = static_cast<double>(pairs.size());
  double h = 0.0;
  for (int y = 0; y < 2; ++y) {
    const std::uint64_t ny = n[y][0] + n[y][1];
    if (ny == 0) continue;
    h += (ny / total) * BinaryEntropy(static_cast<double>(n[y][1]) / ny);
  }
  return h;
}

double JointEntropy(std::span<const BitPair> pairs) {
  if (pairs.empty()) return 0.0;
  std::array<std::uint64_t, 4> n{};
  for (const auto& [x, y] : pairs) ++n[(x & 1) * 2 + (y & 1)];
  const double total = static_cast<double>(pairs.size());
  double h = 0.0;
  for (std::uint64_t c : n) {
    if (c == 0) continue;
    const double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

double MarginalEntropyOfY(std::span<const BitPair> pairs) {
  if (pairs.empty()) return 0.0;
  std::uint64_t ones = 0;
  for (const auto& pair : pairs) ones += pair.second & 1;
  return BinaryEntropy(static_cast<double>(ones) / pairs.size());
}

std::string_view EstimatorSchemeName(EstimatorScheme s) {
  return s == EstimatorScheme::kCrossTable ? "cross_table" : "full_columns";
}

PairFilter FilterFor(EstimatorScheme s) {
  return s == EstimatorScheme::kCrossTable ? PairFilter::kPseudocomplementary
                                           : PairFilter::kAllPairs;
}

double TableConditionalEntropy(const FrequencyCrossTable& freq, Block block,
                               bool condition_on_a_side) {
  const double outcomes =
      OutcomesRepresented(freq, EventsPerOutcome(freq.provenance.filter));
  if (outcomes <= 0) return 0.0;
  const Column cond = condition_on_a_side ? ASideOf(block) : BSideOf(block);
  double h = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const std::uint32_t n_xy = freq.count(block, x, y);
      if (n_xy == 0) continue;
      const std::uint32_t m = freq.margin(cond, condition_on_a_side ? x : y);
      h += (n_xy / outcomes) * (Log2Count(m) - Log2Count(n_xy));
    }
  }
  return h;
}

DeficitResult DeficitFromTable(const FrequencyCrossTable& freq) {
  DeficitResult r;
  r.terms.h_ab_hd = TableConditionalEntropy(freq, Block::kAB, false);
  r.terms.h_ab_prime = TableConditionalEntropy(freq, Block::kABPrime, false);
  r.terms.h_bprime_aprime =
      TableConditionalEntropy(freq, Block::kAPrimeBPrime, true);
  r.terms.h_aprime_b = TableConditionalEntropy(freq, Block::kAPrimeB, false);
  r.deficit = r.terms.h_ab_hd - (r.terms.h_ab_prime + r.terms.h_bprime_aprime +
                                 r.terms.h_aprime_b);
  const std::uint64_t in_ab = freq.BlockTotal(Block::kAB);
  if (in_ab > 0) {
    const auto& c = freq.block(Block::kAB);
    r.h_marginal_a =
        BinaryEntropy(static_cast<double>(c[1][0] + c[1][1]) / in_ab);
  }
  return r;
}

DeficitResult DeficitPseudo(std::span<const OutcomeRecord> outcomes,
                            EstimatorScheme scheme) {
  return DeficitFromTable(BuildCrossTable(outcomes, FilterFor(scheme)));
}

DeficitResult DeficitPseudo(const ExperimentMatrix& matrix,
                            EstimatorScheme scheme) {
  return DeficitPseudo(matrix.outcomes(), scheme);
}

bool InformationBellHolds(const DeficitResult& result, double delta) {
  if (!(delta >= 0.0)) {
    throw Error(ErrorCode::kDomainError, "delta must be nonnegative");
  }
  return result.deficit <= delta + kDeficitTolerance;
}

double DeficitGeneric(double h_ab, double h_ab_prime, double h_bprime_aprime,
                      double h_aprime_b) {
  for (double h : {h_ab, h_ab_prime, h_bprime_aprime, h_aprime_b}) {
    if (!(h >= 0.0)) {
      throw Error(ErrorCode::kDomainError, "entropy terms must be nonnegative");
    }
  }
  return h_ab - (h_ab_prime + h_bprime_aprime + h_aprime_b);
}

std::string_view IndexDenominatorName(IndexDenominator d) {
  return d == IndexDenominator::kConditional ? "conditional" : "marginal";
}

double IndexDeficit(std::span<const DeficitResult> results,
                    IndexDenominator denominator) {
  if (results.empty()) {
    throw Error(ErrorCode::kEmptyCampaign, "no deficit results");
  }
  const auto best = std::max_element(
      results.begin(), results.end(),
      [](const DeficitResult& l, const DeficitResult& r) {
        return l.deficit < r.deficit;
      });
  const double denom = denominator == IndexDenominator::kConditional
                           ? best->terms.h_ab_hd
                           : best->h_marginal_a;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::kDegenerateIndex,
                "denominator of the maximal matrix is zero");
  }
  return best->deficit / denom;
}

double IndexNorm(std::span<const DeficitResult> results) {
  if (results.empty()) {
    throw Error(ErrorCode::kEmptyCampaign, "no deficit results");
  }
  const auto [lo, hi] = std::minmax_element(
      results.begin(), results.end(),
      [](const DeficitResult& l, const DeficitResult& r) {
        return l.deficit < r.deficit;
      });
  if (hi->deficit == lo->deficit) {
    throw Error(ErrorCode::kDegenerateIndex, "all deficits are equal");
  }
  return hi->deficit / (hi->deficit - lo->deficit);
}

}  // namespace qcoin
