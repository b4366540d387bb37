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


#ifndef QCOIN_ENTROPY_H_
#define QCOIN_ENTROPY_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

#include "qcoin/model.h"

namespace qcoin {

// Deficits within this distance of a threshold count as equal to it.
inline constexpr double kDeficitTolerance = 1e-12;

// Base-2 entropy of a Bernoulli(p) variable with 0 log 0 := 0.
// Throws kDomainError outside [0, 1].
double BinaryEntropy(double p);

using BitPair = std::pair<std::uint8_t, std::uint8_t>;  // (x, y)

// Plug-in H(X|Y) = sum_y (N_y/N) h(N_{x=1,y}/N_y). An empty list gives 0.
double ConditionalEntropy(std::span<const BitPair> pairs);

// Plug-in joint entropy H(X,Y) and marginal entropy H(Y) over the same list.
double JointEntropy(std::span<const BitPair> pairs);
double MarginalEntropyOfY(std::span<const BitPair> pairs);

// How the four deficit terms are estimated from one experiment.
//   kCrossTable: the frequency cross table whose A x B block holds hidden
//     pairs and whose other blocks hold selected pairs; conditional
//     probabilities use the table's own margins and joint probabilities are
//     normalized by the number of tabulated pairs.
//   kFullColumns: ordinary plug-in conditional entropies over all n column
//     pairs. Masks are ignored and the deficit can never be positive.
enum class EstimatorScheme : std::uint8_t { kCrossTable, kFullColumns };

std::string_view EstimatorSchemeName(EstimatorScheme s);
PairFilter FilterFor(EstimatorScheme s);

struct EntropyTerms {
  double h_ab_hd = 0;
  double h_ab_prime = 0;
  double h_bprime_aprime = 0;
  double h_aprime_b = 0;
};

struct DeficitResult {
  EntropyTerms terms;
  double deficit = 0;
  // Entropy of the A values feeding the A x B block.
  double h_marginal_a = 0;
};

// -sum p(x,y) log2 p(x|y) over one block of a cross table, conditioning on
// the B-side column (condition_on_a_side = false) or the A-side column.
double TableConditionalEntropy(const FrequencyCrossTable& freq, Block block,
                               bool condition_on_a_side);

DeficitResult DeficitFromTable(const FrequencyCrossTable& freq);

// Throws kEmptyExperiment for an empty span.
DeficitResult DeficitPseudo(std::span<const OutcomeRecord> outcomes,
                            EstimatorScheme scheme = EstimatorScheme::kCrossTable);
DeficitResult DeficitPseudo(const ExperimentMatrix& matrix,
                            EstimatorScheme scheme = EstimatorScheme::kCrossTable);

// True iff the inequality holds, i.e. deficit <= delta. Throws kDomainError
// for negative delta.
bool InformationBellHolds(const DeficitResult& result, double delta);

// h_ab - (h_ab' + h_b'a' + h_a'b). Terms must be nonnegative.
double DeficitGeneric(double h_ab, double h_ab_prime, double h_bprime_aprime,
                      double h_aprime_b);

enum class IndexDenominator : std::uint8_t {
  kConditional,  // h_ab_hd of the matrix with the largest deficit
  kMarginal,     // h_marginal_a of that matrix
};
std::string_view IndexDenominatorName(IndexDenominator d);

// Max(deficit) / denominator of the first matrix attaining the maximum.
// Throws kEmptyCampaign for no results and kDegenerateIndex for a zero
// denominator.
double IndexDeficit(std::span<const DeficitResult> results,
                    IndexDenominator denominator = IndexDenominator::kConditional);

// Max / (Max - Min). Throws kDegenerateIndex when Max == Min.
double IndexNorm(std::span<const DeficitResult> results);

}  // namespace qcoin

#endif  // QCOIN_ENTROPY_H_
