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


#ifndef QCOIN_SIMULATE_H_
#define QCOIN_SIMULATE_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "qcoin/entropy.h"
#include "qcoin/model.h"

namespace qcoin {

enum class CaseKind : std::uint8_t { kStochastic, kAnticorrelated };
std::string_view CaseKindName(CaseKind c);  // "random" / "anticorrelated"
std::optional<CaseKind> ParseCaseKind(std::string_view name);

// Masks a generator may draw, in draw order:
//   three: (a, b'), (a', b'), (a', b)
//   four:  the three above, then (a, b)
enum class SelectionDomain : std::uint8_t { kThreeEntangledPairs, kFourPairs };
std::string_view SelectionDomainName(SelectionDomain d);  // "three" / "four"
std::optional<SelectionDomain> ParseSelectionDomain(std::string_view name);
std::span<const SelectionMask> DomainMasks(SelectionDomain d);
bool InDomain(const SelectionMask& mask, SelectionDomain d);

inline constexpr SelectionDomain kDefaultDomain = SelectionDomain::kFourPairs;

// splitmix64 output function.
std::uint64_t SplitMix64(std::uint64_t x);

// Seed of experiment `index` under `master`:
//   SplitMix64(master ^ SplitMix64(index)).
std::uint64_t MixSeed(std::uint64_t master, std::uint64_t index);

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t experiment_index = 0;
};

// Per-experiment random stream: std::mt19937_64 seeded with MixSeed.
class ExperimentStream {
 public:
  explicit ExperimentStream(const SeedSpec& seed)
      : engine_(MixSeed(seed.master_seed, seed.experiment_index)) {}

  std::uint8_t NextBit() { return static_cast<std::uint8_t>(engine_() >> 63); }

  // Uniform in [0, k) by 128-bit multiply-shift.
  std::size_t NextIndex(std::size_t k) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(engine_()) * k) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

// Fills `out` with out.size() outcomes. Stochastic: bits a, a', b, b' then
// the mask. Anticorrelated: mask, selected A-side bit, hidden A-side bit,
// hidden B-side bit; the selected B-side cell is the complement.
void GenerateInto(CaseKind kind, const SeedSpec& seed, SelectionDomain domain,
                  std::span<OutcomeRecord> out);

ExperimentMatrix GenStochastic(std::size_t n, const SeedSpec& seed,
                               SelectionDomain domain = kDefaultDomain);
ExperimentMatrix GenAnticorrelated(std::size_t n, const SeedSpec& seed,
                                   SelectionDomain domain = kDefaultDomain);
ExperimentMatrix Generate(CaseKind kind, std::size_t n, const SeedSpec& seed,
                          SelectionDomain domain = kDefaultDomain);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double ToDouble() const { return static_cast<double>(num) / den; }
  Rational Reduced() const;
  friend bool operator==(const Rational& l, const Rational& r) {
    return static_cast<unsigned __int128>(l.num) * r.den ==
           static_cast<unsigned __int128>(r.num) * l.den;
  }
};

struct ExactStats {
  Rational p_strict_positive;
  Rational p_zero;
  Rational p_negative;
  Rational p_at_max;
  Rational p_at_min;
  double max_deficit = 0;
  double min_deficit = 0;
  // E[deficit | deficit > 0]; absent when no deficit is positive.
  std::optional<double> mean_positive;
  std::uint64_t support_size = 0;
  std::uint64_t sample_space_size = 0;
};

inline constexpr std::uint64_t kEnumerationGuard = std::uint64_t{1} << 24;

// Number of equiprobable single-outcome states the generator can produce.
std::uint64_t StatesPerOutcome(CaseKind kind, SelectionDomain domain);

// Decodes state s in [0, StatesPerOutcome) into the outcome the generator
// would produce.
OutcomeRecord DecodeState(CaseKind kind, SelectionDomain domain,
                          std::uint64_t state);

// Exact distribution of the deficit over the full sample space of
// StatesPerOutcome^n equiprobable outcome sequences. Outcomes are exchangeable,
// so the sum runs over multisets weighted by multinomial counts. Throws
// kTooLarge when the sample space exceeds kEnumerationGuard.
ExactStats EnumerateExact(CaseKind kind, std::size_t n, SelectionDomain domain,
                          EstimatorScheme scheme = EstimatorScheme::kCrossTable);

}  // namespace qcoin

#endif  // QCOIN_SIMULATE_H_
