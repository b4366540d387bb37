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


#include "qcoin/simulate.h"

#include <array>
#include <map>
#include <numeric>
#include <string>

#include "qcoin/error.h"

namespace qcoin {
namespace {

constexpr std::array<SelectionMask, 4> kMaskOrder = {
    SelectionMask{Column::kA, Column::kBPrime},
    SelectionMask{Column::kAPrime, Column::kBPrime},
    SelectionMask{Column::kAPrime, Column::kB},
    SelectionMask{Column::kA, Column::kB},
};

Column OtherASide(Column c) {
  return c == Column::kA ? Column::kAPrime : Column::kA;
}
Column OtherBSide(Column c) {
  return c == Column::kB ? Column::kBPrime : Column::kB;
}

OutcomeRecord AnticorrelatedOutcome(const SelectionMask& mask,
                                    std::uint8_t selected_a,
                                    std::uint8_t hidden_a,
                                    std::uint8_t hidden_b) {
  OutcomeRecord o;
  o.mask = mask;
  o.values[Index(mask.a_side)] = selected_a;
  o.values[Index(mask.b_side)] = static_cast<std::uint8_t>(1 - selected_a);
  o.values[Index(OtherASide(mask.a_side))] = hidden_a;
  o.values[Index(OtherBSide(mask.b_side))] = hidden_b;
  return o;
}

}  // namespace

std::string_view CaseKindName(CaseKind c) {
  return c == CaseKind::kStochastic ? "random" : "anticorrelated";
}

std::optional<CaseKind> ParseCaseKind(std::string_view name) {
  if (name == "random" || name == "stochastic") return CaseKind::kStochastic;
  if (name == "anticorrelated" || name == "anti") {
    return CaseKind::kAnticorrelated;
  }
  return std::nullopt;
}

std::string_view SelectionDomainName(SelectionDomain d) {
  return d == SelectionDomain::kThreeEntangledPairs ? "three" : "four";
}

std::optional<SelectionDomain> ParseSelectionDomain(std::string_view name) {
  if (name == "three") return SelectionDomain::kThreeEntangledPairs;
  if (name == "four") return SelectionDomain::kFourPairs;
  return std::nullopt;
}

std::span<const SelectionMask> DomainMasks(SelectionDomain d) {
  return std::span<const SelectionMask>(kMaskOrder).first(
      d == SelectionDomain::kThreeEntangledPairs ? 3 : 4);
}

bool InDomain(const SelectionMask& mask, SelectionDomain d) {
  for (const auto& m : DomainMasks(d)) {
    if (m == mask) return true;
  }
  return false;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t MixSeed(std::uint64_t master, std::uint64_t index) {
  return SplitMix64(master ^ SplitMix64(index));
}

void GenerateInto(CaseKind kind, const SeedSpec& seed, SelectionDomain domain,
                  std::span<OutcomeRecord> out) {
  ExperimentStream stream(seed);
  const auto masks = DomainMasks(domain);
  for (OutcomeRecord& o : out) {
    if (kind == CaseKind::kStochastic) {
      for (auto& v : o.values) v = stream.NextBit();
      o.mask = masks[stream.NextIndex(masks.size())];
    } else {
      const SelectionMask mask = masks[stream.NextIndex(masks.size())];
      const std::uint8_t selected = stream.NextBit();
      const std::uint8_t hidden_a = stream.NextBit();
      const std::uint8_t hidden_b = stream.NextBit();
      o = AnticorrelatedOutcome(mask, selected, hidden_a, hidden_b);
    }
  }
}

ExperimentMatrix Generate(CaseKind kind, std::size_t n, const SeedSpec& seed,
                          SelectionDomain domain) {
  if (n == 0) throw Error(ErrorCode::kDomainError, "n must be at least 1");
  std::vector<OutcomeRecord> outcomes(n);
  GenerateInto(kind, seed, domain, outcomes);
  return ExperimentMatrix(std::move(outcomes));
}

ExperimentMatrix GenStochastic(std::size_t n, const SeedSpec& seed,
                               SelectionDomain domain) {
  return Generate(CaseKind::kStochastic, n, seed, domain);
}

ExperimentMatrix GenAnticorrelated(std::size_t n, const SeedSpec& seed,
                                   SelectionDomain domain) {
  return Generate(CaseKind::kAnticorrelated, n, seed, domain);
}

Rational Rational::Reduced() const {
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? *this : Rational{num / g, den / g};
}

std::uint64_t StatesPerOutcome(CaseKind kind, SelectionDomain domain) {
  const std::uint64_t masks = DomainMasks(domain).size();
  return kind == CaseKind::kStochastic ? masks * 16 : masks * 8;
}

OutcomeRecord DecodeState(CaseKind kind, SelectionDomain domain,
                          std::uint64_t state) {
  const auto masks = DomainMasks(domain);
  if (state >= StatesPerOutcome(kind, domain)) {
    throw Error(ErrorCode::kDomainError, "state out of range");
  }
  if (kind == CaseKind::kStochastic) {
    OutcomeRecord o;
    o.mask = masks[state / 16];
    for (int c = 0; c < 4; ++c) {
      o.values[c] = static_cast<std::uint8_t>((state >> c) & 1);
    }
    return o;
  }
  const std::uint64_t rest = state % 8;
  return AnticorrelatedOutcome(masks[state / 8],
                               static_cast<std::uint8_t>((rest >> 2) & 1),
                               static_cast<std::uint8_t>(rest & 1),
                               static_cast<std::uint8_t>((rest >> 1) & 1));
}

ExactStats EnumerateExact(CaseKind kind, std::size_t n, SelectionDomain domain,
                          EstimatorScheme scheme) {
  if (n == 0) throw Error(ErrorCode::kDomainError, "n must be at least 1");
  const std::uint64_t k = StatesPerOutcome(kind, domain);
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (space > kEnumerationGuard / k) {
      throw Error(ErrorCode::kTooLarge,
                  "sample space exceeds 2^24 for n=" + std::to_string(n));
    }
    space *= k;
  }

  std::vector<OutcomeRecord> decoded(k);
  for (std::uint64_t s = 0; s < k; ++s) decoded[s] = DecodeState(kind, domain, s);

  std::vector<std::uint64_t> factorial(n + 1, 1);
  for (std::size_t i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * i;

  // Distinct deficit values, keyed at 1e-9 resolution.
  struct Mass {
    double value = 0;
    std::uint64_t weight = 0;
  };
  std::map<long long, Mass> support;
  std::uint64_t w_pos = 0, w_zero = 0, w_neg = 0;
  long double sum_pos = 0;

  std::vector<std::uint64_t> idx(n, 0);
  std::vector<OutcomeRecord> outcomes(n);
  while (true) {
    // Multinomial weight n! / prod(multiplicity!) of the current multiset.
    std::uint64_t weight = factorial[n];
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && idx[j] == idx[i]) ++j;
      weight /= factorial[j - i];
      i = j;
    }
    for (std::size_t i = 0; i < n; ++i) outcomes[i] = decoded[idx[i]];
    const double d = DeficitPseudo(outcomes, scheme).deficit;

    if (d > kDeficitTolerance) {
      w_pos += weight;
      sum_pos += static_cast<long double>(d) * weight;
    } else if (d < -kDeficitTolerance) {
      w_neg += weight;
    } else {
      w_zero += weight;
    }
    Mass& m = support[std::llround(d * 1e9)];
    if (m.weight == 0) m.value = d;
    m.weight += weight;

    // Next nondecreasing index sequence.
    std::size_t pos = n;
    while (pos > 0 && idx[pos - 1] == k - 1) --pos;
    if (pos == 0) break;
    const std::uint64_t next = idx[pos - 1] + 1;
    for (std::size_t i = pos - 1; i < n; ++i) idx[i] = next;
  }

  ExactStats s;
  s.sample_space_size = space;
  s.p_strict_positive = Rational{w_pos, space}.Reduced();
  s.p_zero = Rational{w_zero, space}.Reduced();
  s.p_negative = Rational{w_neg, space}.Reduced();
  s.support_size = support.size();
  s.min_deficit = support.begin()->second.value;
  s.max_deficit = support.rbegin()->second.value;
  s.p_at_min = Rational{support.begin()->second.weight, space}.Reduced();
  s.p_at_max = Rational{support.rbegin()->second.weight, space}.Reduced();
  if (w_pos > 0) s.mean_positive = static_cast<double>(sum_pos / w_pos);
  return s;
}

}  // namespace qcoin
