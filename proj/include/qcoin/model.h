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


#ifndef QCOIN_MODEL_H_
#define QCOIN_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qcoin {

// The four dichotomous observables. A/A' belong to system A, B/B' to system B.
enum class Column : std::uint8_t { kA = 0, kAPrime = 1, kB = 2, kBPrime = 3 };

inline constexpr std::array<Column, 4> kAllColumns = {
    Column::kA, Column::kAPrime, Column::kB, Column::kBPrime};

constexpr std::size_t Index(Column c) { return static_cast<std::size_t>(c); }
constexpr bool IsASide(Column c) {
  return c == Column::kA || c == Column::kAPrime;
}
std::string_view ColumnName(Column c);  // "a", "a_prime", "b", "b_prime"
std::optional<Column> ParseColumn(std::string_view name);

// Which cell of each system is pseudocomplementary (selected) in one outcome.
// The other two cells are hidden.
struct SelectionMask {
  Column a_side = Column::kA;
  Column b_side = Column::kBPrime;

  // Throws kDomainError unless a_side is A/A' and b_side is B/B'.
  static SelectionMask Make(Column a_side, Column b_side);

  bool Selects(Column c) const { return c == a_side || c == b_side; }
  friend bool operator==(const SelectionMask&, const SelectionMask&) = default;
};

// One run: all four cells populated, plus the selection.
struct OutcomeRecord {
  std::array<std::uint8_t, 4> values{};  // indexed by Index(Column)
  SelectionMask mask;

  std::uint8_t value(Column c) const { return values[Index(c)]; }
  bool selected(Column c) const { return mask.Selects(c); }
  bool hidden(Column c) const { return !mask.Selects(c); }

  // Throws kDomainError if a value is not 0/1 or the mask is malformed.
  void Validate() const;

  friend bool operator==(const OutcomeRecord&, const OutcomeRecord&) = default;
};

OutcomeRecord MakeOutcome(int a, int a_prime, int b, int b_prime,
                          SelectionMask mask = {});

// n outcomes analyzed together. Never empty.
class ExperimentMatrix {
 public:
  // Throws kEmptyExperiment for an empty list and kDomainError for invalid
  // records.
  explicit ExperimentMatrix(std::vector<OutcomeRecord> outcomes);

  std::size_t n() const { return outcomes_.size(); }
  std::span<const OutcomeRecord> outcomes() const { return outcomes_; }
  const OutcomeRecord& operator[](std::size_t i) const { return outcomes_[i]; }

  friend bool operator==(const ExperimentMatrix&,
                         const ExperimentMatrix&) = default;

 private:
  std::vector<OutcomeRecord> outcomes_;
};

// The four 2x2 blocks of the cross table, each pairing an A-side column with
// a B-side column.
enum class Block : std::uint8_t {
  kAB = 0,
  kABPrime = 1,
  kAPrimeB = 2,
  kAPrimeBPrime = 3
};
inline constexpr std::array<Block, 4> kAllBlocks = {
    Block::kAB, Block::kABPrime, Block::kAPrimeB, Block::kAPrimeBPrime};
constexpr std::size_t Index(Block b) { return static_cast<std::size_t>(b); }
Column ASideOf(Block b);
Column BSideOf(Block b);

// Which (outcome, block) pairs are tallied.
//   kAllPairs: every outcome in every block (the full classical table).
//   kSelectedOnly: a pair is tallied only if both of its cells are selected.
//   kHiddenOnly: a pair is tallied only if both of its cells are hidden.
//   kPseudocomplementary: the A x B block from hidden pairs, the other twelve
//     quadrants from selected pairs.
enum class PairFilter : std::uint8_t {
  kAllPairs,
  kSelectedOnly,
  kHiddenOnly,
  kPseudocomplementary,
};
std::string_view PairFilterName(PairFilter f);

bool Contributes(const OutcomeRecord& outcome, Block block, PairFilter filter);

// Identifies the experiment and filter a derived table came from.
struct Provenance {
  PairFilter filter = PairFilter::kAllPairs;
  std::size_t n = 0;
  std::uint64_t fingerprint = 0;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

using Counts2x2 = std::array<std::array<std::uint32_t, 2>, 2>;  // [x][y]

// Empirical frequencies. In every block x is the A-side value and y the
// B-side value. margins[column][v] counts the distinct cells of that column
// with value v that feed at least one tallied pair.
struct FrequencyCrossTable {
  Provenance provenance;
  std::array<Counts2x2, 4> blocks{};
  std::array<std::array<std::uint32_t, 2>, 4> margins{};

  const Counts2x2& block(Block b) const { return blocks[Index(b)]; }
  std::uint32_t count(Block b, int x, int y) const {
    return blocks[Index(b)][x][y];
  }
  std::uint32_t margin(Column c, int v) const { return margins[Index(c)][v]; }
  std::uint64_t BlockTotal(Block b) const;
  std::uint64_t CellTotal() const;
};

FrequencyCrossTable BuildCrossTable(std::span<const OutcomeRecord> outcomes,
                                    PairFilter filter);
FrequencyCrossTable BuildCrossTable(const ExperimentMatrix& matrix,
                                    PairFilter filter);

// Outcomes represented by a table: the full classical table holds four pairs
// (four observed events) per outcome; pair-selected tables hold one pair per
// tallied outcome (two observed events).
int EventsPerOutcome(PairFilter filter);
double OutcomesRepresented(const FrequencyCrossTable& freq,
                           int events_per_outcome);

// Conditional probabilities with explicit undefined markers for zero margins.
struct ConditionalBlock {
  // a_given_b[y][x] = p(A-side = x | B-side = y)
  std::array<std::array<std::optional<double>, 2>, 2> a_given_b;
  // b_given_a[x][y] = p(B-side = y | A-side = x)
  std::array<std::array<std::optional<double>, 2>, 2> b_given_a;
};

struct ConditionalProbabilityTable {
  Provenance provenance;
  std::array<ConditionalBlock, 4> blocks;
  const ConditionalBlock& block(Block b) const { return blocks[Index(b)]; }
};

ConditionalProbabilityTable ConditionalFromFrequency(
    const FrequencyCrossTable& freq);

struct JointProbabilityTable {
  Provenance provenance;
  int events_per_outcome = 4;
  double outcomes = 0;
  std::array<std::array<std::array<double, 2>, 2>, 4> probs{};  // [block][x][y]
  double p(Block b, int x, int y) const { return probs[Index(b)][x][y]; }
};

// Throws kDomainError for events_per_outcome outside {2, 4} and
// kEmptyExperiment when the table represents zero outcomes.
JointProbabilityTable JointFromFrequency(const FrequencyCrossTable& freq,
                                         int events_per_outcome);

struct MarginalProbabilities {
  Provenance provenance;
  std::array<std::array<double, 2>, 4> probs{};  // [column][v]
  double p(Column c, int v) const { return probs[Index(c)][v]; }
};

MarginalProbabilities MarginalsFromFrequency(const FrequencyCrossTable& freq,
                                             int events_per_outcome);

// max |p(x,y) - p(x|y) p(y)| over defined cells, in both conditioning
// directions. Throws kProvenanceMismatch if the three tables were not derived
// from the same cross table.
double BayesResidual(const JointProbabilityTable& joint,
                     const MarginalProbabilities& marginals,
                     const ConditionalProbabilityTable& conditional);

}  // namespace qcoin

#endif  // QCOIN_MODEL_H_
