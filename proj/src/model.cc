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


#include "qcoin/model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcoin/error.h"

namespace qcoin {

std::string_view ColumnName(Column c) {
  switch (c) {
    case Column::kA: return "a";
    case Column::kAPrime: return "a_prime";
    case Column::kB: return "b";
    case Column::kBPrime: return "b_prime";
  }
  return "?";
}

std::optional<Column> ParseColumn(std::string_view name) {
  for (Column c : kAllColumns) {
    if (ColumnName(c) == name) return c;
  }
  return std::nullopt;
}

SelectionMask SelectionMask::Make(Column a_side, Column b_side) {
  if (!IsASide(a_side) || IsASide(b_side)) {
    throw Error(ErrorCode::kDomainError,
                "selection must pair a/a_prime with b/b_prime, got " +
                    std::string(ColumnName(a_side)) + "," +
                    std::string(ColumnName(b_side)));
  }
  return SelectionMask{a_side, b_side};
}

void OutcomeRecord::Validate() const {
  for (std::uint8_t v : values) {
    if (v > 1) throw Error(ErrorCode::kDomainError, "cell value must be 0 or 1");
  }
  SelectionMask::Make(mask.a_side, mask.b_side);
}

OutcomeRecord MakeOutcome(int a, int a_prime, int b, int b_prime,
                          SelectionMask mask) {
  for (int v : {a, a_prime, b, b_prime}) {
    if (v != 0 && v != 1) {
      throw Error(ErrorCode::kDomainError, "cell value must be 0 or 1");
    }
  }
  OutcomeRecord r;
  r.values = {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(a_prime),
              static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(b_prime)};
  r.mask = SelectionMask::Make(mask.a_side, mask.b_side);
  return r;
}

ExperimentMatrix::ExperimentMatrix(std::vector<OutcomeRecord> outcomes)
    : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) {
    throw Error(ErrorCode::kEmptyExperiment, "experiment has no outcomes");
  }
  for (const auto& o : outcomes_) o.Validate();
}

Column ASideOf(Block b) {
  return (b == Block::kAB || b == Block::kABPrime) ? Column::kA
                                                   : Column::kAPrime;
}

Column BSideOf(Block b) {
  return (b == Block::kAB || b == Block::kAPrimeB) ? Column::kB
                                                   : Column::kBPrime;
}

std::string_view PairFilterName(PairFilter f) {
  switch (f) {
    case PairFilter::kAllPairs: return "all_pairs";
    case PairFilter::kSelectedOnly: return "selected_only";
    case PairFilter::kHiddenOnly: return "hidden_only";
    case PairFilter::kPseudocomplementary: return "pseudocomplementary";
  }
  return "?";
}

bool Contributes(const OutcomeRecord& o, Block block, PairFilter filter) {
  const Column x = ASideOf(block);
  const Column y = BSideOf(block);
  switch (filter) {
    case PairFilter::kAllPairs:
      return true;
    case PairFilter::kSelectedOnly:
      return o.selected(x) && o.selected(y);
    case PairFilter::kHiddenOnly:
      return o.hidden(x) && o.hidden(y);
    case PairFilter::kPseudocomplementary:
      return block == Block::kAB ? (o.hidden(x) && o.hidden(y))
                                 : (o.selected(x) && o.selected(y));
  }
  return false;
}

std::uint64_t FrequencyCrossTable::BlockTotal(Block b) const {
  const auto& c = blocks[Index(b)];
  return std::uint64_t{c[0][0]} + c[0][1] + c[1][0] + c[1][1];
}

std::uint64_t FrequencyCrossTable::CellTotal() const {
  std::uint64_t total = 0;
  for (Block b : kAllBlocks) total += BlockTotal(b);
  return total;
}

namespace {

std::uint64_t Fingerprint(const FrequencyCrossTable& t) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  mix(static_cast<std::uint64_t>(t.provenance.filter));
  mix(t.provenance.n);
  for (const auto& block : t.blocks)
    for (const auto& row : block)
      for (std::uint32_t v : row) mix(v);
  for (const auto& m : t.margins) {
    mix(m[0]);
    mix(m[1]);
  }
  return h;
}

// The two blocks a column participates in.
std::array<Block, 2> BlocksOf(Column c) {
  switch (c) {
    case Column::kA: return {Block::kAB, Block::kABPrime};
    case Column::kAPrime: return {Block::kAPrimeB, Block::kAPrimeBPrime};
    case Column::kB: return {Block::kAB, Block::kAPrimeB};
    case Column::kBPrime: return {Block::kABPrime, Block::kAPrimeBPrime};
  }
  return {Block::kAB, Block::kAB};
}

}  // namespace

FrequencyCrossTable BuildCrossTable(std::span<const OutcomeRecord> outcomes,
                                    PairFilter filter) {
  if (outcomes.empty()) {
    throw Error(ErrorCode::kEmptyExperiment, "experiment has no outcomes");
  }
  FrequencyCrossTable t;
  t.provenance.filter = filter;
  t.provenance.n = outcomes.size();
  for (const OutcomeRecord& o : outcomes) {
    for (Block b : kAllBlocks) {
      if (Contributes(o, b, filter)) {
        ++t.blocks[Index(b)][o.value(ASideOf(b))][o.value(BSideOf(b))];
      }
    }
    for (Column c : kAllColumns) {
      const auto [b1, b2] = BlocksOf(c);
      if (Contributes(o, b1, filter) || Contributes(o, b2, filter)) {
        ++t.margins[Index(c)][o.value(c)];
      }
    }
  }
  t.provenance.fingerprint = Fingerprint(t);
  return t;
}

FrequencyCrossTable BuildCrossTable(const ExperimentMatrix& matrix,
                                    PairFilter filter) {
  return BuildCrossTable(matrix.outcomes(), filter);
}

int EventsPerOutcome(PairFilter filter) {
  return filter == PairFilter::kAllPairs ? 4 : 2;
}

double OutcomesRepresented(const FrequencyCrossTable& freq,
                           int events_per_outcome) {
  if (events_per_outcome != 2 && events_per_outcome != 4) {
    throw Error(ErrorCode::kDomainError, "events per outcome must be 2 or 4");
  }
  const double cells = static_cast<double>(freq.CellTotal());
  return events_per_outcome == 4 ? cells / 4.0 : cells;
}

ConditionalProbabilityTable ConditionalFromFrequency(
    const FrequencyCrossTable& freq) {
  ConditionalProbabilityTable t;
  t.provenance = freq.provenance;
  for (Block b : kAllBlocks) {
    const Column xc = ASideOf(b);
    const Column yc = BSideOf(b);
    ConditionalBlock& out = t.blocks[Index(b)];
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const double n_xy = freq.count(b, x, y);
        if (const std::uint32_t m = freq.margin(yc, y); m > 0) {
          out.a_given_b[y][x] = n_xy / m;
        }
        if (const std::uint32_t m = freq.margin(xc, x); m > 0) {
          out.b_given_a[x][y] = n_xy / m;
        }
      }
    }
  }
  return t;
}

JointProbabilityTable JointFromFrequency(const FrequencyCrossTable& freq,
                                         int events_per_outcome) {
  const double outcomes = OutcomesRepresented(freq, events_per_outcome);
  if (outcomes <= 0) {
    throw Error(ErrorCode::kEmptyExperiment, "table represents no outcomes");
  }
  JointProbabilityTable t;
  t.provenance = freq.provenance;
  t.events_per_outcome = events_per_outcome;
  t.outcomes = outcomes;
  for (Block b : kAllBlocks)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        t.probs[Index(b)][x][y] = freq.count(b, x, y) / outcomes;
  return t;
}

MarginalProbabilities MarginalsFromFrequency(const FrequencyCrossTable& freq,
                                             int events_per_outcome) {
  const double outcomes = OutcomesRepresented(freq, events_per_outcome);
  if (outcomes <= 0) {
    throw Error(ErrorCode::kEmptyExperiment, "table represents no outcomes");
  }
  MarginalProbabilities m;
  m.provenance = freq.provenance;
  for (Column c : kAllColumns)
    for (int v = 0; v < 2; ++v)
      m.probs[Index(c)][v] = freq.margin(c, v) / outcomes;
  return m;
}

double BayesResidual(const JointProbabilityTable& joint,
                     const MarginalProbabilities& marginals,
                     const ConditionalProbabilityTable& conditional) {
  if (!(joint.provenance == marginals.provenance) ||
      !(joint.provenance == conditional.provenance)) {
    throw Error(ErrorCode::kProvenanceMismatch,
                "joint, marginal and conditional tables differ in origin");
  }
  double worst = 0.0;
  for (Block b : kAllBlocks) {
    const Column xc = ASideOf(b);
    const Column yc = BSideOf(b);
    const ConditionalBlock& cb = conditional.block(b);
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const double pxy = joint.p(b, x, y);
        if (cb.a_given_b[y][x]) {
          worst = std::max(
              worst, std::abs(pxy - *cb.a_given_b[y][x] * marginals.p(yc, y)));
        }
        if (cb.b_given_a[x][y]) {
          worst = std::max(
              worst, std::abs(pxy - *cb.b_given_a[x][y] * marginals.p(xc, x)));
        }
      }
    }
  }
  return worst;
}

}  // namespace qcoin
