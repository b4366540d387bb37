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


#ifndef QCOIN_SESSION_IO_H_
#define QCOIN_SESSION_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qcoin/campaign.h"
#include "qcoin/entropy.h"
#include "qcoin/inference.h"
#include "qcoin/model.h"
#include "qcoin/simulate.h"

namespace qcoin {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSessionCsvHeader =
    "experiment,outcome,a,a_prime,b,b_prime,sel_a,sel_b";
inline constexpr std::string_view kDeficitsCsvHeader =
    "experiment_index,h_ab_hd,h_ab_prime,h_bprime_aprime,h_aprime_b,deficit";

// Rows of one experiment must be contiguous and numbered 1..n. Throws
// kParseError (message carries the 1-based line number) and kShapeError when
// experiments differ in n.
std::vector<ExperimentMatrix> ParseSessionCsv(std::istream& in);
std::vector<ExperimentMatrix> ParseSessionCsv(std::string_view text);

// Experiments are numbered from 1 in file order.
void WriteSessionCsv(std::ostream& out,
                     std::span<const ExperimentMatrix> experiments);
std::string SessionCsv(std::span<const ExperimentMatrix> experiments);

// experiment_index counts from 0, matching SeedSpec::experiment_index.
void WriteDeficitsCsv(std::ostream& out,
                      std::span<const DeficitResult> results);

// Shortest decimal text that reads back to the same double.
std::string FormatDouble(double v);

struct AnalysisConfig {
  double delta = 0.0;
  SelectionDomain domain = kDefaultDomain;
  EstimatorScheme scheme = EstimatorScheme::kCrossTable;
  IndexDenominator index_denominator = IndexDenominator::kConditional;
  VerdictMode mode = VerdictMode::kEarly;

  void Validate() const;  // kDomainError for delta < 0
};

Json EstimatorVariantJson(EstimatorScheme scheme,
                          IndexDenominator index_denominator);
Json PlanJson(const DecisionPlan& plan);
Json StatsJson(const CampaignConfig& config, const CampaignStats& stats);

struct SessionAnalysis {
  DecisionPlan plan;
  std::size_t n = 0;
  std::vector<DeficitResult> results;
  std::uint64_t k_e = 0;  // deficits above delta
  Verdict verdict;
};

// Empty input is allowed and yields InProgress with k_e == 0. Throws
// kShapeError when an experiment's size differs from n, and kDomainError
// when a selection falls outside config.domain.
SessionAnalysis AnalyzeExperiments(const DecisionPlan& plan, std::size_t n,
                                   std::span<const ExperimentMatrix> experiments,
                                   const AnalysisConfig& config);

// Shared by CLI analyze and the session summary endpoint.
Json AnalysisJson(const SessionAnalysis& analysis, const AnalysisConfig& config);

struct SessionRecord {
  std::string session_id;
  DecisionPlan plan;
  std::size_t n = 0;
  SelectionDomain domain = kDefaultDomain;
  std::string created;
  std::string updated;
  std::vector<ExperimentMatrix> experiments;  // completed, append-only
  std::vector<OutcomeRecord> pending;         // current partial experiment

  // 1-based index of the experiment that accepts the next outcome.
  std::uint64_t current_experiment() const { return experiments.size() + 1; }
};

SessionAnalysis AnalyzeSession(const SessionRecord& session,
                               const AnalysisConfig& config);

// One append-only newline-delimited JSON file per session under `root`.
// Writers hold an exclusive flock on the file, readers a shared one.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path root);

  // kDomainError for n == 0.
  SessionRecord Create(const DecisionPlan& plan, std::size_t n,
                       SelectionDomain domain);

  // kNotFound for unknown or malformed ids.
  SessionRecord Load(const std::string& session_id) const;

  // `experiment` is 1-based. kConflict when it names a completed experiment
  // or skips ahead of the current one; kDomainError for invalid outcomes or
  // selections outside the session's domain.
  SessionRecord AppendOutcome(const std::string& session_id,
                              std::uint64_t experiment,
                              const OutcomeRecord& outcome);

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path PathFor(const std::string& session_id) const;

  std::filesystem::path root_;
};

// Decodes {"a":0,"a_prime":1,"b":1,"b_prime":0,"sel_a":"a","sel_b":"b"}.
// kDomainError for missing fields or out-of-range values.
OutcomeRecord OutcomeFromJson(const Json& j);
Json OutcomeToJson(const OutcomeRecord& o);

}  // namespace qcoin

#endif  // QCOIN_SESSION_IO_H_
