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


#ifndef QCOIN_CAMPAIGN_H_
#define QCOIN_CAMPAIGN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stop_token>
#include <vector>

#include "qcoin/entropy.h"
#include "qcoin/simulate.h"

namespace qcoin {

struct CampaignConfig {
  CaseKind kind = CaseKind::kStochastic;
  std::size_t n = 4;                // outcomes per experiment
  std::size_t experiments = 10000;  // N
  std::uint64_t master_seed = 0;
  SelectionDomain domain = kDefaultDomain;
  double delta = 0.0;
  EstimatorScheme scheme = EstimatorScheme::kCrossTable;
  IndexDenominator index_denominator = IndexDenominator::kConditional;
  unsigned threads = 0;  // 0: hardware concurrency

  // Throws kDomainError for n == 0, experiments == 0 or delta < 0.
  void Validate() const;
};

struct CampaignStats {
  // (#zero + #positive) / N, zero judged at kDeficitTolerance.
  double p_rank = 0;
  // Deficits strictly above delta.
  std::uint64_t n0 = 0;
  std::uint64_t n_zero = 0;
  std::optional<double> avg_positive;  // absent when n0 == 0
  double max_deficit = 0;
  double min_deficit = 0;
  std::optional<double> index_deficit;  // absent when degenerate
  std::optional<double> index_norm;
  std::uint64_t n_valid = 0;
};

struct CampaignResult {
  CampaignStats stats;
  std::vector<DeficitResult> results;  // indexed by experiment
};

// Experiment i draws from SeedSpec{master_seed, i}; results are merged by
// index, so output does not depend on `threads`. Throws kCancelled if `stop`
// is triggered before completion.
CampaignResult RunCampaign(const CampaignConfig& config,
                           std::stop_token stop = {});

CampaignStats ComputeStats(std::span<const DeficitResult> results,
                           double delta = 0.0,
                           IndexDenominator index_denominator =
                               IndexDenominator::kConditional);

// (#{d == threshold} + #{d > threshold}) / #total. Throws kEmptyCampaign.
double PercentrankFraction(std::span<const double> deficits,
                           double threshold = 0.0);

struct Histogram {
  struct Bin {
    double lower = 0;
    std::uint64_t count = 0;
  };
  double bin_width = 0;
  std::vector<Bin> bins;  // contiguous, ascending
};

// Left-closed bins [k w, (k+1) w) with an edge at zero. Values within
// kDeficitTolerance of zero land in [0, w). Throws kDomainError for a
// nonpositive width and kEmptyCampaign for no values.
Histogram MakeHistogram(std::span<const double> deficits, double bin_width);

std::vector<double> Deficits(std::span<const DeficitResult> results);

}  // namespace qcoin

#endif  // QCOIN_CAMPAIGN_H_
