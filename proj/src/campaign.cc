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


#include "qcoin/campaign.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qcoin/error.h"

namespace qcoin {
namespace {

constexpr std::size_t kChunk = 256;

double Snap(double d) { return std::abs(d) <= kDeficitTolerance ? 0.0 : d; }

}  // namespace

void CampaignConfig::Validate() const {
  if (n == 0) throw Error(ErrorCode::kDomainError, "n must be at least 1");
  if (experiments == 0) {
    throw Error(ErrorCode::kDomainError, "N must be at least 1");
  }
  if (!(delta >= 0.0)) {
    throw Error(ErrorCode::kDomainError, "delta must be nonnegative");
  }
}

CampaignResult RunCampaign(const CampaignConfig& config, std::stop_token stop) {
  config.Validate();
  CampaignResult out;
  out.results.resize(config.experiments);

  unsigned workers = config.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, (config.experiments + kChunk - 1) / kChunk));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> cancelled{false};
  auto work = [&] {
    std::vector<OutcomeRecord> buffer(config.n);
    while (true) {
      if (stop.stop_requested()) {
        cancelled = true;
        return;
      }
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= config.experiments) return;
      const std::size_t end = std::min(begin + kChunk, config.experiments);
      for (std::size_t i = begin; i < end; ++i) {
        GenerateInto(config.kind, SeedSpec{config.master_seed, i},
                     config.domain, buffer);
        out.results[i] = DeficitPseudo(buffer, config.scheme);
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (cancelled) throw Error(ErrorCode::kCancelled, "campaign cancelled");

  out.stats =
      ComputeStats(out.results, config.delta, config.index_denominator);
  return out;
}

CampaignStats ComputeStats(std::span<const DeficitResult> results, double delta,
                           IndexDenominator index_denominator) {
  if (results.empty()) {
    throw Error(ErrorCode::kEmptyCampaign, "no experiments");
  }
  CampaignStats s;
  s.n_valid = results.size();
  s.max_deficit = results.front().deficit;
  s.min_deficit = results.front().deficit;
  double sum_positive = 0;
  for (const DeficitResult& r : results) {
    const double d = r.deficit;
    s.max_deficit = std::max(s.max_deficit, d);
    s.min_deficit = std::min(s.min_deficit, d);
    if (std::abs(d) <= kDeficitTolerance) ++s.n_zero;
    if (d > delta + kDeficitTolerance) {
      ++s.n0;
      sum_positive += d;
    }
  }
  s.p_rank = PercentrankFraction(Deficits(results));
  if (s.n0 > 0) s.avg_positive = sum_positive / s.n0;
  try {
    s.index_deficit = IndexDeficit(results, index_denominator);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateIndex) throw;
  }
  try {
    s.index_norm = IndexNorm(results);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateIndex) throw;
  }
  return s;
}

double PercentrankFraction(std::span<const double> deficits, double threshold) {
  if (deficits.empty()) {
    throw Error(ErrorCode::kEmptyCampaign, "no deficits");
  }
  std::uint64_t at_or_above = 0;
  for (double d : deficits) {
    if (d >= threshold - kDeficitTolerance) ++at_or_above;
  }
  return static_cast<double>(at_or_above) / deficits.size();
}

Histogram MakeHistogram(std::span<const double> deficits, double bin_width) {
  if (!(bin_width > 0.0)) {
    throw Error(ErrorCode::kDomainError, "bin width must be positive");
  }
  if (deficits.empty()) {
    throw Error(ErrorCode::kEmptyCampaign, "no deficits to bin");
  }
  auto bin_of = [bin_width](double d) {
    return static_cast<long long>(std::floor(Snap(d) / bin_width));
  };
  long long lo = bin_of(deficits.front());
  long long hi = lo;
  for (double d : deficits) {
    lo = std::min(lo, bin_of(d));
    hi = std::max(hi, bin_of(d));
  }
  Histogram h;
  h.bin_width = bin_width;
  h.bins.resize(static_cast<std::size_t>(hi - lo + 1));
  for (long long k = lo; k <= hi; ++k) {
    h.bins[static_cast<std::size_t>(k - lo)].lower =
        static_cast<double>(k) * bin_width;
  }
  for (double d : deficits) {
    ++h.bins[static_cast<std::size_t>(bin_of(d) - lo)].count;
  }
  return h;
}

std::vector<double> Deficits(std::span<const DeficitResult> results) {
  std::vector<double> out;
  out.reserve(results.size());
  for (const auto& r : results) out.push_back(r.deficit);
  return out;
}

}  // namespace qcoin
