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


#include "qcoin/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "qcoin/campaign.h"
#include "qcoin/error.h"
#include "qcoin/inference.h"
#include "qcoin/quantum.h"
#include "qcoin/server.h"
#include "qcoin/session_io.h"
#include "qcoin/simulate.h"

namespace qcoin {
namespace {

const std::map<std::string, CaseKind> kCaseMap = {
    {"random", CaseKind::kStochastic},
    {"stochastic", CaseKind::kStochastic},
    {"anticorrelated", CaseKind::kAnticorrelated},
    {"anti", CaseKind::kAnticorrelated},
};
const std::map<std::string, SelectionDomain> kDomainMap = {
    {"three", SelectionDomain::kThreeEntangledPairs},
    {"four", SelectionDomain::kFourPairs},
};
const std::map<std::string, EstimatorScheme> kSchemeMap = {
    {"cross_table", EstimatorScheme::kCrossTable},
    {"full_columns", EstimatorScheme::kFullColumns},
};
const std::map<std::string, IndexDenominator> kDenominatorMap = {
    {"conditional", IndexDenominator::kConditional},
    {"marginal", IndexDenominator::kMarginal},
};
const std::map<std::string, VerdictMode> kModeMap = {
    {"early", VerdictMode::kEarly},
    {"conservative", VerdictMode::kConservative},
};

struct Flags {
  CaseKind kind = CaseKind::kStochastic;
  std::size_t outcomes = 4;
  std::size_t experiments = 10000;
  std::uint64_t seed = 0;
  SelectionDomain domain = kDefaultDomain;
  EstimatorScheme scheme = EstimatorScheme::kCrossTable;
  IndexDenominator denominator = IndexDenominator::kConditional;
  VerdictMode mode = VerdictMode::kEarly;
  double delta = 0.0;
  double alpha = 0.001;
  double gamma = 0.99;
  double p0 = 0.012;
  double p1 = 0.85;
  std::uint64_t n_max = 10000;
  bool table = false;
  unsigned threads = 0;
  std::optional<double> bin_width;
  double min = 0.0;
  double max = 100.0;
  double step = 0.01;
  std::uint64_t k_e = 0;
  bool more_than = false;
  std::optional<int> port;
  std::string data_dir;
  std::string input;
  std::string output;
};

void AddCase(CLI::App* cmd, Flags& f) {
  cmd->add_option("--case", f.kind, "random or anticorrelated")
      ->transform(CLI::CheckedTransformer(kCaseMap, CLI::ignore_case));
}
void AddSelection(CLI::App* cmd, Flags& f) {
  cmd->add_option("--selection", f.domain, "three or four")
      ->transform(CLI::CheckedTransformer(kDomainMap, CLI::ignore_case));
}
void AddScheme(CLI::App* cmd, Flags& f) {
  cmd->add_option("--scheme", f.scheme, "cross_table or full_columns")
      ->transform(CLI::CheckedTransformer(kSchemeMap, CLI::ignore_case));
}
void AddPlanFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--p0", f.p0, "positive-deficit probability under H0");
  cmd->add_option("--p1", f.p1, "positive-deficit probability under H1");
  cmd->add_option("--alpha", f.alpha, "significance level (fraction)");
  cmd->add_option("--gamma", f.gamma, "power (fraction)");
  cmd->add_option("--n-max", f.n_max, "largest N searched");
}

// Writes to --output when given, else to `out`.
template <typename Fn>
void Emit(const std::string& path, std::ostream& out, Fn write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::kParseError, "cannot write " + path);
  write(file);
}

Json ExactJson(const ExactStats& s, CaseKind kind, std::size_t n,
               SelectionDomain domain, EstimatorScheme scheme) {
  auto rational = [](const Rational& r) {
    const Rational red = r.Reduced();
    return Json{{"num", red.num}, {"den", red.den}, {"value", r.ToDouble()}};
  };
  Json j;
  j["estimator_variant"] =
      EstimatorVariantJson(scheme, IndexDenominator::kConditional);
  j["case"] = CaseKindName(kind);
  j["outcomes"] = n;
  j["selection"] = SelectionDomainName(domain);
  j["sample_space_size"] = s.sample_space_size;
  j["support_size"] = s.support_size;
  j["p_strict_positive"] = rational(s.p_strict_positive);
  j["p_zero"] = rational(s.p_zero);
  j["p_negative"] = rational(s.p_negative);
  j["max_deficit"] = s.max_deficit;
  j["p_at_max"] = rational(s.p_at_max);
  j["min_deficit"] = s.min_deficit;
  j["p_at_min"] = rational(s.p_at_min);
  j["mean_positive"] = s.mean_positive ? Json(*s.mean_positive) : Json(nullptr);
  return j;
}

int RunSimulate(const Flags& f, std::ostream& out) {
  CampaignConfig config;
  config.kind = f.kind;
  config.n = f.outcomes;
  config.experiments = f.experiments;
  config.master_seed = f.seed;
  config.domain = f.domain;
  config.delta = f.delta;
  config.scheme = f.scheme;
  config.index_denominator = f.denominator;
  config.threads = f.threads;
  const CampaignResult result = RunCampaign(config);
  Json j = StatsJson(config, result.stats);
  if (f.bin_width) {
    const Histogram h = MakeHistogram(Deficits(result.results), *f.bin_width);
    Json bins = Json::array();
    for (const auto& b : h.bins) {
      bins.push_back(Json{{"lower", b.lower}, {"count", b.count}});
    }
    j["histogram"] = Json{{"bin_width", h.bin_width}, {"bins", bins}};
  }
  if (!f.output.empty()) {
    Emit(f.output, out, [&](std::ostream& o) { WriteDeficitsCsv(o, result.results); });
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int RunPlan(const Flags& f, std::ostream& out) {
  const HypothesisProbs probs{f.p0, f.p1};
  if (f.table) {
    const auto cells = ReferencePlanGrid(probs);
    Emit(f.output, out, [&](std::ostream& o) {
      o << "alpha_percent,gamma_percent,n_req,k0,matches_reference\n";
      for (const auto& c : cells) {
        o << FormatDouble(c.plan.alpha * 100) << ','
          << FormatDouble(c.plan.gamma * 100) << ',' << c.plan.n_req << ','
          << c.plan.k0 << ','
          << (c.reference ? (c.matches() ? "true" : "false") : "") << '\n';
      }
    });
    return kExitOk;
  }
  const DecisionPlan plan = FindPlan(probs, f.alpha, f.gamma, f.n_max);
  Json j;
  j["n_req"] = plan.n_req;
  j["k0"] = plan.k0;
  out << j.dump() << '\n';
  return kExitOk;
}

int RunAnalyze(const Flags& f, std::ostream& out) {
  std::ifstream in(f.input);
  if (!in) throw Error(ErrorCode::kParseError, "cannot read " + f.input);
  const auto experiments = ParseSessionCsv(in);
  const DecisionPlan plan = FindPlan({f.p0, f.p1}, f.alpha, f.gamma, f.n_max);
  AnalysisConfig config;
  config.delta = f.delta;
  config.domain = f.domain;
  config.scheme = f.scheme;
  config.index_denominator = f.denominator;
  config.mode = f.mode;
  const std::size_t n = experiments.empty() ? f.outcomes : experiments[0].n();
  const SessionAnalysis analysis =
      AnalyzeExperiments(plan, n, experiments, config);
  Emit(f.output, out, [&](std::ostream& o) {
    o << AnalysisJson(analysis, config).dump(2) << '\n';
  });
  return kExitOk;
}

int RunServe(const Flags& f, std::ostream& out) {
  int port = 8080;
  if (const char* env = std::getenv("PORT")) port = std::atoi(env);
  if (f.port) port = *f.port;
  std::string data_dir = "data";
  if (const char* env = std::getenv("DATA_DIR")) data_dir = env;
  if (!f.data_dir.empty()) data_dir = f.data_dir;

  ServerOptions options;
  options.data_dir = data_dir;
  options.analysis.scheme = f.scheme;
  options.analysis.delta = f.delta;
  options.analysis.mode = f.mode;
  ApiServer server(options);
  out << "listening on 0.0.0.0:" << port << ", data in " << data_dir
      << std::endl;
  if (!server.Listen("0.0.0.0", port)) {
    throw Error(ErrorCode::kConflict, "cannot listen on port " +
                                          std::to_string(port));
  }
  return kExitOk;
}

}  // namespace

int CliMain(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"qcoin: pseudocomplementary Bell-inequality toolkit", "qcoin"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo campaign");
  AddCase(simulate, f);
  simulate->add_option("--outcomes", f.outcomes, "outcomes per experiment");
  simulate->add_option("--experiments", f.experiments, "number of experiments");
  simulate->add_option("--seed", f.seed, "master seed");
  AddSelection(simulate, f);
  AddScheme(simulate, f);
  simulate->add_option("--delta", f.delta, "threshold in bits");
  simulate->add_option("--threads", f.threads, "worker threads (0: all cores)");
  simulate->add_option("--bin-width", f.bin_width, "add a deficit histogram");
  simulate->add_option("--index-denominator", f.denominator)
      ->transform(CLI::CheckedTransformer(kDenominatorMap, CLI::ignore_case));
  simulate->add_option("--output", f.output, "per-experiment deficits CSV");

  auto* enumerate = app.add_subcommand("enumerate", "exact distribution");
  AddCase(enumerate, f);
  enumerate->add_option("--outcomes", f.outcomes, "outcomes per experiment");
  AddSelection(enumerate, f);
  AddScheme(enumerate, f);

  auto* curve = app.add_subcommand("curve", "singlet reference curve CSV");
  curve->add_option("--min", f.min, "first angle, degrees");
  curve->add_option("--max", f.max, "end angle, degrees");
  curve->add_option("--step", f.step, "spacing, degrees");
  curve->add_option("--output", f.output, "CSV path");

  auto* plan = app.add_subcommand("plan", "required experiments and k0");
  AddPlanFlags(plan, f);
  plan->add_flag("--table", f.table, "full alpha/gamma grid as CSV");
  plan->add_option("--output", f.output, "CSV path for --table");

  auto* tail = app.add_subcommand("tail", "binomial upper tail");
  tail->add_option("--ke", f.k_e, "observed positive count")->required();
  tail->add_option("--experiments", f.experiments, "N")->required();
  tail->add_option("--p0", f.p0, "per-experiment probability");
  tail->add_flag("--more-than", f.more_than, "P(k > k_e) instead of P(k >= k_e)");

  auto* analyze = app.add_subcommand("analyze", "verdict for a session CSV");
  analyze->add_option("--input", f.input, "session CSV")->required();
  AddPlanFlags(analyze, f);
  analyze->add_option("--delta", f.delta, "threshold in bits");
  analyze->add_option("--outcomes", f.outcomes, "n when the file is empty");
  AddSelection(analyze, f);
  AddScheme(analyze, f);
  analyze->add_option("--mode", f.mode, "early or conservative")
      ->transform(CLI::CheckedTransformer(kModeMap, CLI::ignore_case));
  analyze->add_option("--output", f.output, "JSON path");

  auto* serve = app.add_subcommand("serve", "JSON HTTP API");
  serve->add_option("--port", f.port, "defaults to $PORT, then 8080");
  serve->add_option("--data-dir", f.data_dir, "defaults to $DATA_DIR, then ./data");
  AddScheme(serve, f);
  serve->add_option("--delta", f.delta, "threshold in bits");
  serve->add_option("--mode", f.mode, "early or conservative")
      ->transform(CLI::CheckedTransformer(kModeMap, CLI::ignore_case));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return RunSimulate(f, out);
    if (enumerate->parsed()) {
      const ExactStats s = EnumerateExact(f.kind, f.outcomes, f.domain, f.scheme);
      out << ExactJson(s, f.kind, f.outcomes, f.domain, f.scheme).dump(2) << '\n';
      return kExitOk;
    }
    if (curve->parsed()) {
      const auto points = SampleCurve(f.min, f.max, f.step);
      Emit(f.output, out, [&](std::ostream& o) {
        o << "theta_degrees,deficit_bits\n";
        for (const auto& p : points) {
          o << FormatDouble(p.theta) << ',' << FormatDouble(p.deficit) << '\n';
        }
      });
      return kExitOk;
    }
    if (plan->parsed()) return RunPlan(f, out);
    if (tail->parsed()) {
      const TailReading reading =
          f.more_than ? TailReading::kMoreThan : TailReading::kAtLeast;
      Json j;
      j["k_e"] = f.k_e;
      j["experiments"] = f.experiments;
      j["p0"] = f.p0;
      j["reading"] = f.more_than ? "more_than" : "at_least";
      j["tail"] = TailAtLeast(f.k_e, f.experiments, f.p0, reading);
      out << j.dump() << '\n';
      return kExitOk;
    }
    if (analyze->parsed()) return RunAnalyze(f, out);
    if (serve->parsed()) return RunServe(f, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace qcoin
