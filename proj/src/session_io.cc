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


#include "qcoin/session_io.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "qcoin/error.h"

namespace qcoin {
namespace {

[[noreturn]] void ParseFail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> SplitCommas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<std::uint64_t> ParseUnsigned(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::string NowUtc() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string NewSessionId() {
  std::random_device rd;
  std::uint64_t hi = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::uint64_t lo = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx",
                static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

bool ValidSessionId(const std::string& id) {
  if (id.size() != 32) return false;
  for (char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

void CheckDomain(const OutcomeRecord& o, SelectionDomain domain) {
  if (!InDomain(o.mask, domain)) {
    throw Error(ErrorCode::kDomainError,
                "selection (" + std::string(ColumnName(o.mask.a_side)) + "," +
                    std::string(ColumnName(o.mask.b_side)) +
                    ") not allowed under domain " +
                    std::string(SelectionDomainName(domain)));
  }
}

// RAII flock holder around a raw descriptor.
class LockedFile {
 public:
  LockedFile(const std::filesystem::path& path, int flags, int lock) {
    fd_ = ::open(path.c_str(), flags, 0644);
    if (fd_ < 0) {
      throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
    }
    if (::flock(fd_, lock) != 0) {
      ::close(fd_);
      throw Error(ErrorCode::kConflict, "cannot lock " + path.string());
    }
  }
  ~LockedFile() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  LockedFile(const LockedFile&) = delete;
  LockedFile& operator=(const LockedFile&) = delete;

  std::string ReadAll() const {
    std::string out;
    char buf[4096];
    ::lseek(fd_, 0, SEEK_SET);
    ssize_t got;
    while ((got = ::read(fd_, buf, sizeof buf)) > 0) out.append(buf, got);
    return out;
  }

  void Append(const std::string& line) const {
    std::size_t done = 0;
    while (done < line.size()) {
      const ssize_t w = ::write(fd_, line.data() + done, line.size() - done);
      if (w <= 0) throw Error(ErrorCode::kConflict, "write failed");
      done += static_cast<std::size_t>(w);
    }
    ::fsync(fd_);
  }

 private:
  int fd_ = -1;
};

Json HeaderJson(const SessionRecord& r) {
  Json j;
  j["kind"] = "session";
  j["session_id"] = r.session_id;
  j["n"] = r.n;
  j["selection"] = SelectionDomainName(r.domain);
  j["p0_h0"] = r.plan.probs.p0_h0;
  j["p0_h1"] = r.plan.probs.p0_h1;
  j["alpha"] = r.plan.alpha;
  j["gamma"] = r.plan.gamma;
  j["n_req"] = r.plan.n_req;
  j["k0"] = r.plan.k0;
  j["created"] = r.created;
  return j;
}

SessionRecord Replay(const std::string& text) {
  SessionRecord r;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      // A torn final line from a crashed writer is ignored.
      continue;
    }
    const std::string kind = j.value("kind", "");
    if (kind == "session") {
      r.session_id = j.at("session_id").get<std::string>();
      r.n = j.at("n").get<std::size_t>();
      r.domain = ParseSelectionDomain(j.at("selection").get<std::string>())
                     .value_or(kDefaultDomain);
      r.plan.probs = {j.at("p0_h0").get<double>(), j.at("p0_h1").get<double>()};
      r.plan.alpha = j.at("alpha").get<double>();
      r.plan.gamma = j.at("gamma").get<double>();
      r.plan.n_req = j.at("n_req").get<std::uint64_t>();
      r.plan.k0 = j.at("k0").get<std::uint64_t>();
      r.created = j.at("created").get<std::string>();
      r.updated = r.created;
      have_header = true;
    } else if (kind == "outcome" && have_header) {
      r.pending.push_back(OutcomeFromJson(j));
      r.updated = j.value("recorded", r.updated);
      if (r.pending.size() == r.n) {
        r.experiments.emplace_back(std::move(r.pending));
        r.pending.clear();
      }
    }
  }
  if (!have_header) throw Error(ErrorCode::kNotFound, "session header missing");
  return r;
}

Column ParseSel(const Json& j, const char* key, bool a_side) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error(ErrorCode::kDomainError, std::string("missing ") + key);
  }
  auto col = ParseColumn(j[key].get<std::string>());
  if (!col || IsASide(*col) != a_side) {
    throw Error(ErrorCode::kDomainError,
                std::string("bad ") + key + " value " + j[key].dump());
  }
  return *col;
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<ExperimentMatrix> ParseSessionCsv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next_line()) ParseFail(1, "missing header");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  if (line != kSessionCsvHeader) ParseFail(line_no, "unexpected header");

  std::vector<std::vector<OutcomeRecord>> groups;
  std::vector<std::uint64_t> ids;
  while (next_line()) {
    if (line.empty()) continue;
    const auto fields = SplitCommas(line);
    if (fields.size() != 8) {
      ParseFail(line_no, "expected 8 fields, got " +
                             std::to_string(fields.size()));
    }
    const auto exp_id = ParseUnsigned(fields[0]);
    const auto outcome_no = ParseUnsigned(fields[1]);
    if (!exp_id) ParseFail(line_no, "bad experiment id");
    if (!outcome_no) ParseFail(line_no, "bad outcome number");
    std::array<std::uint8_t, 4> bits{};
    for (int c = 0; c < 4; ++c) {
      if (fields[2 + c] != "0" && fields[2 + c] != "1") {
        ParseFail(line_no, "cell value must be 0 or 1");
      }
      bits[c] = fields[2 + c] == "1";
    }
    const auto sel_a = ParseColumn(fields[6]);
    const auto sel_b = ParseColumn(fields[7]);
    if (!sel_a || !IsASide(*sel_a)) ParseFail(line_no, "sel_a must be a or a_prime");
    if (!sel_b || IsASide(*sel_b)) ParseFail(line_no, "sel_b must be b or b_prime");

    if (ids.empty() || ids.back() != *exp_id) {
      for (std::uint64_t seen : ids) {
        if (seen == *exp_id) ParseFail(line_no, "experiment rows not contiguous");
      }
      ids.push_back(*exp_id);
      groups.emplace_back();
    }
    auto& group = groups.back();
    if (*outcome_no != group.size() + 1) {
      ParseFail(line_no, "outcome numbers must run 1..n");
    }
    OutcomeRecord o;
    o.values = bits;
    o.mask = SelectionMask{*sel_a, *sel_b};
    group.push_back(o);
  }

  std::vector<ExperimentMatrix> out;
  out.reserve(groups.size());
  const std::size_t n = groups.empty() ? 0 : groups.front().size();
  for (auto& g : groups) {
    if (g.size() != n) {
      throw Error(ErrorCode::kShapeError,
                  "experiments have unequal numbers of outcomes");
    }
    out.emplace_back(std::move(g));
  }
  return out;
}

std::vector<ExperimentMatrix> ParseSessionCsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseSessionCsv(in);
}

void WriteSessionCsv(std::ostream& out,
                     std::span<const ExperimentMatrix> experiments) {
  out << kSessionCsvHeader << '\n';
  for (std::size_t e = 0; e < experiments.size(); ++e) {
    const auto outcomes = experiments[e].outcomes();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const OutcomeRecord& o = outcomes[i];
      out << e + 1 << ',' << i + 1;
      for (std::uint8_t v : o.values) out << ',' << int{v};
      out << ',' << ColumnName(o.mask.a_side) << ','
          << ColumnName(o.mask.b_side) << '\n';
    }
  }
}

std::string SessionCsv(std::span<const ExperimentMatrix> experiments) {
  std::ostringstream out;
  WriteSessionCsv(out, experiments);
  return out.str();
}

void WriteDeficitsCsv(std::ostream& out,
                      std::span<const DeficitResult> results) {
  out << kDeficitsCsvHeader << '\n';
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out << i << ',' << FormatDouble(r.terms.h_ab_hd) << ','
        << FormatDouble(r.terms.h_ab_prime) << ','
        << FormatDouble(r.terms.h_bprime_aprime) << ','
        << FormatDouble(r.terms.h_aprime_b) << ',' << FormatDouble(r.deficit)
        << '\n';
  }
}

void AnalysisConfig::Validate() const {
  if (!(delta >= 0.0)) {
    throw Error(ErrorCode::kDomainError, "delta must be nonnegative");
  }
}

Json EstimatorVariantJson(EstimatorScheme scheme,
                          IndexDenominator index_denominator) {
  Json j;
  j["scheme"] = EstimatorSchemeName(scheme);
  j["pair_filter"] = PairFilterName(FilterFor(scheme));
  j["index_denominator"] = IndexDenominatorName(index_denominator);
  return j;
}

Json PlanJson(const DecisionPlan& plan) {
  Json j;
  j["n_req"] = plan.n_req;
  j["k0"] = plan.k0;
  j["alpha"] = plan.alpha;
  j["gamma"] = plan.gamma;
  j["p0_h0"] = plan.probs.p0_h0;
  j["p0_h1"] = plan.probs.p0_h1;
  return j;
}

Json StatsJson(const CampaignConfig& config, const CampaignStats& stats) {
  auto opt = [](const std::optional<double>& v) -> Json {
    return v ? Json(*v) : Json(nullptr);
  };
  Json j;
  j["estimator_variant"] =
      EstimatorVariantJson(config.scheme, config.index_denominator);
  j["case"] = CaseKindName(config.kind);
  j["outcomes"] = config.n;
  j["experiments"] = config.experiments;
  j["seed"] = config.master_seed;
  j["selection"] = SelectionDomainName(config.domain);
  j["delta"] = config.delta;
  j["p_rank"] = stats.p_rank;
  j["n0"] = stats.n0;
  j["n_zero"] = stats.n_zero;
  j["avg_positive"] = opt(stats.avg_positive);
  j["max_deficit"] = stats.max_deficit;
  j["min_deficit"] = stats.min_deficit;
  j["index_deficit"] = opt(stats.index_deficit);
  j["index_norm"] = opt(stats.index_norm);
  j["n_valid"] = stats.n_valid;
  return j;
}

SessionAnalysis AnalyzeExperiments(const DecisionPlan& plan, std::size_t n,
                                   std::span<const ExperimentMatrix> experiments,
                                   const AnalysisConfig& config) {
  config.Validate();
  SessionAnalysis a;
  a.plan = plan;
  a.n = n;
  a.results.reserve(experiments.size());
  for (const auto& m : experiments) {
    if (m.n() != n) {
      throw Error(ErrorCode::kShapeError,
                  "experiment has " + std::to_string(m.n()) +
                      " outcomes, session expects " + std::to_string(n));
    }
    for (const auto& o : m.outcomes()) CheckDomain(o, config.domain);
    a.results.push_back(DeficitPseudo(m, config.scheme));
    if (a.results.back().deficit > config.delta + kDeficitTolerance) ++a.k_e;
  }
  a.verdict = MakeVerdict(a.k_e, experiments.size(), plan, config.mode,
                          config.delta);
  return a;
}

Json AnalysisJson(const SessionAnalysis& analysis,
                  const AnalysisConfig& config) {
  Json j;
  j["estimator_variant"] =
      EstimatorVariantJson(config.scheme, config.index_denominator);
  j["selection"] = SelectionDomainName(config.domain);
  j["n"] = analysis.n;
  j["n_req"] = analysis.plan.n_req;
  j["k0"] = analysis.plan.k0;
  j["alpha"] = analysis.plan.alpha;
  j["gamma"] = analysis.plan.gamma;
  j["p0_h0"] = analysis.plan.probs.p0_h0;
  j["p0_h1"] = analysis.plan.probs.p0_h1;
  j["delta"] = config.delta;
  j["experiments_completed"] = analysis.results.size();
  Json deficits = Json::array();
  for (const auto& r : analysis.results) deficits.push_back(r.deficit);
  j["deficit_bits"] = deficits;
  j["k_e"] = analysis.k_e;
  j["p_rank"] = analysis.results.empty()
                    ? Json(nullptr)
                    : Json(PercentrankFraction(Deficits(analysis.results)));
  j["verdict"] = DecisionName(analysis.verdict.decision);
  j["early"] = analysis.verdict.early;
  return j;
}

SessionAnalysis AnalyzeSession(const SessionRecord& session,
                               const AnalysisConfig& config) {
  return AnalyzeExperiments(session.plan, session.n, session.experiments,
                            config);
}

OutcomeRecord OutcomeFromJson(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kDomainError, "outcome must be an object");
  OutcomeRecord o;
  for (Column c : kAllColumns) {
    const std::string key(ColumnName(c));
    if (!j.contains(key) || !j[key].is_number_integer()) {
      throw Error(ErrorCode::kDomainError, "missing integer field " + key);
    }
    const auto v = j[key].get<long long>();
    if (v != 0 && v != 1) {
      throw Error(ErrorCode::kDomainError, key + " must be 0 or 1");
    }
    o.values[Index(c)] = static_cast<std::uint8_t>(v);
  }
  o.mask = SelectionMask{ParseSel(j, "sel_a", true), ParseSel(j, "sel_b", false)};
  return o;
}

Json OutcomeToJson(const OutcomeRecord& o) {
  Json j;
  for (Column c : kAllColumns) j[std::string(ColumnName(c))] = o.value(c);
  j["sel_a"] = ColumnName(o.mask.a_side);
  j["sel_b"] = ColumnName(o.mask.b_side);
  return j;
}

SessionStore::SessionStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path SessionStore::PathFor(const std::string& id) const {
  return root_ / (id + ".ndjson");
}

SessionRecord SessionStore::Create(const DecisionPlan& plan, std::size_t n,
                                   SelectionDomain domain) {
  if (n == 0) throw Error(ErrorCode::kDomainError, "n must be at least 1");
  SessionRecord r;
  r.plan = plan;
  r.n = n;
  r.domain = domain;
  r.created = NowUtc();
  r.updated = r.created;
  do {
    r.session_id = NewSessionId();
  } while (std::filesystem::exists(PathFor(r.session_id)));
  LockedFile f(PathFor(r.session_id), O_RDWR | O_CREAT | O_EXCL | O_APPEND,
               LOCK_EX);
  f.Append(HeaderJson(r).dump() + "\n");
  return r;
}

SessionRecord SessionStore::Load(const std::string& session_id) const {
  if (!ValidSessionId(session_id) ||
      !std::filesystem::exists(PathFor(session_id))) {
    throw Error(ErrorCode::kNotFound, "unknown session " + session_id);
  }
  LockedFile f(PathFor(session_id), O_RDONLY, LOCK_SH);
  return Replay(f.ReadAll());
}

SessionRecord SessionStore::AppendOutcome(const std::string& session_id,
                                          std::uint64_t experiment,
                                          const OutcomeRecord& outcome) {
  if (!ValidSessionId(session_id) ||
      !std::filesystem::exists(PathFor(session_id))) {
    throw Error(ErrorCode::kNotFound, "unknown session " + session_id);
  }
  LockedFile f(PathFor(session_id), O_RDWR | O_APPEND, LOCK_EX);
  SessionRecord r = Replay(f.ReadAll());

  if (experiment == 0) {
    throw Error(ErrorCode::kDomainError, "experiments are numbered from 1");
  }
  if (experiment < r.current_experiment()) {
    throw Error(ErrorCode::kConflict,
                "experiment " + std::to_string(experiment) +
                    " is already complete");
  }
  if (experiment > r.current_experiment()) {
    throw Error(ErrorCode::kConflict,
                "experiment " + std::to_string(r.current_experiment()) +
                    " must be completed first");
  }
  outcome.Validate();
  CheckDomain(outcome, r.domain);

  Json line = OutcomeToJson(outcome);
  Json rec;
  rec["kind"] = "outcome";
  rec["experiment"] = experiment;
  rec["outcome"] = r.pending.size() + 1;
  rec.update(line);
  rec["recorded"] = NowUtc();
  f.Append(rec.dump() + "\n");

  r.updated = rec["recorded"].get<std::string>();
  r.pending.push_back(outcome);
  if (r.pending.size() == r.n) {
    r.experiments.emplace_back(std::move(r.pending));
    r.pending.clear();
  }
  return r;
}

}  // namespace qcoin
