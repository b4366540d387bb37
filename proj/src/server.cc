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


#include "qcoin/server.h"

#include <charconv>
#include <semaphore>
#include <stop_token>

#include "httplib.h"
#include "qcoin/campaign.h"
#include "qcoin/inference.h"
#include "qcoin/quantum.h"

namespace qcoin {
namespace {

constexpr std::size_t kMaxCurvePoints = 200000;

double QueryDouble(const httplib::Request& req, const char* key,
                   double fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string s = req.get_param_value(key);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParseError,
                std::string("query parameter ") + key + " is not a number");
  }
  return v;
}

std::uint64_t QueryUnsigned(const httplib::Request& req, const char* key,
                            std::uint64_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string s = req.get_param_value(key);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParseError,
                std::string("query parameter ") + key +
                    " is not a nonnegative integer");
  }
  return v;
}

double BodyDouble(const Json& body, const char* key, const char* alt,
                  double fallback) {
  for (const char* k : {key, alt}) {
    if (k && body.contains(k)) {
      if (!body[k].is_number()) {
        throw Error(ErrorCode::kDomainError, std::string(k) + " must be a number");
      }
      return body[k].get<double>();
    }
  }
  return fallback;
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kParseError:
      return 400;
    case ErrorCode::kCancelled:
      return 503;
    default:
      return 422;
  }
}

struct ApiServer::Impl {
  explicit Impl(ServerOptions opts)
      : options(std::move(opts)),
        store(options.data_dir),
        slots(std::max(1, options.simulate_slots)) {}

  ServerOptions options;
  SessionStore store;
  std::counting_semaphore<64> slots;
  std::stop_source stop;
  httplib::Server http;

  Json Variant() const {
    return EstimatorVariantJson(options.analysis.scheme,
                                options.analysis.index_denominator);
  }

  void Reply(httplib::Response& res, int status, Json body) const {
    if (!body.contains("estimator_variant")) {
      body["estimator_variant"] = Variant();
    }
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <typename Fn>
  httplib::Server::Handler Guard(Fn fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        Reply(res, HttpStatusFor(e.code()),
              Json{{"error", ErrorCodeName(e.code())}, {"message", e.what()}});
      } catch (const Json::exception& e) {
        Reply(res, 400, Json{{"error", "ParseError"}, {"message", e.what()}});
      }
    };
  }

  Json Summary(const SessionRecord& r) const {
    AnalysisConfig config = options.analysis;
    config.domain = r.domain;
    Json j;
    j["session_id"] = r.session_id;
    j["created"] = r.created;
    j["updated"] = r.updated;
    j["current_experiment"] = r.current_experiment();
    j["pending_outcomes"] = r.pending.size();
    j.update(AnalysisJson(AnalyzeSession(r, config), config));
    return j;
  }

  void Routes() {
    http.Post("/sessions", Guard([this](const httplib::Request& req,
                                        httplib::Response& res) {
      const Json body = req.body.empty() ? Json::object() : Json::parse(req.body);
      if (!body.is_object()) {
        throw Error(ErrorCode::kParseError, "body must be a JSON object");
      }
      const HypothesisProbs probs{BodyDouble(body, "p0_h0", "p0", 0.012),
                                  BodyDouble(body, "p0_h1", "p1", 0.85)};
      const double alpha = BodyDouble(body, "alpha", nullptr, 0.001);
      const double gamma = BodyDouble(body, "gamma", nullptr, 0.99);
      const double n = BodyDouble(body, "n", "outcomes", 12);
      if (!(n >= 1 && n == std::floor(n) && n <= 1e6)) {
        throw Error(ErrorCode::kDomainError, "n must be a positive integer");
      }
      SelectionDomain domain = kDefaultDomain;
      if (body.contains("selection")) {
        auto d = ParseSelectionDomain(body["selection"].get<std::string>());
        if (!d) throw Error(ErrorCode::kDomainError, "selection must be three or four");
        domain = *d;
      }
      const DecisionPlan plan = FindPlan(probs, alpha, gamma);
      const SessionRecord r =
          store.Create(plan, static_cast<std::size_t>(n), domain);
      Reply(res, 201, Summary(r));
    }));

    http.Post(R"(/sessions/([^/]+)/experiments/([^/]+)/outcomes)",
              Guard([this](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                const std::string k_text = req.matches[2];
                std::uint64_t k = 0;
                auto [ptr, ec] = std::from_chars(
                    k_text.data(), k_text.data() + k_text.size(), k);
                if (ec != std::errc() || ptr != k_text.data() + k_text.size()) {
                  throw Error(ErrorCode::kParseError, "bad experiment number");
                }
                store.Load(id);  // unknown session wins over a bad body
                const OutcomeRecord o = OutcomeFromJson(Json::parse(req.body));
                Reply(res, 201, Summary(store.AppendOutcome(id, k, o)));
              }));

    http.Get(R"(/sessions/([^/]+)/summary)",
             Guard([this](const httplib::Request& req, httplib::Response& res) {
               Reply(res, 200, Summary(store.Load(req.matches[1])));
             }));

    http.Get(R"(/sessions/([^/]+)/export\.csv)",
             Guard([this](const httplib::Request& req, httplib::Response& res) {
               const SessionRecord r = store.Load(req.matches[1]);
               res.status = 200;
               res.set_content(SessionCsv(r.experiments), "text/csv");
             }));

    http.Get("/plan", Guard([this](const httplib::Request& req,
                                   httplib::Response& res) {
      const HypothesisProbs probs{QueryDouble(req, "p0", 0.012),
                                  QueryDouble(req, "p1", 0.85)};
      const std::uint64_t n_max = QueryUnsigned(req, "n_max", 10000);
      if (req.has_param("table") && req.get_param_value("table") != "0") {
        Json cells = Json::array();
        int matches = 0;
        for (const PlanCell& c : ReferencePlanGrid(probs)) {
          Json row;
          row["alpha_percent"] = c.plan.alpha * 100;
          row["gamma_percent"] = c.plan.gamma * 100;
          row["n_req"] = c.plan.n_req;
          row["k0"] = c.plan.k0;
          row["matches_reference"] = c.reference ? Json(c.matches()) : Json(nullptr);
          matches += c.matches();
          cells.push_back(row);
        }
        Reply(res, 200, Json{{"cells", cells}, {"matches", matches}});
        return;
      }
      const DecisionPlan plan =
          FindPlan(probs, QueryDouble(req, "alpha", 0.001),
                   QueryDouble(req, "gamma", 0.99), n_max);
      Reply(res, 200, PlanJson(plan));
    }));

    http.Get("/curve", Guard([this](const httplib::Request& req,
                                    httplib::Response& res) {
      const double lo = QueryDouble(req, "min", 0.0);
      const double hi = QueryDouble(req, "max", 100.0);
      const double step = QueryDouble(req, "step", 0.01);
      if (step > 0 && (hi - lo) / step > kMaxCurvePoints) {
        throw Error(ErrorCode::kTooLarge, "too many curve points");
      }
      const auto points = SampleCurve(lo, hi, step);
      Json pts = Json::array();
      for (const auto& p : points) pts.push_back({p.theta, p.deficit});
      const DeficitMaximum best = MaxQuantumDeficit();
      Json j;
      j["violation_fraction"] = ViolationFraction(lo, hi, step);
      j["crossing_angle"] = CrossingAngle();
      j["max_deficit"] = best.deficit;
      j["max_theta"] = best.theta;
      j["points"] = pts;
      Reply(res, 200, j);
    }));

    http.Get("/simulate", Guard([this](const httplib::Request& req,
                                       httplib::Response& res) {
      CampaignConfig config;
      config.scheme = options.analysis.scheme;
      config.index_denominator = options.analysis.index_denominator;
      if (req.has_param("case")) {
        auto kind = ParseCaseKind(req.get_param_value("case"));
        if (!kind) throw Error(ErrorCode::kDomainError, "unknown case");
        config.kind = *kind;
      }
      if (req.has_param("selection")) {
        auto d = ParseSelectionDomain(req.get_param_value("selection"));
        if (!d) throw Error(ErrorCode::kDomainError, "selection must be three or four");
        config.domain = *d;
      }
      config.n = QueryUnsigned(req, "outcomes", 4);
      config.experiments = QueryUnsigned(req, "experiments", 10000);
      config.master_seed = QueryUnsigned(req, "seed", 0);
      config.delta = QueryDouble(req, "delta", 0.0);
      if (config.experiments > options.max_simulate_experiments) {
        throw Error(ErrorCode::kTooLarge,
                    "experiments limited to " +
                        std::to_string(options.max_simulate_experiments));
      }
      if (config.n > 4096) {
        throw Error(ErrorCode::kTooLarge, "outcomes limited to 4096");
      }
      if (!slots.try_acquire()) {
        Reply(res, 503, Json{{"error", "Busy"},
                             {"message", "all simulation slots in use"}});
        return;
      }
      struct Release {
        std::counting_semaphore<64>& s;
        ~Release() { s.release(); }
      } release{slots};
      const CampaignResult result = RunCampaign(config, stop.get_token());
      Reply(res, 200, StatsJson(config, result.stats));
    }));
  }
};

ApiServer::ApiServer(ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {
  impl_->Routes();
}

ApiServer::~ApiServer() { Stop(); }

bool ApiServer::Listen(const std::string& host, int port) {
  return impl_->http.listen(host, port);
}

int ApiServer::BindToAnyPort(const std::string& host) {
  return impl_->http.bind_to_any_port(host);
}

bool ApiServer::ListenAfterBind() { return impl_->http.listen_after_bind(); }

void ApiServer::Stop() {
  impl_->stop.request_stop();
  impl_->http.stop();
}

void ApiServer::WaitUntilReady() const { impl_->http.wait_until_ready(); }

}  // namespace qcoin
