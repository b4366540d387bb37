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


#ifndef QCOIN_SERVER_H_
#define QCOIN_SERVER_H_

#include <filesystem>
#include <memory>
#include <string>

#include "qcoin/error.h"
#include "qcoin/session_io.h"

namespace qcoin {

struct ServerOptions {
  std::filesystem::path data_dir = "data";
  AnalysisConfig analysis;
  std::size_t max_simulate_experiments = 100000;
  int simulate_slots = 2;  // concurrent GET /simulate campaigns
};

// HTTP status for a library error code.
int HttpStatusFor(ErrorCode code);

// JSON API over cpp-httplib. Routes:
//   POST /sessions
//   POST /sessions/{id}/experiments/{k}/outcomes
//   GET  /sessions/{id}/summary
//   GET  /sessions/{id}/export.csv
//   GET  /plan, GET /curve, GET /simulate
class ApiServer {
 public:
  explicit ApiServer(ServerOptions options);
  ~ApiServer();

  // Blocks until Stop().
  bool Listen(const std::string& host, int port);
  // Two-step start used by tests: bind, then serve on another thread.
  int BindToAnyPort(const std::string& host);
  bool ListenAfterBind();
  // Cancels running campaigns and stops the listener.
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qcoin

#endif  // QCOIN_SERVER_H_
