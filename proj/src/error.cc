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


#include "qcoin/error.h"

namespace qcoin {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kEmptyExperiment: return "EmptyExperiment";
    case ErrorCode::kEmptyCampaign: return "EmptyCampaign";
    case ErrorCode::kProvenanceMismatch: return "ProvenanceMismatch";
    case ErrorCode::kDegenerateIndex: return "DegenerateIndex";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kBracketError: return "BracketError";
    case ErrorCode::kNoPlanWithinBudget: return "NoPlanWithinBudget";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kShapeError: return "ShapeError";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kConflict: return "Conflict";
    case ErrorCode::kCancelled: return "Cancelled";
  }
  return "Unknown";
}

}  // namespace qcoin
