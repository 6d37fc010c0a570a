// Copyright 2026 The MixTalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIXTALK_ERRORS_H_
#define MIXTALK_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mixtalk {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MIXTALK_DEFINE_ERROR(Name, Base) \
  class Name : public Base {             \
   public:                               \
    using Base::Base;                    \
  }

// Malformed input text (config files, traces, agent output).
MIXTALK_DEFINE_ERROR(ParseError, Error);

// A well-formed document violated an invariant. `field()` names the culprit.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

MIXTALK_DEFINE_ERROR(CoverageError, Error);
MIXTALK_DEFINE_ERROR(UnknownAttribute, Error);
MIXTALK_DEFINE_ERROR(RejectionExhausted, Error);

// Agent output problems. The parse-level ones derive from ParseError so that
// callers can retry on any of them uniformly.
MIXTALK_DEFINE_ERROR(DuplicateClaim, ParseError);
MIXTALK_DEFINE_ERROR(OutOfDomainValue, ParseError);
MIXTALK_DEFINE_ERROR(TooManyClaims, ParseError);
MIXTALK_DEFINE_ERROR(UnknownTool, ParseError);
MIXTALK_DEFINE_ERROR(IncompleteEstimate, ParseError);
MIXTALK_DEFINE_ERROR(AgentProtocolError, Error);
MIXTALK_DEFINE_ERROR(BudgetViolation, Error);
MIXTALK_DEFINE_ERROR(TemplateError, Error);

// Remote text-generation service.
MIXTALK_DEFINE_ERROR(TransportError, Error);
MIXTALK_DEFINE_ERROR(Timeout, TransportError);
class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& what)
      : Error("service returned HTTP " + std::to_string(status) + ": " + what),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};
MIXTALK_DEFINE_ERROR(JudgeUnavailable, Error);

// Tournament and analysis.
MIXTALK_DEFINE_ERROR(DivisibilityError, Error);
MIXTALK_DEFINE_ERROR(EmptyCell, Error);
MIXTALK_DEFINE_ERROR(NotConnected, Error);
MIXTALK_DEFINE_ERROR(NonConvergence, Error);
MIXTALK_DEFINE_ERROR(EmptySample, Error);
MIXTALK_DEFINE_ERROR(EnvMismatch, Error);
MIXTALK_DEFINE_ERROR(SinkError, Error);

#undef MIXTALK_DEFINE_ERROR

}  // namespace mixtalk

#endif  // MIXTALK_ERRORS_H_
