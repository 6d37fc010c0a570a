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


// Leaderboards, behavior tables, alpha-Rank masses and payoff matrices built
// from stored traces, plus the payoff audit. All numbers are printed with a
// fixed precision so identical traces give identical bytes.

#ifndef MIXTALK_REPORT_H_
#define MIXTALK_REPORT_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mixtalk/behavior_metrics.h"
#include "mixtalk/meta_analysis.h"
#include "mixtalk/trace.h"

namespace mixtalk {

struct ReportOptions {
  double alpha = kDefaultAlpha;
  int population = kDefaultPopulation;
  Judge* judge = nullptr;
  SpecLookup spec_for;
};

// File name to contents.
using ReportFiles = std::map<std::string, std::string>;

// Throws EmptySample without traces and EmptyCell when a pairing has no
// completed episode.
ReportFiles BuildReport(const TraceFile& data, const ConfigLookup& lookup,
                        const ReportOptions& options = {});

// Throws SinkError.
void WriteReport(const std::filesystem::path& dir, const ReportFiles& files);

std::string FormatNumber(double v);
std::string CsvField(const std::string& s);

struct AuditMismatch {
  std::string episode_id;
  std::string sender;
  std::string receiver;
  std::string field;
  double stored = 0.0;
  double recomputed = 0.0;
};

inline constexpr double kAuditTolerance = 1e-9;

// Rescores every trace and lists fields that differ by more than `tolerance`.
std::vector<AuditMismatch> AuditTraces(const std::vector<EpisodeTrace>& traces,
                                       const ConfigLookup& lookup,
                                       double tolerance = kAuditTolerance);

}  // namespace mixtalk

#endif  // MIXTALK_REPORT_H_
