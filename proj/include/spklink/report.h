// include/spklink/report.h

// Copyright 2026  spklink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPKLINK_REPORT_H_
#define SPKLINK_REPORT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spklink/metrics.h"

namespace spklink {

// CSV with header "threshold,der,speaker_impurity,cluster_impurity"; values
// printed with 10 significant digits.
std::string EmitReportCsv(const std::vector<ImpurityPoint> &points);
std::vector<ImpurityPoint> ParseReportCsv(std::string_view text);

// Two panels: DER against threshold (baseline no-linking DER as a dashed
// horizontal line) and speaker/cluster impurity against threshold.
std::string RenderReportSvg(const std::vector<ImpurityPoint> &points,
                            std::optional<double> baseline_der = {});

// Writes <prefix>.csv and <prefix>.svg.
void WriteReport(const std::vector<ImpurityPoint> &points,
                 const std::string &prefix,
                 std::optional<double> baseline_der = {});

}  // namespace spklink

#endif  // SPKLINK_REPORT_H_
