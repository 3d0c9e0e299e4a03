/**
 * Copyright 2026 The Curriculum Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef CURRICULUM_REPORT_HPP_
#define CURRICULUM_REPORT_HPP_

#include <string>

#include "curriculum/experiment.hpp"

namespace curriculum::harness {

inline constexpr const char *kTracesFile = "traces.jsonl";
inline constexpr const char *kTableFile = "table.csv";
inline constexpr const char *kCurvesFile = "curves.csv";

/// `method,mean_max_acc,std,delta_vs_vanilla,p_value`, one row per method.
std::string render_table(const Report &report);

/// `method,trial,epoch,acc`, one row per evaluated epoch of every run.
std::string render_curves(const Report &report);

/// JSON lines: a header record followed by one record per run.
std::string render_traces(const Report &report);

/// Writes traces.jsonl, table.csv and curves.csv into `directory`.
void write_report(const Report &report, const std::string &directory);

/// Rebuilds a report from traces.jsonl; summaries are recomputed.
Report read_report(const std::string &directory);
Report parse_traces(const std::string &jsonl);

}  // namespace curriculum::harness

#endif  // CURRICULUM_REPORT_HPP_
