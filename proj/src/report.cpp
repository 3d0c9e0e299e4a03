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
#include "curriculum/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace curriculum::harness {
namespace {

using nlohmann::json;

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) {
    raise(ErrorCode::kIoError, "cannot write " + path.string());
  }
}

}  // namespace

std::string render_table(const Report &report) {
  std::string out = "method,mean_max_acc,std,delta_vs_vanilla,p_value\n";
  for (const auto &s : report.summaries) {
    out += s.method + "," + fixed(s.mean) + "," + fixed(s.std_dev) + "," +
           fixed(s.delta_vs_vanilla) + "," + fixed(s.p_value) + "\n";
  }
  return out;
}

std::string render_curves(const Report &report) {
  std::string out = "method,trial,epoch,acc\n";
  for (const auto &r : report.runs) {
    for (const auto &e : r.epochs) {
      if (e.eval_accuracy) {
        out += r.method + "," + std::to_string(r.trial) + "," + std::to_string(e.epoch) + "," +
               fixed(*e.eval_accuracy) + "\n";
      }
    }
  }
  return out;
}

std::string render_traces(const Report &report) {
  std::string out;
  json header = {{"type", "experiment"},
                 {"epoch_budget", report.epoch_budget},
                 {"trials", report.trials},
                 {"methods", report.methods}};
  out += header.dump() + "\n";
  for (const auto &r : report.runs) {
    json epochs = json::array();
    for (const auto &e : r.epochs) {
      epochs.push_back({{"epoch", e.epoch},
                        {"subset_size", e.subset_size},
                        {"subset_digest", hex(e.subset_digest)},
                        {"train_loss", e.train_loss},
                        {"eval_accuracy", e.eval_accuracy ? json(*e.eval_accuracy) : json(nullptr)}});
    }
    json record = {{"type", "run"},
                   {"method", r.method},
                   {"trial", r.trial},
                   {"max_accuracy", r.max_accuracy},
                   {"error", r.error},
                   {"epochs", epochs}};
    out += record.dump() + "\n";
  }
  return out;
}

void write_report(const Report &report, const std::string &directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    raise(ErrorCode::kIoError, "cannot create " + directory + ": " + ec.message());
  }
  const std::filesystem::path dir(directory);
  write_file(dir / kTracesFile, render_traces(report));
  write_file(dir / kTableFile, render_table(report));
  write_file(dir / kCurvesFile, render_curves(report));
}

Report parse_traces(const std::string &jsonl) {
  Report report;
  std::istringstream in(jsonl);
  std::string line;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) {
        continue;
      }
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "experiment") {
        report.epoch_budget = j.at("epoch_budget").get<std::size_t>();
        report.trials = j.at("trials").get<std::size_t>();
        report.methods = j.at("methods").get<std::vector<std::string>>();
        have_header = true;
      } else if (type == "run") {
        RunRecord r;
        r.method = j.at("method").get<std::string>();
        r.trial = j.at("trial").get<std::size_t>();
        r.max_accuracy = j.at("max_accuracy").get<double>();
        r.error = j.value("error", std::string());
        for (const auto &e : j.at("epochs")) {
          trainers::EpochRecord rec;
          rec.epoch = e.at("epoch").get<std::size_t>();
          rec.subset_size = e.at("subset_size").get<std::size_t>();
          rec.subset_digest = std::stoull(e.at("subset_digest").get<std::string>(), nullptr, 16);
          rec.train_loss = e.at("train_loss").get<double>();
          if (!e.at("eval_accuracy").is_null()) {
            rec.eval_accuracy = e.at("eval_accuracy").get<double>();
          }
          r.epochs.push_back(rec);
        }
        report.runs.push_back(std::move(r));
      } else {
        raise(ErrorCode::kParseError, "unknown record type \"" + type + "\"");
      }
    }
  } catch (const json::exception &e) {
    raise(ErrorCode::kParseError, std::string("traces: ") + e.what());
  }
  if (!have_header) {
    raise(ErrorCode::kParseError, "traces have no experiment header");
  }
  report.summaries = summarize(report.methods, report.runs);
  return report;
}

Report read_report(const std::string &directory) {
  const auto path = std::filesystem::path(directory) / kTracesFile;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::kIoError, "cannot read " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_traces(buffer.str());
}

}  // namespace curriculum::harness
