/*
 * Copyright 2026 The emocal Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "emocal/records.h"

#include <fstream>

#include "emocal/error.h"

namespace emocal {
namespace {

std::optional<std::string> OptString(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::string Record::id() const { return OptString(doc, "id").value_or(""); }
std::string Record::raw() const { return OptString(doc, "raw").value_or(""); }
std::optional<std::string> Record::gold_label() const { return OptString(doc, "gold_label"); }

std::optional<std::vector<double>> Record::token_probs() const {
  auto it = doc.find("token_probs");
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return it->get<std::vector<double>>();
}

std::optional<double> Record::mean_prob() const {
  auto it = doc.find("mean_prob");
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

ParseResult Record::Parse() const {
  ParseResult parsed = ParseTranscript(raw(), false);
  parsed.transcript.token_probs = token_probs();
  parsed.transcript.mean_prob = mean_prob();
  return parsed;
}

std::optional<std::string> ValidateRecord(const Json& doc) {
  if (!doc.is_object()) return "record is not a JSON object";
  auto raw = doc.find("raw");
  if (raw == doc.end() || !raw->is_string()) return "field 'raw' must be a string";
  for (const char* key : {"id", "task"}) {
    auto it = doc.find(key);
    if (it != doc.end() && !it->is_string()) return std::string("field '") + key + "' must be a string";
  }
  if (auto it = doc.find("gold_label"); it != doc.end() && !it->is_null() && !it->is_string()) {
    return "field 'gold_label' must be a string or null";
  }
  if (auto it = doc.find("token_probs"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) return "field 'token_probs' must be an array or null";
    for (const auto& v : *it) {
      if (!v.is_number()) return "field 'token_probs' must hold numbers";
    }
  }
  if (auto it = doc.find("mean_prob"); it != doc.end() && !it->is_null() && !it->is_number()) {
    return "field 'mean_prob' must be a number or null";
  }
  return std::nullopt;
}

bool RecordReader::Next(Record& out) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json doc;
    try {
      doc = Json::parse(line);
    } catch (const Json::parse_error& e) {
      errors_.push_back({line_, std::string("invalid JSON: ") + e.what()});
      continue;
    }
    if (auto problem = ValidateRecord(doc)) {
      errors_.push_back({line_, *problem});
      continue;
    }
    out.doc = std::move(doc);
    out.line = line_;
    return true;
  }
  return false;
}

RecordSet ParseRecords(std::istream& in) {
  RecordSet set;
  RecordReader reader(in);
  Record r;
  while (reader.Next(r)) set.records.push_back(std::move(r));
  set.errors = reader.errors();
  return set;
}

RecordSet ReadRecords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot read " + path);
  return ParseRecords(in);
}

void WriteRecord(std::ostream& out, const Record& record) {
  out << record.doc.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
}

void WriteRecords(const std::string& path, const std::vector<Record>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write " + path);
  for (const auto& r : records) WriteRecord(out, r);
}

std::string SummarizeLineErrors(const std::vector<LineError>& errors) {
  std::string msg = std::to_string(errors.size()) + " malformed line(s):";
  for (size_t i = 0; i < errors.size(); ++i) {
    msg += (i == 0 ? " " : ", ") + std::to_string(errors[i].line) + " (" + errors[i].message + ")";
  }
  return msg;
}

void AddParsedFields(Json& doc, const ParseResult& parsed) {
  const Transcript& t = parsed.transcript;
  doc["answer"] = t.answer ? Json(*t.answer) : Json(nullptr);
  doc["confidence"] = t.confidence ? Json(*t.confidence) : Json(nullptr);
  doc["format_ok"] = parsed.verdict.ok;
}

}  // namespace emocal
