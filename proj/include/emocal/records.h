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

#ifndef EMOCAL_RECORDS_H_
#define EMOCAL_RECORDS_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "emocal/transcript.h"
#include "json.hpp"

namespace emocal {

using Json = nlohmann::ordered_json;

// One JSONL transcript record. Field order and unknown fields survive a
// read/write cycle.
struct Record {
  Json doc = Json::object();
  size_t line = 0;

  std::string id() const;
  std::string raw() const;
  std::optional<std::string> gold_label() const;
  std::optional<std::vector<double>> token_probs() const;
  std::optional<double> mean_prob() const;

  // Lenient parse of `raw` with the record's probability fields attached.
  ParseResult Parse() const;
};

// Checks the typed fields of a record object; returns a description of the
// first problem.
std::optional<std::string> ValidateRecord(const Json& doc);

struct LineError {
  size_t line = 0;
  std::string message;
};

// Streaming JSONL reader. Malformed lines are recorded and skipped; blank
// lines are ignored.
class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : in_(in) {}

  bool Next(Record& out);
  const std::vector<LineError>& errors() const { return errors_; }

 private:
  std::istream& in_;
  size_t line_ = 0;
  std::vector<LineError> errors_;
};

struct RecordSet {
  std::vector<Record> records;
  std::vector<LineError> errors;
};

RecordSet ReadRecords(const std::string& path);
RecordSet ParseRecords(std::istream& in);

void WriteRecord(std::ostream& out, const Record& record);
void WriteRecords(const std::string& path, const std::vector<Record>& records);

// "N malformed line(s): 2 (...), 5 (...)".
std::string SummarizeLineErrors(const std::vector<LineError>& errors);

// Adds `answer`, `confidence` and `format_ok` from a parse.
void AddParsedFields(Json& doc, const ParseResult& parsed);

}  // namespace emocal

#endif  // EMOCAL_RECORDS_H_
