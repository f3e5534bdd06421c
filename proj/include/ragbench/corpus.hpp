// Copyright 2026 The ragbench Authors.
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

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ragbench {

inline constexpr int kNumDegradationLevels = 4;

// One corpus page. `chunks` stands in for the page's patch partition when the
// page is embedded as a multi-vector group.
struct DocumentRecord {
  std::string doc_id;
  int level = 0;
  std::map<std::string, std::string> channels;
  std::optional<std::vector<std::string>> chunks;
  std::optional<std::vector<std::string>> features;

  bool operator==(const DocumentRecord&) const = default;
};

struct QAPair {
  std::string doc_id;
  std::string question;
  std::string reference_answer;

  bool operator==(const QAPair&) const = default;
};

// Stable identifier of the i-th Q&A pair of a corpus ("q000042").
std::string QueryId(std::size_t index);

class Corpus {
 public:
  Corpus() = default;

  // Validates every invariant and throws DataError on the first violation.
  Corpus(std::vector<DocumentRecord> documents, std::vector<QAPair> qa_pairs,
         std::map<std::string, double> ocr_seconds_per_doc = {});

  const std::vector<DocumentRecord>& documents() const { return documents_; }
  const std::vector<QAPair>& qa_pairs() const { return qa_pairs_; }

  // Externally measured OCR time per document, keyed by channel.
  const std::map<std::string, double>& ocr_seconds_per_doc() const {
    return ocr_seconds_;
  }

  const DocumentRecord* find(const std::string& doc_id) const;
  const DocumentRecord& at(const std::string& doc_id) const;

  // Number of Q&A pairs whose document sits at each level.
  std::array<std::size_t, kNumDegradationLevels> questions_per_level() const;

  // Throws DataError naming the first document that lacks one of `channels`
  // or carries it empty.
  void require_channels(std::span<const std::string> channels) const;
  // Throws DataError if any document lacks a non-empty chunk list.
  void require_chunks() const;

  bool operator==(const Corpus& other) const {
    return documents_ == other.documents_ && qa_pairs_ == other.qa_pairs_ &&
           ocr_seconds_ == other.ocr_seconds_;
  }

 private:
  std::vector<DocumentRecord> documents_;
  std::vector<QAPair> qa_pairs_;
  std::map<std::string, double> ocr_seconds_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

struct LevelBucket {
  std::vector<const DocumentRecord*> documents;
  // Indices into Corpus::qa_pairs(), ascending.
  std::vector<std::size_t> qa_indices;
};

// Partition by degradation level; a pair follows its document.
std::array<LevelBucket, kNumDegradationLevels> SegmentByLevel(
    const Corpus& corpus);

// Line-record format. `qa_path`, when given, is a second file holding only
// "qa" records; the primary file may hold both kinds.
Corpus LoadCorpus(const std::filesystem::path& path,
                  const std::optional<std::filesystem::path>& qa_path = {});
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path);

// Parses corpus text (same format as files). `source` labels messages.
Corpus ParseCorpus(const std::string& text, const std::string& source);

struct Finding {
  std::string code;  // io, parse, schema, duplicate_id, dangling_doc, ...
  std::size_t line = 0;
  std::string doc_id;
  std::string query_id;
  std::string message;
};

struct ValidationReport {
  std::size_t documents = 0;
  std::size_t qa_pairs = 0;
  std::vector<Finding> findings;
  bool io_failure = false;

  bool ok() const { return findings.empty(); }
};

// Unlike LoadCorpus this collects every violation instead of stopping at the
// first one. `channels` are required (non-empty) on every document.
ValidationReport ValidateCorpusFile(const std::filesystem::path& path,
                                    std::span<const std::string> channels = {});

}  // namespace ragbench
