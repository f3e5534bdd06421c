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

#include "ragbench/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ragbench/error.hpp"
#include "ragbench/json_fwd.hpp"

namespace ragbench {
namespace {

struct ParseState {
  std::string source;
  std::vector<DocumentRecord> documents;
  std::vector<std::size_t> document_lines;
  std::vector<QAPair> qa_pairs;
  std::vector<std::size_t> qa_lines;
  std::map<std::string, double> ocr_seconds;
  std::vector<Finding> findings;
};

void AddFinding(ParseState& st, std::string code, std::size_t line,
                std::string message, std::string doc_id = {},
                std::string query_id = {}) {
  Finding f;
  f.code = std::move(code);
  f.line = line;
  f.doc_id = std::move(doc_id);
  f.query_id = std::move(query_id);
  f.message = st.source + ":" + std::to_string(line) + ": " + message;
  st.findings.push_back(std::move(f));
}

bool IsNonEmptyString(const Json& v) {
  return v.is_string() && !v.get_ref<const std::string&>().empty();
}

bool CheckKeys(ParseState& st, std::size_t line, const Json& rec,
               std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : rec.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) {
      AddFinding(st, "schema", line, "unknown key \"" + key + "\"");
      return false;
    }
  }
  return true;
}

std::optional<std::vector<std::string>> StringList(ParseState& st,
                                                   std::size_t line,
                                                   const Json& v,
                                                   const char* name,
                                                   bool require_non_empty) {
  if (!v.is_array()) {
    AddFinding(st, "schema", line, std::string(name) + " must be an array");
    return std::nullopt;
  }
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string() ||
        (require_non_empty && item.get_ref<const std::string&>().empty())) {
      AddFinding(st, "schema", line,
                 std::string(name) + " entries must be " +
                     (require_non_empty ? "non-empty strings" : "strings"));
      return std::nullopt;
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

void ParseDoc(ParseState& st, std::size_t line, const Json& rec) {
  if (!CheckKeys(st, line, rec,
                 {"kind", "doc_id", "level", "channels", "chunks", "features"}))
    return;
  DocumentRecord doc;
  if (!rec.contains("doc_id") || !IsNonEmptyString(rec["doc_id"])) {
    AddFinding(st, "schema", line, "doc record needs a non-empty doc_id");
    return;
  }
  doc.doc_id = rec["doc_id"].get<std::string>();
  if (!rec.contains("level") || !rec["level"].is_number_integer()) {
    AddFinding(st, "schema", line, "doc record needs an integer level",
               doc.doc_id);
    return;
  }
  const auto level = rec["level"].get<long long>();
  if (level < 0 || level >= kNumDegradationLevels) {
    AddFinding(st, "level", line,
               "degradation level " + std::to_string(level) +
                   " outside 0..3 for \"" + doc.doc_id + "\"",
               doc.doc_id);
    return;
  }
  doc.level = static_cast<int>(level);
  if (!rec.contains("channels") || !rec["channels"].is_object()) {
    AddFinding(st, "schema", line, "doc record needs a channels object",
               doc.doc_id);
    return;
  }
  for (const auto& [name, text] : rec["channels"].items()) {
    if (!text.is_string()) {
      AddFinding(st, "schema", line, "channel \"" + name + "\" is not text",
                 doc.doc_id);
      return;
    }
    doc.channels.emplace(name, text.get<std::string>());
  }
  if (rec.contains("chunks")) {
    auto chunks = StringList(st, line, rec["chunks"], "chunks", true);
    if (!chunks) return;
    if (chunks->empty()) {
      AddFinding(st, "chunks", line,
                 "chunk list of \"" + doc.doc_id + "\" is empty", doc.doc_id);
      return;
    }
    doc.chunks = std::move(chunks);
  }
  if (rec.contains("features")) {
    auto features = StringList(st, line, rec["features"], "features", false);
    if (!features) return;
    doc.features = std::move(features);
  }
  st.documents.push_back(std::move(doc));
  st.document_lines.push_back(line);
}

void ParseQa(ParseState& st, std::size_t line, const Json& rec) {
  if (!CheckKeys(st, line, rec, {"kind", "doc_id", "question", "answer"}))
    return;
  const std::string qid = QueryId(st.qa_pairs.size());
  for (const char* key : {"doc_id", "question", "answer"}) {
    if (!rec.contains(key) || !IsNonEmptyString(rec[key])) {
      AddFinding(st, "schema", line,
                 std::string("qa record needs a non-empty ") + key, {}, qid);
      return;
    }
  }
  st.qa_pairs.push_back({rec["doc_id"].get<std::string>(),
                         rec["question"].get<std::string>(),
                         rec["answer"].get<std::string>()});
  st.qa_lines.push_back(line);
}

void ParseMeta(ParseState& st, std::size_t line, const Json& rec) {
  if (!CheckKeys(st, line, rec, {"kind", "ocr_seconds_per_doc"})) return;
  if (!rec.contains("ocr_seconds_per_doc")) return;
  const Json& m = rec["ocr_seconds_per_doc"];
  if (!m.is_object()) {
    AddFinding(st, "schema", line, "ocr_seconds_per_doc must be an object");
    return;
  }
  for (const auto& [channel, v] : m.items()) {
    if (!v.is_number() || v.get<double>() < 0) {
      AddFinding(st, "schema", line,
                 "ocr time for \"" + channel + "\" must be a non-negative "
                 "number");
      return;
    }
    st.ocr_seconds[channel] = v.get<double>();
  }
}

void ParseText(ParseState& st, const std::string& text,
               bool qa_only) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    Json rec;
    try {
      rec = Json::parse(raw);
    } catch (const Json::parse_error& e) {
      AddFinding(st, "parse", line, std::string("malformed record: ") + e.what());
      continue;
    }
    if (!rec.is_object() || !rec.contains("kind") || !rec["kind"].is_string()) {
      AddFinding(st, "schema", line, "record needs a string \"kind\"");
      continue;
    }
    const auto& kind = rec["kind"].get_ref<const std::string&>();
    if (kind == "qa") {
      ParseQa(st, line, rec);
    } else if (kind == "doc" && !qa_only) {
      ParseDoc(st, line, rec);
    } else if (kind == "meta" && !qa_only) {
      ParseMeta(st, line, rec);
    } else {
      AddFinding(st, "schema", line, "unexpected record kind \"" + kind + "\"");
    }
  }
}

void CheckIntegrity(ParseState& st) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < st.documents.size(); ++i) {
    const auto& id = st.documents[i].doc_id;
    if (!seen.insert(id).second) {
      AddFinding(st, "duplicate_id", st.document_lines[i],
                 "duplicate doc_id \"" + id + "\"", id);
    }
  }
  for (std::size_t i = 0; i < st.qa_pairs.size(); ++i) {
    const auto& id = st.qa_pairs[i].doc_id;
    if (!seen.count(id)) {
      AddFinding(st, "dangling_doc", st.qa_lines[i],
                 QueryId(i) + " references unknown doc_id \"" + id + "\"", id,
                 QueryId(i));
    }
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

Json DocToJson(const DocumentRecord& doc) {
  Json j;
  j["kind"] = "doc";
  j["doc_id"] = doc.doc_id;
  j["level"] = doc.level;
  j["channels"] = Json::object();
  for (const auto& [name, text] : doc.channels) j["channels"][name] = text;
  if (doc.chunks) j["chunks"] = *doc.chunks;
  if (doc.features) j["features"] = *doc.features;
  return j;
}

}  // namespace

std::string QueryId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "q%06zu", index);
  return buf;
}

Corpus::Corpus(std::vector<DocumentRecord> documents,
               std::vector<QAPair> qa_pairs,
               std::map<std::string, double> ocr_seconds_per_doc)
    : documents_(std::move(documents)),
      qa_pairs_(std::move(qa_pairs)),
      ocr_seconds_(std::move(ocr_seconds_per_doc)) {
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const auto& doc = documents_[i];
    if (doc.doc_id.empty()) throw DataError("document with empty doc_id");
    if (doc.level < 0 || doc.level >= kNumDegradationLevels) {
      throw DataError("degradation level " + std::to_string(doc.level) +
                      " outside 0..3 for \"" + doc.doc_id + "\"");
    }
    if (doc.chunks) {
      if (doc.chunks->empty())
        throw DataError("chunk list of \"" + doc.doc_id + "\" is empty");
      for (const auto& c : *doc.chunks) {
        if (c.empty())
          throw DataError("empty chunk in \"" + doc.doc_id + "\"");
      }
    }
    if (!by_id_.emplace(doc.doc_id, i).second)
      throw DataError("duplicate doc_id \"" + doc.doc_id + "\"");
  }
  for (std::size_t i = 0; i < qa_pairs_.size(); ++i) {
    const auto& qa = qa_pairs_[i];
    if (!by_id_.count(qa.doc_id)) {
      throw DataError(QueryId(i) + " references unknown doc_id \"" +
                      qa.doc_id + "\"");
    }
    if (qa.question.empty() || qa.reference_answer.empty())
      throw DataError(QueryId(i) + " has an empty question or answer");
  }
}

const DocumentRecord* Corpus::find(const std::string& doc_id) const {
  auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? nullptr : &documents_[it->second];
}

const DocumentRecord& Corpus::at(const std::string& doc_id) const {
  const DocumentRecord* doc = find(doc_id);
  if (!doc) throw DataError("unknown doc_id \"" + doc_id + "\"");
  return *doc;
}

std::array<std::size_t, kNumDegradationLevels> Corpus::questions_per_level()
    const {
  std::array<std::size_t, kNumDegradationLevels> counts{};
  for (const auto& qa : qa_pairs_) ++counts[at(qa.doc_id).level];
  return counts;
}

void Corpus::require_channels(std::span<const std::string> channels) const {
  for (const auto& doc : documents_) {
    for (const auto& ch : channels) {
      auto it = doc.channels.find(ch);
      if (it == doc.channels.end()) {
        throw DataError("document \"" + doc.doc_id + "\" lacks channel \"" +
                        ch + "\"");
      }
      if (it->second.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw DataError("document \"" + doc.doc_id + "\" has empty channel \"" +
                        ch + "\"");
      }
    }
  }
}

void Corpus::require_chunks() const {
  for (const auto& doc : documents_) {
    if (!doc.chunks)
      throw DataError("document \"" + doc.doc_id + "\" has no chunk list");
  }
}

std::array<LevelBucket, kNumDegradationLevels> SegmentByLevel(
    const Corpus& corpus) {
  std::array<LevelBucket, kNumDegradationLevels> buckets;
  for (const auto& doc : corpus.documents())
    buckets[doc.level].documents.push_back(&doc);
  const auto& pairs = corpus.qa_pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i)
    buckets[corpus.at(pairs[i].doc_id).level].qa_indices.push_back(i);
  return buckets;
}

Corpus ParseCorpus(const std::string& text, const std::string& source) {
  ParseState st;
  st.source = source;
  ParseText(st, text, false);
  if (st.findings.empty()) CheckIntegrity(st);
  if (!st.findings.empty()) throw DataError(st.findings.front().message);
  return Corpus(std::move(st.documents), std::move(st.qa_pairs),
                std::move(st.ocr_seconds));
}

Corpus LoadCorpus(const std::filesystem::path& path,
                  const std::optional<std::filesystem::path>& qa_path) {
  ParseState st;
  st.source = path.string();
  ParseText(st, ReadFile(path), false);
  if (qa_path && st.findings.empty()) {
    st.source = qa_path->string();
    ParseText(st, ReadFile(*qa_path), true);
  }
  if (st.findings.empty()) CheckIntegrity(st);
  if (!st.findings.empty()) throw DataError(st.findings.front().message);
  return Corpus(std::move(st.documents), std::move(st.qa_pairs),
                std::move(st.ocr_seconds));
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  if (!corpus.ocr_seconds_per_doc().empty()) {
    Json meta;
    meta["kind"] = "meta";
    meta["ocr_seconds_per_doc"] = corpus.ocr_seconds_per_doc();
    out << meta.dump() << '\n';
  }
  for (const auto& doc : corpus.documents()) out << DocToJson(doc).dump() << '\n';
  for (const auto& qa : corpus.qa_pairs()) {
    Json j;
    j["kind"] = "qa";
    j["doc_id"] = qa.doc_id;
    j["question"] = qa.question;
    j["answer"] = qa.reference_answer;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

ValidationReport ValidateCorpusFile(const std::filesystem::path& path,
                                    std::span<const std::string> channels) {
  ValidationReport report;
  ParseState st;
  st.source = path.string();
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error& e) {
    report.io_failure = true;
    report.findings.push_back({"io", 0, {}, {}, e.what()});
    return report;
  }
  ParseText(st, text, false);
  CheckIntegrity(st);
  for (std::size_t i = 0; i < st.documents.size(); ++i) {
    const auto& doc = st.documents[i];
    for (const auto& ch : channels) {
      auto it = doc.channels.find(ch);
      if (it == doc.channels.end()) {
        AddFinding(st, "missing_channel", st.document_lines[i],
                   "document \"" + doc.doc_id + "\" lacks channel \"" + ch +
                       "\"",
                   doc.doc_id);
      } else if (it->second.find_first_not_of(" \t\r\n") ==
                 std::string::npos) {
        AddFinding(st, "empty_channel", st.document_lines[i],
                   "document \"" + doc.doc_id + "\" has empty channel \"" + ch +
                       "\"",
                   doc.doc_id);
      }
    }
  }
  report.documents = st.documents.size();
  report.qa_pairs = st.qa_pairs.size();
  report.findings = std::move(st.findings);
  return report;
}

}  // namespace ragbench
