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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "ragbench/config.hpp"
#include "ragbench/dense_index.hpp"
#include "ragbench/harness.hpp"
#include "ragbench/late_index.hpp"
#include "ragbench/radar.hpp"
#include "ragbench/retrieval_metrics.hpp"
#include "ragbench/semantic_metrics.hpp"

namespace fs = std::filesystem;
using namespace ragbench;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the first failure message of a criterion.
struct Check {
  std::string why;
  void operator()(bool ok, const std::string& msg) {
    if (!ok && why.empty()) why = msg;
  }
  bool ok() const { return why.empty(); }
};

std::string Num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::vector<float> RandomVec(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> n(0.0f, 1.0f);
  std::vector<float> v(dim);
  for (auto& x : v) x = n(rng);
  return v;
}

// Coarse values produce exact score ties.
std::vector<float> CoarseVec(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_int_distribution<int> d(-1, 1);
  std::vector<float> v(dim);
  bool any = false;
  for (auto& x : v) {
    x = static_cast<float>(d(rng));
    any = any || x != 0;
  }
  if (!any) v[0] = 1;
  return v;
}

std::vector<oracle::Judged> ToOracle(const std::vector<RetrievalJudgment>& js) {
  std::vector<oracle::Judged> out;
  for (const auto& j : js) {
    oracle::Judged o{j.gold_doc_id, {}};
    for (const auto& e : j.ranked.entries) o.ranked.push_back(e.doc_id);
    out.push_back(o);
  }
  return out;
}

bool SameRanking(const RankedResult& got,
                 const std::vector<std::pair<std::string, double>>& want) {
  if (got.entries.size() != want.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (got.entries[i].doc_id != want[i].first) return false;
    if (std::abs(got.entries[i].score - want[i].second) > 1e-12) return false;
  }
  return true;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Criterion1() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> gold_rank(0, 12);
  std::vector<RetrievalJudgment> js;
  for (int i = 0; i < 200; ++i) {
    RetrievalJudgment j;
    j.query_id = "q" + std::to_string(i);
    j.gold_doc_id = "gold";
    const int r = gold_rank(rng);  // 0: not retrieved
    for (int p = 1; p <= 10; ++p)
      j.ranked.entries.push_back({p == r ? "gold" : "d" + std::to_string(p), 1.0 - p * 0.01});
    js.push_back(j);
  }
  const auto oj = ToOracle(js);
  const double mrr = Mrr(js), rec = RecallAtK(js, 5), ndcg = NdcgAtK(js, 5);
  c(std::abs(mrr - oracle::Mrr(oj)) <= 1e-9, "MRR " + Num(mrr) + " vs " + Num(oracle::Mrr(oj)));
  c(std::abs(rec - oracle::Recall(oj, 5)) <= 1e-9, "Recall@5 differs");
  c(std::abs(ndcg - oracle::Ndcg(oj, 5)) <= 1e-9,
    "NDCG@5 " + Num(ndcg) + " vs " + Num(oracle::Ndcg(oj, 5)));
  const double t = Since(t0);
  c(t < 1.0, "took " + Num(t) + " s");
  return c.why;
}

std::string Criterion2() {
  Check c;
  for (std::size_t r = 1; r <= 10; ++r) {
    std::vector<double> rel(10, 0.0);
    rel[r - 1] = 1.0;
    const double graded = NdcgGraded(rel, 5);
    const double binary = NdcgBinary(r, 5);
    const double closed = r <= 5 ? 1.0 / std::log2(r + 1.0) : 0.0;
    c(graded == binary, "rank " + std::to_string(r) + ": graded " + Num(graded) +
                            " != binary " + Num(binary));
    c(std::abs(binary - closed) <= 1e-15, "rank " + std::to_string(r) + " closed form");
  }
  c(NdcgBinary(3, 5) == 0.5, "rank 3 should give 0.5");
  return c.why;
}

std::string Criterion3() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(303);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t dim = 8;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
    const bool coarse = inst % 3 == 0;
    std::vector<LateEntry> entries;
    std::vector<std::pair<std::string, std::vector<oracle::Vec>>> plain;
    for (std::size_t d = 0; d < n; ++d) {
      const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
      MultiVectorEmbedding mv;
      std::vector<oracle::Vec> group;
      for (std::size_t j = 0; j < m; ++j) {
        auto v = coarse ? CoarseVec(rng, dim) : RandomVec(rng, dim);
        mv.vectors.push_back({v});
        group.push_back(v);
      }
      // Ids deliberately out of sorted order.
      const std::string id = "doc" + std::to_string((d * 37) % 101);
      entries.emplace_back(id, mv);
      plain.emplace_back(id, group);
    }
    const auto index = LateIndex::Build(entries);
    const auto q = coarse ? CoarseVec(rng, dim) : RandomVec(rng, dim);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n + 2)(rng);
    const auto got = index.Query({q}, k, 1 + inst % 4);
    if (!SameRanking(got, oracle::MaxSimTopK(q, plain, k))) {
      c(false, "instance " + std::to_string(inst) + " differs");
      break;
    }
  }
  const double t = Since(t0);
  c(t < 5.0, "took " + Num(t) + " s");
  return c.why;
}

std::string Criterion4() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(404);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t dim = 8;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
    const bool coarse = inst % 3 == 0;
    std::vector<DenseEntry> entries;
    std::vector<std::pair<std::string, oracle::Vec>> plain;
    for (std::size_t d = 0; d < n; ++d) {
      auto v = coarse ? CoarseVec(rng, dim) : RandomVec(rng, dim);
      const std::string id = "doc" + std::to_string((d * 37) % 101);
      entries.emplace_back(id, DenseEmbedding{v});
      plain.emplace_back(id, v);
    }
    const auto index = DenseIndex::Build(entries);
    const auto q = coarse ? CoarseVec(rng, dim) : RandomVec(rng, dim);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n + 2)(rng);
    if (!SameRanking(index.Query({q}, k), oracle::DenseTopK(q, plain, k))) {
      c(false, "instance " + std::to_string(inst) + " differs");
      break;
    }
  }
  const double t = Since(t0);
  c(t < 5.0, "took " + Num(t) + " s");
  return c.why;
}

std::string Criterion5() {
  Check c;
  std::mt19937_64 rng(505);
  std::vector<DenseEntry> dense;
  std::vector<LateEntry> late;
  for (int d = 0; d < 40; ++d) {
    auto v = d % 4 == 0 ? CoarseVec(rng, 16) : RandomVec(rng, 16);
    const std::string id = "doc" + std::to_string(d);
    dense.emplace_back(id, DenseEmbedding{v});
    late.emplace_back(id, MultiVectorEmbedding{{DenseEmbedding{v}}});
  }
  const auto di = DenseIndex::Build(dense);
  const auto li = LateIndex::Build(late);
  for (int i = 0; i < 50; ++i) {
    const DenseEmbedding q{i % 5 == 0 ? CoarseVec(rng, 16) : RandomVec(rng, 16)};
    if (!(di.Query(q, 10) == li.Query(q, 10))) {
      c(false, "query " + std::to_string(i) + " differs");
      break;
    }
  }
  return c.why;
}

std::string Criterion6() {
  Check c;
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"the cat sat on the mat", "the cat sat on the mat"},
      {"The cat sat on the mat.", "the cat is on the mat"},
      {"a cat", "the cat sat on the mat"},
      {"mat the on sat cat the", "the cat sat on the mat"},
      {"the the the the", "the cat sat on the mat"},
      {"dogs bark loudly at night", "the cat sat on the mat"},
      {"Paris", "Paris"},
      {"paris!", "Paris"},
      {"Paris is the capital of France", "Paris"},
      {"Paris", "The capital of France is Paris"},
      {"the quick brown fox jumps over the lazy dog",
       "the quick brown fox jumped over the lazy dog"},
      {"one two three four five", "one two three four"},
      {"one two three four", "one two three four five"},
      {"a b c d e f g h", "h g f e d c b a"},
      {"a b a b a b", "b a b a"},
      {"42 is the answer", "the answer is 42"},
      {"Queen excluder keeps larvae out", "A queen excluder keeps larvae out of the upper honey supers."},
      {"smoke calms bees", "Smoke calms worker bees before the hive lid is lifted."},
      {"x y z", "x y z x y z"},
      {"red red red blue", "red blue blue blue"},
      {"it's well-known", "it s well known"},
      {"1990 to 2000", "from 1990 to 2000"},
  };
  for (const auto& [g, r] : pairs) {
    const AnswerPair p{"q", g, r};
    const std::string tag = "\"" + g + "\" / \"" + r + "\"";
    c(std::abs(Bleu(p) - oracle::Bleu(g, r)) <= 1e-9,
      "BLEU " + tag + ": " + Num(Bleu(p)) + " vs " + Num(oracle::Bleu(g, r)));
    c(std::abs(Rouge1(p) - oracle::Rouge1(g, r)) <= 1e-9, "ROUGE-1 " + tag);
    c(std::abs(RougeL(p) - oracle::RougeL(g, r)) <= 1e-9, "ROUGE-L " + tag);
    c((ExactMatch(p) ? 1.0 : 0.0) == oracle::ExactMatch(g, r), "EM " + tag);
  }
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> len(0, 8), tok(0, 3);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::string> a(len(rng)), b(len(rng));
    for (auto& t : a) t = std::string(1, static_cast<char>('a' + tok(rng)));
    for (auto& t : b) t = std::string(1, static_cast<char>('a' + tok(rng)));
    if (LcsLength(a, b) != oracle::LcsExhaustive(a, b)) {
      c(false, "LCS mismatch on case " + std::to_string(i));
      break;
    }
  }
  return c.why;
}

std::string Criterion7() {
  Check c;
  std::vector<RadarInput> in(3);
  const double mrr[] = {0.2971, 0.2327, 0.5151};
  for (int i = 0; i < 3; ++i) {
    in[i].arm = "arm" + std::to_string(i);
    in[i].mrr_clean = mrr[i];
  }
  in[0].memory_per_1k_docs = 1.38;
  in[1].memory_per_1k_docs = 9.5;
  const auto r = RadarScoresFor(in);
  const auto& best = r.arms[2].clean_retrieval;
  c(best && best->score == 10.0, "best clean axis not 10");
  c(best && std::abs(best->raw - 13.8) < 0.05, "raw z*10 " + (best ? Num(best->raw) : "null"));
  const auto& m0 = r.arms[0].memory_efficiency;
  const auto& m1 = r.arms[1].memory_efficiency;
  c(m0 && m0->score == 10.0, "memory axis of smaller index not 10");
  c(m1 && std::abs(m1->score - 1.45) <= 0.01, "memory axis " + (m1 ? Num(m1->score) : "null"));
  return c.why;
}

std::string Criterion8() {
  Check c;
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 120)(rng);
    const int parts = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<RetrievalJudgment> js;
    std::vector<AnswerPair> answers;
    std::vector<int> levels;
    std::vector<int> present;
    for (int l = 0; l < parts; ++l) present.push_back(l);
    const char* words[] = {"alpha", "beta", "gamma", "delta", "eps"};
    for (int i = 0; i < n; ++i) {
      RetrievalJudgment j;
      j.query_id = "q" + std::to_string(i);
      j.gold_doc_id = "g";
      const int r = std::uniform_int_distribution<int>(0, 8)(rng);
      for (int p = 1; p <= 8; ++p)
        j.ranked.entries.push_back({p == r ? "g" : "x" + std::to_string(p), 1.0 / p});
      js.push_back(j);
      std::string gen, ref;
      for (int w = 0; w < 4; ++w) {
        gen += std::string(words[std::uniform_int_distribution<int>(0, 4)(rng)]) + " ";
        ref += std::string(words[std::uniform_int_distribution<int>(0, 4)(rng)]) + " ";
      }
      answers.push_back({j.query_id, gen, ref});
      levels.push_back(std::uniform_int_distribution<int>(0, parts - 1)(rng));
    }
    ArmReport arm;
    AggregateArm(arm, js, levels, present, 5, &answers, nullptr, nullptr, {});
    using Get = std::function<double(const LevelSection&)>;
    const std::vector<std::pair<std::string, Get>> metrics{
        {"mrr", [](const LevelSection& s) { return s.retrieval->mrr; }},
        {"recall", [](const LevelSection& s) { return s.retrieval->recall; }},
        {"ndcg", [](const LevelSection& s) { return s.retrieval->ndcg; }},
        {"em", [](const LevelSection& s) { return s.semantic->exact_match; }},
        {"bleu", [](const LevelSection& s) { return s.semantic->bleu; }},
        {"rouge1", [](const LevelSection& s) { return s.semantic->rouge1; }},
        {"rougeL", [](const LevelSection& s) { return s.semantic->rouge_l; }},
    };
    std::size_t total_q = 0;
    for (const auto& s : arm.levels) total_q += s.questions;
    c(total_q == static_cast<std::size_t>(n) && arm.total.questions == total_q,
      "question counts do not add up");
    for (const auto& [name, get] : metrics) {
      double num = 0;
      for (const auto& s : arm.levels)
        if (s.questions) num += s.questions * get(s);
      const double want = num / n;
      c(std::abs(get(arm.total) - want) <= 1e-9,
        "trial " + std::to_string(trial) + " " + name + ": " + Num(get(arm.total)) + " vs " +
            Num(want));
    }
  }
  return c.why;
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string("'") + RAGBENCH_CLI + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Criterion9(const fs::path& scratch) {
  Check c;
  const fs::path out = scratch / "sample";
  const std::string args = "run -c '" + std::string(RAGBENCH_SOURCE_DIR) +
                           "/configs/sample_mock.json' --out '" + out.string() + "'";
  const auto t0 = Clock::now();
  const int code = RunCli(args);
  const double t = Since(t0);
  c(code == 0, "run exited " + std::to_string(code));
  c(t < 30.0, "run took " + Num(t) + " s");
  if (!c.ok()) return c.why;
  const std::string first = Slurp(out / "report.json");
  c(RunCli(args) == 0, "second run failed");
  const std::string second = Slurp(out / "report.json");
  c(first == second, "reports differ between runs");
  const json report = json::parse(first);
  bool found = false;
  for (const auto& arm : report.at("arms")) {
    if (arm.at("index") != "dense") continue;
    found = true;
    const double recall = arm.at("total").at("retrieval").at("recall@5").get<double>();
    c(recall == 1.0, arm.at("name").get<std::string>() + " Recall@5 = " + Num(recall));
    if (arm.at("name") == "dense-native") break;
  }
  c(found, "no dense arm in report");
  return c.why;
}

std::string Criterion10(const fs::path& scratch) {
  Check c;
  const fs::path dir = scratch / "memory";
  fs::create_directories(dir);
  std::mt19937_64 rng(1010);
  std::uniform_int_distribution<int> letter(0, 25);
  auto word = [&] {
    std::string w;
    for (int i = 0; i < 6; ++i) w += static_cast<char>('a' + letter(rng));
    return w;
  };
  std::size_t total_chunks = 0;
  {
    std::ofstream corpus(dir / "corpus.jsonl");
    for (int d = 0; d < 100; ++d) {
      // 20..40 chunks, paired so the mean is exactly 30.
      const int count = d % 2 == 0 ? 20 + (d * 7) % 21 : 40 - ((d - 1) * 7) % 21;
      json doc{{"kind", "doc"}, {"doc_id", "d" + std::to_string(d)}, {"level", d % 4}};
      json ch = json::array();
      std::string text;
      for (int j = 0; j < count; ++j) {
        const std::string s = word() + " " + word() + " " + word();
        ch.push_back(s);
        text += s + " ";
      }
      total_chunks += count;
      doc["channels"] = {{"native", text}};
      doc["chunks"] = ch;
      corpus << doc.dump() << "\n";
    }
    corpus << json{{"kind", "qa"}, {"doc_id", "d0"}, {"question", "what"}, {"answer", "this"}}
                  .dump()
           << "\n";
  }
  const json cfg{{"corpus", (dir / "corpus.jsonl").string()},
                 {"output_dir", (dir / "out").string()},
                 {"embedders", {{"h", {{"kind", "deterministic"}, {"dim", 256}}}}},
                 {"arms",
                  {{{"name", "dense"}, {"index", "dense"}, {"channel", "native"}, {"doc_embedder", "h"}},
                   {{"name", "late"},
                    {"index", "late"},
                    {"channel", "native"},
                    {"chunking", true},
                    {"doc_embedder", "h"}}}}};
  std::ofstream(dir / "config.json") << cfg.dump(2);
  const auto config = LoadConfig(dir / "config.json", {});
  const auto dense = ProfileEfficiency(config, "dense");
  const auto late = ProfileEfficiency(config, "late");

  const double payload = 100.0 * 256 * sizeof(float);
  const double payload_per_1k = payload * 1000.0 / 100.0;
  c(total_chunks == 3000, "mean chunk count is not 30");
  c(dense.payload_bytes == payload, "dense payload " + std::to_string(dense.payload_bytes));
  c(dense.memory_per_1k_docs >= payload_per_1k &&
        dense.memory_per_1k_docs <= 1.10 * payload_per_1k,
    "dense memory/1k " + Num(dense.memory_per_1k_docs) + " vs payload " + Num(payload_per_1k));
  c(late.memory_per_1k_docs >= 25.0 * payload_per_1k,
    "late memory/1k " + Num(late.memory_per_1k_docs) + " < 25x dense payload");
  return c.why;
}

}  // namespace

int main() {
  const fs::path scratch =
      fs::temp_directory_path() / ("rb_accept_" + std::to_string(std::random_device{}()));
  fs::create_directories(scratch);
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria{
      {"metric formulas match brute-force evaluator", Criterion1},
      {"NDCG graded path equals binary closed form", Criterion2},
      {"late-interaction top-k matches exhaustive MaxSim", Criterion3},
      {"dense top-k matches full cosine sort", Criterion4},
      {"single-vector late index equals dense index", Criterion5},
      {"semantic metrics match reference evaluation", Criterion6},
      {"radar axes for reference inputs", Criterion7},
      {"totals are question-weighted level means", Criterion8},
      {"end-to-end mock run", [&] { return Criterion9(scratch); }},
      {"memory accounting", [&] { return Criterion10(scratch); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string why;
    try {
      why = criteria[i].second();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (why.empty()) {
      std::printf("PASS criterion %zu: %s\n", i + 1, criteria[i].first.c_str());
    } else {
      ++failed;
      std::printf("FAIL criterion %zu: %s (%s)\n", i + 1, criteria[i].first.c_str(), why.c_str());
    }
  }
  fs::remove_all(scratch);
  return failed == 0 ? 0 : 1;
}
