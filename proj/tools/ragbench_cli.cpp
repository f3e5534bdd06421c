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

// ragbench command line. Exit codes:
//   0  success
//   1  validation found violations
//   2  usage, configuration or I/O error
//   3  provider error (network, remote service, generation)
//   4  data error (corpus, report or snapshot contents)
//   5  internal error

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ragbench/ragbench.h"

namespace {

int ExitCode(rb_status s) {
  switch (s) {
    case RB_OK: return 0;
    case RB_ERR_INVALID_ARGUMENT:
    case RB_ERR_CONFIG:
    case RB_ERR_IO: return 2;
    case RB_ERR_PROVIDER: return 3;
    case RB_ERR_DATA: return 4;
    default: return 5;
  }
}

const char* KindName(rb_status s) {
  switch (s) {
    case RB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RB_ERR_CONFIG: return "config error";
    case RB_ERR_PROVIDER: return "provider error";
    case RB_ERR_DATA: return "data error";
    case RB_ERR_IO: return "io error";
    default: return "internal error";
  }
}

int Report(rb_status s) {
  if (s != RB_OK) std::cerr << "ragbench: " << KindName(s) << ": " << rb_last_error() << "\n";
  return ExitCode(s);
}

// Owns a library-allocated string.
struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { rb_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct ConfigHandle {
  rb_config* p = nullptr;
  ~ConfigHandle() { rb_config_free(p); }
};

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  long long seed = -1;
};

rb_status LoadConfig(const Common& c, ConfigHandle& h) {
  rb_status s = rb_config_load(c.config.c_str(), &h.p);
  if (s != RB_OK) return s;
  for (const auto& o : c.sets) {
    if ((s = rb_config_set(h.p, o.c_str())) != RB_OK) return s;
  }
  if (!c.out.empty()) {
    // Flag paths are relative to the working directory, not the config file.
    const std::string a =
        "output_dir=" + std::filesystem::absolute(c.out).lexically_normal().string();
    if ((s = rb_config_set(h.p, a.c_str())) != RB_OK) return s;
  }
  if (c.seed >= 0) {
    const std::string a = "seed=" + std::to_string(c.seed);
    if ((s = rb_config_set(h.p, a.c_str())) != RB_OK) return s;
  }
  return RB_OK;
}

void AddCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "experiment config (JSON)")->required();
  cmd->add_option("--set", c.sets, "override, dotted.key=value (repeatable)");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--seed", c.seed, "random seed");
}

bool ReadFile(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

rb_format ParseFormat(const std::string& f) {
  if (f == "csv") return RB_FORMAT_CSV;
  if (f == "text") return RB_FORMAT_TEXT;
  return RB_FORMAT_JSON;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ragbench: retrieval and answer-quality benchmark for document RAG pipelines"};
  app.require_subcommand(1);
  int verbose = 0;
  app.add_flag("-v,--verbose", verbose, "more output on stderr");

  std::string corpus_path;
  std::vector<std::string> channels;
  auto* validate = app.add_subcommand("validate", "check a corpus file");
  validate->add_option("corpus", corpus_path, "corpus JSONL")->required();
  validate->add_option("--channel", channels, "channel every document must carry");

  Common gen_c, embed_c, index_c, run_c, prof_c;
  auto* gen = app.add_subcommand("generate-qa", "generate Q&A pairs for a corpus");
  AddCommon(gen, gen_c);
  auto* embed = app.add_subcommand("embed", "embed every arm's documents");
  AddCommon(embed, embed_c);
  auto* index = app.add_subcommand("index", "build and snapshot every arm's index");
  AddCommon(index, index_c);
  auto* run = app.add_subcommand("run", "run an experiment");
  AddCommon(run, run_c);
  std::string run_format = "text";
  run->add_option("--format", run_format, "summary format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  auto* prof = app.add_subcommand("profile", "time one arm at batch size 1");
  AddCommon(prof, prof_c);
  std::vector<std::string> prof_arms;
  prof->add_option("--arm", prof_arms, "arm to profile (default: all)");

  std::string report_path;
  std::string report_format = "csv";
  bool radar = false;
  auto* report = app.add_subcommand("report", "render a report.json");
  report->add_option("report", report_path, "report.json")->required();
  report->add_option("--format", report_format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  report->add_flag("--radar", radar, "radar scores instead of metric tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (validate->parsed()) {
    std::vector<const char*> ch;
    for (const auto& c : channels) ch.push_back(c.c_str());
    OwnedString out;
    std::size_t violations = 0;
    const rb_status s = rb_validate_corpus(corpus_path.c_str(), ch.data(), ch.size(),
                                           &out.p, &violations);
    if (out.p) std::cout << out.str() << "\n";
    if (s != RB_OK) return Report(s);
    if (verbose) std::cerr << violations << " violations\n";
    return violations == 0 ? 0 : 1;
  }

  if (report->parsed()) {
    std::string text;
    if (!ReadFile(report_path, text)) {
      std::cerr << "ragbench: io error: cannot read " << report_path << "\n";
      return 2;
    }
    OwnedString out;
    const rb_status s =
        rb_report_render(text.c_str(), ParseFormat(report_format), radar ? 1 : 0, &out.p);
    if (s != RB_OK) return Report(s);
    std::cout << out.str();
    return 0;
  }

  auto with_config = [&](const Common& c, auto&& body) -> int {
    ConfigHandle h;
    rb_status s = LoadConfig(c, h);
    if (s != RB_OK) return Report(s);
    return body(h.p);
  };

  if (gen->parsed()) {
    return with_config(gen_c, [&](rb_config* cfg) {
      OwnedString out;
      const rb_status s = rb_generate_qa(cfg, &out.p);
      if (s != RB_OK) return Report(s);
      std::cout << out.str() << "\n";
      return 0;
    });
  }
  if (embed->parsed()) {
    return with_config(embed_c, [&](rb_config* cfg) {
      OwnedString out;
      const rb_status s = rb_embed(cfg, &out.p);
      if (s != RB_OK) return Report(s);
      std::cout << out.str() << "\n";
      return 0;
    });
  }
  if (index->parsed()) {
    return with_config(index_c, [&](rb_config* cfg) {
      OwnedString out;
      const rb_status s = rb_build_indexes(cfg, &out.p);
      if (s != RB_OK) return Report(s);
      std::cout << out.str() << "\n";
      return 0;
    });
  }
  if (run->parsed()) {
    return with_config(run_c, [&](rb_config* cfg) {
      OwnedString report_json;
      rb_status s = rb_run_experiment(cfg, &report_json.p);
      if (s != RB_OK) return Report(s);
      OwnedString table;
      s = rb_report_render(report_json.p, ParseFormat(run_format), 0, &table.p);
      if (s != RB_OK) return Report(s);
      std::cout << table.str();
      if (verbose && run_format == "text") {
        OwnedString radar_table;
        if (rb_report_render(report_json.p, RB_FORMAT_TEXT, 1, &radar_table.p) == RB_OK)
          std::cout << "\n" << radar_table.str();
      }
      return 0;
    });
  }
  if (prof->parsed()) {
    return with_config(prof_c, [&](rb_config* cfg) {
      std::vector<std::string> arms = prof_arms;
      if (arms.empty()) {
        OwnedString tree;
        const rb_status s = rb_config_to_json(cfg, &tree.p);
        if (s != RB_OK) return Report(s);
        const auto parsed = nlohmann::json::parse(tree.str());
        for (const auto& a : parsed.at("arms"))
          arms.push_back(a.at("name").get<std::string>());
      }
      std::cout << "[\n";
      for (std::size_t i = 0; i < arms.size(); ++i) {
        OwnedString out;
        const rb_status s = rb_profile(cfg, arms[i].c_str(), &out.p);
        if (s != RB_OK) return Report(s);
        std::cout << out.str() << (i + 1 < arms.size() ? ",\n" : "\n");
      }
      std::cout << "]\n";
      return 0;
    });
  }
  return 2;
}
