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

#include "ragbench/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "ragbench/error.hpp"

namespace fs = std::filesystem;

namespace ragbench {
namespace {

Json GeneratorDefaults(const std::string& kind);

Json TopDefaults() {
  return Json{
      {"corpus", nullptr},
      {"qa_file", nullptr},
      {"k", 5},
      {"seed", 0},
      {"output_dir", "out"},
      {"workers", 4},
      {"resume", false},
      {"embedders", Json::object()},
      {"generation", GeneratorDefaults("mock")},
      {"arms", Json::array()},
      {"metrics", Json{{"retrieval", true},
                       {"semantic", true},
                       {"bleu_smoothing", false},
                       {"bleu_strict", false},
                       {"rouge1", "recall"}}},
      {"profiling", Json{{"enabled", false}}},
      {"radar", Json{{"std", "population"}}},
      {"prompts", Json{{"qa_pairs", nullptr},
                       {"qa_reask", nullptr},
                       {"answer", nullptr},
                       {"answer_no_context", nullptr},
                       {"context_token_budget", 0}}},
      {"qa_generation",
       Json{{"channel", nullptr}, {"pairs", 10}, {"max_reasks", 3}}},
  };
}

Json RemoteDefaults() {
  return Json{{"url", ""},         {"model", ""},        {"timeout_s", 30.0},
              {"max_retries", 2},  {"backoff_s", 0.25},  {"token_env", ""}};
}

Json EmbedderDefaults(const std::string& kind) {
  if (kind == "deterministic")
    return Json{{"kind", kind}, {"dim", 0}, {"batch_size", 1}};
  if (kind == "remote") {
    Json j{{"kind", kind}, {"dim", 0}, {"batch_size", 1}};
    j.update(RemoteDefaults());
    return j;
  }
  throw ConfigError("embedder kind must be \"deterministic\" or \"remote\", got \"" +
                    kind + "\"");
}

Json GeneratorDefaults(const std::string& kind) {
  if (kind == "mock") {
    return Json{{"kind", kind},
                {"script", nullptr},
                {"fallback", nullptr},
                {"fail_after_calls", nullptr}};
  }
  if (kind == "remote") {
    Json j{{"kind", kind}, {"temperature", 0.0}, {"max_tokens", 256}};
    j.update(RemoteDefaults());
    return j;
  }
  throw ConfigError("generation kind must be \"mock\" or \"remote\", got \"" +
                    kind + "\"");
}

Json ArmDefaults() {
  return Json{{"name", ""},
              {"index", "dense"},
              {"channel", ""},
              {"chunking", false},
              {"scoring", "maxsim"},
              {"doc_embedder", ""},
              {"query_embedder", nullptr},
              {"context_channel", nullptr}};
}

bool SameType(const Json& expected, const Json& value) {
  if (expected.is_null()) return !value.is_object() && !value.is_array();
  if (expected.is_number_integer())
    return value.is_number_integer() &&
           !(value.is_number_integer() && !value.is_number_unsigned() &&
             value.get<long long>() < 0);
  if (expected.is_number_float()) return value.is_number();
  return expected.type() == value.type();
}

const char* TypeName(const Json& v) {
  if (v.is_null()) return "null or scalar";
  if (v.is_number_integer()) return "non-negative integer";
  if (v.is_number()) return "number";
  return v.type_name();
}

std::string KindOf(const Json& obj, const std::string& where,
                   const std::string& fallback) {
  if (!obj.contains("kind")) return fallback;
  if (!obj["kind"].is_string()) throw ConfigError(where + ".kind must be a string");
  return obj["kind"].get<std::string>();
}

Json MergeStrict(const Json& defaults, const Json& user, const std::string& where);

Json MergeValue(const std::string& key, const Json& def, const Json& val,
                const std::string& where) {
  const std::string path = where.empty() ? key : where + "." + key;
  if (key == "embedders" && where.empty()) {
    if (!val.is_object()) throw ConfigError("embedders must be an object");
    Json out = Json::object();
    for (const auto& [name, spec] : val.items()) {
      if (!spec.is_object()) throw ConfigError("embedders." + name + " must be an object");
      out[name] = MergeStrict(
          EmbedderDefaults(KindOf(spec, "embedders." + name, "deterministic")),
          spec, "embedders." + name);
    }
    return out;
  }
  if (key == "generation" && where.empty()) {
    if (!val.is_object()) throw ConfigError("generation must be an object");
    return MergeStrict(GeneratorDefaults(KindOf(val, "generation", "mock")), val,
                       "generation");
  }
  if (key == "arms" && where.empty()) {
    if (!val.is_array()) throw ConfigError("arms must be an array");
    Json out = Json::array();
    for (std::size_t i = 0; i < val.size(); ++i) {
      if (!val[i].is_object())
        throw ConfigError("arms." + std::to_string(i) + " must be an object");
      out.push_back(MergeStrict(ArmDefaults(), val[i], "arms." + std::to_string(i)));
    }
    return out;
  }
  if (def.is_object()) {
    if (!val.is_object()) throw ConfigError(path + " must be an object");
    return MergeStrict(def, val, path);
  }
  if (!SameType(def, val)) {
    throw ConfigError(path + " must be a " + TypeName(def) + ", got " +
                      val.dump());
  }
  return val;
}

Json MergeStrict(const Json& defaults, const Json& user, const std::string& where) {
  if (!user.is_object()) throw ConfigError((where.empty() ? "config" : where) +
                                           " must be an object");
  Json out = defaults;
  for (const auto& [key, val] : user.items()) {
    if (!defaults.contains(key)) {
      throw ConfigError("unknown config key \"" +
                        (where.empty() ? key : where + "." + key) + "\"");
    }
    out[key] = MergeValue(key, defaults[key], val, where);
  }
  return out;
}

fs::path Resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

RemoteEndpoint EndpointFrom(const Json& j) {
  RemoteEndpoint e;
  e.url = j.at("url").get<std::string>();
  e.model = j.at("model").get<std::string>();
  e.timeout_seconds = j.at("timeout_s").get<double>();
  e.max_retries = j.at("max_retries").get<int>();
  e.backoff_seconds = j.at("backoff_s").get<double>();
  e.token_env = j.at("token_env").get<std::string>();
  return e;
}

template <typename T>
T Choice(const Json& v, const std::string& where,
         std::initializer_list<std::pair<const char*, T>> options) {
  const auto s = v.get<std::string>();
  std::string allowed;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    allowed += std::string(allowed.empty() ? "" : ", ") + name;
  }
  throw ConfigError(where + " must be one of " + allowed + ", got \"" + s + "\"");
}

}  // namespace

const ArmSpec& ExperimentConfig::arm(const std::string& name) const {
  for (const auto& a : arms) {
    if (a.name == name) return a;
  }
  throw ConfigError("no arm named \"" + name + "\"");
}

std::string ExperimentConfig::fingerprint() const {
  Json t = tree;
  t.erase("output_dir");
  t.erase("workers");
  t.erase("resume");
  const std::string s = t.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json LoadConfigTree(const fs::path& path) {
  Json user;
  try {
    user = Json::parse(ReadText(path), nullptr, true, /*ignore_comments=*/true);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return MergeStrict(TopDefaults(), user, "");
}

void ApplyOverride(Json& tree, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override \"" + std::string(assignment) +
                      "\" is not key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  Json* node = &tree;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (node->is_object()) {
      if (!node->contains(part))
        throw ConfigError("unknown config key \"" + key + "\"");
      node = &(*node)[part];
    } else if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(part, &used);
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw ConfigError("\"" + part + "\" in \"" + key + "\" is not an index");
      }
      if (idx >= node->size())
        throw ConfigError("index " + part + " out of range in \"" + key + "\"");
      node = &(*node)[idx];
    } else {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object() || node->is_array())
    throw ConfigError("\"" + key + "\" names a subtree, not a value");
  Json value;
  if (node->is_string()) {
    value = raw;
  } else {
    try {
      value = Json::parse(raw);
    } catch (const Json::parse_error&) {
      value = raw;
    }
  }
  if (!SameType(*node, value)) {
    throw ConfigError("override " + key + " must be a " + TypeName(*node) +
                      ", got \"" + raw + "\"");
  }
  *node = value;
}

ExperimentConfig ParseConfig(const Json& tree, const fs::path& base_dir) {
  ExperimentConfig c;
  c.tree = tree;
  try {
    if (!tree.at("corpus").is_string() || tree.at("corpus").get<std::string>().empty())
      throw ConfigError("corpus path is required");
    c.corpus = Resolve(base_dir, tree.at("corpus").get<std::string>());
    if (tree.at("qa_file").is_string())
      c.qa_file = Resolve(base_dir, tree.at("qa_file").get<std::string>());
    else if (!tree.at("qa_file").is_null())
      throw ConfigError("qa_file must be a path or null");
    c.k = tree.at("k").get<std::size_t>();
    if (c.k < 1) throw ConfigError("k must be >= 1");
    c.seed = tree.at("seed").get<std::uint64_t>();
    c.output_dir = Resolve(base_dir, tree.at("output_dir").get<std::string>());
    c.workers = tree.at("workers").get<std::size_t>();
    if (c.workers < 1) throw ConfigError("workers must be >= 1");
    c.resume = tree.at("resume").get<bool>();

    for (const auto& [name, spec] : tree.at("embedders").items()) {
      EmbedderSpec e;
      e.name = name;
      e.kind = spec.at("kind").get<std::string>();
      e.dim = spec.at("dim").get<std::size_t>();
      if (e.dim == 0) throw ConfigError("embedders." + name + ".dim must be > 0");
      e.batch_size = spec.at("batch_size").get<std::size_t>();
      if (e.batch_size == 0)
        throw ConfigError("embedders." + name + ".batch_size must be >= 1");
      if (e.kind == "remote") {
        e.endpoint = EndpointFrom(spec);
        if (e.endpoint.url.empty())
          throw ConfigError("embedders." + name + ".url is required");
      }
      c.embedders.emplace(name, std::move(e));
    }

    const Json& gen = tree.at("generation");
    c.generation.kind = gen.at("kind").get<std::string>();
    if (c.generation.kind == "mock") {
      if (gen.at("script").is_string())
        c.generation.script = Resolve(base_dir, gen.at("script").get<std::string>());
      else if (!gen.at("script").is_null())
        throw ConfigError("generation.script must be a path or null");
      if (gen.at("fallback").is_string()) {
        c.generation.fallback = Choice<MockScript::Fallback>(
            gen.at("fallback"), "generation.fallback",
            {{"extractive", MockScript::Fallback::kExtractive},
             {"error", MockScript::Fallback::kError}});
      }
      if (gen.at("fail_after_calls").is_number_unsigned())
        c.generation.fail_after_calls = gen.at("fail_after_calls").get<std::size_t>();
      else if (!gen.at("fail_after_calls").is_null())
        throw ConfigError("generation.fail_after_calls must be a count or null");
    } else {
      c.generation.endpoint = EndpointFrom(gen);
      if (c.generation.endpoint.url.empty())
        throw ConfigError("generation.url is required");
      c.generation.temperature = gen.at("temperature").get<double>();
      c.generation.max_tokens = gen.at("max_tokens").get<int>();
    }

    std::set<std::string> names;
    const Json& arms = tree.at("arms");
    if (arms.empty()) throw ConfigError("at least one arm is required");
    for (std::size_t i = 0; i < arms.size(); ++i) {
      const Json& a = arms[i];
      const std::string where = "arms." + std::to_string(i);
      ArmSpec arm;
      arm.name = a.at("name").get<std::string>();
      if (arm.name.empty()) throw ConfigError(where + ".name is required");
      if (!names.insert(arm.name).second)
        throw ConfigError("duplicate arm name \"" + arm.name + "\"");
      arm.index = Choice<IndexKind>(a.at("index"), where + ".index",
                                    {{"dense", IndexKind::kDense},
                                     {"late", IndexKind::kLate}});
      arm.channel = a.at("channel").get<std::string>();
      if (arm.channel.empty()) throw ConfigError(where + ".channel is required");
      arm.chunking = a.at("chunking").get<bool>();
      arm.scoring = Choice<LateScoring>(a.at("scoring"), where + ".scoring",
                                        {{"maxsim", LateScoring::kMaxSim},
                                         {"sum_maxsim", LateScoring::kSumMaxSim}});
      if (arm.index == IndexKind::kDense && arm.chunking)
        throw ConfigError(where + ": chunking needs a late index");
      if (arm.index == IndexKind::kDense && arm.scoring != LateScoring::kMaxSim)
        throw ConfigError(where + ": sum_maxsim scoring needs a late index");
      arm.doc_embedder = a.at("doc_embedder").get<std::string>();
      arm.query_embedder = a.at("query_embedder").is_string()
                               ? a.at("query_embedder").get<std::string>()
                               : arm.doc_embedder;
      for (const auto* ref : {&arm.doc_embedder, &arm.query_embedder}) {
        if (!c.embedders.count(*ref))
          throw ConfigError(where + " references unknown embedder \"" + *ref + "\"");
      }
      arm.context_channel = a.at("context_channel").is_string()
                                ? a.at("context_channel").get<std::string>()
                                : arm.channel;
      c.arms.push_back(std::move(arm));
    }

    const Json& m = tree.at("metrics");
    c.retrieval_metrics = m.at("retrieval").get<bool>();
    c.semantic_metrics = m.at("semantic").get<bool>();
    c.semantic_options.bleu_smoothing = m.at("bleu_smoothing").get<bool>();
    c.semantic_options.bleu_strict = m.at("bleu_strict").get<bool>();
    c.semantic_options.rouge1_f_measure =
        Choice<bool>(m.at("rouge1"), "metrics.rouge1", {{"recall", false}, {"f", true}});
    c.profiling = tree.at("profiling").at("enabled").get<bool>();
    c.radar_std = Choice<StdMode>(tree.at("radar").at("std"), "radar.std",
                                  {{"population", StdMode::kPopulation},
                                   {"sample", StdMode::kSample}});

    const Json& p = tree.at("prompts");
    auto load_prompt = [&](const char* key, std::string& slot) {
      if (p.at(key).is_string()) slot = ReadText(Resolve(base_dir, p.at(key).get<std::string>()));
      else if (!p.at(key).is_null())
        throw ConfigError(std::string("prompts.") + key + " must be a path or null");
    };
    load_prompt("qa_pairs", c.prompts.qa_pairs);
    load_prompt("qa_reask", c.prompts.qa_reask);
    load_prompt("answer", c.prompts.answer);
    load_prompt("answer_no_context", c.prompts.answer_no_context);
    c.context_token_budget = p.at("context_token_budget").get<std::size_t>();

    const Json& q = tree.at("qa_generation");
    c.qa_channel = q.at("channel").is_string() ? q.at("channel").get<std::string>()
                                               : c.arms.front().channel;
    c.qa_pairs = q.at("pairs").get<std::size_t>();
    if (c.qa_pairs < 1) throw ConfigError("qa_generation.pairs must be >= 1");
    c.qa_max_reasks = q.at("max_reasks").get<std::size_t>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig LoadConfig(const fs::path& path,
                            const std::vector<std::string>& overrides) {
  Json tree = LoadConfigTree(path);
  for (const auto& o : overrides) ApplyOverride(tree, o);
  return ParseConfig(tree, path.parent_path());
}

std::unique_ptr<EmbeddingProvider> MakeEmbedder(const EmbedderSpec& spec) {
  if (spec.kind == "deterministic")
    return std::make_unique<DeterministicEmbedder>(spec.dim, spec.batch_size);
  return std::make_unique<RemoteEmbedder>(spec.endpoint, spec.dim, spec.batch_size);
}

std::unique_ptr<GenerationProvider> MakeGenerator(const GeneratorSpec& spec) {
  if (spec.kind == "remote") {
    return std::make_unique<RemoteGenerator>(spec.endpoint, spec.temperature,
                                             spec.max_tokens);
  }
  MockScript script = spec.script ? MockScript::FromFile(*spec.script) : MockScript{};
  if (spec.fallback) script.fallback = *spec.fallback;
  if (spec.fail_after_calls) script.fail_after_calls = *spec.fail_after_calls;
  return std::make_unique<MockGenerator>(std::move(script));
}

}  // namespace ragbench
