//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/api.h"

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "chemgym/error.h"
#include "chemgym/random.h"
#include "chemgym/rewards/rewards.h"
#include "chemgym/sampler/registry.h"
#include "chemgym/task.h"
#include "chemgym/tokenizer/augment.h"
#include "chemgym/tokenizer/tokenizer.h"
#include "chemgym/tokenizer/vocabulary.h"

namespace chemgym::api {

using nlohmann::json;

namespace {

json parse_request(std::string_view request) {
  json j = json::parse(request, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw SchemaError("request is not a JSON object", 0);
  return j;
}

template <class T>
T field(const json &j, const char *name) {
  if (!j.contains(name))
    throw SchemaError(std::string("missing field '") + name + "'", 0);
  try {
    return j.at(name).get<T>();
  } catch (const json::exception &) {
    throw SchemaError(std::string("field '") + name + "' has the wrong type",
                      0);
  }
}

template <class T>
T field_or(const json &j, const char *name, T fallback) {
  return j.contains(name) ? field<T>(j, name) : fallback;
}

Vocabulary vocabulary(const json &j) {
  if (j.contains("vocab"))
    return Vocabulary::load(field<std::string>(j, "vocab"));
  return Vocabulary::with_default_text();
}

}  // namespace

std::string tokenize(std::string_view request) {
  json j = parse_request(request);
  Vocabulary vocab = vocabulary(j);
  TokenizeOptions options;
  options.isolate_inputs = field_or<bool>(j, "isolate_inputs", true);
  TokenSequence seq = chemgym::tokenize(field<std::string>(j, "text"), vocab,
                                        options);
  json spans = json::array();
  for (const auto &s : seq.spans)
    spans.push_back({ std::string(format_name(s.format)), s.start, s.end });
  return json {
    { "ids", seq.ids },
    { "tokens", token_names(seq.ids, vocab) },
    { "spans", spans },
  }.dump();
}

std::string detokenize(std::string_view request) {
  json j = parse_request(request);
  Vocabulary vocab = vocabulary(j);
  auto ids = field<std::vector<int>>(j, "ids");
  return json { { "text", chemgym::detokenize(ids, vocab) } }.dump();
}

std::string augment_record(std::string_view request) {
  json j = parse_request(request);
  TaskRecord rec = task_from_json(field<json>(j, "record"));
  AugmentationPolicy policy;
  if (j.contains("policy")) {
    json p = field<json>(j, "policy");
    policy.p_format_convert =
        field_or<double>(p, "p_format_convert", policy.p_format_convert);
    policy.p_random_traversal =
        field_or<double>(p, "p_random_traversal", policy.p_random_traversal);
    policy.p_input_isolation =
        field_or<double>(p, "p_input_isolation", policy.p_input_isolation);
  }
  policy.validate();
  Rng rng(field_or<std::uint64_t>(j, "seed", 0));
  TaskRecord out = chemgym::augment_record(rec, policy, rng);
  bool isolate = draw_input_isolation(policy, rng);
  return json {
    { "record", task_to_json(out) },
    { "isolate_inputs", isolate },
  }.dump();
}

std::string sample_batch(std::string_view request) {
  json j = parse_request(request);
  Registry reg = load_manifest(field<std::string>(j, "manifest"));
  Rng rng(field_or<std::uint64_t>(j, "seed", 0));
  json records = json::array();
  for (const auto &r :
       chemgym::sample_batch(reg, field<std::size_t>(j, "n"), rng))
    records.push_back(task_to_json(r));
  return json { { "records", records } }.dump();
}

std::string score(std::string_view request) {
  json j = parse_request(request);
  TaskRecord rec = task_from_json(field<json>(j, "task"));
  RewardWeights w;
  if (j.contains("weights")) {
    json wj = field<json>(j, "weights");
    w.format = field_or<double>(wj, "format", w.format);
    w.think = field_or<double>(wj, "think", w.think);
    w.task = field_or<double>(wj, "task", w.task);
  }
  Completion c = parse_completion_spans(field<std::string>(j, "completion"));
  return report_to_json(chemgym::score(rec, c, w)).dump();
}

std::string group_advantages(std::string_view request) {
  json j = parse_request(request);
  auto rewards = field<std::vector<double>>(j, "rewards");
  double eps = field_or<double>(j, "eps", kAdvantageEpsilon);
  return json {
    { "advantages", chemgym::group_advantages(rewards, eps) },
  }.dump();
}

std::string call(std::string_view op, std::string_view request) {
  try {
    if (op == "tokenize")
      return tokenize(request);
    if (op == "detokenize")
      return detokenize(request);
    if (op == "augment_record")
      return augment_record(request);
    if (op == "sample_batch")
      return sample_batch(request);
    if (op == "score")
      return score(request);
    if (op == "group_advantages")
      return group_advantages(request);
    throw ConfigError("unknown operation '" + std::string(op) + "'");
  } catch (const PositionedError &e) {
    return json { { "error", { { "code", e.code() },
                               { "message", e.what() },
                               { "position", e.position() } } } }.dump();
  } catch (const Error &e) {
    return json { { "error", { { "code", e.code() },
                               { "message", e.what() } } } }.dump();
  } catch (const std::exception &e) {
    return json { { "error", { { "code", "InternalError" },
                               { "message", e.what() } } } }.dump();
  }
}

}  // namespace chemgym::api
