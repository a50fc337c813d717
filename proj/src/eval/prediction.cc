//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/eval/prediction.h"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"
#include "chemgym/rewards/rewards.h"

namespace chemgym {

namespace {

std::mutex &registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, Aggregator> &aggregators() {
  static std::map<std::string, Aggregator> m;
  return m;
}

Prediction median_of(std::span<const Prediction> valid) {
  std::vector<double> v;
  for (const auto &p : valid)
    v.push_back(p.number);
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  Prediction out;
  out.kind = PredictionKind::kNumber;
  out.number = n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  return out;
}

Prediction majority_of(std::span<const Prediction> valid) {
  std::map<std::string, std::size_t> votes;
  for (const auto &p : valid)
    ++votes[p.text];
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it)
    if (it->second > best->second)
      best = it;
  Prediction out;
  out.kind = valid.front().kind;
  out.text = best->first;
  return out;
}

}  // namespace

Prediction parse_completion(std::string_view raw, const AnswerType &type) {
  Completion c = parse_completion_spans(std::string(raw));
  Prediction p;
  if (!c.answer)
    return p;
  std::string_view a = trim_ascii(c.answer_text());
  switch (type.kind) {
  case AnswerKind::kRegression:
    if (auto v = parse_decimal(a)) {
      p.kind = PredictionKind::kNumber;
      p.number = *v;
    }
    break;
  case AnswerKind::kClassification:
    if (std::find(type.labels.begin(), type.labels.end(), a) !=
        type.labels.end()) {
      p.kind = PredictionKind::kLabel;
      p.text = a;
    }
    break;
  case AnswerKind::kGeneration:
    if (a.empty())
      break;
    try {
      p.text = chem::canonicalize_smiles(a);
      p.kind = PredictionKind::kMolecule;
    } catch (const Error &) {
    }
    break;
  }
  return p;
}

std::map<std::string, double> class_probs_from_logprobs(
    const std::map<std::string, double> &first_token_logprobs,
    const std::vector<std::string> &labels, const Vocabulary *vocab) {
  std::vector<std::string> firsts;
  for (const auto &label : labels) {
    std::string first = label;
    if (vocab != nullptr) {
      auto [id, len] = vocab->match_text(label);
      first = id >= 0 ? label.substr(0, len) : label.substr(0, 1);
    }
    if (std::find(firsts.begin(), firsts.end(), first) != firsts.end())
      throw AmbiguousLabelTokens("labels share the first token '" + first +
                                 "'");
    firsts.push_back(first);
  }
  double top = -INFINITY;
  for (const auto &f : firsts)
    if (auto it = first_token_logprobs.find(f); it != first_token_logprobs.end())
      top = std::max(top, it->second);
  if (!std::isfinite(top))
    throw DegenerateInput("no label token has a finite logprob");
  std::vector<double> w;
  double sum = 0;
  for (const auto &f : firsts) {
    auto it = first_token_logprobs.find(f);
    double e = it == first_token_logprobs.end() ? 0.0
                                                : std::exp(it->second - top);
    w.push_back(e);
    sum += e;
  }
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[labels[i]] = w[i] / sum;
  return out;
}

void register_aggregator(const std::string &name, Aggregator fn) {
  if (name == "median" || name == "majority")
    throw ConfigError("aggregator '" + name + "' is built in");
  std::lock_guard lock(registry_mutex());
  aggregators()[name] = std::move(fn);
}

bool has_aggregator(const std::string &name) {
  if (name == "median" || name == "majority")
    return true;
  std::lock_guard lock(registry_mutex());
  return aggregators().count(name) != 0;
}

EvalAggregate aggregate(std::span<const Prediction> preds,
                        const std::string &rule) {
  if (preds.empty())
    throw DegenerateInput("no predictions to aggregate");
  EvalAggregate agg;
  agg.predictions.assign(preds.begin(), preds.end());
  agg.rule = rule;
  std::vector<Prediction> valid;
  for (const auto &p : preds) {
    if (!p.valid())
      continue;
    if (!valid.empty() && valid.front().kind != p.kind)
      throw DegenerateInput("predictions mix kinds");
    valid.push_back(p);
  }
  agg.n_valid = valid.size();
  if (valid.empty())
    throw AllInvalid("all " + std::to_string(preds.size()) +
                     " predictions are invalid");
  if (rule == "median") {
    if (valid.front().kind != PredictionKind::kNumber)
      throw DegenerateInput("median needs numeric predictions");
    agg.value = median_of(valid);
  } else if (rule == "majority") {
    if (valid.front().kind == PredictionKind::kNumber)
      throw DegenerateInput("majority vote needs labels or molecules");
    agg.value = majority_of(valid);
  } else {
    Aggregator fn;
    {
      std::lock_guard lock(registry_mutex());
      auto it = aggregators().find(rule);
      if (it == aggregators().end())
        throw ConfigError("unknown aggregation rule '" + rule + "'");
      fn = it->second;
    }
    agg.value = fn(valid);
  }
  bool all_probs = std::all_of(valid.begin(), valid.end(), [](const auto &p) {
    return p.class_probabilities.has_value();
  });
  if (all_probs) {
    std::map<std::string, double> mean;
    for (const auto &p : valid)
      for (const auto &[k, v] : *p.class_probabilities)
        mean[k] += v / static_cast<double>(valid.size());
    agg.value.class_probabilities = mean;
  }
  return agg;
}

nlohmann::json prediction_to_json(const Prediction &p) {
  nlohmann::json j;
  switch (p.kind) {
  case PredictionKind::kNumber:
    j["kind"] = "number";
    j["value"] = p.number;
    break;
  case PredictionKind::kLabel:
    j["kind"] = "label";
    j["value"] = p.text;
    break;
  case PredictionKind::kMolecule:
    j["kind"] = "molecule";
    j["value"] = p.text;
    break;
  case PredictionKind::kInvalid:
    j["kind"] = "invalid";
    j["value"] = nullptr;
    break;
  }
  if (p.class_probabilities)
    j["class_probabilities"] = *p.class_probabilities;
  if (p.template_index >= 0)
    j["template"] = p.template_index;
  j["augmentation_seed"] = p.augmentation_seed;
  return j;
}

}  // namespace chemgym
