//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_EVAL_PREDICTION_H_
#define CHEMGYM_EVAL_PREDICTION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chemgym/task.h"
#include "chemgym/tokenizer/vocabulary.h"

namespace chemgym {

enum class PredictionKind {
  kNumber,
  kLabel,
  kMolecule,  // canonical SMILES
  kInvalid,
};

struct Prediction {
  PredictionKind kind = PredictionKind::kInvalid;
  double number = 0;
  std::string text;  // label or canonical SMILES
  std::optional<std::map<std::string, double>> class_probabilities;
  int template_index = -1;
  std::uint64_t augmentation_seed = 0;

  bool valid() const { return kind != PredictionKind::kInvalid; }
};

/// Reads the <answer> block (as located by the reward extractor) and parses
/// it by answer type: a decimal number, one of the labels (exact match after
/// trimming), or a molecule (canonical SMILES). Anything else is Invalid.
Prediction parse_completion(std::string_view raw, const AnswerType &type);

/// Softmax over the first-token logprobs of each label. The first token of a
/// label is the label itself, or with a vocabulary its longest-match text
/// token. Labels whose first token is missing from the logprobs get
/// probability 0. Throws AmbiguousLabelTokens when two labels share a first
/// token and DegenerateInput when no label token has a logprob.
std::map<std::string, double> class_probs_from_logprobs(
    const std::map<std::string, double> &first_token_logprobs,
    const std::vector<std::string> &labels, const Vocabulary *vocab = nullptr);

using Aggregator = std::function<Prediction(std::span<const Prediction>)>;

// "median", "majority", or a name added with register_aggregator().
void register_aggregator(const std::string &name, Aggregator fn);
bool has_aggregator(const std::string &name);

struct EvalAggregate {
  std::vector<Prediction> predictions;
  Prediction value;
  std::string rule;
  std::size_t n_valid = 0;

  double validity_fraction() const {
    return predictions.empty() ? 0.0
        : static_cast<double>(n_valid) / predictions.size();
  }
};

/// Aggregates the valid predictions: median of numbers (mean of the middle
/// two for even counts), majority label or molecule (ties go to the
/// lexicographically smallest), or a registered aggregator. Class
/// probabilities, when every valid prediction has them, are averaged. Throws
/// AllInvalid when nothing is valid, DegenerateInput for an empty list or
/// mixed kinds, ConfigError for an unknown rule.
EvalAggregate aggregate(std::span<const Prediction> preds,
                        const std::string &rule);

nlohmann::json prediction_to_json(const Prediction &p);

}  // namespace chemgym

#endif  // CHEMGYM_EVAL_PREDICTION_H_
