//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_REWARDS_REWARDS_H_
#define CHEMGYM_REWARDS_REWARDS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chemgym/task.h"

namespace chemgym {

// Defaults recorded for downstream GRPO trainers.
inline constexpr int kGrpoGroupSize = 8;
inline constexpr double kGrpoKlBeta = 0.4;
inline constexpr double kGrpoTemperature = 1.4;
inline constexpr double kAdvantageEpsilon = 1e-8;

struct TextSpan {
  std::size_t begin;  // byte offsets into Completion::raw
  std::size_t end;
};

/// A model output with its reasoning and answer located.
///
/// think: text between the first "<think>" and the next "</think>".
/// answer: text between the first "<answer>" after the reasoning (or after
/// the start when there is none) and the next "</answer>".
struct Completion {
  std::string raw;
  std::optional<TextSpan> think;
  std::optional<TextSpan> answer;

  std::string_view think_text() const;
  std::string_view answer_text() const;  // empty when absent
};

Completion parse_completion_spans(std::string raw);

// Unicode code points in UTF-8 text (invalid bytes count one each).
std::size_t char_length(std::string_view s);

// Strips ASCII whitespace from both ends.
std::string_view trim_ascii(std::string_view s);

// Optional sign, digits with an optional fraction, optional exponent.
// nullopt for anything else, including inf and nan.
std::optional<double> parse_decimal(std::string_view s);

// -1 + [one "<think>"] + [one "</think>"].
double reward_format(std::string_view raw);

// min(1, -1 + |o| / 2500), |o| in characters.
double reward_think(const Completion &c);

// [||a| - |g|| < 3] + [a == g] - 1 on trimmed strings.
double reward_classification(std::string_view answer, std::string_view truth);

/// [||a| - |g|| < 3] - |a - g| / (max - min) on trimmed strings; -1 when the
/// answer is not a decimal number. Throws DegenerateRange when max <= min or
/// the truth is not a number.
double reward_regression(std::string_view answer, std::string_view truth,
                         std::pair<double, double> range);

// 2 [valid SMILES] - 1, or with a ground-truth set (canonical SMILES)
// 2 [canonical(a) in G] - 1.
double reward_generation(std::string_view answer,
                         const std::vector<std::string> *ground_truth);

struct RewardWeights {
  double format = 1.0;
  double think = 1.0;
  double task = 1.0;
};

struct RewardReport {
  double r_format = 0;
  double r_think = 0;
  double r_task = 0;
  double total = 0;
  // Task component name: "qa", "reg", "gen_only" or "gen_gt".
  std::string task_component;

  bool operator==(const RewardReport &) const = default;
};

/// Scores a completion against a record, dispatching on its answer type.
/// Regression records need an answer range (DegenerateRange otherwise).
RewardReport score(const TaskRecord &rec, const Completion &c,
                   const RewardWeights &weights = {});

nlohmann::json report_to_json(const RewardReport &r);

/// (r - mean) / (std + eps) with the population standard deviation. Throws
/// GroupTooSmall for fewer than two rewards.
std::vector<double> group_advantages(std::span<const double> rewards,
                                     double eps = kAdvantageEpsilon);

}  // namespace chemgym

#endif  // CHEMGYM_REWARDS_REWARDS_H_
