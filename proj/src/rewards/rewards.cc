//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/rewards/rewards.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"

namespace chemgym {

namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

std::size_t count(std::string_view s, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t p = s.find(needle); p != std::string_view::npos;
       p = s.find(needle, p + needle.size()))
    ++n;
  return n;
}

std::optional<TextSpan> find_block(std::string_view s, std::string_view open,
                                   std::string_view close, std::size_t from) {
  std::size_t a = s.find(open, from);
  if (a == std::string_view::npos)
    return std::nullopt;
  std::size_t b = s.find(close, a + open.size());
  if (b == std::string_view::npos)
    return std::nullopt;
  return TextSpan { a + open.size(), b };
}

bool length_gate(std::string_view a, std::string_view g) {
  auto la = static_cast<long long>(char_length(a));
  auto lg = static_cast<long long>(char_length(g));
  return std::llabs(la - lg) < 3;
}

}  // namespace

std::string_view Completion::think_text() const {
  if (!think)
    return {};
  return std::string_view(raw).substr(think->begin, think->end - think->begin);
}

std::string_view Completion::answer_text() const {
  if (!answer)
    return {};
  return std::string_view(raw).substr(answer->begin,
                                      answer->end - answer->begin);
}

Completion parse_completion_spans(std::string raw) {
  Completion c;
  c.raw = std::move(raw);
  c.think = find_block(c.raw, kThinkOpen, kThinkClose, 0);
  std::size_t from = c.think ? c.think->end + kThinkClose.size() : 0;
  c.answer = find_block(c.raw, kAnswerOpen, kAnswerClose, from);
  return c;
}

std::size_t char_length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size();) {
    auto b = static_cast<unsigned char>(s[i]);
    std::size_t len = b < 0x80 ? 1
                    : (b >> 5) == 0x6 ? 2
                    : (b >> 4) == 0xe ? 3
                    : (b >> 3) == 0x1e ? 4 : 1;
    if (i + len > s.size())
      len = 1;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(s[i + k]) & 0xc0) != 0x80)
        len = 1;
    i += len;
    ++n;
  }
  return n;
}

std::string_view trim_ascii(std::string_view s) {
  constexpr std::string_view ws = " \t\n\r\f\v";
  std::size_t a = s.find_first_not_of(ws);
  if (a == std::string_view::npos)
    return {};
  std::size_t b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

std::optional<double> parse_decimal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-'))
    ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    ++i;
    ++digits;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      ++i;
      ++digits;
    }
  }
  if (digits == 0)
    return std::nullopt;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-'))
      ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      ++i;
      ++exp_digits;
    }
    if (exp_digits == 0)
      return std::nullopt;
  }
  if (i != s.size())
    return std::nullopt;
  std::string_view body = s[0] == '+' ? s.substr(1) : s;
  double v = 0;
  auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc() || p != body.data() + body.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

double reward_format(std::string_view raw) {
  return -1.0 + (count(raw, kThinkOpen) == 1 ? 1.0 : 0.0) +
         (count(raw, kThinkClose) == 1 ? 1.0 : 0.0);
}

double reward_think(const Completion &c) {
  double len = static_cast<double>(char_length(c.think_text()));
  return std::min(1.0, -1.0 + len / 2500.0);
}

double reward_classification(std::string_view answer, std::string_view truth) {
  std::string_view a = trim_ascii(answer), g = trim_ascii(truth);
  return (length_gate(a, g) ? 1.0 : 0.0) + (a == g ? 1.0 : 0.0) - 1.0;
}

double reward_regression(std::string_view answer, std::string_view truth,
                         std::pair<double, double> range) {
  if (!(range.second > range.first))
    throw DegenerateRange("answer range must satisfy max > min");
  std::string_view a = trim_ascii(answer), g = trim_ascii(truth);
  std::optional<double> gv = parse_decimal(g);
  if (!gv)
    throw DegenerateRange("ground truth '" + std::string(g) +
                          "' is not a number");
  std::optional<double> av = parse_decimal(a);
  if (!av)
    return -1.0;
  double r = (length_gate(a, g) ? 1.0 : 0.0) -
             std::abs(*av - *gv) / (range.second - range.first);
  return std::isnan(r) ? -1.0 : r;
}

double reward_generation(std::string_view answer,
                         const std::vector<std::string> *ground_truth) {
  std::string_view a = trim_ascii(answer);
  std::string canonical;
  try {
    if (a.empty())
      return -1.0;
    canonical = chem::canonicalize_smiles(a);
  } catch (const Error &) {
    return -1.0;
  }
  if (ground_truth == nullptr)
    return 1.0;
  bool member = std::find(ground_truth->begin(), ground_truth->end(),
                          canonical) != ground_truth->end();
  return member ? 1.0 : -1.0;
}

RewardReport score(const TaskRecord &rec, const Completion &c,
                   const RewardWeights &weights) {
  RewardReport r;
  r.r_format = reward_format(c.raw);
  r.r_think = reward_think(c);
  std::string_view answer = c.answer_text();
  const AnswerType &t = rec.answer_type;
  switch (t.kind) {
  case AnswerKind::kClassification:
    r.task_component = "qa";
    r.r_task = reward_classification(answer, rec.answer);
    break;
  case AnswerKind::kRegression:
    if (!t.range)
      throw DegenerateRange("regression record '" + rec.id +
                            "' has no answer range");
    r.task_component = "reg";
    r.r_task = reward_regression(answer, rec.answer, *t.range);
    break;
  case AnswerKind::kGeneration:
    if (t.mode == GenerationMode::kValidityOnly) {
      r.task_component = "gen_only";
      r.r_task = reward_generation(answer, nullptr);
    } else {
      std::vector<std::string> g;
      for (const auto &s : t.ground_truth)
        g.push_back(chem::canonicalize_smiles(s));
      r.task_component = "gen_gt";
      r.r_task = reward_generation(answer, &g);
    }
    break;
  }
  r.total = weights.format * r.r_format + weights.think * r.r_think +
            weights.task * r.r_task;
  return r;
}

nlohmann::json report_to_json(const RewardReport &r) {
  return {
    { "r_format", r.r_format },
    { "r_think", r.r_think },
    { "r_task", r.r_task },
    { "task_component", r.task_component },
    { "total", r.total },
  };
}

std::vector<double> group_advantages(std::span<const double> rewards,
                                     double eps) {
  if (rewards.size() < 2)
    throw GroupTooSmall("a group needs at least two rewards, got " +
                        std::to_string(rewards.size()));
  double n = static_cast<double>(rewards.size());
  double mean = 0;
  for (double r : rewards)
    mean += r;
  mean /= n;
  double var = 0;
  for (double r : rewards)
    var += (r - mean) * (r - mean);
  double sd = std::sqrt(var / n);
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards)
    out.push_back((r - mean) / (sd + eps));
  return out;
}

}  // namespace chemgym
