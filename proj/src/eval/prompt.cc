//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/eval/prompt.h"

#include <numeric>

#include "chemgym/error.h"
#include "chemgym/tokenizer/vocabulary.h"

namespace chemgym {

namespace {

std::string tagged(const Entity &e) {
  if (auto f = parse_format(e.format))
    return open_tag(*f) + e.value + close_tag(*f);
  return e.value;
}

}  // namespace

void PromptPlan::validate() const {
  if (repetitions < 1)
    throw ConfigError("repetitions must be at least 1");
  if (max_tokens < 1)
    throw ConfigError("max_tokens must be positive");
  if (temperature < 0)
    throw ConfigError("temperature must be non-negative");
  if (few_shot < 0)
    throw ConfigError("few_shot must be non-negative");
  if (few_shot > 0 && train_split.size() < static_cast<std::size_t>(few_shot))
    throw ConfigError("few_shot exceeds the training split size");
  augmentation.validate();
}

std::string render_template(const std::string &tmpl, const TaskRecord &rec) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    char c = tmpl[i];
    if ((c == '{' || c == '}') && i + 1 < tmpl.size() && tmpl[i + 1] == c) {
      out += c;
      ++i;
    } else if (c == '{') {
      std::size_t end = tmpl.find('}', i);
      if (end == std::string::npos)
        throw SyntaxError("unterminated placeholder", i);
      std::string name = tmpl.substr(i + 1, end - i - 1);
      auto it = rec.entities.find(name);
      if (it == rec.entities.end())
        throw MissingPlaceholder("template names unknown entity '" + name +
                                 "'");
      out += tagged(it->second);
      i = end;
    } else {
      out += c;
    }
  }
  return out;
}

AssembledPrompt assemble_prompt(const TaskRecord &rec, const PromptPlan &plan,
                                Rng &rng, const NameProvider *names) {
  plan.validate();
  const auto &pool =
      plan.template_pool.empty() ? rec.prompt_templates : plan.template_pool;
  if (pool.empty())
    throw ConfigError("no prompt templates for record '" + rec.id + "'");
  for (const auto &t : pool)
    for (const auto &name : template_placeholders(t))
      if (!rec.entities.count(name))
        throw MissingPlaceholder("template names unknown entity '" + name +
                                 "'");

  AssembledPrompt out;
  std::string shots;
  if (plan.few_shot > 0) {
    std::vector<std::size_t> idx(plan.train_split.size());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(std::span<std::size_t>(idx));
    for (int k = 0; k < plan.few_shot; ++k) {
      const TaskRecord &ex = plan.train_split[idx[k]];
      const auto &ex_pool = ex.prompt_templates.empty() ? pool
                                                        : ex.prompt_templates;
      std::size_t t = rng.uniform_index(ex_pool.size());
      shots += render_template(ex_pool[t], ex) + "\n<answer>" + ex.answer +
               "</answer>\n\n";
    }
  }
  out.template_index = static_cast<int>(rng.uniform_index(pool.size()));
  out.record = augment_record(rec, plan.augmentation, rng, names);
  out.text = shots + render_template(pool[out.template_index], out.record);
  return out;
}

}  // namespace chemgym
