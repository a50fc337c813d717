//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_EVAL_PROMPT_H_
#define CHEMGYM_EVAL_PROMPT_H_

#include <string>
#include <vector>

#include "chemgym/random.h"
#include "chemgym/task.h"
#include "chemgym/tokenizer/augment.h"

namespace chemgym {

struct PromptPlan {
  int repetitions = 1;
  // Overrides the record's own template pool when non-empty.
  std::vector<std::string> template_pool;
  AugmentationPolicy augmentation;
  double temperature = 0.0;
  int max_tokens = 1024;
  // Few-shot examples drawn from `train_split` for base models.
  int few_shot = 0;
  std::vector<TaskRecord> train_split;

  // Throws ConfigError.
  void validate() const;
};

struct AssembledPrompt {
  std::string text;
  int template_index = -1;
  TaskRecord record;  // after augmentation
};

/// Draws a template uniformly, augments the record and substitutes each
/// placeholder with its entity wrapped in format tags. Few-shot examples are
/// rendered the same way, each followed by its answer block, and separated
/// by blank lines. Throws MissingPlaceholder when a template names an entity
/// the record lacks, ConfigError for an invalid plan.
AssembledPrompt assemble_prompt(const TaskRecord &rec, const PromptPlan &plan,
                                Rng &rng, const NameProvider *names = nullptr);

// Substitutes placeholders with tagged entity values.
std::string render_template(const std::string &tmpl, const TaskRecord &rec);

}  // namespace chemgym

#endif  // CHEMGYM_EVAL_PROMPT_H_
