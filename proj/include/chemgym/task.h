//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_TASK_H_
#define CHEMGYM_TASK_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace chemgym {

inline constexpr std::array<std::string_view, 6> kDefaultCategories {
  "2d_molecule", "3d_molecule", "2d_protein", "3d_protein", "drug_gene",
  "cross_domain",
};

enum class EntityRole {
  kInput,
  kTarget,
};

// One named payload of a record. `format` is one of smiles, selfies, fasta,
// iupac, protein3d, conformer or text.
struct Entity {
  std::string format;
  std::string value;
  EntityRole role = EntityRole::kInput;

  bool operator==(const Entity &) const = default;
};

enum class AnswerKind {
  kClassification,
  kRegression,
  kGeneration,
};

enum class GenerationMode {
  kValidityOnly,
  kGroundTruth,
};

struct AnswerType {
  AnswerKind kind = AnswerKind::kClassification;
  std::vector<std::string> labels;                   // classification
  std::optional<std::pair<double, double>> range;    // regression
  GenerationMode mode = GenerationMode::kValidityOnly;
  std::vector<std::string> ground_truth;             // generation, SMILES

  bool operator==(const AnswerType &) const = default;
};

/// One training or evaluation example.
///
/// JSON form:
///   {"id": "...",                     (optional)
///    "category": "2d_molecule", "task_id": "bbbp",
///    "prompt_templates": ["Is {mol} permeable?"],
///    "entities": {"mol": {"format": "smiles", "value": "CCO",
///                         "role": "input"}},
///    "answer": "True",
///    "answer_type": {"kind": "classification", "labels": ["True", "False"]}}
/// Regression answer types carry "range": [min, max] (filled in by the
/// registry when absent); generation ones carry "mode" ("validity_only" or
/// "ground_truth") and "ground_truth": [SMILES, ...].
struct TaskRecord {
  std::string id;
  std::string category;
  std::string task_id;
  std::vector<std::string> prompt_templates;
  std::map<std::string, Entity> entities;
  std::string answer;
  AnswerType answer_type;

  bool operator==(const TaskRecord &) const = default;
};

// Throws SchemaError; `line` is reported as its position.
TaskRecord task_from_json(const nlohmann::json &j, std::size_t line = 0);
TaskRecord parse_task(std::string_view json_text, std::size_t line = 0);
nlohmann::json task_to_json(const TaskRecord &rec);

// Placeholder names in a template: "{name}"; "{{" and "}}" are literal braces.
// Throws SchemaError for an unterminated or empty placeholder.
std::vector<std::string> template_placeholders(std::string_view tmpl);

}  // namespace chemgym

#endif  // CHEMGYM_TASK_H_
