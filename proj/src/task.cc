//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/task.h"

#include <cmath>

#include "chemgym/error.h"

namespace chemgym {

using nlohmann::json;

namespace {

class Reader {
public:
  explicit Reader(std::size_t line): line_(line) { }

  [[noreturn]] void fail(const std::string &msg) const {
    throw SchemaError("line " + std::to_string(line_) + ": " + msg, line_);
  }

  const json &field(const json &obj, const char *key) const {
    auto it = obj.find(key);
    if (it == obj.end())
      fail(std::string("missing field '") + key + "'");
    return *it;
  }

  std::string string(const json &obj, const char *key) const {
    const json &v = field(obj, key);
    if (!v.is_string())
      fail(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::vector<std::string> strings(const json &obj, const char *key) const {
    const json &v = field(obj, key);
    if (!v.is_array())
      fail(std::string("field '") + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto &e : v) {
      if (!e.is_string())
        fail(std::string("field '") + key + "' must be an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

private:
  std::size_t line_;
};

const char *kFormats[] = {
  "smiles", "selfies", "fasta", "iupac", "protein3d", "conformer", "text",
};

}  // namespace

std::vector<std::string> template_placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    char c = tmpl[i];
    if ((c == '{' || c == '}') && i + 1 < tmpl.size() && tmpl[i + 1] == c) {
      ++i;
      continue;
    }
    if (c != '{')
      continue;
    std::size_t close = tmpl.find('}', i);
    if (close == std::string_view::npos)
      throw SchemaError("unterminated placeholder in template", i);
    if (close == i + 1)
      throw SchemaError("empty placeholder in template", i);
    out.emplace_back(tmpl.substr(i + 1, close - i - 1));
    i = close;
  }
  return out;
}

TaskRecord task_from_json(const json &j, std::size_t line) {
  Reader r(line);
  if (!j.is_object())
    r.fail("record must be a JSON object");
  TaskRecord rec;
  if (j.contains("id"))
    rec.id = r.string(j, "id");
  rec.category = r.string(j, "category");
  rec.task_id = r.string(j, "task_id");
  rec.prompt_templates = r.strings(j, "prompt_templates");
  if (rec.prompt_templates.empty())
    r.fail("prompt_templates is empty");

  const json &ents = r.field(j, "entities");
  if (!ents.is_object())
    r.fail("entities must be an object");
  for (const auto &[name, e] : ents.items()) {
    if (!e.is_object())
      r.fail("entity '" + name + "' must be an object");
    Entity ent;
    ent.format = r.string(e, "format");
    ent.value = r.string(e, "value");
    bool known = false;
    for (const char *f : kFormats)
      known = known || ent.format == f;
    if (!known)
      r.fail("entity '" + name + "' has unknown format '" + ent.format + "'");
    if (e.contains("role")) {
      std::string role = r.string(e, "role");
      if (role == "input")
        ent.role = EntityRole::kInput;
      else if (role == "target")
        ent.role = EntityRole::kTarget;
      else
        r.fail("entity '" + name + "' has unknown role '" + role + "'");
    }
    rec.entities.emplace(name, std::move(ent));
  }

  const json &answer = r.field(j, "answer");
  if (answer.is_string())
    rec.answer = answer.get<std::string>();
  else if (answer.is_number())
    rec.answer = answer.dump();
  else
    r.fail("answer must be a string or number");

  const json &at = r.field(j, "answer_type");
  if (!at.is_object())
    r.fail("answer_type must be an object");
  std::string kind = r.string(at, "kind");
  AnswerType &t = rec.answer_type;
  if (kind == "classification") {
    t.kind = AnswerKind::kClassification;
    t.labels = r.strings(at, "labels");
    if (t.labels.empty())
      r.fail("classification needs at least one label");
  } else if (kind == "regression") {
    t.kind = AnswerKind::kRegression;
    if (at.contains("range")) {
      const json &range = at["range"];
      if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
          !range[1].is_number())
        r.fail("range must be [min, max]");
      t.range = { range[0].get<double>(), range[1].get<double>() };
      if (!std::isfinite(t.range->first) || !std::isfinite(t.range->second))
        r.fail("range must be finite");
    }
  } else if (kind == "generation") {
    t.kind = AnswerKind::kGeneration;
    std::string mode = r.string(at, "mode");
    if (mode == "validity_only")
      t.mode = GenerationMode::kValidityOnly;
    else if (mode == "ground_truth")
      t.mode = GenerationMode::kGroundTruth;
    else
      r.fail("unknown generation mode '" + mode + "'");
    if (at.contains("ground_truth"))
      t.ground_truth = r.strings(at, "ground_truth");
    if (t.mode == GenerationMode::kGroundTruth && t.ground_truth.empty())
      r.fail("ground_truth mode needs a non-empty ground_truth list");
  } else {
    r.fail("unknown answer kind '" + kind + "'");
  }

  for (const auto &tmpl : rec.prompt_templates) {
    std::vector<std::string> names;
    try {
      names = template_placeholders(tmpl);
    } catch (const SchemaError &e) {
      r.fail(e.what());
    }
    for (const auto &n : names)
      if (!rec.entities.count(n))
        r.fail("template placeholder {" + n + "} has no entity");
  }
  return rec;
}

TaskRecord parse_task(std::string_view json_text, std::size_t line) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded())
    throw SchemaError("line " + std::to_string(line) + ": invalid JSON", line);
  return task_from_json(j, line);
}

json task_to_json(const TaskRecord &rec) {
  json j = json::object();
  if (!rec.id.empty())
    j["id"] = rec.id;
  j["category"] = rec.category;
  j["task_id"] = rec.task_id;
  j["prompt_templates"] = rec.prompt_templates;
  json ents = json::object();
  for (const auto &[name, e] : rec.entities)
    ents[name] = { { "format", e.format }, { "value", e.value },
                   { "role", e.role == EntityRole::kInput ? "input" : "target" } };
  j["entities"] = ents;
  j["answer"] = rec.answer;
  const AnswerType &t = rec.answer_type;
  json at = json::object();
  switch (t.kind) {
  case AnswerKind::kClassification:
    at["kind"] = "classification";
    at["labels"] = t.labels;
    break;
  case AnswerKind::kRegression:
    at["kind"] = "regression";
    if (t.range)
      at["range"] = { t.range->first, t.range->second };
    break;
  case AnswerKind::kGeneration:
    at["kind"] = "generation";
    at["mode"] = t.mode == GenerationMode::kValidityOnly ? "validity_only"
                                                         : "ground_truth";
    at["ground_truth"] = t.ground_truth;
    break;
  }
  j["answer_type"] = at;
  return j;
}

}  // namespace chemgym
