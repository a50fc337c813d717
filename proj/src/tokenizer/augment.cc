//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/tokenizer/augment.h"

#include "chemgym/chem/selfies.h"
#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"

namespace chemgym {

namespace {

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

void canonicalize(Entity &e) {
  if (e.format == "smiles")
    e.value = chem::to_canonical_smiles(chem::parse_smiles(e.value));
  else if (e.format == "selfies")
    e.value = chem::encode_selfies(chem::decode_selfies(e.value));
}

void augment_input(Entity &e, const AugmentationPolicy &policy, Rng &rng,
                   const NameProvider *names) {
  if (e.format != "smiles" && e.format != "selfies" && e.format != "iupac")
    return;
  if (rng.bernoulli(policy.p_format_convert)) {
    if (e.format == "smiles") {
      chem::Molecule m = chem::parse_smiles(e.value);
      bool to_name = names != nullptr && rng.uniform_index(2) == 1;
      std::optional<std::string> name;
      if (to_name)
        name = names->name_of(m);
      if (name) {
        e.format = "iupac";
        e.value = *name;
      } else {
        e.format = "selfies";
        e.value = chem::encode_selfies(m);
      }
    } else if (e.format == "selfies") {
      e.format = "smiles";
      e.value = chem::to_canonical_smiles(chem::decode_selfies(e.value));
    } else if (names != nullptr) {
      if (auto smiles = names->smiles_of(e.value)) {
        e.format = "smiles";
        e.value = chem::to_canonical_smiles(chem::parse_smiles(*smiles));
      }
    }
  }
  if (e.format == "iupac" || !rng.bernoulli(policy.p_random_traversal))
    return;
  if (e.format == "smiles")
    e.value = chem::random_traversal_smiles(chem::parse_smiles(e.value), rng);
  else
    e.value = chem::random_traversal_selfies(chem::decode_selfies(e.value), rng);
}

}  // namespace

void AugmentationPolicy::validate() const {
  if (!in_unit(p_format_convert) || !in_unit(p_random_traversal) ||
      !in_unit(p_input_isolation))
    throw ConfigError("augmentation probabilities must lie in [0, 1]");
}

TaskRecord augment_record(const TaskRecord &rec,
                          const AugmentationPolicy &policy, Rng &rng,
                          const NameProvider *names) {
  policy.validate();
  TaskRecord out = rec;
  for (auto &[name, e] : out.entities) {
    if (e.role == EntityRole::kTarget)
      canonicalize(e);
    else
      augment_input(e, policy, rng, names);
  }
  if (out.answer_type.kind == AnswerKind::kGeneration) {
    for (auto &g : out.answer_type.ground_truth)
      g = chem::to_canonical_smiles(chem::parse_smiles(g));
  }
  return out;
}

bool draw_input_isolation(const AugmentationPolicy &policy, Rng &rng) {
  return rng.bernoulli(policy.p_input_isolation);
}

std::optional<chem::Molecule> entity_molecule(const Entity &e,
                                              const NameProvider *names) {
  if (e.format == "smiles")
    return chem::parse_smiles(e.value);
  if (e.format == "selfies")
    return chem::decode_selfies(e.value);
  if (e.format == "iupac" && names != nullptr) {
    if (auto smiles = names->smiles_of(e.value))
      return chem::parse_smiles(*smiles);
  }
  return std::nullopt;
}

}  // namespace chemgym
