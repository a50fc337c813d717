//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_TOKENIZER_AUGMENT_H_
#define CHEMGYM_TOKENIZER_AUGMENT_H_

#include <optional>
#include <string>
#include <string_view>

#include "chemgym/chem/molecule.h"
#include "chemgym/random.h"
#include "chemgym/task.h"

namespace chemgym {

// Source of systematic names. Both directions may decline with nullopt.
class NameProvider {
public:
  virtual ~NameProvider() = default;
  virtual std::optional<std::string> name_of(const chem::Molecule &m) const = 0;
  virtual std::optional<std::string> smiles_of(std::string_view name) const = 0;
};

struct AugmentationPolicy {
  double p_format_convert = 0.5;
  double p_random_traversal = 0.5;
  double p_input_isolation = 0.5;

  // Throws ConfigError unless every probability is in [0, 1].
  void validate() const;
};

/// Augments the chemical entities of a record.
///
/// Input entities are visited in name order. A smiles, selfies or iupac input
/// is first converted with probability p_format_convert (smiles to selfies,
/// or to iupac when a name provider is given, chosen uniformly; selfies to
/// smiles; iupac to smiles through the provider, no-op without one), then,
/// if it is smiles or selfies, rewritten along a random traversal with
/// probability p_random_traversal. Target entities and generation ground
/// truth are rewritten in canonical form (already canonical values are left
/// as is). Prompt templates and other fields are untouched. Propagates chem
/// parse errors.
TaskRecord augment_record(const TaskRecord &rec,
                          const AugmentationPolicy &policy, Rng &rng,
                          const NameProvider *names = nullptr);

// Whether user-turn spans get chemical tokens for one sample.
bool draw_input_isolation(const AugmentationPolicy &policy, Rng &rng);

// Parses an entity value in its format (smiles, selfies, or iupac through
// the provider). nullopt for formats that are not molecules.
std::optional<chem::Molecule> entity_molecule(
    const Entity &e, const NameProvider *names = nullptr);

}  // namespace chemgym

#endif  // CHEMGYM_TOKENIZER_AUGMENT_H_
