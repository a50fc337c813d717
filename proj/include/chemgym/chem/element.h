//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_CHEM_ELEMENT_H_
#define CHEMGYM_CHEM_ELEMENT_H_

#include <span>
#include <string_view>
#include <vector>

namespace chemgym::chem {

enum class ElementKind {
  kHydrogen,
  kMainGroup,
  kMetal,
  kNobleGas,
};

struct ElementInfo {
  int atomic_number;
  std::string_view symbol;
  int period;
  ElementKind kind;
  std::span<const int> valences;  // neutral-atom allowed valences, ascending
  double mass;                    // standard atomic weight
};

// nullptr when the element is outside the supported set.
const ElementInfo *find_element(int atomic_number) noexcept;
const ElementInfo *find_element(std::string_view symbol) noexcept;

// All supported elements in ascending atomic number.
std::span<const ElementInfo> supported_elements() noexcept;

// B, C, N, O, P, S, F, Cl, Br, I: may be written without brackets.
bool is_organic_subset(int atomic_number) noexcept;

// Elements with a lowercase (aromatic) spelling: b c n o p s (also bare), and
// se as te (bracket only).
bool has_aromatic_form(int atomic_number) noexcept;
bool has_bare_aromatic_form(int atomic_number) noexcept;

/// Allowed total valences (bond orders + hydrogens) for an element carrying
/// the given formal charge, ascending. Empty when the combination is not
/// modelled.
///
/// Neutral atoms use the fixed per-element table. Charged main-group atoms use
/// the valences of the isoelectronic neutral element in the same period
/// (N+ like C, O- like F, ...), with S- widened to {1, 3, 5}. Metals lose one
/// valence unit per positive charge; negative metals are not modelled.
std::vector<int> allowed_valences(int atomic_number, int charge);

int max_valence(int atomic_number, int charge);

}  // namespace chemgym::chem

#endif  // CHEMGYM_CHEM_ELEMENT_H_
