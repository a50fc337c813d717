//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/chem/element.h"

#include <algorithm>
#include <array>

namespace chemgym::chem {
namespace {

constexpr std::array kV0 { 0 };
constexpr std::array kV1 { 1 };
constexpr std::array kV2 { 2 };
constexpr std::array kV3 { 3 };
constexpr std::array kV4 { 4 };
constexpr std::array kV35 { 3, 5 };
constexpr std::array kV246 { 2, 4, 6 };
constexpr std::array kV135 { 1, 3, 5 };
constexpr std::array kV12 { 1, 2 };
constexpr std::array kV13 { 1, 3 };
constexpr std::array kV23 { 2, 3 };
constexpr std::array kV24 { 2, 4 };
constexpr std::array kV234 { 2, 3, 4 };
constexpr std::array kV236 { 2, 3, 6 };
constexpr std::array kV23467 { 2, 3, 4, 6, 7 };

using K = ElementKind;

const std::array kElements {
  ElementInfo { 1, "H", 1, K::kHydrogen, kV1, 1.008 },
  ElementInfo { 2, "He", 1, K::kNobleGas, kV0, 4.0026 },
  ElementInfo { 3, "Li", 2, K::kMetal, kV1, 6.94 },
  ElementInfo { 4, "Be", 2, K::kMetal, kV2, 9.0122 },
  ElementInfo { 5, "B", 2, K::kMainGroup, kV3, 10.81 },
  ElementInfo { 6, "C", 2, K::kMainGroup, kV4, 12.011 },
  ElementInfo { 7, "N", 2, K::kMainGroup, kV3, 14.007 },
  ElementInfo { 8, "O", 2, K::kMainGroup, kV2, 15.999 },
  ElementInfo { 9, "F", 2, K::kMainGroup, kV1, 18.998 },
  ElementInfo { 10, "Ne", 2, K::kNobleGas, kV0, 20.180 },
  ElementInfo { 11, "Na", 3, K::kMetal, kV1, 22.990 },
  ElementInfo { 12, "Mg", 3, K::kMetal, kV2, 24.305 },
  ElementInfo { 13, "Al", 3, K::kMainGroup, kV3, 26.982 },
  ElementInfo { 14, "Si", 3, K::kMainGroup, kV4, 28.085 },
  ElementInfo { 15, "P", 3, K::kMainGroup, kV35, 30.974 },
  ElementInfo { 16, "S", 3, K::kMainGroup, kV246, 32.06 },
  ElementInfo { 17, "Cl", 3, K::kMainGroup, kV1, 35.45 },
  ElementInfo { 18, "Ar", 3, K::kNobleGas, kV0, 39.95 },
  ElementInfo { 19, "K", 4, K::kMetal, kV1, 39.098 },
  ElementInfo { 20, "Ca", 4, K::kMetal, kV2, 40.078 },
  ElementInfo { 22, "Ti", 4, K::kMetal, kV234, 47.867 },
  ElementInfo { 24, "Cr", 4, K::kMetal, kV236, 51.996 },
  ElementInfo { 25, "Mn", 4, K::kMetal, kV23467, 54.938 },
  ElementInfo { 26, "Fe", 4, K::kMetal, kV23, 55.845 },
  ElementInfo { 27, "Co", 4, K::kMetal, kV23, 58.933 },
  ElementInfo { 28, "Ni", 4, K::kMetal, kV2, 58.693 },
  ElementInfo { 29, "Cu", 4, K::kMetal, kV12, 63.546 },
  ElementInfo { 30, "Zn", 4, K::kMetal, kV2, 65.38 },
  ElementInfo { 31, "Ga", 4, K::kMainGroup, kV3, 69.723 },
  ElementInfo { 32, "Ge", 4, K::kMainGroup, kV4, 72.630 },
  ElementInfo { 33, "As", 4, K::kMainGroup, kV35, 74.922 },
  ElementInfo { 34, "Se", 4, K::kMainGroup, kV246, 78.971 },
  ElementInfo { 35, "Br", 4, K::kMainGroup, kV1, 79.904 },
  ElementInfo { 36, "Kr", 4, K::kNobleGas, kV0, 83.798 },
  ElementInfo { 37, "Rb", 5, K::kMetal, kV1, 85.468 },
  ElementInfo { 38, "Sr", 5, K::kMetal, kV2, 87.62 },
  ElementInfo { 46, "Pd", 5, K::kMetal, kV24, 106.42 },
  ElementInfo { 47, "Ag", 5, K::kMetal, kV1, 107.87 },
  ElementInfo { 48, "Cd", 5, K::kMetal, kV2, 112.41 },
  ElementInfo { 49, "In", 5, K::kMainGroup, kV3, 114.82 },
  ElementInfo { 50, "Sn", 5, K::kMainGroup, kV24, 118.71 },
  ElementInfo { 51, "Sb", 5, K::kMainGroup, kV35, 121.76 },
  ElementInfo { 52, "Te", 5, K::kMainGroup, kV246, 127.60 },
  ElementInfo { 53, "I", 5, K::kMainGroup, kV135, 126.90 },
  ElementInfo { 54, "Xe", 5, K::kNobleGas, kV0, 131.29 },
  ElementInfo { 55, "Cs", 6, K::kMetal, kV1, 132.91 },
  ElementInfo { 56, "Ba", 6, K::kMetal, kV2, 137.33 },
  ElementInfo { 78, "Pt", 6, K::kMetal, kV24, 195.08 },
  ElementInfo { 79, "Au", 6, K::kMetal, kV13, 196.97 },
  ElementInfo { 80, "Hg", 6, K::kMetal, kV12, 200.59 },
  ElementInfo { 81, "Tl", 6, K::kMainGroup, kV13, 204.38 },
  ElementInfo { 82, "Pb", 6, K::kMainGroup, kV24, 207.2 },
  ElementInfo { 83, "Bi", 6, K::kMainGroup, kV35, 208.98 },
};

}  // namespace

const ElementInfo *find_element(int atomic_number) noexcept {
  auto it = std::lower_bound(
      kElements.begin(), kElements.end(), atomic_number,
      [](const ElementInfo &e, int z) { return e.atomic_number < z; });
  if (it == kElements.end() || it->atomic_number != atomic_number)
    return nullptr;
  return &*it;
}

const ElementInfo *find_element(std::string_view symbol) noexcept {
  for (const ElementInfo &e: kElements) {
    if (e.symbol == symbol)
      return &e;
  }
  return nullptr;
}

std::span<const ElementInfo> supported_elements() noexcept {
  return kElements;
}

bool is_organic_subset(int z) noexcept {
  switch (z) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 9:
  case 15:
  case 16:
  case 17:
  case 35:
  case 53:
    return true;
  default:
    return false;
  }
}

bool has_bare_aromatic_form(int z) noexcept {
  return z == 5 || z == 6 || z == 7 || z == 8 || z == 15 || z == 16;
}

bool has_aromatic_form(int z) noexcept {
  return has_bare_aromatic_form(z) || z == 33 || z == 34 || z == 52;
}

std::vector<int> allowed_valences(int z, int charge) {
  const ElementInfo *e = find_element(z);
  if (e == nullptr)
    return {};
  if (charge == 0)
    return { e->valences.begin(), e->valences.end() };

  switch (e->kind) {
  case ElementKind::kHydrogen:
    if (charge == 1 || charge == -1)
      return { 0 };
    return {};

  case ElementKind::kMetal: {
    if (charge < 0)
      return {};
    std::vector<int> out;
    for (int v: e->valences) {
      if (v - charge >= 0)
        out.push_back(v - charge);
    }
    return out;
  }

  case ElementKind::kMainGroup:
  case ElementKind::kNobleGas: {
    if (z == 16 && charge == -1)
      return { 1, 3, 5 };
    const ElementInfo *iso = find_element(z - charge);
    if (iso == nullptr || iso->period != e->period
        || iso->kind == ElementKind::kHydrogen)
      return {};
    if (iso->kind == ElementKind::kMetal) {
      // Only the group-2 neighbours of boron/aluminium qualify (B+ like Be).
      if (iso->atomic_number != 4 && iso->atomic_number != 12)
        return {};
    }
    return { iso->valences.begin(), iso->valences.end() };
  }
  }
  return {};
}

int max_valence(int z, int charge) {
  std::vector<int> v = allowed_valences(z, charge);
  return v.empty() ? -1 : v.back();
}

}  // namespace chemgym::chem
