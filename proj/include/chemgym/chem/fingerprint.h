//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_CHEM_FINGERPRINT_H_
#define CHEMGYM_CHEM_FINGERPRINT_H_

#include <cstdint>
#include <vector>

#include "chemgym/chem/molecule.h"

namespace chemgym::chem {

class Fingerprint {
public:
  Fingerprint() = default;
  Fingerprint(int n_bits, int radius)
      : words_((n_bits + 63) / 64, 0), n_bits_(n_bits), radius_(radius) { }

  int n_bits() const noexcept { return n_bits_; }
  int radius() const noexcept { return radius_; }

  bool test(int bit) const { return ((words_[bit / 64] >> (bit % 64)) & 1) != 0; }
  void set(int bit) { words_[bit / 64] |= std::uint64_t { 1 } << (bit % 64); }
  int popcount() const;
  std::vector<int> on_bits() const;

  const std::vector<std::uint64_t> &words() const noexcept { return words_; }

  bool operator==(const Fingerprint &other) const = default;

private:
  std::vector<std::uint64_t> words_;
  int n_bits_ = 0;
  int radius_ = 0;
};

/// Morgan-style circular fingerprint.
///
/// Atom identifiers start from a hash of (atomic number, heavy degree,
/// hydrogen count, charge, isotope, ring membership, aromaticity) and are
/// updated each iteration from the sorted (bond order, neighbour identifier)
/// pairs. Every identifier of radius 0..radius sets bit (id mod n_bits).
/// Aromaticity and bond orders come from the resonance-normalized form, so the
/// result does not depend on how the input was written. Hashing is a pinned
/// splitmix64 chain and is platform independent.
///
/// Throws std::invalid_argument unless radius >= 0 and n_bits is a power of
/// two.
Fingerprint circular_fingerprint(const Molecule &m, int radius = 2,
                                 int n_bits = 2048);

// |a and b| / |a or b|; 1.0 when both are empty. Throws LengthMismatch when
// the lengths differ.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

}  // namespace chemgym::chem

#endif  // CHEMGYM_CHEM_FINGERPRINT_H_
