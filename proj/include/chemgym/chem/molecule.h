//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_CHEM_MOLECULE_H_
#define CHEMGYM_CHEM_MOLECULE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace chemgym::chem {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// Valence contribution; aromatic bonds count as 1 (the pi bond is assigned
// by kekulization).
constexpr int bond_valence(BondOrder o) noexcept {
  return o == BondOrder::kAromatic ? 1 : static_cast<int>(o);
}

enum class Chirality : std::uint8_t {
  kNone,
  kCW,   // @@
  kCCW,  // @
};

enum class BondStereo : std::uint8_t {
  kNone,
  kUp,    // /
  kDown,  // \ (backslash)
};

struct Atom {
  int atomic_number = 6;
  int charge = 0;
  int h_count = 0;
  bool aromatic = false;
  std::optional<int> isotope;
  Chirality chirality = Chirality::kNone;
  // Hydrogen count given explicitly (bracket atom). Otherwise the builder
  // derives h_count from the valence table.
  bool bracket = false;

  std::string_view symbol() const noexcept;
};

struct Bond {
  int begin;
  int end;
  BondOrder order;
  BondStereo stereo = BondStereo::kNone;

  int other(int atom) const noexcept { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

/// Attributed molecular graph. Immutable once built; instances are produced by
/// MoleculeBuilder, which validates ring closure, kekulization and valences.
class Molecule {
public:
  Molecule() = default;

  int num_atoms() const noexcept { return static_cast<int>(atoms_.size()); }
  int num_bonds() const noexcept { return static_cast<int>(bonds_.size()); }
  bool empty() const noexcept { return atoms_.empty(); }

  const Atom &atom(int i) const { return atoms_[i]; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  const Bond &bond(int i) const { return bonds_[i]; }
  std::span<const Bond> bonds() const noexcept { return bonds_; }

  std::span<const Neighbor> neighbors(int atom) const {
    return { adj_.data() + adj_offset_[atom],
             adj_.data() + adj_offset_[atom + 1] };
  }
  int degree(int atom) const {
    return adj_offset_[atom + 1] - adj_offset_[atom];
  }

  // Bond index between a and b, or -1.
  int find_bond(int a, int b) const;

  // Kekulé assignment of each bond; never kAromatic.
  BondOrder kekule_order(int bond) const { return kekule_[bond]; }

  bool is_ring_bond(int bond) const { return ring_bond_[bond] != 0; }
  bool is_ring_atom(int atom) const;

  // Sum of bond valences using the stored (possibly aromatic) orders.
  int bond_valence_sum(int atom) const;
  // Sum of Kekulé bond orders plus hydrogens.
  int total_valence(int atom) const;

  // Connected components as lists of atom indices, each ascending; components
  // ordered by their smallest atom.
  std::vector<std::vector<int>> components() const;

  int heavy_atom_count() const;

private:
  friend class MoleculeBuilder;

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> adj_offset_ { 0 };
  std::vector<Neighbor> adj_;
  std::vector<BondOrder> kekule_;
  std::vector<std::uint8_t> ring_bond_;
};

/// Accumulates atoms and bonds, then validates into a Molecule.
///
/// build() performs, in order: ring-bond perception; demotion of aromatic
/// bonds outside rings to single; rejection of aromatic atoms outside rings;
/// implicit-hydrogen assignment for non-bracket atoms; kekulization of the
/// aromatic system; valence checks. Violations raise ValenceError (or
/// UnsupportedFeature for element/charge combinations without a valence
/// model).
class MoleculeBuilder {
public:
  int add_atom(const Atom &atom);
  // Self bonds and duplicate bonds throw std::invalid_argument.
  int add_bond(int a, int b, BondOrder order,
               BondStereo stereo = BondStereo::kNone);
  bool has_bond(int a, int b) const;
  int num_atoms() const noexcept { return static_cast<int>(atoms_.size()); }
  Atom &atom(int i) { return atoms_[i]; }
  Bond &bond(int i) { return bonds_[i]; }
  int num_bonds() const noexcept { return static_cast<int>(bonds_.size()); }

  Molecule build() const;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
};

/// Implicit hydrogen count the SMILES reader would assign to `atom` if it
/// were written without brackets, given its current bonds (stored orders when
/// use_kekule is false, Kekulé orders otherwise), or nullopt if no valence
/// fits. For aromatic atoms also reports whether the atom takes part in the
/// pi system.
struct ImplicitHydrogens {
  int h_count;
  bool needs_pi;
};
std::optional<ImplicitHydrogens> implicit_hydrogens(const Molecule &m,
                                                    int atom, bool use_kekule);

/// Copy of `m` with atom i moved to position new_index[i] and bonds ordered
/// by their new end points. Chirality tags are carried over.
Molecule relabeled(const Molecule &m, std::span<const int> new_index);

/// Neighbour order that stored chirality tags refer to: the hydrogen (as -1)
/// first when the atom carries one, then neighbors() order.
std::vector<int> chirality_reference_order(const Molecule &m, int atom);

/// `tag` given for neighbour order `from`, re-expressed for order `to`. kNone
/// when the orders are not permutations of each other.
Chirality permute_chirality(Chirality tag, std::span<const int> from,
                            std::span<const int> to);

// Maximum-cardinality matching on a general graph (Edmonds' blossom
// algorithm). Returns mate[v] or -1.
std::vector<int> maximum_matching(int num_vertices,
                                  std::span<const std::pair<int, int>> edges);

}  // namespace chemgym::chem

#endif  // CHEMGYM_CHEM_MOLECULE_H_
