//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/chem/fingerprint.h"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <utility>

#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"
#include "chemgym/random.h"

namespace chemgym::chem {
namespace {

constexpr std::uint64_t kSeed = 0x6a09e667f3bcc908ULL;

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ splitmix64(v));
}

}  // namespace

int Fingerprint::popcount() const {
  int n = 0;
  for (std::uint64_t w: words_)
    n += std::popcount(w);
  return n;
}

std::vector<int> Fingerprint::on_bits() const {
  std::vector<int> out;
  for (int i = 0; i < n_bits_; ++i) {
    if (test(i))
      out.push_back(i);
  }
  return out;
}

Fingerprint circular_fingerprint(const Molecule &input, int radius,
                                 int n_bits) {
  if (radius < 0)
    throw std::invalid_argument("fingerprint radius must be non-negative");
  if (n_bits <= 0 || !std::has_single_bit(static_cast<unsigned>(n_bits)))
    throw std::invalid_argument("fingerprint length must be a power of two");

  const Molecule m = normalize_resonance(input);
  const int n = m.num_atoms();
  Fingerprint fp(n_bits, radius);

  std::vector<std::uint64_t> ids(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = m.atom(i);
    std::uint64_t h = kSeed;
    h = hash_combine(h, static_cast<std::uint64_t>(a.atomic_number));
    h = hash_combine(h, static_cast<std::uint64_t>(m.degree(i)));
    h = hash_combine(h, static_cast<std::uint64_t>(a.h_count));
    h = hash_combine(h, static_cast<std::uint64_t>(a.charge + 128));
    h = hash_combine(h, static_cast<std::uint64_t>(a.isotope.value_or(0)));
    h = hash_combine(h, m.is_ring_atom(i) ? 1 : 0);
    h = hash_combine(h, a.aromatic ? 1 : 0);
    ids[i] = h;
    fp.set(static_cast<int>(h % static_cast<std::uint64_t>(n_bits)));
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    for (int i = 0; i < n; ++i) {
      env.clear();
      for (const Neighbor &nb: m.neighbors(i)) {
        env.emplace_back(static_cast<std::uint64_t>(m.bond(nb.bond).order),
                         ids[nb.atom]);
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = hash_combine(kSeed + r, ids[i]);
      for (auto [order, id]: env)
        h = hash_combine(hash_combine(h, order), id);
      next[i] = h;
      fp.set(static_cast<int>(h % static_cast<std::uint64_t>(n_bits)));
    }
    ids = std::move(next);
  }
  return fp;
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.n_bits() != b.n_bits())
    throw LengthMismatch("fingerprint lengths differ: "
                         + std::to_string(a.n_bits()) + " vs "
                         + std::to_string(b.n_bits()));
  int both = 0, either = 0;
  for (std::size_t k = 0; k < a.words().size(); ++k) {
    both += std::popcount(a.words()[k] & b.words()[k]);
    either += std::popcount(a.words()[k] | b.words()[k]);
  }
  if (either == 0)
    return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace chemgym::chem
