//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/chem/selfies.h"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_set>

#include "chemgym/chem/element.h"
#include "chemgym/chem/smiles.h"
#include "chemgym/chem/traversal.h"
#include "chemgym/error.h"

namespace chemgym::chem {
namespace {

constexpr std::array<std::string_view, 16> kIndexAlphabet {
  "[C]",       "[Ring1]",   "[Ring2]", "[Branch1]", "[=Branch1]", "[#Branch1]",
  "[Branch2]", "[=Branch2]", "[#Branch2]", "[O]",   "[N]",        "[=N]",
  "[=C]",      "[#C]",      "[S]",     "[P]",
};

int index_code(std::string_view symbol) {
  for (std::size_t i = 0; i < kIndexAlphabet.size(); ++i) {
    if (kIndexAlphabet[i] == symbol)
      return static_cast<int>(i);
  }
  return 0;
}

std::vector<std::string_view> index_symbols(int index) {
  if (index == 0)
    return { kIndexAlphabet[0] };
  std::vector<std::string_view> out;
  while (index > 0) {
    out.push_back(kIndexAlphabet[index % 16]);
    index /= 16;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

struct Capacity {
  std::string_view symbol;
  int charge;
  int capacity;
};

constexpr std::array<Capacity, 23> kCapacities { {
  { "H", 0, 1 },  { "F", 0, 1 },  { "Cl", 0, 1 }, { "Br", 0, 1 },
  { "I", 0, 1 },  { "B", 0, 3 },  { "B", 1, 2 },  { "B", -1, 4 },
  { "O", 0, 2 },  { "O", 1, 3 },  { "O", -1, 1 }, { "N", 0, 3 },
  { "N", 1, 4 },  { "N", -1, 2 }, { "C", 0, 4 },  { "C", 1, 3 },
  { "C", -1, 3 }, { "P", 0, 5 },  { "P", 1, 4 },  { "P", -1, 6 },
  { "S", 0, 6 },  { "S", 1, 5 },  { "S", -1, 5 },
} };

bool is_organic_text(std::string_view s) {
  return s == "B" || s == "C" || s == "N" || s == "O" || s == "S" || s == "P"
         || s == "F" || s == "Cl" || s == "Br" || s == "I";
}

std::string charge_suffix(int charge) {
  if (charge == 0)
    return "";
  return (charge > 0 ? "+" : "-") + std::to_string(charge > 0 ? charge : -charge);
}

BondStereo stereo_of(char c) {
  if (c == '/')
    return BondStereo::kUp;
  if (c == '\\')
    return BondStereo::kDown;
  return BondStereo::kNone;
}

BondStereo reversed(BondStereo s) {
  if (s == BondStereo::kUp)
    return BondStereo::kDown;
  if (s == BondStereo::kDown)
    return BondStereo::kUp;
  return s;
}

std::string_view bond_char(BondOrder order) {
  switch (order) {
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  default:
    return "";
  }
}

// ---------------------------------------------------------------------------
// Symbol grammar

enum class Kind {
  kAtom,
  kBranch,
  kRing,
  kEpsilon,
};

struct Symbol {
  Kind kind;
  std::string text;
  std::size_t offset;
  int order = 1;   // bond order carried by the symbol
  int length = 0;  // number of index symbols (branch, ring)
  BondStereo stereo = BondStereo::kNone;
  BondStereo ring_right = BondStereo::kNone;  // stereo at the closing atom
  Atom atom;
  int capacity = 0;
  bool valid_atom = false;
};

bool is_digit(char c) {
  return c >= '0' && c <= '9';
}

void parse_atom(Symbol &sym) {
  std::string_view in(sym.text);
  in = in.substr(1, in.size() - 2);
  std::size_t i = 0;
  sym.order = 1;
  if (i < in.size() && (in[i] == '=' || in[i] == '#' || in[i] == '/'
                        || in[i] == '\\')) {
    if (in[i] == '=')
      sym.order = 2;
    else if (in[i] == '#')
      sym.order = 3;
    else
      sym.stereo = in[i] == '/' ? BondStereo::kUp : BondStereo::kDown;
    ++i;
  }
  const std::string_view body = in.substr(i);

  std::optional<int> isotope;
  if (i < in.size() && is_digit(in[i])) {
    int v = 0;
    while (i < in.size() && is_digit(in[i])) {
      v = v * 10 + (in[i++] - '0');
      if (v > 999)
        return;
    }
    isotope = v;
  }
  if (i >= in.size() || in[i] < 'A' || in[i] > 'Z')
    return;
  std::size_t len = 1;
  if (i + 1 < in.size() && in[i + 1] >= 'a' && in[i + 1] <= 'z')
    len = 2;
  const std::string element(in.substr(i, len));
  i += len;

  Chirality chirality = Chirality::kNone;
  if (i < in.size() && in[i] == '@') {
    ++i;
    chirality = Chirality::kCCW;
    if (i < in.size() && in[i] == '@') {
      ++i;
      chirality = Chirality::kCW;
    }
  }
  int h = 0;
  if (i < in.size() && in[i] == 'H') {
    if (i + 1 >= in.size() || !is_digit(in[i + 1]))
      return;
    h = in[i + 1] - '0';
    i += 2;
  }
  int charge = 0;
  if (i < in.size() && (in[i] == '+' || in[i] == '-')) {
    const int sign = in[i] == '+' ? 1 : -1;
    ++i;
    if (i >= in.size())
      return;
    int v = 0;
    while (i < in.size() && in[i] >= '1' && in[i] <= '9') {
      v = v * 10 + (in[i++] - '0');
      if (v > 99)
        return;
    }
    if (v == 0)
      return;
    charge = sign * v;
  }
  if (i != in.size())
    return;

  const ElementInfo *e = find_element(element);
  if (e == nullptr)
    return;
  sym.atom = Atom {};
  sym.atom.atomic_number = e->atomic_number;
  if (is_organic_text(body)) {
    sym.capacity = selfies_bonding_capacity(e->atomic_number, 0);
  } else {
    sym.atom.bracket = true;
    sym.atom.isotope = isotope;
    sym.atom.chirality = chirality;
    sym.atom.h_count = h;
    sym.atom.charge = charge;
    const int cap = selfies_bonding_capacity(e->atomic_number, charge);
    if (cap < 0)
      return;
    sym.capacity = cap - h;
  }
  sym.valid_atom = sym.capacity >= 0;
}

bool parse_structural(Symbol &sym) {
  std::string_view s(sym.text);
  s = s.substr(1, s.size() - 2);
  if (s == "epsilon") {
    sym.kind = Kind::kEpsilon;
    return true;
  }
  auto parse_length = [&](std::string_view rest) {
    if (rest.size() != 1 || rest[0] < '1' || rest[0] > '3')
      return false;
    sym.length = rest[0] - '0';
    return true;
  };
  auto prefix_order = [](std::string_view p) {
    if (p.empty())
      return 1;
    if (p == "=")
      return 2;
    if (p == "#")
      return 3;
    return 0;
  };

  std::size_t at = s.find("Branch");
  if (at != std::string_view::npos) {
    const int order = prefix_order(s.substr(0, at));
    if (order == 0 || !parse_length(s.substr(at + 6)))
      return false;
    sym.kind = Kind::kBranch;
    sym.order = order;
    return true;
  }
  at = s.find("Ring");
  if (at != std::string_view::npos) {
    std::string_view prefix = s.substr(0, at);
    int order = prefix_order(prefix);
    if (order == 0) {
      // Stereo pair such as "-/" or "\\/".
      auto stereo_char = [](char c) {
        return c == '-' || c == '/' || c == '\\';
      };
      if (prefix.size() != 2 || !stereo_char(prefix[0])
          || !stereo_char(prefix[1]) || prefix == "--")
        return false;
      order = 1;
      sym.stereo = stereo_of(prefix[0]);
      sym.ring_right = stereo_of(prefix[1]);
    }
    if (!parse_length(s.substr(at + 4)))
      return false;
    sym.kind = Kind::kRing;
    sym.order = order;
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Derivation

struct RingRequest {
  int left;
  int right;
  int order;
  BondStereo stereo;  // as seen from left to right
};

class Deriver {
public:
  void fragment(const std::vector<Symbol> &symbols) {
    syms_ = &symbols;
    cur_ = 0;
    derive(std::numeric_limits<std::size_t>::max(), 0, -1);
  }

  Molecule finish();

private:
  std::size_t derive(std::size_t max_derive, int init_state, int root);
  int read_index(int length);
  int add_atom(const Symbol &s);
  void add_bond(int a, int b, int order,
                BondStereo stereo = BondStereo::kNone);

  const std::vector<Symbol> *syms_ = nullptr;
  std::size_t cur_ = 0;

  std::vector<Atom> atoms_;
  std::vector<int> capacity_;
  std::vector<int> bond_count_;
  std::map<std::pair<int, int>, int> bonds_;  // (min, max) -> order
  std::vector<std::pair<int, int>> bond_list_;
  std::map<std::pair<int, int>, BondStereo> stereo_;  // seen from min to max
  std::vector<RingRequest> rings_;
  // Neighbour order of the derivation: parent, ring partners, children.
  std::vector<int> parent_;
  std::vector<std::vector<int>> ring_partners_;
  std::vector<std::vector<int>> children_;
};

int Deriver::read_index(int length) {
  int index = 0;
  for (int k = 0; k < length; ++k) {
    int code = 0;
    if (cur_ < syms_->size())
      code = index_code((*syms_)[cur_++].text);
    index = index * 16 + code;
  }
  return index;
}

int Deriver::add_atom(const Symbol &s) {
  atoms_.push_back(s.atom);
  capacity_.push_back(s.capacity);
  bond_count_.push_back(0);
  parent_.push_back(-1);
  ring_partners_.emplace_back();
  children_.emplace_back();
  return static_cast<int>(atoms_.size()) - 1;
}

void Deriver::add_bond(int a, int b, int order, BondStereo stereo) {
  bonds_[{ std::min(a, b), std::max(a, b) }] = order;
  if (order == 1 && stereo != BondStereo::kNone)
    stereo_[{ std::min(a, b), std::max(a, b) }] =
        a < b ? stereo : reversed(stereo);
  bond_list_.emplace_back(std::min(a, b), std::max(a, b));
  bond_count_[a] += order;
  bond_count_[b] += order;
}

std::size_t Deriver::derive(std::size_t max_derive, int init_state,
                            int root) {
  std::size_t n = 0;
  std::optional<int> state = init_state;
  int prev = root;

  while (state && n < max_derive) {
    if (cur_ >= syms_->size())
      break;
    const Symbol &s = (*syms_)[cur_++];
    ++n;
    std::optional<int> next;

    switch (s.kind) {
    case Kind::kBranch:
      if (*state <= 1) {
        next = state;
      } else {
        const int branch_state = std::min(*state - 1, s.order);
        next = *state - branch_state;
        const int q = read_index(s.length);
        n += s.length;
        n += derive(static_cast<std::size_t>(q) + 1, branch_state, prev);
      }
      break;

    case Kind::kRing:
      if (*state == 0) {
        next = state;
      } else {
        const int order = std::min(s.order, *state);
        const int left = *state - order;
        if (left > 0)
          next = left;
        const int q = read_index(s.length);
        n += s.length;
        BondStereo stereo = s.stereo;
        if (stereo == BondStereo::kNone)
          stereo = reversed(s.ring_right);
        rings_.push_back(RingRequest { std::max(0, prev - (q + 1)), prev,
                                       order, stereo });
      }
      break;

    case Kind::kEpsilon:
      if (*state == 0)
        next = 0;
      break;

    case Kind::kAtom: {
      if (!s.valid_atom)
        throw SymbolError("invalid SELFIES symbol " + s.text, s.offset);
      const int cap = s.capacity;
      int order = *state == 0 ? 0 : s.order;
      order = std::min({ order, *state, cap });
      const int left = cap - order;
      if (left > 0)
        next = left;
      if (order == 0) {
        if (*state == 0)
          prev = add_atom(s);
      } else {
        const int atom = add_atom(s);
        add_bond(prev, atom, order, s.stereo);
        parent_[atom] = prev;
        children_[prev].push_back(atom);
        prev = atom;
      }
      break;
    }
    }

    if (!next)
      break;
    state = next;
  }

  while (n < max_derive && cur_ < syms_->size()) {
    ++cur_;
    ++n;
  }
  return n;
}

Molecule Deriver::finish() {
  for (const RingRequest &r: rings_) {
    if (r.left == r.right)
      continue;
    const int lfree = capacity_[r.left] - bond_count_[r.left];
    const int rfree = capacity_[r.right] - bond_count_[r.right];
    if (lfree <= 0 || rfree <= 0)
      continue;
    const int order = std::min({ r.order, lfree, rfree });
    auto key = std::make_pair(std::min(r.left, r.right),
                              std::max(r.left, r.right));
    auto it = bonds_.find(key);
    if (it != bonds_.end()) {
      const int updated = std::min(order + it->second, 3);
      bond_count_[r.left] += updated - it->second;
      bond_count_[r.right] += updated - it->second;
      it->second = updated;
      if (updated > 1)
        stereo_.erase(key);
    } else {
      add_bond(r.left, r.right, order, r.stereo);
      ring_partners_[r.left].push_back(r.right);
      ring_partners_[r.right].push_back(r.left);
    }
  }

  MoleculeBuilder builder;
  for (const Atom &a: atoms_)
    builder.add_atom(a);
  for (auto [a, b]: bond_list_) {
    auto st = stereo_.find({ a, b });
    builder.add_bond(a, b, static_cast<BondOrder>(bonds_.at({ a, b })),
                     st == stereo_.end() ? BondStereo::kNone : st->second);
  }
  Molecule m = builder.build();
  bool chiral = false;
  for (int i = 0; i < m.num_atoms(); ++i) {
    if (m.atom(i).chirality == Chirality::kNone)
      continue;
    chiral = true;
    std::vector<int> order;
    if (parent_[i] >= 0)
      order.push_back(parent_[i]);
    if (m.atom(i).h_count > 0)
      order.push_back(-1);
    order.insert(order.end(), ring_partners_[i].begin(),
                 ring_partners_[i].end());
    order.insert(order.end(), children_[i].begin(), children_[i].end());
    builder.atom(i).chirality = permute_chirality(
        m.atom(i).chirality, order, chirality_reference_order(m, i));
  }
  return chiral ? builder.build() : m;
}

// Text of the atom inside its SELFIES symbol, following the bracket decision
// of the Kekulé SMILES writer.
std::string atom_text(const Molecule &m, int i,
                      Chirality chirality = Chirality::kNone) {
  const Atom &a = m.atom(i);
  std::string out;
  if (!needs_brackets(m, i, true))
    return std::string(a.symbol());
  if (a.isotope)
    out += std::to_string(*a.isotope);
  out += a.symbol();
  if (chirality == Chirality::kCCW)
    out += "@";
  else if (chirality == Chirality::kCW)
    out += "@@";
  if (a.h_count != 0)
    out += "H" + std::to_string(a.h_count);
  else if (!a.isotope && a.charge == 0 && chirality == Chirality::kNone
           && is_organic_subset(a.atomic_number))
    out += "H0";
  out += charge_suffix(a.charge);
  return out;
}

std::set<std::string> build_atom_texts() {
  std::set<std::string> out;
  static constexpr std::pair<std::string_view, std::array<int, 4>> kIsotopes[] {
    { "H", { 2, 3, 0, 0 } },        { "C", { 11, 13, 14, 0 } },
    { "N", { 13, 15, 0, 0 } },      { "O", { 15, 17, 18, 0 } },
    { "F", { 18, 0, 0, 0 } },       { "P", { 32, 33, 0, 0 } },
    { "S", { 34, 35, 0, 0 } },      { "Cl", { 36, 37, 0, 0 } },
    { "Br", { 76, 77, 0, 0 } },     { "I", { 123, 124, 125, 131 } },
  };
  for (const ElementInfo &e: supported_elements()) {
    const std::string sym(e.symbol);
    for (int q = -3; q <= 3; ++q) {
      const int cap = selfies_bonding_capacity(e.atomic_number, q);
      if (cap < 0)
        continue;
      for (int h = 0; h <= std::min(4, cap); ++h) {
        if (h == 0 && q == 0) {
          out.insert(sym);
          if (is_organic_subset(e.atomic_number))
            out.insert(sym + "H0");
        } else if (h == 0) {
          out.insert(sym + charge_suffix(q));
        } else {
          out.insert(sym + "H" + std::to_string(h) + charge_suffix(q));
        }
      }
    }
    const int cap0 = selfies_bonding_capacity(e.atomic_number, 0);
    for (const auto &[isym, masses]: kIsotopes) {
      if (isym != e.symbol)
        continue;
      for (int mass: masses) {
        if (mass == 0)
          continue;
        for (int h = 0; h <= std::min(4, cap0); ++h) {
          out.insert(std::to_string(mass) + sym
                     + (h > 0 ? "H" + std::to_string(h) : ""));
        }
      }
    }
    if (sym == "C" || sym == "N" || sym == "P" || sym == "S" || sym == "Si"
        || sym == "B") {
      for (int q: { 0, 1 }) {
        const int cap = selfies_bonding_capacity(e.atomic_number, q);
        for (int h = 0; h <= std::min(1, cap); ++h) {
          for (std::string_view chir: { "@", "@@" }) {
            out.insert(sym + std::string(chir) + (h > 0 ? "H1" : "")
                       + charge_suffix(q));
          }
        }
      }
    }
  }
  return out;
}

const std::set<std::string> &atom_texts() {
  static const std::set<std::string> texts = build_atom_texts();
  return texts;
}

}  // namespace

int selfies_bonding_capacity(int atomic_number, int charge) {
  const ElementInfo *e = find_element(atomic_number);
  if (e == nullptr)
    return -1;
  for (const Capacity &c: kCapacities) {
    if (c.symbol == e->symbol && c.charge == charge)
      return c.capacity;
  }
  return max_valence(atomic_number, charge);
}

std::vector<std::string> split_selfies(std::string_view selfies) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < selfies.size()) {
    if (selfies[i] == '.') {
      out.emplace_back(".");
      ++i;
      continue;
    }
    if (selfies[i] != '[')
      throw SymbolError("unexpected character outside SELFIES symbol", i);
    const std::size_t close = selfies.find(']', i + 1);
    if (close == std::string_view::npos)
      throw SymbolError("unterminated SELFIES symbol", i);
    if (selfies.find('[', i + 1) < close)
      throw SymbolError("nested '[' in SELFIES symbol", i);
    out.emplace_back(selfies.substr(i, close - i + 1));
    i = close + 1;
  }
  return out;
}

Molecule decode_selfies(std::string_view selfies) {
  std::vector<std::vector<Symbol>> fragments(1);
  std::size_t offset = 0;
  for (std::string &text: split_selfies(selfies)) {
    const std::size_t here = offset;
    offset += text.size();
    if (text == ".") {
      fragments.emplace_back();
      continue;
    }
    if (text == "[nop]")
      continue;
    Symbol sym;
    sym.kind = Kind::kAtom;
    sym.text = std::move(text);
    sym.offset = here;
    if (!parse_structural(sym)) {
      parse_atom(sym);
      if (!sym.valid_atom)
        throw SymbolError("invalid SELFIES symbol " + sym.text, here);
    }
    fragments.back().push_back(std::move(sym));
  }

  Deriver d;
  for (const std::vector<Symbol> &f: fragments)
    d.fragment(f);
  return d.finish();
}

namespace {

std::string encode_traversal(const Molecule &m, const Traversal &t) {

  std::vector<int> position(m.num_atoms());
  for (std::size_t k = 0; k < t.preorder.size(); ++k)
    position[t.preorder[k]] = static_cast<int>(k);

  // Ring partners in the order the decoder forms the ring bonds: by the
  // written position of the closing atom.
  std::vector<std::vector<int>> ring_partners(m.num_atoms());
  for (int closer: t.preorder) {
    for (const RingEvent &e: t.rings[closer]) {
      if (e.opening)
        continue;
      ring_partners[closer].push_back(e.partner);
      ring_partners[e.partner].push_back(closer);
    }
  }

  std::vector<std::string> text(m.num_atoms());
  for (int i = 0; i < m.num_atoms(); ++i) {
    Chirality chirality = m.atom(i).chirality;
    if (chirality != Chirality::kNone) {
      std::vector<int> order;
      if (t.parent_bond[i] >= 0)
        order.push_back(m.bond(t.parent_bond[i]).other(i));
      if (m.atom(i).h_count > 0)
        order.push_back(-1);
      order.insert(order.end(), ring_partners[i].begin(),
                   ring_partners[i].end());
      order.insert(order.end(), t.children[i].begin(), t.children[i].end());
      chirality = permute_chirality(
          chirality, chirality_reference_order(m, i), order);
    }
    text[i] = atom_text(m, i, chirality);
    if (!atom_texts().contains(atom_text(m, i)))
      throw UnsupportedFeature("atom [" + text[i]
                               + "] is outside the SELFIES alphabet");
    const Atom &a = m.atom(i);
    int cap = selfies_bonding_capacity(a.atomic_number, a.charge);
    if (needs_brackets(m, i, true))
      cap -= a.h_count;
    int bonds = 0;
    for (const Neighbor &nb: m.neighbors(i))
      bonds += static_cast<int>(m.kekule_order(nb.bond));
    if (bonds > cap)
      throw UnsupportedFeature("atom [" + text[i] + "] has " + std::to_string(bonds)
                               + " bonds, exceeding its SELFIES capacity of "
                               + std::to_string(cap));
  }

  auto index_block = [](std::string_view name, std::string_view bond,
                        int index, std::vector<std::string> &out) {
    std::vector<std::string_view> q = index_symbols(index);
    if (q.size() > 3)
      throw UnsupportedFeature("SELFIES index too large");
    out.push_back("[" + std::string(bond) + std::string(name)
                  + std::to_string(q.size()) + "]");
    for (std::string_view s: q)
      out.emplace_back(s);
  };

  const std::vector<BondStereo> marks = written_bond_marks(m, t);
  auto stereo_char = [&](int bi) -> std::string {
    if (marks[bi] == BondStereo::kNone)
      return "";
    return marks[bi] == BondStereo::kUp ? "/" : "\\";
  };

  auto emit = [&](auto &self, int atom, std::vector<std::string> &out) -> void {
    int curr = atom;
    for (;;) {
      const int in_bond = t.parent_bond[curr];
      std::string bc;
      if (in_bond >= 0) {
        bc = stereo_char(in_bond);
        if (bc.empty())
          bc = bond_char(m.kekule_order(in_bond));
      }
      out.push_back("[" + bc + text[curr] + "]");
      for (const RingEvent &e: t.rings[curr]) {
        if (e.opening)
          continue;
        std::string rc = stereo_char(e.bond);
        if (rc.empty())
          rc = bond_char(m.kekule_order(e.bond));
        else
          rc += "-";
        index_block("Ring", rc, position[curr] - position[e.partner] - 1,
                    out);
      }
      const std::vector<int> &kids = t.children[curr];
      if (kids.empty())
        break;
      for (std::size_t k = 0; k + 1 < kids.size(); ++k) {
        std::vector<std::string> branch;
        self(self, kids[k], branch);
        index_block("Branch",
                    bond_char(m.kekule_order(t.parent_bond[kids[k]])),
                    static_cast<int>(branch.size()) - 1, out);
        out.insert(out.end(), branch.begin(), branch.end());
      }
      curr = kids.back();
    }
  };

  std::string result;
  for (std::size_t r = 0; r < t.roots.size(); ++r) {
    if (r > 0)
      result += '.';
    std::vector<std::string> symbols;
    emit(emit, t.roots[r], symbols);
    for (const std::string &s: symbols)
      result += s;
  }
  return result;
}

std::string encode(const Molecule &input, Rng *rng) {
  if (input.empty())
    return "";
  const Molecule m = normalize_resonance(input);
  if (rng != nullptr)
    return encode_traversal(m, make_traversal(m, TraversalPolicy::kRandom, {},
                                              rng));
  // Relabelling in rank order also makes the Kekulé assignment canonical.
  auto write = [&](const std::vector<int> &ranks) {
    Molecule r = relabeled(m, ranks);
    std::vector<int> order(r.num_atoms());
    std::iota(order.begin(), order.end(), 0);
    return encode_traversal(
        r, make_traversal(r, TraversalPolicy::kCanonical, order));
  };
  if (!has_stereo(m))
    return write(canonical_ranks(m));
  std::string best;
  for (const std::vector<int> &ranks:
       canonical_rank_candidates(m, kStereoSearchLimit)) {
    std::string s = write(ranks);
    if (best.empty() || s < best)
      best = std::move(s);
  }
  return best;
}

}  // namespace

std::string encode_selfies(const Molecule &m) {
  return encode(m, nullptr);
}

std::string random_traversal_selfies(const Molecule &m, Rng &rng) {
  return encode(m, &rng);
}

const std::vector<std::string> &selfies_alphabet() {
  static const std::vector<std::string> alphabet = [] {
    std::set<std::string> out;
    for (const std::string &t: atom_texts()) {
      for (std::string_view b: { "", "=", "#", "/", "\\" })
        out.insert("[" + std::string(b) + t + "]");
    }
    for (int len = 1; len <= 3; ++len) {
      const std::string n = std::to_string(len);
      for (std::string_view b: { "", "=", "#" }) {
        out.insert("[" + std::string(b) + "Branch" + n + "]");
        out.insert("[" + std::string(b) + "Ring" + n + "]");
      }
      for (char l: { '-', '/', '\\' }) {
        for (char r: { '-', '/', '\\' }) {
          if (l == '-' && r == '-')
            continue;
          out.insert(std::string("[") + l + r + "Ring" + n + "]");
        }
      }
    }
    out.insert("[nop]");
    out.insert("[epsilon]");
    out.insert(".");
    return std::vector<std::string>(out.begin(), out.end());
  }();
  return alphabet;
}

}  // namespace chemgym::chem
