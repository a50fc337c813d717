//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/chem/smiles.h"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>

#include "chemgym/chem/element.h"
#include "chemgym/error.h"
#include "chemgym/random.h"

namespace chemgym::chem {
namespace {

// Every symbol of the periodic table, to tell unsupported elements apart from
// malformed input.
constexpr std::array<std::string_view, 118> kPeriodicSymbols {
  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
  "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
  "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
  "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
  "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
  "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
  "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
  "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm",
  "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs",
  "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

bool is_periodic_symbol(std::string_view s) {
  return std::find(kPeriodicSymbols.begin(), kPeriodicSymbols.end(), s)
         != kPeriodicSymbols.end();
}

bool is_digit(char c) {
  return c >= '0' && c <= '9';
}
bool is_upper(char c) {
  return c >= 'A' && c <= 'Z';
}
bool is_lower(char c) {
  return c >= 'a' && c <= 'z';
}

class Parser {
public:
  explicit Parser(std::string_view s): s_(s) { }

  Molecule run();

private:
  struct Pending {
    BondOrder order;
    BondStereo stereo;
  };
  struct OpenRing {
    int atom;
    std::optional<Pending> bond;
    std::size_t pos;
    std::size_t slot;
  };
  struct Branch {
    int atom;
    std::size_t pos;
    bool has_atom;
  };

  [[noreturn]] void fail(const std::string &msg, std::size_t pos) const {
    throw SyntaxError(msg, pos);
  }

  void add_atom(const Atom &atom);
  void parse_bracket_atom();
  void parse_organic_atom();
  void ring_closure(int number, std::size_t pos);
  int parse_ring_number();

  std::string_view s_;
  std::size_t pos_ = 0;
  MoleculeBuilder builder_;
  int prev_ = -1;
  std::optional<Pending> pending_;
  std::size_t pending_pos_ = 0;
  std::vector<Branch> branches_;
  std::map<int, OpenRing> rings_;
  // Neighbours of each atom in written order; -1 is the bracket hydrogen.
  std::vector<std::vector<int>> order_;
};

Molecule Parser::run() {
  if (s_.empty())
    fail("empty SMILES", 0);

  while (pos_ < s_.size()) {
    const char c = s_[pos_];
    switch (c) {
    case '(':
      if (prev_ < 0)
        fail("branch without a preceding atom", pos_);
      if (pending_)
        fail("bond symbol before branch", pending_pos_);
      branches_.push_back(Branch { prev_, pos_, false });
      ++pos_;
      break;

    case ')':
      if (branches_.empty())
        fail("unmatched ')'", pos_);
      if (pending_)
        fail("bond symbol without a following atom", pending_pos_);
      if (!branches_.back().has_atom)
        fail("empty branch", pos_);
      prev_ = branches_.back().atom;
      branches_.pop_back();
      if (!branches_.empty())
        branches_.back().has_atom = true;
      ++pos_;
      break;

    case '-':
    case '=':
    case '#':
    case ':':
    case '/':
    case '\\':
    case '$': {
      if (prev_ < 0)
        fail("bond symbol without a preceding atom", pos_);
      if (pending_)
        fail("consecutive bond symbols", pos_);
      if (c == '$')
        throw UnsupportedFeature("quadruple bonds are not supported");
      Pending p { BondOrder::kSingle, BondStereo::kNone };
      if (c == '=')
        p.order = BondOrder::kDouble;
      else if (c == '#')
        p.order = BondOrder::kTriple;
      else if (c == ':')
        p.order = BondOrder::kAromatic;
      else if (c == '/')
        p.stereo = BondStereo::kUp;
      else if (c == '\\')
        p.stereo = BondStereo::kDown;
      pending_ = p;
      pending_pos_ = pos_;
      ++pos_;
      break;
    }

    case '.':
      if (prev_ < 0)
        fail("'.' without a preceding atom", pos_);
      if (pending_)
        fail("bond symbol before '.'", pending_pos_);
      if (!branches_.empty())
        fail("'.' inside a branch", pos_);
      prev_ = -1;
      ++pos_;
      break;

    case '[':
      parse_bracket_atom();
      break;

    case '%':
    case '0':
    case '1':
    case '2':
    case '3':
    case '4':
    case '5':
    case '6':
    case '7':
    case '8':
    case '9': {
      const std::size_t start = pos_;
      if (prev_ < 0)
        fail("ring bond without a preceding atom", start);
      ring_closure(parse_ring_number(), start);
      break;
    }

    case '*':
      throw UnsupportedFeature("wildcard atoms are not supported");

    default:
      parse_organic_atom();
      break;
    }
  }

  if (pending_)
    fail("bond symbol without a following atom", pending_pos_);
  if (!branches_.empty())
    fail("unclosed branch", branches_.back().pos);
  if (!rings_.empty()) {
    auto it = rings_.begin();
    fail("unclosed ring bond " + std::to_string(it->first), it->second.pos);
  }
  Molecule m = builder_.build();
  bool chiral = false;
  for (int i = 0; i < m.num_atoms(); ++i) {
    if (m.atom(i).chirality == Chirality::kNone)
      continue;
    chiral = true;
    builder_.atom(i).chirality = permute_chirality(
        m.atom(i).chirality, order_[i], chirality_reference_order(m, i));
  }
  return chiral ? builder_.build() : m;
}

int Parser::parse_ring_number() {
  if (s_[pos_] != '%')
    return s_[pos_++] - '0';
  if (pos_ + 2 >= s_.size() || !is_digit(s_[pos_ + 1])
      || !is_digit(s_[pos_ + 2]))
    fail("'%' must be followed by two digits", pos_);
  int n = (s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0');
  pos_ += 3;
  return n;
}

void Parser::ring_closure(int number, std::size_t pos) {
  auto it = rings_.find(number);
  if (it == rings_.end()) {
    rings_.emplace(number,
                   OpenRing { prev_, pending_, pos, order_[prev_].size() });
    order_[prev_].push_back(-2);
    pending_.reset();
    return;
  }

  const OpenRing open = it->second;
  rings_.erase(it);
  if (open.atom == prev_)
    fail("ring bond " + std::to_string(number) + " closes on its own atom",
         pos);
  if (builder_.has_bond(open.atom, prev_))
    fail("ring bond " + std::to_string(number) + " duplicates an existing bond",
         pos);

  std::optional<Pending> bond = open.bond;
  if (pending_) {
    if (bond && bond->order != pending_->order)
      fail("conflicting bond symbols on ring bond " + std::to_string(number),
           pos);
    if (!bond || bond->stereo == BondStereo::kNone) {
      bond = pending_;
      // Written at the closing atom, so pointing back at the opening one.
      if (bond->stereo == BondStereo::kUp)
        bond->stereo = BondStereo::kDown;
      else if (bond->stereo == BondStereo::kDown)
        bond->stereo = BondStereo::kUp;
    }
  }
  BondOrder order = BondOrder::kSingle;
  BondStereo stereo = BondStereo::kNone;
  if (bond) {
    order = bond->order;
    stereo = bond->stereo;
  } else if (builder_.atom(open.atom).aromatic
             && builder_.atom(prev_).aromatic) {
    order = BondOrder::kAromatic;
  }
  builder_.add_bond(open.atom, prev_, order, stereo);
  order_[open.atom][open.slot] = prev_;
  order_[prev_].push_back(open.atom);
  pending_.reset();
}

void Parser::add_atom(const Atom &atom) {
  const int idx = builder_.add_atom(atom);
  order_.emplace_back();
  if (prev_ >= 0) {
    order_[idx].push_back(prev_);
    order_[prev_].push_back(idx);
    BondOrder order = BondOrder::kSingle;
    BondStereo stereo = BondStereo::kNone;
    if (pending_) {
      order = pending_->order;
      stereo = pending_->stereo;
    } else if (atom.aromatic && builder_.atom(prev_).aromatic) {
      order = BondOrder::kAromatic;
    }
    builder_.add_bond(prev_, idx, order, stereo);
  } else if (pending_) {
    fail("bond symbol without a preceding atom", pending_pos_);
  }
  if (atom.h_count > 0)
    order_[idx].push_back(-1);
  pending_.reset();
  if (!branches_.empty())
    branches_.back().has_atom = true;
  prev_ = idx;
}

void Parser::parse_organic_atom() {
  const std::size_t start = pos_;
  const char c = s_[pos_];
  Atom atom;
  std::string_view sym;

  if (c == 'B' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 'r') {
    sym = "Br";
  } else if (c == 'C' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 'l') {
    sym = "Cl";
  } else {
    switch (c) {
    case 'B':
    case 'C':
    case 'N':
    case 'O':
    case 'P':
    case 'S':
    case 'F':
    case 'I':
      sym = s_.substr(pos_, 1);
      break;
    case 'b':
    case 'c':
    case 'n':
    case 'o':
    case 'p':
    case 's':
      sym = s_.substr(pos_, 1);
      atom.aromatic = true;
      break;
    default:
      if (is_upper(c)) {
        std::string two(s_.substr(pos_, 2));
        if (two.size() == 2 && is_lower(two[1]) && is_periodic_symbol(two))
          fail("element " + two + " must be written in brackets", start);
        if (is_periodic_symbol(two.substr(0, 1)))
          fail("element " + two.substr(0, 1) + " must be written in brackets",
               start);
      }
      fail(std::string("unexpected character '") + c + "'", start);
    }
  }

  std::string upper(sym);
  upper[0] = static_cast<char>(upper[0] - (is_lower(upper[0]) ? 32 : 0));
  atom.atomic_number = find_element(upper)->atomic_number;
  pos_ += sym.size();
  add_atom(atom);
}

void Parser::parse_bracket_atom() {
  const std::size_t open = pos_;
  ++pos_;
  auto at_end = [&] { return pos_ >= s_.size(); };
  auto expect_more = [&] {
    if (at_end())
      fail("unterminated bracket atom", open);
  };

  Atom atom;
  atom.bracket = true;

  expect_more();
  if (is_digit(s_[pos_])) {
    int iso = 0;
    std::size_t n = 0;
    while (!at_end() && is_digit(s_[pos_])) {
      iso = iso * 10 + (s_[pos_++] - '0');
      if (++n > 3)
        fail("isotope out of range", open + 1);
    }
    atom.isotope = iso;
  }

  expect_more();
  const std::size_t sym_pos = pos_;
  const char c = s_[pos_];
  if (c == '*')
    throw UnsupportedFeature("wildcard atoms are not supported");
  std::string symbol;
  if (is_lower(c)) {
    std::string_view two = s_.substr(pos_, 2);
    if (two == "se" || two == "as" || two == "te") {
      symbol = std::string(1, static_cast<char>(two[0] - 32)) + two[1];
    } else if (c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p'
               || c == 's') {
      symbol = std::string(1, static_cast<char>(c - 32));
    } else {
      fail(std::string("unexpected character '") + c + "' in bracket atom",
           pos_);
    }
    atom.aromatic = true;
  } else if (is_upper(c)) {
    std::string two(s_.substr(pos_, 2));
    if (two.size() == 2 && is_lower(two[1]) && is_periodic_symbol(two))
      symbol = two;
    else
      symbol = std::string(1, c);
    if (!is_periodic_symbol(symbol))
      fail("unknown element '" + symbol + "'", pos_);
  } else {
    fail(std::string("expected element symbol in bracket atom, found '") + c
             + "'",
         pos_);
  }
  const ElementInfo *e = find_element(symbol);
  if (e == nullptr)
    throw UnsupportedFeature("unsupported element " + symbol);
  if (atom.aromatic && !has_aromatic_form(e->atomic_number))
    fail("element " + symbol + " has no aromatic form", sym_pos);
  atom.atomic_number = e->atomic_number;
  pos_ += symbol.size();

  expect_more();
  if (s_[pos_] == '@') {
    ++pos_;
    atom.chirality = Chirality::kCCW;
    if (!at_end() && s_[pos_] == '@') {
      ++pos_;
      atom.chirality = Chirality::kCW;
    }
    if (!at_end()
        && (s_[pos_] == 'T' || s_[pos_] == 'A' || s_[pos_] == 'S'
            || s_[pos_] == 'O'))
      throw UnsupportedFeature("extended chirality classes are not supported");
  }

  expect_more();
  if (s_[pos_] == 'H') {
    ++pos_;
    atom.h_count = 1;
    if (!at_end() && is_digit(s_[pos_]))
      atom.h_count = s_[pos_++] - '0';
  }

  expect_more();
  if (s_[pos_] == '+' || s_[pos_] == '-') {
    const char sign = s_[pos_];
    const int unit = sign == '+' ? 1 : -1;
    ++pos_;
    if (!at_end() && is_digit(s_[pos_])) {
      int n = 0;
      std::size_t digits = 0;
      while (!at_end() && is_digit(s_[pos_])) {
        n = n * 10 + (s_[pos_++] - '0');
        if (++digits > 2)
          fail("charge out of range", pos_);
      }
      atom.charge = unit * n;
    } else {
      atom.charge = unit;
      while (!at_end() && s_[pos_] == sign) {
        atom.charge += unit;
        ++pos_;
      }
    }
  }

  expect_more();
  if (s_[pos_] == ':')
    throw UnsupportedFeature("atom classes are not supported");
  if (s_[pos_] != ']')
    fail(std::string("unexpected character '") + s_[pos_]
             + "' in bracket atom",
         pos_);
  ++pos_;
  add_atom(atom);
}

// ---------------------------------------------------------------------------
// Writing

bool has_pi(const Molecule &m, int atom) {
  for (const Neighbor &n: m.neighbors(atom)) {
    if (m.bond(n.bond).order == BondOrder::kAromatic
        && m.kekule_order(n.bond) == BondOrder::kDouble)
      return true;
  }
  return false;
}

std::string charge_text(int charge) {
  if (charge == 0)
    return "";
  std::string s(1, charge > 0 ? '+' : '-');
  if (charge > 1 || charge < -1)
    s += std::to_string(charge > 0 ? charge : -charge);
  return s;
}

std::string atom_token(const Molecule &m, int i, bool kekule,
                       Chirality chirality) {
  const Atom &a = m.atom(i);
  const bool aromatic = a.aromatic && !kekule;
  const bool bare = !needs_brackets(m, i, kekule);

  std::string sym(a.symbol());
  if (aromatic)
    sym[0] = static_cast<char>(sym[0] + 32);
  if (bare)
    return sym;

  std::string out = "[";
  if (a.isotope)
    out += std::to_string(*a.isotope);
  out += sym;
  if (chirality == Chirality::kCCW)
    out += '@';
  else if (chirality == Chirality::kCW)
    out += "@@";
  if (a.h_count > 0) {
    out += 'H';
    if (a.h_count > 1)
      out += std::to_string(a.h_count);
  }
  out += charge_text(a.charge);
  out += ']';
  return out;
}

std::string bond_symbol(const Molecule &m, int bi, bool kekule,
                        BondStereo mark) {
  const Bond &b = m.bond(bi);
  BondOrder order = kekule ? m.kekule_order(bi) : b.order;
  if (mark != BondStereo::kNone)
    return mark == BondStereo::kUp ? "/" : "\\";
  switch (order) {
  case BondOrder::kAromatic:
    return "";
  case BondOrder::kSingle:
    if (!kekule && m.atom(b.begin).aromatic && m.atom(b.end).aromatic)
      return "-";
    return "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  }
  return "";
}

class Renderer {
public:
  Renderer(const Molecule &m, const Traversal &t, bool kekule)
      : m_(m), t_(t), kekule_(kekule), digit_of_bond_(m.num_bonds(), -1),
        marks_(written_bond_marks(m, t)) { }

  SmilesOutput run() {
    for (std::size_t r = 0; r < t_.roots.size(); ++r) {
      if (r > 0)
        out_.smiles += '.';
      write(t_.roots[r]);
    }
    return std::move(out_);
  }

private:
  static std::string digit_text(int d) {
    if (d < 10)
      return std::to_string(d);
    return "%" + std::to_string(d);
  }

  void write(int atom) {
    const int parent_bond = t_.parent_bond[atom];
    const int parent = parent_bond >= 0 ? m_.bond(parent_bond).other(atom) : -1;
    if (parent_bond >= 0)
      out_.smiles += bond_symbol(m_, parent_bond, kekule_, marks_[parent_bond]);
    Chirality chirality = m_.atom(atom).chirality;
    if (chirality != Chirality::kNone) {
      std::vector<int> written;
      if (parent >= 0)
        written.push_back(parent);
      if (m_.atom(atom).h_count > 0)
        written.push_back(-1);
      for (const RingEvent &e: t_.rings[atom])
        written.push_back(e.partner);
      for (int kid: t_.children[atom])
        written.push_back(kid);
      chirality = permute_chirality(
          chirality, chirality_reference_order(m_, atom), written);
    }
    out_.smiles += atom_token(m_, atom, kekule_, chirality);
    out_.atom_order.push_back(atom);

    for (const RingEvent &e: t_.rings[atom]) {
      if (e.opening) {
        int d = 1;
        while (d < 100 && in_use_[d])
          ++d;
        if (d == 100)
          throw UnsupportedFeature("more than 99 simultaneously open rings");
        in_use_[d] = true;
        digit_of_bond_[e.bond] = d;
        out_.smiles += bond_symbol(m_, e.bond, kekule_, marks_[e.bond]) + digit_text(d);
      } else {
        const int d = digit_of_bond_[e.bond];
        in_use_[d] = false;
        out_.smiles += digit_text(d);
      }
    }

    const std::vector<int> &kids = t_.children[atom];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      if (k + 1 < kids.size()) {
        out_.smiles += '(';
        write(kids[k]);
        out_.smiles += ')';
      } else {
        write(kids[k]);
      }
    }
  }

  const Molecule &m_;
  const Traversal &t_;
  bool kekule_;
  std::vector<int> digit_of_bond_;
  std::vector<BondStereo> marks_;
  std::array<bool, 100> in_use_ {};
  SmilesOutput out_;
};

// ---------------------------------------------------------------------------
// Resonance normalization

bool resonance_candidate(const Molecule &m, int i) {
  const Atom &a = m.atom(i);
  if (!has_aromatic_form(a.atomic_number))
    return false;
  int doubles = 0;
  for (const Neighbor &n: m.neighbors(i)) {
    const BondOrder o = m.kekule_order(n.bond);
    if (o == BondOrder::kTriple)
      return false;
    if (o == BondOrder::kDouble) {
      if (!m.is_ring_bond(n.bond))
        return false;
      ++doubles;
    }
  }
  if (doubles != 1)
    return false;
  // Written aromatic with its double bond counted once, the atom must be read
  // back as taking part in the pi system.
  const int v = m.total_valence(i);
  for (int allowed: allowed_valences(a.atomic_number, a.charge)) {
    if (allowed >= v - 1)
      return allowed == v;
  }
  return false;
}

bool is_perfect(const std::vector<int> &mate,
                const std::vector<char> &active) {
  for (std::size_t v = 0; v < mate.size(); ++v) {
    if (active[v] != 0 && mate[v] < 0)
      return false;
  }
  return true;
}

}  // namespace

bool needs_brackets(const Molecule &m, int atom, bool kekule) {
  const Atom &a = m.atom(atom);
  const bool aromatic = a.aromatic && !kekule;
  if (!is_organic_subset(a.atomic_number) || a.charge != 0 || a.isotope
      || a.chirality != Chirality::kNone)
    return true;
  if (aromatic && !has_bare_aromatic_form(a.atomic_number))
    return true;
  auto h = implicit_hydrogens(m, atom, kekule);
  return !h || h->h_count != a.h_count
         || (aromatic && h->needs_pi != has_pi(m, atom));
}

Molecule parse_smiles(std::string_view smiles) {
  return Parser(smiles).run();
}

SmilesOutput write_smiles(const Molecule &m, const SmilesWriteOptions &options,
                          std::span<const int> ranks, Rng *rng) {
  Traversal t = make_traversal(m, options.policy, ranks, rng);
  return Renderer(m, t, options.kekule).run();
}

Molecule normalize_resonance(const Molecule &m) {
  const int n = m.num_atoms();
  std::vector<char> cand(n, 0);
  for (int i = 0; i < n; ++i)
    cand[i] = resonance_candidate(m, i) ? 1 : 0;

  // Pi graph: ring bonds between candidates. The current double bonds form a
  // perfect matching of it.
  std::vector<std::pair<int, int>> edges;
  std::vector<int> edge_bond;
  std::vector<int> mate(n, -1);
  for (int bi = 0; bi < m.num_bonds(); ++bi) {
    const Bond &b = m.bond(bi);
    if (!m.is_ring_bond(bi) || cand[b.begin] == 0 || cand[b.end] == 0)
      continue;
    if (m.kekule_order(bi) == BondOrder::kDouble) {
      mate[b.begin] = b.end;
      mate[b.end] = b.begin;
    }
    edges.emplace_back(b.begin, b.end);
    edge_bond.push_back(bi);
  }
  // Candidates whose double bond leads to a non-candidate stay fixed.
  std::vector<char> active(n, 0);
  for (int i = 0; i < n; ++i)
    active[i] = (cand[i] != 0 && mate[i] >= 0) ? 1 : 0;
  std::vector<std::pair<int, int>> live;
  std::vector<int> live_bond;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (active[edges[k].first] != 0 && active[edges[k].second] != 0) {
      live.push_back(edges[k]);
      live_bond.push_back(edge_bond[k]);
    }
  }

  std::vector<char> resonant(m.num_bonds(), 0);
  auto mark_difference = [&](const std::vector<int> &other) {
    for (std::size_t k = 0; k < live.size(); ++k) {
      auto [a, b] = live[k];
      const bool in_m = mate[a] == b;
      const bool in_o = other[a] == b;
      if (in_m != in_o) {
        resonant[live_bond[k]] = 1;
      }
    }
  };

  for (std::size_t k = 0; k < live.size(); ++k) {
    if (resonant[live_bond[k]] != 0)
      continue;
    auto [a, b] = live[k];
    std::vector<std::pair<int, int>> sub;
    std::vector<char> sub_active = active;
    if (mate[a] == b) {
      // Is there a perfect matching avoiding this bond?
      for (std::size_t j = 0; j < live.size(); ++j) {
        if (j != k)
          sub.push_back(live[j]);
      }
    } else {
      // Is there a perfect matching using this bond?
      sub_active[a] = sub_active[b] = 0;
      for (const auto &e: live) {
        if (e.first != a && e.first != b && e.second != a && e.second != b)
          sub.push_back(e);
      }
    }
    std::vector<int> other = maximum_matching(n, sub);
    if (!is_perfect(other, sub_active))
      continue;
    if (mate[a] != b) {
      other[a] = b;
      other[b] = a;
    }
    mark_difference(other);
  }

  MoleculeBuilder builder;
  for (int i = 0; i < n; ++i) {
    Atom a = m.atom(i);
    a.bracket = true;
    a.aromatic = false;
    for (const Neighbor &nb: m.neighbors(i)) {
      if (resonant[nb.bond] != 0)
        a.aromatic = true;
    }
    builder.add_atom(a);
  }
  for (int bi = 0; bi < m.num_bonds(); ++bi) {
    const Bond &b = m.bond(bi);
    builder.add_bond(b.begin, b.end,
                     resonant[bi] != 0 ? BondOrder::kAromatic
                                       : m.kekule_order(bi),
                     b.stereo);
  }
  return builder.build();
}

namespace {

// Dense ranks of arbitrary comparable keys.
template <typename Key>
std::pair<std::vector<int>, int> densify(const std::vector<Key> &keys) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i)
    idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> cls(n);
  int c = 0;
  for (int k = 0; k < n; ++k) {
    if (k > 0 && keys[idx[k - 1]] < keys[idx[k]])
      ++c;
    cls[idx[k]] = c;
  }
  return { cls, n == 0 ? 0 : c + 1 };
}

class RankSearch {
public:
  RankSearch(const Molecule &m, std::size_t limit): m_(m), limit_(limit) { }

  std::vector<std::vector<int>> run() {
    const int n = m_.num_atoms();
    using Invariant = std::tuple<int, int, int, int, int, int, int>;
    std::vector<Invariant> inv(n);
    for (int i = 0; i < n; ++i) {
      const Atom &a = m_.atom(i);
      inv[i] = { a.atomic_number, a.charge, m_.degree(i), a.h_count,
                 a.isotope.value_or(-1), a.aromatic ? 1 : 0,
                 m_.is_ring_atom(i) ? 1 : 0 };
    }
    auto [cls, count] = densify(inv);
    explore(std::move(cls), count);
    return std::move(leaves_);
  }

private:
  void refine(std::vector<int> &cls, int &count) const {
    const int n = m_.num_atoms();
    for (;;) {
      std::vector<std::pair<int, std::vector<std::pair<int, int>>>> sig(n);
      for (int i = 0; i < n; ++i) {
        sig[i].first = cls[i];
        for (const Neighbor &nb: m_.neighbors(i)) {
          sig[i].second.emplace_back(
              static_cast<int>(m_.bond(nb.bond).order), cls[nb.atom]);
        }
        std::sort(sig[i].second.begin(), sig[i].second.end());
      }
      auto [next, next_count] = densify(sig);
      cls = std::move(next);
      if (next_count == count)
        return;
      count = next_count;
    }
  }

  // Individualizes each member of the first tied class in turn.
  void explore(std::vector<int> cls, int count) {
    const int n = m_.num_atoms();
    refine(cls, count);
    if (count == n) {
      leaves_.push_back(std::move(cls));
      return;
    }
    std::vector<int> size(count, 0);
    for (int c: cls)
      ++size[c];
    int tied = 0;
    while (size[tied] < 2)
      ++tied;
    for (int chosen = 0; chosen < n && leaves_.size() < limit_; ++chosen) {
      if (cls[chosen] != tied)
        continue;
      std::vector<int> split(n);
      for (int i = 0; i < n; ++i)
        split[i] = 2 * cls[i] + ((cls[i] == tied && i != chosen) ? 1 : 0);
      auto [next, next_count] = densify(split);
      explore(std::move(next), next_count);
    }
  }

  const Molecule &m_;
  std::size_t limit_;
  std::vector<std::vector<int>> leaves_;
};

}  // namespace

std::vector<int> canonical_ranks(const Molecule &m) {
  return std::move(RankSearch(m, 1).run().front());
}

std::vector<std::vector<int>> canonical_rank_candidates(const Molecule &m,
                                                        std::size_t limit) {
  return RankSearch(m, limit).run();
}

bool has_stereo(const Molecule &m) {
  for (const Atom &a: m.atoms()) {
    if (a.chirality != Chirality::kNone)
      return true;
  }
  for (const Bond &b: m.bonds()) {
    if (b.stereo != BondStereo::kNone)
      return true;
  }
  return false;
}

std::string to_canonical_smiles(const Molecule &m, bool kekule) {
  if (m.empty())
    return "";
  Molecule norm = normalize_resonance(m);
  SmilesWriteOptions options;
  options.policy = TraversalPolicy::kCanonical;
  options.kekule = kekule;
  // Relabelling in rank order also makes the Kekulé assignment canonical.
  auto write = [&](const std::vector<int> &ranks) {
    Molecule r = relabeled(norm, ranks);
    std::vector<int> order(r.num_atoms());
    std::iota(order.begin(), order.end(), 0);
    return write_smiles(r, options, order).smiles;
  };
  if (!has_stereo(norm))
    return write(canonical_ranks(norm));
  std::string best;
  for (const std::vector<int> &ranks:
       canonical_rank_candidates(norm, kStereoSearchLimit)) {
    std::string s = write(ranks);
    if (best.empty() || s < best)
      best = std::move(s);
  }
  return best;
}

std::string random_traversal_smiles(const Molecule &m, Rng &rng) {
  SmilesWriteOptions options;
  options.policy = TraversalPolicy::kRandom;
  return write_smiles(m, options, {}, &rng).smiles;
}

std::string canonicalize_smiles(std::string_view smiles) {
  return to_canonical_smiles(parse_smiles(smiles));
}

bool same_molecule(const Molecule &a, const Molecule &b) {
  return a.num_atoms() == b.num_atoms() && a.num_bonds() == b.num_bonds()
         && to_canonical_smiles(a) == to_canonical_smiles(b);
}

}  // namespace chemgym::chem
