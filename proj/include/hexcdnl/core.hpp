#pragma once

// Ground atoms, signed literals, assignments and nogoods.

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hexcdnl {

using AtomId = std::uint32_t;
using Tuple = std::vector<std::string>;
using TupleSet = std::set<Tuple>;

/// Replacement and body atoms live in the same table as program atoms but
/// never collide with them: their predicate names are not valid identifiers.
enum class AtomKind : std::uint8_t { Ordinary, Replacement, NegReplacement, Body };

struct AtomInfo {
  std::string predicate;
  Tuple args;
  AtomKind kind = AtomKind::Ordinary;
};

inline std::string format_atom(std::string_view predicate, const Tuple& args) {
  std::string out(predicate);
  if (args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i];
  }
  out += ')';
  return out;
}

/// Interns ground atoms into dense ids. Equality of atoms is equality of ids.
class AtomTable {
 public:
  AtomId intern(std::string_view predicate, Tuple args,
                AtomKind kind = AtomKind::Ordinary) {
    if (predicate.empty()) throw std::invalid_argument("atom with empty predicate");
    Key key{std::string(predicate), std::move(args)};
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    auto id = static_cast<AtomId>(atoms_.size());
    atoms_.push_back(AtomInfo{key.first, key.second, kind});
    by_predicate_[key.first].push_back(id);
    index_.emplace(std::move(key), id);
    return id;
  }

  std::optional<AtomId> find(std::string_view predicate, const Tuple& args) const {
    auto it = index_.find(Key{std::string(predicate), args});
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const AtomInfo& info(AtomId id) const { return atoms_.at(id); }
  std::size_t size() const { return atoms_.size(); }
  std::string name(AtomId id) const {
    const auto& a = atoms_.at(id);
    return format_atom(a.predicate, a.args);
  }

  /// Atoms over `predicate` in interning order; empty if none exist.
  std::span<const AtomId> atoms_of(std::string_view predicate) const {
    auto it = by_predicate_.find(std::string(predicate));
    if (it == by_predicate_.end()) return {};
    return it->second;
  }

 private:
  using Key = std::pair<std::string, Tuple>;
  std::vector<AtomInfo> atoms_;
  std::map<Key, AtomId> index_;
  std::map<std::string, std::vector<AtomId>, std::less<>> by_predicate_;
};

/// A signed literal: T a (positive) or F a.
class Literal {
 public:
  constexpr Literal() = default;
  constexpr Literal(AtomId atom, bool positive) : code_(atom * 2 + (positive ? 0u : 1u)) {}

  constexpr AtomId atom() const { return code_ >> 1; }
  constexpr bool positive() const { return (code_ & 1u) == 0; }
  constexpr std::uint32_t code() const { return code_; }
  constexpr Literal operator~() const { return from_code(code_ ^ 1u); }

  static constexpr Literal from_code(std::uint32_t code) {
    Literal l;
    l.code_ = code;
    return l;
  }

  friend constexpr auto operator<=>(Literal, Literal) = default;

 private:
  std::uint32_t code_ = 0;
};

constexpr Literal pos_lit(AtomId a) { return Literal(a, true); }
constexpr Literal neg_lit(AtomId a) { return Literal(a, false); }
constexpr Literal negate(Literal l) { return ~l; }

inline std::string to_string(Literal l, const AtomTable& table) {
  return (l.positive() ? "T " : "F ") + table.name(l.atom());
}

enum class NogoodOrigin : std::uint8_t {
  StaticCompletion,
  StaticShift,
  Loop,
  Conflict,
  EblGeneral,
  EblMonotonic,
  EblFunctional,
  EblUser,
  CompatibilityReject,
  EnumBlock,
};

inline bool is_ebl(NogoodOrigin o) {
  return o == NogoodOrigin::EblGeneral || o == NogoodOrigin::EblMonotonic ||
         o == NogoodOrigin::EblFunctional || o == NogoodOrigin::EblUser;
}

inline std::string_view to_string(NogoodOrigin o) {
  switch (o) {
    case NogoodOrigin::StaticCompletion: return "static-completion";
    case NogoodOrigin::StaticShift: return "static-shift";
    case NogoodOrigin::Loop: return "loop";
    case NogoodOrigin::Conflict: return "conflict";
    case NogoodOrigin::EblGeneral: return "ebl-general";
    case NogoodOrigin::EblMonotonic: return "ebl-monotonic";
    case NogoodOrigin::EblFunctional: return "ebl-functional";
    case NogoodOrigin::EblUser: return "ebl-user";
    case NogoodOrigin::CompatibilityReject: return "compatibility-reject";
    case NogoodOrigin::EnumBlock: return "enum-block";
  }
  return "?";
}

/// A set of literals that must not hold jointly. Literals are kept sorted by
/// atom id, so two nogoods over the same literal set compare equal.
class Nogood {
 public:
  /// Returns nullopt for tautological input (some atom in both polarities).
  static std::optional<Nogood> make(std::vector<Literal> lits, NogoodOrigin origin) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i) {
      if (lits[i].atom() == lits[i - 1].atom()) {
#ifdef HEXCDNL_DEBUG
        std::clog << "hexcdnl: dropping tautological nogood (" << to_string(origin) << ")\n";
#endif
        return std::nullopt;
      }
    }
    Nogood n;
    n.lits_ = std::move(lits);
    n.origin_ = origin;
    return n;
  }

  std::span<const Literal> literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  NogoodOrigin origin() const { return origin_; }

  bool contains(Literal l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

  /// Literal-set inclusion.
  bool subset_of(const Nogood& other) const {
    return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
  }

  friend bool operator==(const Nogood& a, const Nogood& b) { return a.lits_ == b.lits_; }

 private:
  std::vector<Literal> lits_;
  NogoodOrigin origin_ = NogoodOrigin::Conflict;
};

struct NogoodHash {
  std::size_t operator()(const Nogood& n) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto l : n.literals()) h = (h ^ l.code()) * 0x100000001b3ull;
    return h;
  }
};

inline std::string to_string(const Nogood& n, const AtomTable& table) {
  std::string out = "{";
  bool first = true;
  for (auto l : n.literals()) {
    if (!first) out += ", ";
    first = false;
    out += to_string(l, table);
  }
  return out + "}";
}

enum class Value : std::uint8_t { Unassigned, True, False };

/// The solver trail: a consistent set of signed literals, each tagged with the
/// decision level it was assigned at and the nogood that implied it.
class Assignment {
 public:
  static constexpr std::int32_t kChoice = -1;
  static constexpr std::int32_t kNoReason = -2;

  explicit Assignment(std::size_t atoms = 0) { resize(atoms); }

  void resize(std::size_t atoms) {
    assert(atoms >= vars_.size());
    vars_.resize(atoms);
  }
  std::size_t atom_count() const { return vars_.size(); }

  Value value(AtomId a) const { return vars_[a].value; }
  bool assigned(AtomId a) const { return vars_[a].value != Value::Unassigned; }
  bool holds(Literal l) const {
    return vars_[l.atom()].value == (l.positive() ? Value::True : Value::False);
  }
  bool falsified(Literal l) const { return holds(~l); }
  int level(AtomId a) const { return vars_[a].level; }
  std::int32_t reason(AtomId a) const { return vars_[a].reason; }
  std::size_t trail_position(AtomId a) const { return vars_[a].position; }

  /// Adds `l`. Returns false, leaving the assignment untouched, if the
  /// complementary literal is already present.
  bool assign(Literal l, int level, std::int32_t reason = kNoReason) {
    auto& v = vars_.at(l.atom());
    if (v.value != Value::Unassigned) return holds(l);
    assert(level >= 0);
    assert(trail_.empty() || vars_[trail_.back().atom()].level <= level);
    v.value = l.positive() ? Value::True : Value::False;
    v.level = level;
    v.reason = reason;
    v.position = trail_.size();
    trail_.push_back(l);
    return true;
  }

  /// Removes every literal assigned above `level`.
  void backtrack_to(int level) {
    while (!trail_.empty() && vars_[trail_.back().atom()].level > level) {
      vars_[trail_.back().atom()] = Var{};
      trail_.pop_back();
    }
  }

  void clear() { backtrack_to(-1); }

  std::span<const Literal> trail() const { return trail_; }
  std::size_t assigned_count() const { return trail_.size(); }
  bool complete() const { return trail_.size() == vars_.size(); }
  int top_level() const { return trail_.empty() ? 0 : vars_[trail_.back().atom()].level; }

  /// All literals, ordered by atom id.
  std::vector<Literal> literals() const {
    std::vector<Literal> out(trail_.begin(), trail_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Var {
    Value value = Value::Unassigned;
    int level = 0;
    std::int32_t reason = kNoReason;
    std::size_t position = 0;
  };
  std::vector<Var> vars_;
  std::vector<Literal> trail_;
};

inline bool violates(const Assignment& a, const Nogood& n) {
  return std::all_of(n.literals().begin(), n.literals().end(),
                     [&](Literal l) { return a.holds(l); });
}

inline bool is_solution(const Assignment& a, std::span<const Nogood> nogoods) {
  return std::none_of(nogoods.begin(), nogoods.end(),
                      [&](const Nogood& n) { return violates(a, n); });
}

/// Tuples c with T q(c) in the assignment.
inline TupleSet extension(std::string_view predicate, const Assignment& a,
                          const AtomTable& table) {
  TupleSet out;
  for (AtomId id : table.atoms_of(predicate))
    if (id < a.atom_count() && a.value(id) == Value::True) out.insert(table.info(id).args);
  return out;
}

/// Literals of `a` over atoms of the listed predicates, ordered by atom id.
inline std::vector<Literal> restrict(const Assignment& a, std::span<const std::string> predicates,
                                     const AtomTable& table) {
  std::vector<Literal> out;
  for (const auto& p : predicates) {
    for (AtomId id : table.atoms_of(p)) {
      if (id >= a.atom_count()) continue;
      switch (a.value(id)) {
        case Value::True: out.push_back(pos_lit(id)); break;
        case Value::False: out.push_back(neg_lit(id)); break;
        case Value::Unassigned: break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace hexcdnl
