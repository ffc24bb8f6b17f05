#pragma once

// The outer evaluation loop: enumerate candidate compatible sets with the
// conflict-driven search, check them against the oracles, and keep the
// subset-minimal projections.

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hexcdnl/builtins.hpp"
#include "hexcdnl/cdnl.hpp"
#include "hexcdnl/encoding.hpp"
#include "hexcdnl/external.hpp"
#include "hexcdnl/ufs.hpp"

namespace hexcdnl {

/// When external atoms are evaluated for learning during the search.
///   Fixpoint    at every propagation fixpoint, for each external atom whose
///               input atoms are all assigned and not yet seen in this form
///   OnComplete  only while checking a complete candidate
enum class EvalPolicy : std::uint8_t { Fixpoint, OnComplete };

struct LearnEvent {
  const GuessingProgram& program;
  std::size_t unit;
  const Assignment& assignment;
  const TupleSet& outputs;
  const Nogood& nogood;
};

struct SolveOptions {
  EblMode ebl = EblMode::Informed;
  EvalPolicy policy = EvalPolicy::Fixpoint;
  std::size_t max_models = 0;  // compatible sets to enumerate; 0 = all
  Heuristic heuristic = Heuristic::Lexicographic;
  std::uint64_t seed = 0;
  bool check_plugins = false;
  std::function<void(const LearnEvent&)> on_learn;
  std::function<void(const Assignment&, bool compatible)> on_candidate;
};

struct SolveStats {
  std::size_t candidates = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t external_calls = 0;
  std::size_t oracle_calls = 0;
  std::size_t ebl_nogoods = 0;
  std::size_t loop_nogoods = 0;
  std::size_t conflicts = 0;
  std::size_t decisions = 0;
  std::size_t propagations = 0;
};

struct SolveResult {
  std::vector<std::vector<std::string>> answer_sets;
  SolveStats stats;
};

namespace detail {

inline bool is_number(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

/// Numbers before symbols, numbers by value.
inline int compare_term(const std::string& a, const std::string& b) {
  bool na = is_number(a), nb = is_number(b);
  if (na != nb) return na ? -1 : 1;
  if (na) {
    auto ta = a.substr(std::min(a.find_first_not_of('0'), a.size() - 1));
    auto tb = b.substr(std::min(b.find_first_not_of('0'), b.size() - 1));
    if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
    if (int c = ta.compare(tb)) return c < 0 ? -1 : 1;
  }
  int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

inline bool atom_less(const AtomInfo& a, const AtomInfo& b) {
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  for (std::size_t i = 0; i < std::min(a.args.size(), b.args.size()); ++i)
    if (int c = compare_term(a.args[i], b.args[i])) return c < 0;
  return a.args.size() < b.args.size();
}

}  // namespace detail

/// Keeps the projections that have no proper subset among the others.
/// Input projections are sorted atom-id lists.
inline std::vector<std::vector<AtomId>> minimal_sets(std::vector<std::vector<AtomId>> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<std::vector<AtomId>> out;
  for (const auto& s : sets) {
    bool minimal = std::none_of(sets.begin(), sets.end(), [&](const std::vector<AtomId>& o) {
      return o.size() < s.size() && std::includes(s.begin(), s.end(), o.begin(), o.end());
    });
    if (minimal) out.push_back(s);
  }
  return out;
}

/// Renders projections as sorted atom names and orders the sets.
inline std::vector<std::vector<std::string>> format_answer_sets(const AtomTable& table,
                                                                std::vector<std::vector<AtomId>> sets) {
  auto less = [&](AtomId a, AtomId b) { return detail::atom_less(table.info(a), table.info(b)); };
  for (auto& s : sets) std::sort(s.begin(), s.end(), less);
  std::sort(sets.begin(), sets.end(), [&](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), less);
  });
  std::vector<std::vector<std::string>> out;
  for (const auto& s : sets) {
    std::vector<std::string> names;
    for (auto a : s) names.push_back(table.name(a));
    out.push_back(std::move(names));
  }
  return out;
}

inline std::string format_answer_set(const std::vector<std::string>& atoms) {
  std::string out = "{";
  for (std::size_t i = 0; i < atoms.size(); ++i) out += (i ? ", " : "") + atoms[i];
  return out + "}";
}

class HexSolver {
 public:
  HexSolver(GuessingProgram program, SolveOptions options)
      : p_(std::move(program)),
        enc_(encode(p_)),
        options_(std::move(options)),
        solver_(p_.atoms.size(), options_.heuristic, options_.seed),
        ufs_(p_, enc_),
        eval_(p_, options_.ebl, options_.check_plugins) {
    for (const auto& n : enc_.nogoods)
      if (!solver_.add(n)) break;
  }

  HexSolver(const HexSolver&) = delete;
  HexSolver& operator=(const HexSolver&) = delete;

  const GuessingProgram& program() const { return p_; }
  const ProgramEncoding& encoding() const { return enc_; }
  const NogoodSolver& solver() const { return solver_; }

  /// Adds a nogood to the learned set. Returns false once unsatisfiable.
  bool add_nogood(const Nogood& n) { return solver_.add(n); }

  /// The next answer set of the guessing program that is a solution to all
  /// nogoods so far, or nullptr if there is none.
  const Assignment* next_candidate() {
    while (true) {
      if (!solver_.propagate()) return nullptr;
      const auto& a = solver_.assignment();
      if (ufs_.cyclic_components() > 0 && !a.complete()) {
        if (auto u = ufs_.unfounded_set(a, true); !u.empty()) {
          ++stats_.loop_nogoods;
          if (!solver_.add(ufs_.loop_nogood(u, a))) return nullptr;
          continue;
        }
      }
      if (a.complete()) {
        if (auto u = ufs_.unfounded_set(a); !u.empty()) {
          ++stats_.loop_nogoods;
          if (!solver_.add(ufs_.loop_nogood(u, a))) return nullptr;
          continue;
        }
        return &a;
      }
      if (options_.policy == EvalPolicy::Fixpoint && options_.ebl != EblMode::Off) {
        auto r = learn_at_fixpoint();
        if (r == Step::Unsat) return nullptr;
        if (r == Step::Changed) continue;
      }
      solver_.decide(solver_.select());
    }
  }

  /// Compares every replacement atom with its oracle under the complete
  /// assignment `a`, adds the learned nogoods, and rejects `a` on mismatch or
  /// blocks it otherwise. Returns whether `a` is compatible.
  bool check(const Assignment& a) {
    std::vector<Literal> full = a.literals();
    std::vector<Nogood> learned;
    bool compatible = true;
    for (std::size_t unit = 0; unit < p_.units.size(); ++unit) {
      const auto& outputs = eval_.evaluate(unit, a);
      for (auto r : p_.units[unit].replacements) {
        const auto& rep = p_.replacements[r];
        if (outputs.contains(rep.outputs) != a.holds(pos_lit(rep.e))) compatible = false;
      }
      for (auto& n : learn(unit, a, outputs)) learned.push_back(std::move(n));
      if (options_.policy == EvalPolicy::Fixpoint) evaluated_.emplace(unit, input_restriction(p_, p_.units[unit], a));
    }
    if (compatible) {
      std::vector<AtomId> projection;
      for (auto x : p_.original_atoms)
        if (a.value(x) == Value::True) projection.push_back(x);
      compatible_.push_back(std::move(projection));
    }
    if (options_.on_candidate) options_.on_candidate(a, compatible);
    for (const auto& n : learned) add_learned(n);
    solver_.add(std::move(full), compatible ? NogoodOrigin::EnumBlock : NogoodOrigin::CompatibilityReject);
    return compatible;
  }

  SolveResult solve() {
    while (options_.max_models == 0 || stats_.accepted < options_.max_models) {
      const auto* a = next_candidate();
      if (!a) break;
      ++stats_.candidates;
      if (check(*a))
        ++stats_.accepted;
      else
        ++stats_.rejected;
    }
    SolveResult result;
    result.answer_sets = format_answer_sets(p_.atoms, minimal_sets(compatible_));
    result.stats = stats();
    return result;
  }

  SolveStats stats() const {
    SolveStats s = stats_;
    s.conflicts = solver_.stats().conflicts;
    s.decisions = solver_.stats().decisions;
    s.propagations = solver_.stats().propagations;
    s.external_calls = eval_.stats().external_calls;
    s.oracle_calls = eval_.stats().oracle_calls;
    return s;
  }

  /// Projections of the compatible sets found so far.
  const std::vector<std::vector<AtomId>>& compatible_sets() const { return compatible_; }

 private:
  enum class Step { NoChange, Changed, Unsat };

  std::vector<Nogood> learn(std::size_t unit, const Assignment& a, const TupleSet& outputs) {
    auto ns = eval_.learn(unit, a, outputs);
    if (options_.on_learn)
      for (const auto& n : ns) options_.on_learn(LearnEvent{p_, unit, a, outputs, n});
    return ns;
  }

  bool add_learned(const Nogood& n) {
    bool inserted = false;
    bool ok = solver_.add(n, &inserted);
    if (inserted) ++stats_.ebl_nogoods;
    return ok;
  }

  Step learn_at_fixpoint() {
    const auto& a = solver_.assignment();
    for (std::size_t unit = 0; unit < p_.units.size(); ++unit) {
      const auto& u = p_.units[unit];
      if (!inputs_assigned(p_, u, a)) continue;
      if (!evaluated_.emplace(unit, input_restriction(p_, u, a)).second) continue;
      const auto& outputs = eval_.evaluate(unit, a);
      auto ns = learn(unit, a, outputs);
      std::size_t before = stats_.ebl_nogoods;
      for (const auto& n : ns)
        if (!add_learned(n)) return Step::Unsat;
      if (stats_.ebl_nogoods != before) return Step::Changed;
    }
    return Step::NoChange;
  }

  GuessingProgram p_;
  ProgramEncoding enc_;
  SolveOptions options_;
  NogoodSolver solver_;
  UnfoundedSetChecker ufs_;
  ExternalEvaluator eval_;
  SolveStats stats_;
  std::set<std::pair<std::size_t, std::vector<Literal>>> evaluated_;
  std::vector<std::vector<AtomId>> compatible_;
};

/// Parses, grounds and rewrites a program.
inline GuessingProgram load_program(std::string_view text, const SourceRegistry& registry) {
  return to_guessing(ground(parse(text, registry)), registry);
}

inline SolveResult solve(std::string_view text, const SourceRegistry& registry, SolveOptions options = {}) {
  HexSolver s(load_program(text, registry), std::move(options));
  return s.solve();
}

}  // namespace hexcdnl
