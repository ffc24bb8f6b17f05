#pragma once

// Evaluation of external atoms and external behavior learning.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "hexcdnl/guessing.hpp"

namespace hexcdnl {

/// Learning applied after an external evaluation.
///   Off       no nogoods
///   General   input/output nogoods over the full input restriction
///   Informed  drops F-literals of monotonic inputs; pairs outputs of
///             functional sources
///   User      the source's own learning function when it has one, informed
///             learning otherwise
enum class EblMode : std::uint8_t { Off, General, Informed, User };

inline std::string_view to_string(EblMode m) {
  switch (m) {
    case EblMode::Off: return "off";
    case EblMode::General: return "general";
    case EblMode::Informed: return "informed";
    case EblMode::User: return "user";
  }
  return "?";
}

/// The literals of `a` over the input predicates of `unit`.
inline std::vector<Literal> input_restriction(const GuessingProgram& p, const ExternalUnit& unit,
                                              const Assignment& a) {
  return restrict(a, unit.input_predicates, p.atoms);
}

inline bool inputs_assigned(const GuessingProgram& p, const ExternalUnit& unit, const Assignment& a) {
  for (const auto& pred : unit.input_predicates)
    for (AtomId id : p.atoms.atoms_of(pred))
      if (!a.assigned(id)) return false;
  return true;
}

inline SourceQuery make_query(const GuessingProgram& p, const ExternalUnit& unit, const Assignment& a) {
  std::vector<SourceQuery::Input> inputs;
  for (std::size_t i = 0; i < unit.inputs.size(); ++i) {
    if (unit.kinds[i] == InputKind::Predicate)
      inputs.push_back({InputKind::Predicate, unit.inputs[i], extension(unit.inputs[i], a, p.atoms)});
    else
      inputs.push_back({InputKind::Constant, unit.inputs[i], {}});
  }
  return SourceQuery(std::move(inputs));
}

/// Lambda_g: A|p plus F e(c) for every output tuple c with a replacement atom.
inline std::vector<Nogood> lambda_general(const GuessingProgram& p, std::size_t unit,
                                          const Assignment& a, const TupleSet& outputs) {
  const auto& u = p.units[unit];
  auto restriction = input_restriction(p, u, a);
  std::vector<Nogood> out;
  for (const auto& c : outputs) {
    auto e = u.e_atom(c, p.replacements);
    if (!e) continue;
    auto lits = restriction;
    lits.push_back(neg_lit(*e));
    if (auto n = Nogood::make(std::move(lits), NogoodOrigin::EblGeneral)) out.push_back(std::move(*n));
  }
  return out;
}

/// Lambda_m: as Lambda_g without the F-literals of monotonic inputs. A
/// predicate that also occurs at a nonmonotonic position keeps them.
inline std::vector<Nogood> lambda_monotonic(const GuessingProgram& p, std::size_t unit,
                                            const Assignment& a, const TupleSet& outputs) {
  const auto& u = p.units[unit];
  std::set<std::string> nonmonotonic;
  for (std::size_t i = 0; i < u.inputs.size(); ++i)
    if (u.kinds[i] == InputKind::Predicate && !u.properties.is_monotonic(i)) nonmonotonic.insert(u.inputs[i]);
  std::vector<Literal> restriction;
  for (auto l : input_restriction(p, u, a))
    if (l.positive() || nonmonotonic.contains(p.atoms.info(l.atom()).predicate)) restriction.push_back(l);
  std::vector<Nogood> out;
  for (const auto& c : outputs) {
    auto e = u.e_atom(c, p.replacements);
    if (!e) continue;
    auto lits = restriction;
    lits.push_back(neg_lit(*e));
    if (auto n = Nogood::make(std::move(lits), NogoodOrigin::EblMonotonic)) out.push_back(std::move(*n));
  }
  return out;
}

/// Lambda_f, incrementally: pairs every newly observed output tuple with the
/// tuples observed before. `observed` is updated.
inline std::vector<Nogood> lambda_functional(const GuessingProgram& p, std::size_t unit,
                                             const TupleSet& outputs, std::set<Tuple>& observed) {
  const auto& u = p.units[unit];
  std::vector<Nogood> out;
  for (const auto& c : outputs) {
    if (observed.contains(c)) continue;
    auto e_new = u.e_atom(c, p.replacements);
    if (e_new) {
      for (const auto& prior : observed) {
        auto e_old = u.e_atom(prior, p.replacements);
        if (!e_old) continue;
        if (auto n = Nogood::make({pos_lit(*e_old), pos_lit(*e_new)}, NogoodOrigin::EblFunctional))
          out.push_back(std::move(*n));
      }
    }
    observed.insert(c);
  }
  return out;
}

/// Translates symbolic user nogoods into nogoods over the program's atoms.
/// Input atoms absent from the program are false in every assignment: a T
/// literal over one makes the nogood vacuous, an F literal is dropped. A
/// nogood over an output without replacement atom is dropped.
inline std::vector<Nogood> translate_user_nogoods(const GuessingProgram& p, std::size_t unit,
                                                  const std::vector<SymbolicNogood>& symbolic) {
  const auto& u = p.units[unit];
  std::vector<Nogood> out;
  for (const auto& sn : symbolic) {
    std::vector<Literal> lits;
    bool vacuous = false;
    for (const auto& sl : sn) {
      std::optional<AtomId> atom;
      if (sl.target == SymbolicLiteral::Target::Output) {
        atom = u.e_atom(sl.args, p.replacements);
        if (!atom) {
          vacuous = true;
          break;
        }
      } else {
        if (sl.input >= u.inputs.size() || u.kinds[sl.input] != InputKind::Predicate)
          throw PluginError("&" + u.source.name + ": learned literal refers to input " +
                            std::to_string(sl.input) + ", which is not a predicate input");
        atom = p.atoms.find(u.inputs[sl.input], sl.args);
        if (!atom) {
          if (sl.positive) {
            vacuous = true;
            break;
          }
          continue;
        }
      }
      lits.push_back(Literal(*atom, sl.positive));
    }
    if (vacuous) continue;
    if (auto n = Nogood::make(std::move(lits), NogoodOrigin::EblUser)) out.push_back(std::move(*n));
  }
  return out;
}

struct EvaluatorStats {
  std::size_t external_calls = 0;  // ground external atoms evaluated
  std::size_t oracle_calls = 0;
  std::size_t cache_hits = 0;
};

/// Calls oracles through a cache keyed by unit and input restriction, and
/// produces the nogoods of the configured learning mode.
class ExternalEvaluator {
 public:
  ExternalEvaluator(const GuessingProgram& p, EblMode mode, bool check_plugins = false)
      : p_(p), mode_(mode), check_plugins_(check_plugins), observed_(p.units.size()) {}

  EblMode mode() const { return mode_; }
  const EvaluatorStats& stats() const { return stats_; }

  /// Output tuples of `unit` under `a`. Requires all input atoms assigned.
  const TupleSet& evaluate(std::size_t unit, const Assignment& a) {
    const auto& u = p_.units[unit];
    stats_.external_calls += u.replacements.size();
    Key key{unit, input_restriction(p_, u, a)};
    if (auto it = cache_.find(key); it != cache_.end()) {
      ++stats_.cache_hits;
      if (check_plugins_ && call(unit, a) != it->second)
        throw PluginError("&" + u.source.name + " answered differently for identical input");
      return it->second;
    }
    return cache_.emplace(std::move(key), call(unit, a)).first->second;
  }

  /// Nogoods learned from evaluating `unit` under `a` with result `outputs`.
  std::vector<Nogood> learn(std::size_t unit, const Assignment& a, const TupleSet& outputs) {
    const auto& u = p_.units[unit];
    std::vector<Nogood> out;
    auto append = [&](std::vector<Nogood> ns) {
      for (auto& n : ns) out.push_back(std::move(n));
    };
    auto informed = [&] {
      if (!u.properties.monotonic.empty())
        append(lambda_monotonic(p_, unit, a, outputs));
      else
        append(lambda_general(p_, unit, a, outputs));
    };
    switch (mode_) {
      case EblMode::Off: return out;
      case EblMode::General: append(lambda_general(p_, unit, a, outputs)); return out;
      case EblMode::Informed: informed(); break;
      case EblMode::User:
        if (u.source.user_learn)
          append(translate_user_nogoods(p_, unit, u.source.user_learn(make_query(p_, u, a), outputs)));
        else
          informed();
        break;
    }
    if (u.properties.functional) append(lambda_functional(p_, unit, outputs, observed_[unit]));
    return out;
  }

 private:
  using Key = std::pair<std::size_t, std::vector<Literal>>;

  TupleSet call(std::size_t unit, const Assignment& a) {
    const auto& u = p_.units[unit];
    ++stats_.oracle_calls;
    TupleSet result;
    try {
      result = u.source.oracle(make_query(p_, u, a));
    } catch (const PluginError&) {
      throw;
    } catch (const std::exception& ex) {
      throw PluginError("&" + u.source.name + " failed: " + ex.what());
    }
    for (const auto& t : result)
      if (t.size() != u.source.output_arity)
        throw PluginError("&" + u.source.name + " returned a tuple of arity " + std::to_string(t.size()) +
                          ", expected " + std::to_string(u.source.output_arity));
    if (u.properties.functional && result.size() > 1)
      throw PluginError("&" + u.source.name + " is declared functional but returned " +
                        std::to_string(result.size()) + " tuples");
    return result;
  }

  const GuessingProgram& p_;
  EblMode mode_;
  bool check_plugins_;
  EvaluatorStats stats_;
  std::map<Key, TupleSet> cache_;
  std::vector<std::set<Tuple>> observed_;
};

}  // namespace hexcdnl
