#pragma once

// Rewriting of a ground HEX program into its guessing program: every ground
// external atom becomes a replacement atom e, paired with ne by a guessing
// rule e v ne.

#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hexcdnl/ground.hpp"

namespace hexcdnl {

/// A rule over ordinary atoms only.
struct OrdinaryRule {
  std::vector<AtomId> head;
  std::vector<AtomId> pos;
  std::vector<AtomId> neg;
};

struct Replacement {
  std::size_t unit;  // index into GuessingProgram::units
  Tuple outputs;
  AtomId e, ne;
};

/// All ground external atoms sharing one external predicate with input list.
/// These are evaluated together and share one input restriction.
struct ExternalUnit {
  ExternalSourceDescriptor source;
  std::vector<std::string> inputs;
  std::vector<InputKind> kinds;
  SourceProperties properties;
  std::string key;                            // e.g. "&diff[p,q]"
  std::vector<std::string> input_predicates;  // distinct, in input order
  std::vector<std::size_t> replacements;
  std::map<Tuple, std::size_t> by_output;

  std::optional<AtomId> e_atom(const Tuple& outputs, const std::vector<Replacement>& all) const {
    auto it = by_output.find(outputs);
    if (it == by_output.end()) return std::nullopt;
    return all[it->second].e;
  }
};

struct GuessingProgram {
  AtomTable atoms;
  std::vector<OrdinaryRule> rules;
  std::size_t guessing_rules_begin = 0;  // rules from here on are guessing rules
  std::vector<Replacement> replacements;
  std::vector<ExternalUnit> units;
  std::vector<AtomId> original_atoms;

  bool is_original(AtomId a) const { return atoms.info(a).kind == AtomKind::Ordinary; }
};

inline std::string replacement_predicate(const std::string& key, bool positive) {
  return (positive ? "e_" : "ne_") + key;
}

/// Builds the guessing program. Each guessing rule is guarded by the facts
/// shared by all rule bodies the external atom occurs in, so the guard is
/// always true and only restricts the printed form.
inline GuessingProgram to_guessing(const GroundProgram& g, const SourceRegistry& registry) {
  GuessingProgram out;
  // Original atoms keep their ids.
  for (AtomId a = 0; a < g.atoms.size(); ++a) {
    const auto& info = g.atoms.info(a);
    out.atoms.intern(info.predicate, info.args, AtomKind::Ordinary);
    out.original_atoms.push_back(a);
  }

  std::set<AtomId> facts;
  for (const auto& r : g.rules)
    if (r.is_fact()) facts.insert(r.head[0]);

  std::map<std::string, std::size_t> unit_of_key;
  std::vector<std::size_t> replacement_of(g.externals.size());
  for (std::size_t i = 0; i < g.externals.size(); ++i) {
    const auto& x = g.externals[i];
    auto key = x.key();
    auto [it, inserted] = unit_of_key.try_emplace(key, out.units.size());
    if (inserted) {
      const auto* desc = registry.find(x.source);
      if (!desc) throw std::invalid_argument("unknown external source '&" + x.source + "'");
      ExternalUnit u{*desc, x.inputs, x.kinds, registry.properties_for(*desc, key), key, {}, {}, {}};
      for (std::size_t k = 0; k < x.inputs.size(); ++k) {
        if (x.kinds[k] != InputKind::Predicate) continue;
        if (std::find(u.input_predicates.begin(), u.input_predicates.end(), x.inputs[k]) ==
            u.input_predicates.end())
          u.input_predicates.push_back(x.inputs[k]);
      }
      out.units.push_back(std::move(u));
    }
    auto& unit = out.units[it->second];
    AtomId e = out.atoms.intern(replacement_predicate(key, true), x.outputs, AtomKind::Replacement);
    AtomId ne = out.atoms.intern(replacement_predicate(key, false), x.outputs, AtomKind::NegReplacement);
    replacement_of[i] = out.replacements.size();
    unit.by_output.emplace(x.outputs, out.replacements.size());
    unit.replacements.push_back(out.replacements.size());
    out.replacements.push_back({it->second, x.outputs, e, ne});
  }

  std::vector<std::optional<std::set<AtomId>>> guards(g.externals.size());
  for (const auto& r : g.rules) {
    OrdinaryRule o;
    o.head = r.head;
    std::set<AtomId> fact_guard;
    for (const auto& b : r.body) {
      if (!b.external) {
        (b.negated ? o.neg : o.pos).push_back(static_cast<AtomId>(b.index));
        if (!b.negated && facts.contains(static_cast<AtomId>(b.index)))
          fact_guard.insert(static_cast<AtomId>(b.index));
      } else {
        AtomId e = out.replacements[replacement_of[b.index]].e;
        (b.negated ? o.neg : o.pos).push_back(e);
      }
    }
    for (const auto& b : r.body) {
      if (!b.external) continue;
      auto& guard = guards[b.index];
      if (!guard) {
        guard = fact_guard;
      } else {
        std::set<AtomId> common;
        std::set_intersection(guard->begin(), guard->end(), fact_guard.begin(), fact_guard.end(),
                              std::inserter(common, common.end()));
        guard = std::move(common);
      }
    }
    out.rules.push_back(std::move(o));
  }

  out.guessing_rules_begin = out.rules.size();
  for (std::size_t i = 0; i < g.externals.size(); ++i) {
    const auto& rep = out.replacements[replacement_of[i]];
    OrdinaryRule guess;
    guess.head = {rep.e, rep.ne};
    if (guards[i]) guess.pos.assign(guards[i]->begin(), guards[i]->end());
    out.rules.push_back(std::move(guess));
  }
  return out;
}

}  // namespace hexcdnl
