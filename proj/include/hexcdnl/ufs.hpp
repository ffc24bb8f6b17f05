#pragma once

// Unfounded sets of the guessing program and their loop nogoods.

#include <functional>
#include <stdexcept>
#include <vector>

#include "hexcdnl/encoding.hpp"

namespace hexcdnl {

class UnfoundedSetChecker {
 public:
  /// Components larger than this that are not head-cycle-free are refused.
  static constexpr std::size_t kMaxDisjunctiveComponent = 22;

  UnfoundedSetChecker(const GuessingProgram& p, const ProgramEncoding& enc) : p_(p), enc_(enc) {
    build_components();
  }

  /// Number of components that can contain an unfounded set: those with more
  /// than one atom or with a self-loop.
  std::size_t cyclic_components() const { return cyclic_.size(); }

  /// A nonempty unfounded set of true atoms, or an empty vector. With
  /// `assigned_only`, components touching unassigned atoms are skipped.
  std::vector<AtomId> unfounded_set(const Assignment& a, bool assigned_only = false) const {
    for (auto c : cyclic_) {
      if (assigned_only && !fully_assigned(c, a)) continue;
      auto u = hcf_[c] ? greatest_unfounded(c, a) : brute_force(c, a);
      if (!u.empty()) return u;
    }
    return {};
  }

  /// A loop nogood for U violated by `a`: {T x} for some true x in U, plus
  /// one literal per external support rule of U witnessing that the rule
  /// does not support U under `a`.
  Nogood loop_nogood(const std::vector<AtomId>& u, const Assignment& a) const {
    std::vector<char> in_u(p_.atoms.size(), 0);
    for (auto x : u) in_u[x] = 1;
    std::vector<Literal> lits;
    for (auto x : u) {
      if (a.value(x) == Value::True) {
        lits.push_back(pos_lit(x));
        break;
      }
    }
    for (std::size_t r : rules_of(u, in_u)) {
      const auto& rule = p_.rules[r];
      AtomId body = enc_.rule_body[r];
      if (a.value(body) == Value::False) {
        lits.push_back(neg_lit(body));
        continue;
      }
      for (auto h : rule.head) {
        if (!in_u[h] && a.value(h) == Value::True) {
          lits.push_back(pos_lit(h));
          break;
        }
      }
    }
    auto ng = Nogood::make(std::move(lits), NogoodOrigin::Loop);
    if (!ng) throw std::logic_error("tautological loop nogood");
    return *ng;
  }

  /// True iff no external support rule of U has a true body and all head
  /// atoms outside U false.
  bool is_unfounded(const std::vector<AtomId>& u, const Assignment& a) const {
    std::vector<char> in_u(p_.atoms.size(), 0);
    for (auto x : u) in_u[x] = 1;
    for (std::size_t r : rules_of(u, in_u))
      if (supports(r, in_u, a)) return false;
    return true;
  }

 private:
  void build_components() {
    std::size_t n = p_.atoms.size();
    std::vector<std::vector<AtomId>> edges(n);
    for (const auto& r : p_.rules)
      for (auto h : r.head)
        for (auto b : r.pos) edges[h].push_back(b);

    // Tarjan, iterative.
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<AtomId> stack;
    component_.assign(n, SIZE_MAX);
    int counter = 0;
    for (AtomId root = 0; root < n; ++root) {
      if (index[root] >= 0) continue;
      std::vector<std::pair<AtomId, std::size_t>> frames{{root, 0}};
      index[root] = low[root] = counter++;
      stack.push_back(root);
      on_stack[root] = 1;
      while (!frames.empty()) {
        auto& [v, i] = frames.back();
        if (i < edges[v].size()) {
          AtomId w = edges[v][i++];
          if (index[w] < 0) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            on_stack[w] = 1;
            frames.push_back({w, 0});
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
          continue;
        }
        if (low[v] == index[v]) {
          std::vector<AtomId> comp;
          AtomId w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            component_[w] = atoms_.size();
            comp.push_back(w);
          } while (w != v);
          atoms_.push_back(std::move(comp));
        }
        AtomId done = v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      }
    }

    head_rules_.assign(atoms_.size(), {});
    for (std::size_t r = 0; r < p_.rules.size(); ++r) {
      std::vector<std::size_t> seen;
      for (auto h : p_.rules[r].head) {
        auto c = component_[h];
        if (std::find(seen.begin(), seen.end(), c) == seen.end()) {
          seen.push_back(c);
          head_rules_[c].push_back(r);
        }
      }
    }

    hcf_.assign(atoms_.size(), true);
    for (std::size_t c = 0; c < atoms_.size(); ++c) {
      bool cyclic = atoms_[c].size() > 1;
      for (auto r : head_rules_[c]) {
        const auto& rule = p_.rules[r];
        for (auto b : rule.pos)
          if (atoms_[c].size() == 1 && b == atoms_[c][0] &&
              std::find(rule.head.begin(), rule.head.end(), b) != rule.head.end())
            cyclic = true;
        std::size_t in_comp = 0;
        for (auto h : rule.head) in_comp += component_[h] == c;
        if (in_comp > 1) hcf_[c] = false;
      }
      if (cyclic) {
        cyclic_.push_back(c);
        if (!hcf_[c] && atoms_[c].size() > kMaxDisjunctiveComponent)
          throw std::runtime_error("non-head-cycle-free component of " +
                                   std::to_string(atoms_[c].size()) + " atoms is too large");
      }
    }
  }

  bool fully_assigned(std::size_t c, const Assignment& a) const {
    for (auto x : atoms_[c])
      if (!a.assigned(x)) return false;
    for (auto r : head_rules_[c]) {
      if (!a.assigned(enc_.rule_body[r])) return false;
      for (auto h : p_.rules[r].head)
        if (!a.assigned(h)) return false;
    }
    return true;
  }

  /// Rules with a head atom in U and no positive body atom in U.
  std::vector<std::size_t> rules_of(const std::vector<AtomId>& u, const std::vector<char>& in_u) const {
    std::vector<std::size_t> out;
    std::vector<std::size_t> comps;
    for (auto x : u)
      if (std::find(comps.begin(), comps.end(), component_[x]) == comps.end()) comps.push_back(component_[x]);
    for (auto c : comps) {
      for (auto r : head_rules_[c]) {
        if (std::find(out.begin(), out.end(), r) != out.end()) continue;
        const auto& rule = p_.rules[r];
        bool hits = std::any_of(rule.head.begin(), rule.head.end(), [&](AtomId h) { return in_u[h]; });
        bool internal = std::any_of(rule.pos.begin(), rule.pos.end(), [&](AtomId b) { return in_u[b]; });
        if (hits && !internal) out.push_back(r);
      }
    }
    return out;
  }

  bool supports(std::size_t r, const std::vector<char>& in_u, const Assignment& a) const {
    if (a.value(enc_.rule_body[r]) != Value::True) return false;
    for (auto h : p_.rules[r].head)
      if (!in_u[h] && a.value(h) != Value::False) return false;
    return true;
  }

  /// Head-cycle-free components: true atoms not derivable from outside
  /// support by a fixpoint form the greatest unfounded set within c.
  std::vector<AtomId> greatest_unfounded(std::size_t c, const Assignment& a) const {
    std::vector<char> founded(p_.atoms.size(), 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto r : head_rules_[c]) {
        const auto& rule = p_.rules[r];
        if (a.value(enc_.rule_body[r]) != Value::True) continue;
        if (!std::all_of(rule.pos.begin(), rule.pos.end(),
                         [&](AtomId b) { return component_[b] != c || founded[b]; }))
          continue;
        for (auto h : rule.head) {
          if (component_[h] != c || founded[h]) continue;
          bool others_false = std::all_of(rule.head.begin(), rule.head.end(), [&](AtomId o) {
            return o == h || a.value(o) == Value::False;
          });
          if (others_false) {
            founded[h] = 1;
            changed = true;
          }
        }
      }
    }
    std::vector<AtomId> u;
    for (auto x : atoms_[c])
      if (a.value(x) == Value::True && !founded[x]) u.push_back(x);
    return u;
  }

  std::vector<AtomId> brute_force(std::size_t c, const Assignment& a) const {
    std::vector<AtomId> truth;
    for (auto x : atoms_[c])
      if (a.value(x) == Value::True) truth.push_back(x);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << truth.size()); ++mask) {
      std::vector<AtomId> u;
      for (std::size_t i = 0; i < truth.size(); ++i)
        if (mask >> i & 1) u.push_back(truth[i]);
      if (is_unfounded(u, a)) return u;
    }
    return {};
  }

  const GuessingProgram& p_;
  const ProgramEncoding& enc_;
  std::vector<std::size_t> component_;
  std::vector<std::vector<AtomId>> atoms_;
  std::vector<std::vector<std::size_t>> head_rules_;
  std::vector<char> hcf_;
  std::vector<std::size_t> cyclic_;
};

}  // namespace hexcdnl
