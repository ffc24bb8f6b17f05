#pragma once

// Instantiation of HEX programs over their constants.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hexcdnl/parser.hpp"

namespace hexcdnl {

class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroundExternalAtom {
  std::string source;
  std::vector<std::string> inputs;
  std::vector<InputKind> kinds;
  Tuple outputs;

  /// "&g[p,q]": identifies the external predicate with its input list.
  std::string key() const {
    std::string k = "&" + source + "[";
    for (std::size_t i = 0; i < inputs.size(); ++i) k += (i ? "," : "") + inputs[i];
    return k + "]";
  }

  friend bool operator==(const GroundExternalAtom& a, const GroundExternalAtom& b) {
    return a.source == b.source && a.inputs == b.inputs && a.outputs == b.outputs;
  }
  friend auto operator<=>(const GroundExternalAtom& a, const GroundExternalAtom& b) {
    return std::tie(a.source, a.inputs, a.outputs) <=> std::tie(b.source, b.inputs, b.outputs);
  }
};

struct GroundBodyLiteral {
  bool external = false;
  std::size_t index = 0;  // AtomId, or position in GroundProgram::externals
  bool negated = false;
  friend auto operator<=>(const GroundBodyLiteral&, const GroundBodyLiteral&) = default;
};

struct GroundRule {
  std::vector<AtomId> head;
  std::vector<GroundBodyLiteral> body;
  friend auto operator<=>(const GroundRule&, const GroundRule&) = default;

  bool is_fact() const { return head.size() == 1 && body.empty(); }
};

struct GroundProgram {
  AtomTable atoms;
  std::vector<GroundRule> rules;
  std::vector<GroundExternalAtom> externals;  // distinct ground external atoms
};

namespace detail {

using Binding = std::map<std::string, std::string>;

inline std::string resolve(const ast::Term& t, const Binding& b) {
  if (!t.variable) return t.text;
  return b.at(t.text);
}

inline Tuple instantiate(const std::vector<ast::Term>& terms, const Binding& b) {
  Tuple out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(resolve(t, b));
  return out;
}

class Grounder {
 public:
  explicit Grounder(const ast::Program& p) : program_(p) {}

  GroundProgram run() {
    check_safety();
    derive_domain();
    GroundProgram out;
    std::set<GroundRule> seen;
    std::map<GroundExternalAtom, std::size_t> ext_index;
    for (const auto& rule : program_.statements) {
      for_each_instance(rule, [&](const Binding& b) {
        GroundRule g;
        for (const auto& h : rule.head) g.head.push_back(out.atoms.intern(h.predicate, instantiate(h.args, b)));
        for (const auto& e : rule.body) {
          if (const auto* a = std::get_if<ast::Atom>(&e.expr)) {
            g.body.push_back({false, out.atoms.intern(a->predicate, instantiate(a->args, b)), e.negated});
          } else if (const auto* x = std::get_if<ast::ExternalAtom>(&e.expr)) {
            GroundExternalAtom ge{x->source, instantiate(x->inputs, b), x->kinds, instantiate(x->outputs, b)};
            auto [it, inserted] = ext_index.try_emplace(ge, out.externals.size());
            if (inserted) out.externals.push_back(ge);
            g.body.push_back({true, it->second, e.negated});
          }
        }
        std::sort(g.head.begin(), g.head.end());
        g.head.erase(std::unique(g.head.begin(), g.head.end()), g.head.end());
        if (seen.insert(g).second) out.rules.push_back(std::move(g));
      });
    }
    return out;
  }

 private:
  static void collect_vars(const std::vector<ast::Term>& ts, std::set<std::string>& out) {
    for (const auto& t : ts)
      if (t.variable) out.insert(t.text);
  }

  void check_safety() const {
    bool has_variables = false;
    std::set<std::string> constants;
    auto note_constants = [&](const std::vector<ast::Term>& ts) {
      for (const auto& t : ts)
        if (!t.variable) constants.insert(t.text);
    };
    for (const auto& rule : program_.statements) {
      std::set<std::string> bound, used;
      for (const auto& h : rule.head) {
        collect_vars(h.args, used);
        note_constants(h.args);
      }
      for (const auto& e : rule.body) {
        if (const auto* a = std::get_if<ast::Atom>(&e.expr)) {
          collect_vars(a->args, e.negated ? used : bound);
          note_constants(a->args);
        } else if (const auto* x = std::get_if<ast::ExternalAtom>(&e.expr)) {
          collect_vars(x->inputs, used);
          collect_vars(x->outputs, used);
          note_constants(x->outputs);
          for (std::size_t i = 0; i < x->inputs.size(); ++i)
            if (x->kinds[i] == InputKind::Constant) note_constants({x->inputs[i]});
        } else {
          const auto& b = std::get<ast::Builtin>(e.expr);
          collect_vars({b.lhs, b.rhs}, used);
          note_constants({b.lhs, b.rhs});
        }
      }
      if (!bound.empty() || !used.empty()) has_variables = true;
      for (const auto& v : used)
        if (!bound.contains(v))
          throw GroundingError("unsafe variable " + v + " in rule at line " +
                               std::to_string(rule.location.line));
    }
    if (has_variables && constants.empty())
      throw GroundingError("program has variables but no constants");
  }

  static bool has_variables(const ast::Rule& r) {
    auto any = [](const std::vector<ast::Term>& ts) {
      return std::any_of(ts.begin(), ts.end(), [](const ast::Term& t) { return t.variable; });
    };
    for (const auto& h : r.head)
      if (any(h.args)) return true;
    for (const auto& e : r.body) {
      if (const auto* a = std::get_if<ast::Atom>(&e.expr); a && any(a->args)) return true;
      if (const auto* x = std::get_if<ast::ExternalAtom>(&e.expr); x && (any(x->inputs) || any(x->outputs)))
        return true;
      if (const auto* b = std::get_if<ast::Builtin>(&e.expr); b && (b->lhs.variable || b->rhs.variable))
        return true;
    }
    return false;
  }

  /// Over-approximates the derivable atoms: negation and external atoms are
  /// treated as satisfiable.
  void derive_domain() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& rule : program_.statements) {
        enumerate(rule, /*require_domain=*/true, [&](const Binding& b) {
          for (const auto& h : rule.head)
            if (domain_[h.predicate].insert(instantiate(h.args, b)).second) changed = true;
        });
      }
    }
  }

  template <class F>
  void for_each_instance(const ast::Rule& rule, F&& f) {
    // Variable-free rules are kept verbatim.
    enumerate(rule, has_variables(rule), f);
  }

  template <class F>
  void enumerate(const ast::Rule& rule, bool require_domain, F&& f) {
    std::vector<const ast::Atom*> positive;
    std::vector<const ast::Builtin*> builtins;
    for (const auto& e : rule.body) {
      if (const auto* a = std::get_if<ast::Atom>(&e.expr); a && !e.negated) positive.push_back(a);
      if (const auto* b = std::get_if<ast::Builtin>(&e.expr)) builtins.push_back(b);
    }
    Binding binding;
    join(positive, 0, builtins, binding, require_domain, f);
  }

  template <class F>
  void join(const std::vector<const ast::Atom*>& atoms, std::size_t i,
            const std::vector<const ast::Builtin*>& builtins, Binding& binding, bool require_domain,
            F& f) {
    if (i == atoms.size()) {
      for (const auto* b : builtins) {
        bool eq = resolve(b->lhs, binding) == resolve(b->rhs, binding);
        if (eq != b->equal) return;
      }
      f(binding);
      return;
    }
    const auto& atom = *atoms[i];
    if (!require_domain) {
      join(atoms, i + 1, builtins, binding, require_domain, f);
      return;
    }
    auto it = domain_.find(atom.predicate);
    if (it == domain_.end()) return;
    for (const auto& tuple : it->second) {
      if (tuple.size() != atom.args.size()) continue;
      Binding saved = binding;
      bool ok = true;
      for (std::size_t k = 0; k < tuple.size() && ok; ++k) {
        const auto& t = atom.args[k];
        if (!t.variable) {
          ok = t.text == tuple[k];
        } else if (auto b = binding.find(t.text); b != binding.end()) {
          ok = b->second == tuple[k];
        } else {
          binding[t.text] = tuple[k];
        }
      }
      if (ok) join(atoms, i + 1, builtins, binding, require_domain, f);
      binding = std::move(saved);
    }
  }

  const ast::Program& program_;
  std::map<std::string, std::set<Tuple>> domain_;
};

}  // namespace detail

/// Instantiates every rule by joining its positive ordinary body atoms with
/// the atoms that could possibly be derived. Builtins are evaluated and
/// removed; instances with a false builtin are dropped.
inline GroundProgram ground(const ast::Program& program) {
  return detail::Grounder(program).run();
}

}  // namespace hexcdnl
