#pragma once

// Built-in external sources: diff, empty, concat, union, tc, sudokuCheck.

#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <string>

#include "hexcdnl/source.hpp"

namespace hexcdnl::builtins {

/// &diff[p,q](X): X in ext(p) \ ext(q). Monotonic in p. Its user learning
/// works elementwise: T p(x), F q(x) forces the output x.
inline ExternalSourceDescriptor diff() {
  ExternalSourceDescriptor d;
  d.name = "diff";
  d.inputs = {InputKind::Predicate, InputKind::Predicate};
  d.output_arity = 1;
  d.oracle = [](const SourceQuery& q) {
    TupleSet out;
    for (const auto& t : q.extension(0))
      if (t.size() == 1 && !q.extension(1).contains(t)) out.insert(t);
    return out;
  };
  d.properties.monotonic = {0};
  d.user_learn = [](const SourceQuery&, const TupleSet& outputs) {
    std::vector<SymbolicNogood> out;
    for (const auto& t : outputs) {
      out.push_back({SymbolicLiteral::input_atom(true, 0, t),
                     SymbolicLiteral::input_atom(false, 1, t),
                     SymbolicLiteral::output_atom(false, t)});
    }
    return out;
  };
  return d;
}

/// &empty[p](X): c0 if ext(p) is empty, c1 otherwise.
inline ExternalSourceDescriptor empty() {
  ExternalSourceDescriptor d;
  d.name = "empty";
  d.inputs = {InputKind::Predicate};
  d.output_arity = 1;
  d.oracle = [](const SourceQuery& q) {
    return TupleSet{Tuple{q.extension(0).empty() ? "c0" : "c1"}};
  };
  return d;
}

/// &concat[a,b](C): C is the concatenation of the constants a and b.
inline ExternalSourceDescriptor concat() {
  ExternalSourceDescriptor d;
  d.name = "concat";
  d.inputs = {InputKind::Constant, InputKind::Constant};
  d.output_arity = 1;
  d.oracle = [](const SourceQuery& q) {
    return TupleSet{Tuple{q.constant(0) + q.constant(1)}};
  };
  d.properties.functional = true;
  return d;
}

/// &union[p,q](X): X in ext(p) or ext(q). Monotonic in both inputs.
inline ExternalSourceDescriptor set_union() {
  ExternalSourceDescriptor d;
  d.name = "union";
  d.inputs = {InputKind::Predicate, InputKind::Predicate};
  d.output_arity = 1;
  d.oracle = [](const SourceQuery& q) {
    TupleSet out;
    for (std::size_t i = 0; i < 2; ++i)
      for (const auto& t : q.extension(i))
        if (t.size() == 1) out.insert(t);
    return out;
  };
  d.properties.monotonic = {0, 1};
  return d;
}

namespace detail {

using Graph = std::map<std::string, std::set<std::string>>;

inline Graph edges_of(const TupleSet& ext) {
  Graph g;
  for (const auto& t : ext)
    if (t.size() == 2) g[t[0]].insert(t[1]);
  return g;
}

/// Shortest edge path from `from` to `to`, as a list of edges.
inline std::vector<Tuple> shortest_path(const Graph& g, const std::string& from,
                                        const std::string& to) {
  std::map<std::string, std::string> parent;
  std::deque<std::string> queue{from};
  std::set<std::string> seen{from};
  bool found = false;
  while (!queue.empty() && !found) {
    auto u = queue.front();
    queue.pop_front();
    auto it = g.find(u);
    if (it == g.end()) continue;
    for (const auto& v : it->second) {
      if (v == to) {
        parent[v] = u;
        found = true;
        break;
      }
      if (seen.insert(v).second) {
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  std::vector<Tuple> path;
  if (!found) return path;
  std::string v = to;
  do {
    const auto& u = parent.at(v);
    path.push_back({u, v});
    v = u;
  } while (v != from);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

/// &tc[r](V,W): edges of the transitive closure of ext(r) missing from ext(r).
/// Nonmonotonic. User learning names only the edges of one shortest witness
/// path plus the missing edge.
inline ExternalSourceDescriptor tc() {
  ExternalSourceDescriptor d;
  d.name = "tc";
  d.inputs = {InputKind::Predicate};
  d.output_arity = 2;
  d.oracle = [](const SourceQuery& q) {
    auto g = detail::edges_of(q.extension(0));
    TupleSet out;
    for (const auto& [from, _] : g) {
      std::set<std::string> reach;
      std::deque<std::string> queue{from};
      while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        auto it = g.find(u);
        if (it == g.end()) continue;
        for (const auto& v : it->second)
          if (reach.insert(v).second) queue.push_back(v);
      }
      for (const auto& v : reach)
        if (!g.at(from).contains(v)) out.insert({from, v});
    }
    return out;
  };
  d.user_learn = [](const SourceQuery& q, const TupleSet& outputs) {
    auto g = detail::edges_of(q.extension(0));
    std::vector<SymbolicNogood> out;
    for (const auto& missing : outputs) {
      SymbolicNogood ng;
      for (auto& edge : detail::shortest_path(g, missing[0], missing[1]))
        ng.push_back(SymbolicLiteral::input_atom(true, 0, std::move(edge)));
      ng.push_back(SymbolicLiteral::input_atom(false, 0, missing));
      ng.push_back(SymbolicLiteral::output_atom(false, missing));
      out.push_back(std::move(ng));
    }
    return out;
  };
  return d;
}

namespace detail {

struct Placement {
  int row, col;
  std::string digit;
  Tuple atom;  // the original val/3 tuple
};

inline std::optional<int> to_int(const std::string& s) {
  if (s.empty() || s.size() > 3) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

inline std::vector<Placement> placements(const TupleSet& ext, int& size) {
  std::vector<Placement> out;
  int largest = 1;
  for (const auto& t : ext) {
    if (t.size() != 3) continue;
    auto r = to_int(t[0]), c = to_int(t[1]), v = to_int(t[2]);
    if (!r || !c) continue;
    largest = std::max({largest, *r, *c, v.value_or(1)});
    out.push_back({*r, *c, t[2], t});
  }
  int box = 2;
  while (box * box < largest) ++box;
  size = box;
  return out;
}

inline bool same_unit(const Placement& a, const Placement& b, int box) {
  if (a.row == b.row || a.col == b.col) return true;
  return (a.row - 1) / box == (b.row - 1) / box && (a.col - 1) / box == (b.col - 1) / box;
}

}  // namespace detail

/// &sudokuCheck[val](R,C,R2,C2): pairs of distinct cells (R,C) < (R2,C2) that
/// share a row, column or box and carry the same digit in ext(val). Adding
/// placements only adds conflicts, so the input is monotonic. User learning
/// blames exactly the two clashing placements.
inline ExternalSourceDescriptor sudoku_check() {
  ExternalSourceDescriptor d;
  d.name = "sudokuCheck";
  d.inputs = {InputKind::Predicate};
  d.output_arity = 4;
  d.oracle = [](const SourceQuery& q) {
    int box = 2;
    auto ps = detail::placements(q.extension(0), box);
    TupleSet out;
    for (const auto& a : ps) {
      for (const auto& b : ps) {
        if (std::pair(a.row, a.col) >= std::pair(b.row, b.col)) continue;
        if (a.digit == b.digit && detail::same_unit(a, b, box))
          out.insert({a.atom[0], a.atom[1], b.atom[0], b.atom[1]});
      }
    }
    return out;
  };
  d.properties.monotonic = {0};
  d.user_learn = [](const SourceQuery& q, const TupleSet& outputs) {
    int box = 2;
    auto ps = detail::placements(q.extension(0), box);
    std::vector<SymbolicNogood> out;
    for (const auto& o : outputs) {
      for (const auto& a : ps) {
        if (a.atom[0] != o[0] || a.atom[1] != o[1]) continue;
        for (const auto& b : ps) {
          if (b.atom[0] != o[2] || b.atom[1] != o[3] || b.digit != a.digit) continue;
          out.push_back({SymbolicLiteral::input_atom(true, 0, a.atom),
                         SymbolicLiteral::input_atom(true, 0, b.atom),
                         SymbolicLiteral::output_atom(false, o)});
        }
      }
    }
    return out;
  };
  return d;
}

}  // namespace hexcdnl::builtins

namespace hexcdnl {

/// A registry holding every built-in source.
inline SourceRegistry builtin_registry() {
  SourceRegistry r;
  r.add(builtins::diff());
  r.add(builtins::empty());
  r.add(builtins::concat());
  r.add(builtins::set_union());
  r.add(builtins::tc());
  r.add(builtins::sudoku_check());
  return r;
}

}  // namespace hexcdnl
