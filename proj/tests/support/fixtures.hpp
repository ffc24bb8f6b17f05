#pragma once

// Shared programs and helpers for the unit and acceptance tests.

#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hexcdnl/hexcdnl.hpp"
#include "support/reference.hpp"

namespace fixtures {

inline const char* const kEmptyExample =
    "p(c0). dom(c0). dom(c1). dom(c2).\n"
    "p(X) :- dom(X), &empty[p](X).\n";

/// Ten 4x4 puzzles with unique solutions and six empty cells each.
inline const std::vector<std::string>& sudoku_puzzles() {
  static const std::vector<std::string> puzzles{
      "2..1/.123/.4.2/1.34", ".214/.123/..3./2.41", "243./.3.2/.21./312.",
      "1423/3.4./2.14/...2", "2.3./.124/12../.312", "2.4./4..1/.43./3214",
      "12.4/3.../41.3/2.41", ".4.3/3..2/1234/.32.", ".312/.234/..2./214.",
      ".124/4.13/.4.1/..42",
  };
  return puzzles;
}

/// "12.4/3..." into grid text with one row per line.
inline std::string grid_text(const std::string& compact) {
  std::string out;
  for (char c : compact) out += c == '/' ? '\n' : c;
  return out + "\n";
}

/// The grid described by the val/3 atoms of an answer set.
inline reference::Grid grid_of(const std::vector<std::string>& answer_set, std::size_t n) {
  reference::Grid g(n, std::vector<int>(n, 0));
  for (const auto& atom : answer_set) {
    int r, c, v;
    if (std::sscanf(atom.c_str(), "val(%d,%d,%d)", &r, &c, &v) == 3) g[r - 1][c - 1] = v;
  }
  return g;
}

using AnswerSets = std::set<std::set<std::string>>;

inline AnswerSets as_sets(const std::vector<std::vector<std::string>>& answer_sets) {
  AnswerSets out;
  for (const auto& as : answer_sets) out.insert(std::set<std::string>(as.begin(), as.end()));
  return out;
}

inline std::set<std::string> literal_names(const hexcdnl::Nogood& n, const hexcdnl::AtomTable& t) {
  std::set<std::string> out;
  for (auto l : n.literals()) out.insert(hexcdnl::to_string(l, t));
  return out;
}

inline const std::vector<hexcdnl::EblMode>& all_modes() {
  static const std::vector<hexcdnl::EblMode> modes{hexcdnl::EblMode::Off, hexcdnl::EblMode::General,
                                                   hexcdnl::EblMode::Informed, hexcdnl::EblMode::User};
  return modes;
}

/// Checks a learned nogood against brute-force compatible sets. Returns the
/// number of compatible sets containing every literal of the nogood, or -1
/// if the nogood mentions an atom the reference does not know.
inline int violations(const hexcdnl::Nogood& n, const hexcdnl::AtomTable& t,
                      const std::vector<reference::NamedAssignment>& compatible) {
  int count = 0;
  for (const auto& c : compatible) {
    bool all = true;
    for (auto l : n.literals()) {
      auto it = c.find(t.name(l.atom()));
      if (it == c.end()) return -1;
      if (it->second != l.positive()) {
        all = false;
        break;
      }
    }
    count += all;
  }
  return count;
}

/// The general nogood for the same assignment and output tuple as the
/// monotonic nogood of `ev`.
inline std::optional<hexcdnl::Nogood> general_counterpart(const hexcdnl::LearnEvent& ev) {
  const auto& p = ev.program;
  for (const auto& c : ev.outputs) {
    auto e = p.units[ev.unit].e_atom(c, p.replacements);
    if (!e || !ev.nogood.contains(hexcdnl::neg_lit(*e))) continue;
    auto g = hexcdnl::lambda_general(p, ev.unit, ev.assignment, hexcdnl::TupleSet{c});
    if (g.size() == 1) return g[0];
  }
  return std::nullopt;
}

}  // namespace fixtures
