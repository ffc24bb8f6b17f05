#pragma once

// Static nogoods of an ordinary program: Clark's completion and the support
// nogoods of the shifted program.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hexcdnl/guessing.hpp"

namespace hexcdnl {

/// Fresh atoms standing for rule bodies. Bodies with the same literal set
/// share one atom.
class BodyAtoms {
 public:
  /// Returns the body atom for the given literals and whether it is new.
  std::pair<AtomId, bool> get(std::vector<Literal> tlits, AtomTable& table) {
    std::sort(tlits.begin(), tlits.end());
    tlits.erase(std::unique(tlits.begin(), tlits.end()), tlits.end());
    if (auto it = index_.find(tlits); it != index_.end()) return {it->second, false};
    AtomId id = table.intern("#body", {std::to_string(index_.size())}, AtomKind::Body);
    index_.emplace(std::move(tlits), id);
    return {id, true};
  }

  std::size_t size() const { return index_.size(); }

 private:
  std::map<std::vector<Literal>, AtomId> index_;
};

/// gamma(C): {F B} plus the literals of C, and {T B, ~l} for every l in C.
inline std::vector<Nogood> gamma(std::span<const Literal> tlits, AtomId body,
                                 NogoodOrigin origin = NogoodOrigin::StaticCompletion) {
  std::vector<Nogood> out;
  std::vector<Literal> all{neg_lit(body)};
  all.insert(all.end(), tlits.begin(), tlits.end());
  if (auto n = Nogood::make(std::move(all), origin)) out.push_back(std::move(*n));
  for (auto l : tlits)
    if (auto n = Nogood::make({pos_lit(body), ~l}, origin)) out.push_back(std::move(*n));
  return out;
}

inline std::vector<Literal> body_literals(const OrdinaryRule& r) {
  std::vector<Literal> out;
  for (auto a : r.pos) out.push_back(pos_lit(a));
  for (auto a : r.neg) out.push_back(neg_lit(a));
  return out;
}

struct ProgramEncoding {
  std::vector<Nogood> nogoods;
  std::vector<AtomId> rule_body;  // completion body atom per rule
  BodyAtoms body_atoms;
};

/// Completion nogoods: gamma(B(r)) and {T B(r), F h1, ..., F hk} per rule.
inline void completion_nogoods(GuessingProgram& p, ProgramEncoding& enc) {
  enc.rule_body.clear();
  for (const auto& r : p.rules) {
    auto tlits = body_literals(r);
    auto [body, fresh] = enc.body_atoms.get(tlits, p.atoms);
    enc.rule_body.push_back(body);
    if (fresh)
      for (auto& n : gamma(tlits, body, NogoodOrigin::StaticCompletion)) enc.nogoods.push_back(std::move(n));
    std::vector<Literal> head{pos_lit(body)};
    for (auto h : r.head) head.push_back(neg_lit(h));
    if (auto n = Nogood::make(std::move(head), NogoodOrigin::StaticCompletion))
      enc.nogoods.push_back(std::move(*n));
  }
}

/// Shifts every disjunctive rule into normal rules a_i <- B, not a_j (j != i)
/// and requires each true non-body atom to have a true shifted body.
inline void shifted_nogoods(GuessingProgram& p, ProgramEncoding& enc) {
  std::size_t program_atoms = 0;
  for (AtomId a = 0; a < p.atoms.size(); ++a)
    if (p.atoms.info(a).kind != AtomKind::Body) program_atoms = a + 1;
  std::vector<std::vector<Literal>> support(program_atoms);
  for (AtomId a = 0; a < program_atoms; ++a)
    if (p.atoms.info(a).kind != AtomKind::Body) support[a].push_back(pos_lit(a));

  for (const auto& r : p.rules) {
    for (auto h : r.head) {
      auto tlits = body_literals(r);
      for (auto other : r.head)
        if (other != h) tlits.push_back(neg_lit(other));
      auto [body, fresh] = enc.body_atoms.get(tlits, p.atoms);
      if (fresh)
        for (auto& n : gamma(tlits, body, NogoodOrigin::StaticShift)) enc.nogoods.push_back(std::move(n));
      support[h].push_back(neg_lit(body));
    }
  }
  for (AtomId a = 0; a < program_atoms; ++a) {
    if (support[a].empty()) continue;
    if (auto n = Nogood::make(std::move(support[a]), NogoodOrigin::StaticShift))
      enc.nogoods.push_back(std::move(*n));
  }
}

inline ProgramEncoding encode(GuessingProgram& p) {
  ProgramEncoding enc;
  completion_nogoods(p, enc);
  shifted_nogoods(p, enc);
  return enc;
}

}  // namespace hexcdnl
