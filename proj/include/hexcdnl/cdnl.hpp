#pragma once

// Conflict-driven nogood learning: unit propagation with two watched
// literals, first-UIP conflict analysis and backjumping.

#include <random>
#include <unordered_map>
#include <vector>

#include "hexcdnl/core.hpp"

namespace hexcdnl {

enum class Heuristic : std::uint8_t { Lexicographic, Activity };

struct SolverStats {
  std::size_t decisions = 0;
  std::size_t propagations = 0;
  std::size_t conflicts = 0;
  std::size_t learned = 0;  // conflict nogoods
};

struct Analysis {
  Nogood learned;
  Literal uip;
  int backjump_level = 0;
};

class NogoodSolver {
 public:
  explicit NogoodSolver(std::size_t atoms, Heuristic heuristic = Heuristic::Lexicographic,
                        std::uint64_t seed = 0)
      : assignment_(atoms), watches_(2 * atoms), heuristic_(heuristic), activity_(atoms, 0.0) {
    if (seed != 0) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> jitter(0.0, 1e-3);
      for (auto& a : activity_) a = jitter(rng);
    }
  }

  const Assignment& assignment() const { return assignment_; }
  int decision_level() const { return level_; }
  bool inconsistent() const { return inconsistent_; }
  const SolverStats& stats() const { return stats_; }
  std::size_t nogood_count() const { return store_.size(); }
  const Nogood& nogood(std::size_t id) const { return store_[id].canonical; }

  /// Adds a nogood and restores the watch invariant for the current
  /// assignment, backjumping when the nogood is unit or violated below the
  /// current level. Returns false once the nogood set is unsatisfiable.
  /// `inserted` reports whether the nogood was new.
  bool add(const Nogood& ng, bool* inserted = nullptr) {
    if (inserted) *inserted = false;
    if (inconsistent_) return false;
    if (ng.empty()) return fail();
    if (index_.contains(ng)) return true;
    if (inserted) *inserted = true;
    auto id = store(ng);
    const auto& lits = store_[id].lits;

    if (lits.size() == 1) {
      Literal l = lits[0];
      backjump(0);
      if (assignment_.holds(l)) return fail();
      if (!assignment_.assigned(l.atom())) assign(~l, 0, id);
      return true;
    }

    order_watches(id);
    auto& w = store_[id].lits;
    bool first_true = assignment_.holds(w[0]);
    bool second_true = assignment_.holds(w[1]);
    if (!first_true && !second_true) {
      attach(id);
      return true;
    }
    if (!first_true) {
      // Only w[0] is not true: the nogood is unit or satisfied by w[0].
      int lt = level_of(w[1]);
      if (!assignment_.assigned(w[0].atom())) {
        backjump(lt);
        attach(id);
        assign(~w[0], lt, id);
      } else if (level_of(w[0]) > lt) {
        backjump(lt);
        attach(id);
        assign(~w[0], lt, id);
      } else {
        attach(id);
      }
      return true;
    }
    // Violated.
    attach(id);
    return resolve_conflict(id);
  }

  bool add(std::vector<Literal> lits, NogoodOrigin origin, bool* inserted = nullptr) {
    auto ng = Nogood::make(std::move(lits), origin);
    if (!ng) {
      if (inserted) *inserted = false;
      return !inconsistent_;
    }
    return add(*ng, inserted);
  }

  /// Unit propagation to fixpoint. Returns the id of a violated nogood.
  std::optional<std::size_t> propagate_once() {
    if (inconsistent_) return std::nullopt;
    while (qhead_ < assignment_.trail().size()) {
      Literal l = assignment_.trail()[qhead_++];
      auto& list = watches_[l.code()];
      std::size_t keep = 0;
      std::optional<std::size_t> conflict;
      for (std::size_t i = 0; i < list.size(); ++i) {
        auto id = list[i];
        if (conflict) {
          list[keep++] = id;
          continue;
        }
        auto& lits = store_[id].lits;
        if (lits[0] == l) std::swap(lits[0], lits[1]);
        // lits[1] == l is now true; find a non-true replacement.
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (!assignment_.holds(lits[k])) {
            std::swap(lits[1], lits[k]);
            watches_[lits[1].code()].push_back(id);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        list[keep++] = id;
        Literal other = lits[0];
        if (assignment_.falsified(other)) continue;
        if (!assignment_.assigned(other.atom())) {
          assign(~other, level_, id);
          ++stats_.propagations;
          continue;
        }
        conflict = id;
      }
      list.resize(keep);
      if (conflict) return conflict;
    }
    return std::nullopt;
  }

  /// Propagates and resolves conflicts until a conflict-free fixpoint.
  /// Returns false if the nogoods are unsatisfiable.
  bool propagate() {
    while (!inconsistent_) {
      auto c = propagate_once();
      if (!c) return true;
      if (!resolve_conflict(*c)) return false;
    }
    return false;
  }

  /// First-UIP analysis of a violated nogood at the current level.
  Analysis analyze(std::size_t conflict) {
    const auto& start = store_[conflict].canonical.literals();
    int dl = 0;
    for (auto l : start) dl = std::max(dl, level_of(l));
    std::vector<char> seen(assignment_.atom_count(), 0);
    std::vector<Literal> learned;
    int at_level = 0;
    auto mark = [&](Literal q) {
      if (seen[q.atom()]) return;
      int lv = level_of(q);
      if (lv == 0) return;
      seen[q.atom()] = 1;
      if (lv == dl) ++at_level;
      else learned.push_back(q);
    };
    for (auto l : start) mark(l);
    auto trail = assignment_.trail();
    std::size_t idx = trail.size();
    Literal uip;
    while (true) {
      do --idx;
      while (!seen[trail[idx].atom()]);
      Literal p = trail[idx];
      seen[p.atom()] = 0;
      if (--at_level == 0) {
        uip = p;
        break;
      }
      auto r = assignment_.reason(p.atom());
      assert(r >= 0);
      for (auto q : store_[static_cast<std::size_t>(r)].canonical.literals())
        if (q != ~p) mark(q);
    }
    int k = 0;
    for (auto q : learned) k = std::max(k, level_of(q));
    learned.push_back(uip);
    auto ng = Nogood::make(std::move(learned), NogoodOrigin::Conflict);
    assert(ng);
    return {std::move(*ng), uip, k};
  }

  /// Learns from a violated nogood and asserts the negated UIP at the
  /// backjump level. Returns false when the conflict is at level 0.
  bool resolve_conflict(std::size_t conflict) {
    ++stats_.conflicts;
    int m = 0;
    for (auto l : store_[conflict].lits) m = std::max(m, level_of(l));
    if (m == 0) return fail();
    if (m < level_) backjump(m);
    auto a = analyze(conflict);
    for (auto l : a.learned.literals()) bump(l.atom());
    decay();
    std::size_t id;
    if (auto it = index_.find(a.learned); it != index_.end()) {
      id = it->second;
      detach(id);
    } else {
      id = store(a.learned);
      ++stats_.learned;
    }
    backjump(a.backjump_level);
    auto& lits = store_[id].lits;
    if (lits.size() >= 2) {
      // Watch the UIP and the most recently assigned other literal.
      auto u = std::find(lits.begin(), lits.end(), a.uip);
      std::iter_swap(lits.begin(), u);
      auto best = std::max_element(lits.begin() + 1, lits.end(), [&](Literal x, Literal y) {
        return assignment_.trail_position(x.atom()) < assignment_.trail_position(y.atom());
      });
      std::iter_swap(lits.begin() + 1, best);
      attach(id);
    }
    assign(~a.uip, a.backjump_level, id);
    return true;
  }

  /// Opens a new decision level with `l` as choice.
  void decide(Literal l) {
    assert(!assignment_.assigned(l.atom()));
    ++level_;
    ++stats_.decisions;
    assign(l, level_, Assignment::kChoice);
  }

  /// Picks an unassigned atom, negative sign first. Requires an incomplete
  /// assignment.
  Literal select() const {
    std::optional<AtomId> best;
    for (AtomId a = 0; a < assignment_.atom_count(); ++a) {
      if (assignment_.assigned(a)) continue;
      if (heuristic_ == Heuristic::Lexicographic) return neg_lit(a);
      if (!best || activity_[a] > activity_[*best]) best = a;
    }
    assert(best);
    return neg_lit(*best);
  }

  void backjump(int level) {
    if (level >= level_) return;
    assignment_.backtrack_to(level);
    level_ = level;
    qhead_ = std::min(qhead_, assignment_.trail().size());
  }

  double activity(AtomId a) const { return activity_[a]; }

 private:
  struct Stored {
    Nogood canonical;
    std::vector<Literal> lits;  // lits[0], lits[1] are watched
  };

  bool fail() {
    inconsistent_ = true;
    return false;
  }

  int level_of(Literal l) const { return assignment_.level(l.atom()); }

  std::size_t store(const Nogood& ng) {
    auto id = store_.size();
    store_.push_back({ng, std::vector<Literal>(ng.literals().begin(), ng.literals().end())});
    index_.emplace(ng, id);
    return id;
  }

  void assign(Literal l, int level, std::size_t reason) {
    assign(l, level, static_cast<std::int32_t>(reason));
  }
  void assign(Literal l, int level, std::int32_t reason) {
    [[maybe_unused]] bool ok = assignment_.assign(l, level, reason);
    assert(ok);
  }

  /// Non-true literals first, then true literals by decreasing trail position.
  void order_watches(std::size_t id) {
    auto& lits = store_[id].lits;
    auto rank = [&](Literal l) -> std::pair<int, std::size_t> {
      if (!assignment_.assigned(l.atom())) return {0, 0};
      if (assignment_.falsified(l)) return {1, 0};
      return {2, assignment_.atom_count() - assignment_.trail_position(l.atom())};
    };
    std::stable_sort(lits.begin(), lits.end(), [&](Literal a, Literal b) { return rank(a) < rank(b); });
  }

  void attach(std::size_t id) {
    const auto& lits = store_[id].lits;
    watches_[lits[0].code()].push_back(id);
    watches_[lits[1].code()].push_back(id);
  }

  void detach(std::size_t id) {
    const auto& lits = store_[id].lits;
    if (lits.size() < 2) return;
    for (std::size_t w = 0; w < 2; ++w) {
      auto& list = watches_[lits[w].code()];
      list.erase(std::remove(list.begin(), list.end(), id), list.end());
    }
  }

  void bump(AtomId a) { activity_[a] += increment_; }
  void decay() {
    increment_ /= 0.95;
    if (increment_ > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      increment_ *= 1e-100;
    }
  }

  Assignment assignment_;
  int level_ = 0;
  std::size_t qhead_ = 0;
  bool inconsistent_ = false;
  std::vector<Stored> store_;
  std::unordered_map<Nogood, std::size_t, NogoodHash> index_;
  std::vector<std::vector<std::size_t>> watches_;
  Heuristic heuristic_;
  std::vector<double> activity_;
  double increment_ = 1.0;
  SolverStats stats_;
};

}  // namespace hexcdnl
