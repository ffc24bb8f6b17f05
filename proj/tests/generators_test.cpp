#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace hexcdnl;

TEST(Partition, SingleElement) {
  EXPECT_EQ(gen::partition(1),
            "dom(1).\n"
            "nsel(X) :- dom(X), &diff[dom,sel](X).\n"
            "sel(X) :- dom(X), &diff[dom,nsel](X).\n"
            ":- sel(X), sel(Y), sel(Z), X != Y, X != Z, Y != Z.\n");
  auto r = solve(gen::partition(1), builtin_registry());
  EXPECT_EQ(fixtures::as_sets(r.answer_sets),
            (fixtures::AnswerSets{{"dom(1)", "nsel(1)"}, {"dom(1)", "sel(1)"}}));
}

TEST(Partition, RejectsEmptyDomain) {
  EXPECT_THROW(gen::partition(0), std::invalid_argument);
  EXPECT_THROW(gen::partition(-2), std::invalid_argument);
}

TEST(Partition, CountsMatchReference) {
  for (int n = 1; n <= 5; ++n)
    EXPECT_EQ(solve(gen::partition(n), builtin_registry()).answer_sets.size(), reference::partition_answer_sets(n));
  EXPECT_EQ(reference::partition_answer_sets(3), 7u);
}

namespace {

/// Transitive relations over n elements, by enumeration.
std::size_t transitive_relations(int n) {
  std::size_t count = 0;
  for (std::uint32_t r = 0; r < (1u << (n * n)); ++r) {
    auto has = [&](int x, int y) { return r >> (x * n + y) & 1; };
    bool closed = true;
    for (int x = 0; x < n && closed; ++x)
      for (int y = 0; y < n && closed; ++y)
        for (int z = 0; z < n && closed; ++z)
          if (has(x, y) && has(y, z) && !has(x, z)) closed = false;
    count += closed;
  }
  return count;
}

}  // namespace

TEST(TransitiveClosure, CountsTransitiveRelations) {
  EXPECT_THROW(gen::transitive_closure(0), std::invalid_argument);
  EXPECT_EQ(transitive_relations(2), 13u);
  for (int n = 1; n <= 3; ++n) {
    for (auto mode : {EblMode::Off, EblMode::User}) {
      auto r = solve(gen::transitive_closure(n), builtin_registry(), SolveOptions{.ebl = mode});
      EXPECT_EQ(r.answer_sets.size(), transitive_relations(n)) << n;
    }
  }
}

TEST(Sudoku, ParsesGridFormats) {
  auto g = gen::parse_grid("1 2 | . 4\n3 _ | 0 .\n--+--\n. . | . .\n4 . | . 1  % givens\n");
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[0], (std::vector<int>{1, 2, 0, 4}));
  EXPECT_EQ(g[1], (std::vector<int>{3, 0, 0, 0}));
  EXPECT_EQ(g[3], (std::vector<int>{4, 0, 0, 1}));
}

TEST(Sudoku, RejectsMalformedGrids) {
  EXPECT_THROW(gen::parse_grid("12\n34\n"), std::invalid_argument);
  EXPECT_THROW(gen::parse_grid("123\n....\n....\n....\n"), std::invalid_argument);
  EXPECT_THROW(gen::parse_grid("1..5\n....\n....\n....\n"), std::invalid_argument);
  EXPECT_THROW(gen::parse_grid("1..x\n....\n....\n....\n"), std::invalid_argument);
}

TEST(Sudoku, SolvedGridIsItsOwnAnswer) {
  auto text = gen::sudoku(gen::parse_grid("1234\n3412\n2143\n4321\n"));
  auto r = solve(text, builtin_registry(), SolveOptions{.ebl = EblMode::User});
  ASSERT_EQ(r.answer_sets.size(), 1u);
  EXPECT_EQ(fixtures::grid_of(r.answer_sets[0], 4), (reference::Grid{{1, 2, 3, 4}, {3, 4, 1, 2}, {2, 1, 4, 3}, {4, 3, 2, 1}}));
}

TEST(Sudoku, OneEmptyCell) {
  auto grid = gen::parse_grid("1234\n3412\n2143\n432.\n");
  auto r = solve(gen::sudoku(grid), builtin_registry(), SolveOptions{.ebl = EblMode::User});
  ASSERT_EQ(r.answer_sets.size(), 1u);
  EXPECT_EQ(fixtures::grid_of(r.answer_sets[0], 4)[3][3], 1);
}

TEST(Sudoku, ContradictoryGivensHaveNoAnswer) {
  auto grid = gen::parse_grid("11..\n....\n....\n....\n");
  EXPECT_TRUE(reference::sudoku_completions(grid).empty());
  EXPECT_TRUE(solve(gen::sudoku(grid), builtin_registry(), SolveOptions{.ebl = EblMode::User}).answer_sets.empty());
}

TEST(Sudoku, PuzzlesMatchBacktracking) {
  for (const auto& compact : fixtures::sudoku_puzzles()) {
    auto grid = gen::parse_grid(fixtures::grid_text(compact));
    auto completions = reference::sudoku_completions(grid);
    auto r = solve(gen::sudoku(grid), builtin_registry(), SolveOptions{.ebl = EblMode::User});
    ASSERT_EQ(completions.size(), 1u) << compact;
    ASSERT_EQ(r.answer_sets.size(), 1u) << compact;
    EXPECT_EQ(fixtures::grid_of(r.answer_sets[0], 4), completions[0]) << compact;
  }
}
