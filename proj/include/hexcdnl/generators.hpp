#pragma once

// Benchmark instance generators.

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexcdnl::gen {

/// Set partitioning: split dom into sel and nsel with at most two selected
/// elements.
inline std::string partition(int n) {
  if (n < 1) throw std::invalid_argument("partition size must be at least 1");
  std::ostringstream out;
  for (int i = 1; i <= n; ++i) out << "dom(" << i << ").\n";
  out << "nsel(X) :- dom(X), &diff[dom,sel](X).\n"
         "sel(X) :- dom(X), &diff[dom,nsel](X).\n"
         ":- sel(X), sel(Y), sel(Z), X != Y, X != Z, Y != Z.\n";
  return out.str();
}

/// Transitive closure: guess a relation r over 1..n and keep it only if &tc
/// reports no missing edge.
inline std::string transitive_closure(int n) {
  if (n < 1) throw std::invalid_argument("node count must be at least 1");
  std::ostringstream out;
  for (int i = 1; i <= n; ++i) out << "d(" << i << ").\n";
  out << "r(X,Y) v nr(X,Y) :- d(X), d(Y).\n"
         "r(V,W) :- &tc[r](V,W), d(V), d(W).\n";
  return out.str();
}

/// A Sudoku grid, 0 for empty cells.
using Grid = std::vector<std::vector<int>>;

/// Reads a 4x4 or 9x9 grid, one row per line. Digits are cells; '.', '_' and
/// '0' mark empty cells; spaces, '|' and lines of '-' or '+' are ignored, as
/// is text after '%'.
inline Grid parse_grid(const std::string& text) {
  Grid grid;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto c = line.find('%'); c != std::string::npos) line.erase(c);
    std::vector<int> row;
    for (char ch : line) {
      if (ch == ' ' || ch == '\t' || ch == '|' || ch == '\r' || ch == '-' || ch == '+') continue;
      if (ch == '.' || ch == '_' || ch == '0') row.push_back(0);
      else if (ch >= '1' && ch <= '9') row.push_back(ch - '0');
      else throw std::invalid_argument(std::string("unexpected character '") + ch + "' in grid");
    }
    if (!row.empty()) grid.push_back(std::move(row));
  }
  std::size_t n = grid.size();
  if (n != 4 && n != 9) throw std::invalid_argument("grid must have 4 or 9 rows, got " + std::to_string(n));
  for (const auto& row : grid) {
    if (row.size() != n)
      throw std::invalid_argument("every row must have " + std::to_string(n) + " cells");
    for (int v : row)
      if (v > static_cast<int>(n)) throw std::invalid_argument("digit " + std::to_string(v) + " out of range");
  }
  return grid;
}

/// Sudoku: given cells are facts, empty cells guess a digit, and the
/// sudokuCheck source reports clashing pairs of cells.
inline std::string sudoku(const Grid& grid) {
  std::size_t n = grid.size();
  std::ostringstream out;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out << "cell(" << r + 1 << "," << c + 1 << ").\n";
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (grid[r][c])
        out << "val(" << r + 1 << "," << c + 1 << "," << grid[r][c] << ").\n";
      else
        out << "empty(" << r + 1 << "," << c + 1 << ").\n";
    }
  }
  for (std::size_t d = 1; d <= n; ++d) out << (d > 1 ? " v " : "") << "val(R,C," << d << ")";
  out << " :- empty(R,C).\n"
         ":- cell(R,C), cell(R2,C2), &sudokuCheck[val](R,C,R2,C2).\n";
  return out.str();
}

}  // namespace hexcdnl::gen
