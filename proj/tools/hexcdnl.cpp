// Command-line front end: solve HEX programs and generate benchmark instances.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hexcdnl/hexcdnl.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitPluginError = 2;
constexpr int kExitNoAnswerSet = 10;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t parse_enum(const std::string& s) {
  if (s == "all") return 0;
  if (s == "first") return 1;
  std::size_t pos = 0;
  unsigned long n = 0;
  try {
    n = std::stoul(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || n < 1) throw std::invalid_argument("--enum expects all, first or a positive number");
  return n;
}

void print_stats(const hexcdnl::SolveStats& s, std::ostream& out) {
  out << "candidates=" << s.candidates << "\n"
      << "accepted=" << s.accepted << "\n"
      << "rejected=" << s.rejected << "\n"
      << "external_calls=" << s.external_calls << "\n"
      << "oracle_calls=" << s.oracle_calls << "\n"
      << "ebl_nogoods=" << s.ebl_nogoods << "\n"
      << "loop_nogoods=" << s.loop_nogoods << "\n"
      << "conflicts=" << s.conflicts << "\n"
      << "decisions=" << s.decisions << "\n"
      << "propagations=" << s.propagations << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conflict-driven solver for HEX programs with external behavior learning"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Print the answer sets of a program");
  std::string file;
  std::string ebl = "informed";
  std::string enumeration = "all";
  std::string heuristic = "lex";
  std::uint64_t seed = 0;
  bool stats = false;
  solve->add_option("FILE", file, "Program file")->required();
  solve->add_option("--ebl", ebl, "Learning: off, general, informed or user")
      ->check(CLI::IsMember({"off", "general", "informed", "user"}));
  solve->add_option("--enum", enumeration, "Compatible sets to enumerate: all, first or N");
  solve->add_option("--heuristic", heuristic, "Decision heuristic: lex or activity")
      ->check(CLI::IsMember({"lex", "activity"}));
  solve->add_option("--seed", seed, "Seed for the activity heuristic");
  solve->add_flag("--stats", stats, "Print counters to standard error");

  auto* gen = app.add_subcommand("gen", "Write a benchmark program to standard output");
  gen->require_subcommand(1);
  auto* partition = gen->add_subcommand("partition", "Set partitioning instance");
  int n = 0;
  partition->add_option("N", n, "Number of elements")->required();
  auto* closure = gen->add_subcommand("tc", "Transitive closure instance");
  closure->add_option("N", n, "Number of nodes")->required();
  auto* sudoku = gen->add_subcommand("sudoku", "Sudoku instance from a grid file");
  std::string grid_file;
  sudoku->add_option("FILE", grid_file, "Grid file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*partition) {
      std::cout << hexcdnl::gen::partition(n);
      return kExitOk;
    }
    if (*closure) {
      std::cout << hexcdnl::gen::transitive_closure(n);
      return kExitOk;
    }
    if (*sudoku) {
      std::cout << hexcdnl::gen::sudoku(hexcdnl::gen::parse_grid(read_file(grid_file)));
      return kExitOk;
    }

    hexcdnl::SolveOptions options;
    options.ebl = ebl == "off"       ? hexcdnl::EblMode::Off
                  : ebl == "general" ? hexcdnl::EblMode::General
                  : ebl == "user"    ? hexcdnl::EblMode::User
                                     : hexcdnl::EblMode::Informed;
    options.max_models = parse_enum(enumeration);
    options.heuristic = heuristic == "activity" ? hexcdnl::Heuristic::Activity : hexcdnl::Heuristic::Lexicographic;
    options.seed = seed;

    auto result = hexcdnl::solve(read_file(file), hexcdnl::builtin_registry(), options);
    for (const auto& as : result.answer_sets) std::cout << hexcdnl::format_answer_set(as) << "\n";
    if (stats) print_stats(result.stats, std::cerr);
    return result.answer_sets.empty() ? kExitNoAnswerSet : kExitOk;
  } catch (const hexcdnl::PluginError& e) {
    std::cerr << "plugin error: " << e.what() << "\n";
    return kExitPluginError;
  } catch (const hexcdnl::ParseError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
