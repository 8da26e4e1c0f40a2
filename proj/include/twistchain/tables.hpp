#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistchain/bethe.hpp"
#include "twistchain/io.hpp"

namespace tc {

struct GoldenSolution {
  std::vector<std::vector<cplx>> levels;
  int deg = 0;
  bool starred = false;
  // contains the special-manifold root
  bool dagger = false;
  // absolute, from the printed digits
  double tol = 1e-5;
};

struct GoldenRow {
  std::vector<int> m;
  std::optional<std::vector<int>> label;
  std::optional<int> mult;
  // label as printed when it disagrees with the cardinality formula
  std::optional<std::vector<int>> printed_label;
  std::vector<GoldenSolution> solutions;
};

struct GoldenTable {
  int table = 0;
  ChainSpec spec;
  std::vector<GoldenRow> rows;

  std::vector<int> m_cap() const;
};

GoldenTable golden_from_json(const io::json& j);
GoldenTable load_golden(int k, const std::string& dir = TWISTCHAIN_GOLDEN_DIR);

// max(|Δre|, |Δim|) after the best reflection, period shift and permutation per level
double rootset_deviation(const ChainSpec& spec, const BetheRootSet& found, const std::vector<std::vector<cplx>>& golden);

struct TableReproduction {
  GoldenTable golden;
  MatchReport match;
  VerificationReport checks;
  io::json rows;
};

TableReproduction reproduce_table(const GoldenTable& g, const SolveConfig& cfg);
io::json to_json(const TableReproduction& r);

}  // namespace tc
