#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistchain/chain.hpp"

namespace tc {

struct BetheRootSet {
  std::vector<std::vector<cplx>> levels;

  std::vector<int> m() const;
  int total() const;
  bool operator==(const BetheRootSet& o) const { return levels == o.levels; }
};

struct SolveConfig {
  int starts = 2000;
  double newton_tol = 1e-12;
  int max_iter = 200;
  double dedup_tol = 1e-6;
  std::uint64_t rng_seed = 1;
  // random candidates screened per start; Newton runs from the one with the smallest residual
  int candidates = 32;
  int threads = 1;
};

struct EigenEntry {
  cplx value;
  int deg = 0;
  bool operator==(const EigenEntry& o) const { return value == o.value && deg == o.deg; }
};

struct MatchPair {
  EigenEntry cluster;
  BetheRootSet roots;
  double lambda_diff = 0.0;
  // negative when the case has no energy formula
  double energy_diff = -1.0;
  bool operator==(const MatchPair& o) const {
    return cluster == o.cluster && roots == o.roots && lambda_diff == o.lambda_diff && energy_diff == o.energy_diff;
  }
};

struct MatchReport {
  std::vector<MatchPair> pairs;
  std::vector<EigenEntry> unmatched_eigenvalues;
  std::vector<BetheRootSet> unmatched_rootsets;
  bool complete() const { return unmatched_eigenvalues.empty(); }
  bool operator==(const MatchReport& o) const {
    return pairs == o.pairs && unmatched_eigenvalues == o.unmatched_eigenvalues &&
           unmatched_rootsets == o.unmatched_rootsets;
  }
};

class unsupported_case : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class pole_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Throws unsupported_case for D_II and for cases without an eigenvalue formula.
void require_bethe_support(const ChainSpec& spec);
bool has_energy_formula(const ChainSpec& spec);

cplx lambda_eval(const ChainSpec& spec, const BetheRootSet& roots, cplx u);
cplx energy(const ChainSpec& spec, const BetheRootSet& roots);

// Relative form (LHS − RHS)/max(1, |LHS|, |RHS|), one entry per root, level by level.
std::vector<cplx> residuals(const ChainSpec& spec, const BetheRootSet& roots);

BetheRootSet canonicalize(const ChainSpec& spec, const BetheRootSet& roots);

// u = μ + η + iπl on the special manifold
cplx special_root(const ChainSpec& spec);
bool contains_special_root(const ChainSpec& spec, const BetheRootSet& roots, double tol = 1e-6);

// Same level, same root up to reflection and the level period.
bool roots_equivalent(const ChainSpec& spec, int level, cplx a, cplx b, double tol_re, double tol_im);

std::vector<BetheRootSet> solve(const ChainSpec& spec, const std::vector<int>& m, const SolveConfig& cfg);

// All cardinality vectors 0 < m ≤ m_cap, solved in order of increasing total with
// roots of smaller sets reused as starting points.
std::map<std::vector<int>, std::vector<BetheRootSet>> solve_all(const ChainSpec& spec,
                                                                const std::vector<int>& m_cap,
                                                                const SolveConfig& cfg);

std::vector<cplx> probe_points();

MatchReport completeness(const ChainSpec& spec, const std::vector<int>& m_cap, const SolveConfig& cfg);
MatchReport match_solutions(const ChainSpec& spec,
                            const std::map<std::vector<int>, std::vector<BetheRootSet>>& sols,
                            int threads = 1);

}  // namespace tc
