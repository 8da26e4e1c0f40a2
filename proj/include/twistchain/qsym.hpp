#pragma once

#include <string>
#include <vector>

#include "twistchain/chain.hpp"
#include "twistchain/report.hpp"
#include "twistchain/tensorlin.hpp"

namespace tc {

enum class AlgebraKind { Cn, Dn, BnEmbedded };

struct AlgebraId {
  AlgebraKind kind = AlgebraKind::Cn;
  int n = 1;
  int rep_dim() const { return kind == AlgebraKind::BnEmbedded ? 2 * n + 2 : 2 * n; }
};

std::string algebra_name(const AlgebraId& alg);

// A_I → C_n, A_II → D_n (n ≥ 2), D_I/D_II → B_n. Throws when the case has no such symmetry.
AlgebraId algebra_for(const ChainSpec& spec);

struct GeneratorSet {
  std::vector<Mat> H, Eplus, Eminus;
  bool has_E0 = false;
  Mat E0plus, E0minus;
  // α^{(j)} in the orthogonal basis, j = 1..n
  std::vector<std::vector<int>> simple_roots;
};

GeneratorSet generators(const AlgebraId& alg);

enum class GenKind { H, Eplus, Eminus, E0plus, E0minus };
struct GeneratorId {
  GenKind kind = GenKind::H;
  int j = 1;
};

enum class Iteration { Left, Right };

Mat coproduct_n(const AlgebraId& alg, GeneratorId gen, cplx eta, int N, Iteration it = Iteration::Left);

struct Coproducts {
  std::vector<Mat> H, Eplus, Eminus;
  bool has_E0 = false;
  Mat E0plus, E0minus;
};

Coproducts all_coproducts(const AlgebraId& alg, cplx eta, int N, Iteration it = Iteration::Left);

// Integer Cartan weights of every basis state of the N-site space (diagonal of Δ_(N)(H_j)).
std::vector<std::vector<int>> basis_weights(const AlgebraId& alg, int N);

VerificationReport verify_algebra(const AlgebraId& alg, cplx eta);
VerificationReport verify_symmetry(const Mat& target, const AlgebraId& alg, cplx eta, int N, bool cartan_only);

int weyl_dim(AlgebraKind kind, int n, const std::vector<int>& label);
std::vector<int> label_from_weight(AlgebraKind kind, const std::vector<int>& h);
std::vector<int> weight_from_cardinalities(const ChainSpec& spec, const std::vector<int>& m);
std::vector<int> label_from_cardinalities(const ChainSpec& spec, const std::vector<int>& m);

struct Level {
  cplx energy;
  cplx t_value;
  int degeneracy = 0;
  // weight of every state in the level
  std::vector<std::vector<int>> weights;
  // Dynkin labels of the highest-weight vectors in the level
  std::vector<std::vector<int>> hw_labels;
  bool starred = false;
  // one eigenvector of the level
  Vec witness;
};

struct IrrepBlock {
  std::vector<int> label;
  int dim = 0;
  int multiplicity = 0;
  int observed_degeneracy = 0;
  bool starred = false;
  // all highest-weight labels of a merged level
  std::vector<std::vector<int>> components;
};

struct SpectrumReport {
  std::vector<Level> levels;
  std::vector<IrrepBlock> blocks;
  std::vector<std::string> anomalies;
  cplx probe_u;
};

// Joint eigenvalue levels of ℋ and t(probe) resolved per Cartan weight sector.
// Labels and blocks are filled only when the case has a quantum-group algebra.
SpectrumReport spectrum_levels(const ChainSpec& spec, int threads = 1);
SpectrumReport decompose_spectrum(const ChainSpec& spec, int threads = 1);

std::vector<int> level_degeneracies(const SpectrumReport& rep);
// Counts of highest-weight labels over all levels, sorted by label.
std::vector<std::pair<std::vector<int>, int>> label_counts(const SpectrumReport& rep);

}  // namespace tc
