#pragma once

#include <vector>

#include "twistchain/types.hpp"

namespace tc {

inline constexpr double kResidualTol = 1e-9;
inline constexpr double kClusterTol = 1e-7;

Mat identity(int dim);
// Elementary matrix e_{ab} of size d, 1-based indices.
Mat elementary(int d, int a, int b);
// Permutation P on C^d ⊗ C^d, P(v⊗w) = w⊗v.
Mat permutation(int d);

Mat kron(const Mat& a, const Mat& b);
Mat kron_all(const std::vector<Mat>& factors);
Mat kron_power(const Mat& a, int times);

// I^{⊗(k-1)} ⊗ two_site ⊗ I^{⊗(N-k-1)}, 1 ≤ k ≤ N-1.
Mat embed(const Mat& two_site, int d, int k, int N);
// Single-site operator on site k (1-based) of N.
Mat embed_site(const Mat& op, int d, int k, int N);

// Transpose the chosen tensor factor (1 or 2) of an operator on C^d ⊗ C^d.
Mat partial_transpose(const Mat& m, int d, int factor);

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}
bool all_finite(const Mat& m);
Mat commutator(const Mat& a, const Mat& b);

struct Eigensystem {
  Vec values;
  Mat vectors;
};

// General complex eigendecomposition; throws std::runtime_error on failure.
Eigensystem eig_full(const Mat& m, bool with_vectors = true);

struct Cluster {
  cplx value;
  int degeneracy = 0;
  std::vector<int> members;
};

struct EigenClusterSet {
  std::vector<Cluster> clusters;
  double tol = 0.0;
};

// Single-linkage clustering with absolute tolerance rel_tol * max(1, spectral radius).
// Clusters are ordered by (Re, Im) of their mean value.
EigenClusterSet cluster_values(const Vec& values, double rel_tol = kClusterTol);
EigenClusterSet eig(const Mat& m, double rel_tol = kClusterTol);

std::vector<int> degeneracy_multiset(const EigenClusterSet& set);

}  // namespace tc
