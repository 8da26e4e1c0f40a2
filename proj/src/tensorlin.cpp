#include "twistchain/tensorlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace tc {

Mat identity(int dim) { return Mat::Identity(dim, dim); }

Mat elementary(int d, int a, int b) {
  Mat m = Mat::Zero(d, d);
  m(a - 1, b - 1) = 1.0;
  return m;
}

Mat permutation(int d) {
  Mat p = Mat::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) p(a * d + b, b * d + a) = 1.0;
  return p;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  if (!all_finite(r)) throw std::overflow_error("kron: non-finite entry");
  return r;
}

Mat kron_all(const std::vector<Mat>& factors) {
  Mat r = Mat::Identity(1, 1);
  for (const auto& f : factors) r = kron(r, f);
  return r;
}

Mat kron_power(const Mat& a, int times) {
  Mat r = Mat::Identity(1, 1);
  for (int i = 0; i < times; ++i) r = kron(r, a);
  return r;
}

static int ipow(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

Mat embed(const Mat& two_site, int d, int k, int N) {
  if (two_site.rows() != d * d || two_site.cols() != d * d)
    throw std::invalid_argument("embed: operator is not two-site");
  if (k < 1 || k > N - 1) throw std::out_of_range("embed: site index out of range");
  return kron(kron(identity(ipow(d, k - 1)), two_site), identity(ipow(d, N - k - 1)));
}

Mat embed_site(const Mat& op, int d, int k, int N) {
  if (k < 1 || k > N) throw std::out_of_range("embed_site: site index out of range");
  return kron(kron(identity(ipow(d, k - 1)), op), identity(ipow(d, N - k)));
}

Mat partial_transpose(const Mat& m, int d, int factor) {
  if (m.rows() != d * d || m.cols() != d * d)
    throw std::invalid_argument("partial_transpose: operator is not on C^d ⊗ C^d");
  if (factor != 1 && factor != 2) throw std::invalid_argument("partial_transpose: factor must be 1 or 2");
  Mat r(d * d, d * d);
  for (int r1 = 0; r1 < d; ++r1)
    for (int r2 = 0; r2 < d; ++r2)
      for (int c1 = 0; c1 < d; ++c1)
        for (int c2 = 0; c2 < d; ++c2) {
          const cplx v = m(r1 * d + r2, c1 * d + c2);
          if (factor == 1)
            r(c1 * d + r2, r1 * d + c2) = v;
          else
            r(r1 * d + c2, c1 * d + r2) = v;
        }
  return r;
}


bool all_finite(const Mat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  return true;
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

Eigensystem eig_full(const Mat& m, bool with_vectors) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig: matrix is not square");
  if (!all_finite(m)) throw std::invalid_argument("eig: matrix has non-finite entries");
  Eigen::ComplexEigenSolver<Mat> solver(m, with_vectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig: eigensolver did not converge");
  Eigensystem out;
  out.values = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool value_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

EigenClusterSet cluster_values(const Vec& values, double rel_tol) {
  const int n = static_cast<int>(values.size());
  double radius = 0.0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(values[i]));
  const double tol = rel_tol * std::max(1.0, radius);

  // Sorting by real part lets the pair scan stop once the real gap exceeds tol.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return value_less(values[a], values[b]); });
  UnionFind uf(n);
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      if (values[order[q]].real() - values[order[p]].real() > tol) break;
      if (std::abs(values[order[q]] - values[order[p]]) <= tol) uf.unite(order[p], order[q]);
    }

  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);
  EigenClusterSet out;
  out.tol = tol;
  for (auto& g : groups) {
    if (g.empty()) continue;
    Cluster c;
    cplx sum = 0.0;
    for (int i : g) sum += values[i];
    c.value = sum / static_cast<double>(g.size());
    c.degeneracy = static_cast<int>(g.size());
    c.members = g;
    out.clusters.push_back(std::move(c));
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return value_less(a.value, b.value); });
  return out;
}

EigenClusterSet eig(const Mat& m, double rel_tol) {
  return cluster_values(eig_full(m, false).values, rel_tol);
}

std::vector<int> degeneracy_multiset(const EigenClusterSet& set) {
  std::vector<int> out;
  for (const auto& c : set.clusters) out.push_back(c.degeneracy);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tc
