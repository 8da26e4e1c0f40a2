#include <random>

#include "doctest.h"
#include "twistchain/tensorlin.hpp"
#include "twistchain/vertex.hpp"

using namespace tc;

namespace {

Mat random_mat(int r, int c, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

}  // namespace

TEST_CASE("kron of identities") { CHECK(max_abs(kron(identity(2), identity(2)) - identity(4)) == 0.0); }

TEST_CASE("kron of elementary matrices places a single one") {
  const Mat m = kron(elementary(2, 1, 2), elementary(2, 2, 1));
  CHECK(m(1, 2) == cplx(1.0));
  CHECK(max_abs(m) == 1.0);
  CHECK(m.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("permutation swaps tensor factors") {
  const int d = 3;
  const Mat v = random_mat(d, 1, 1), w = random_mat(d, 1, 2);
  CHECK(max_abs(permutation(d) * kron(v, w) - kron(w, v)) < 1e-14);
}

TEST_CASE("embed") {
  const Mat h = random_mat(9, 9, 5);
  CHECK(max_abs(embed(h, 3, 1, 2) - h) == 0.0);
  CHECK(max_abs(embed(identity(9), 3, 2, 4) - identity(81)) == 0.0);
  const Mat e = embed(h, 3, 2, 4);
  CHECK(std::abs(e.trace() - h.trace() * 9.0) < 1e-10);
  CHECK_THROWS(embed(h, 3, 4, 4));
}

TEST_CASE("partial transpose") {
  const Mat m = random_mat(16, 16, 9);
  CHECK(max_abs(partial_transpose(partial_transpose(m, 4, 1), 4, 1) - m) == 0.0);
  CHECK(max_abs(partial_transpose(partial_transpose(m, 4, 1), 4, 2) - Mat(m.transpose())) == 0.0);
}

TEST_CASE("R21 equals the full partial transpose for the A family, n = 1") {
  const ModelSpec s{Family::ATwisted, 1, cplx(0, -0.1)};
  const Mat r = r_matrix(s, 0.3);
  const Mat pt = partial_transpose(partial_transpose(r, 2, 1), 2, 2);
  CHECK(max_abs(r21(s, 0.3) - pt) < 1e-13);
}

TEST_CASE("eigenvalue clustering") {
  const auto one = eig(identity(4));
  REQUIRE(one.clusters.size() == 1);
  CHECK(one.clusters[0].degeneracy == 4);
  CHECK(std::abs(one.clusters[0].value - 1.0) < 1e-12);

  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0 + 1e-14;
  d(2, 2) = 2.0;
  const auto two = eig(d, 1e-9);
  REQUIRE(two.clusters.size() == 2);
  CHECK(two.clusters[0].degeneracy == 2);
  CHECK(two.clusters[1].degeneracy == 1);
  CHECK(std::abs(two.clusters[1].value - 2.0) < 1e-12);
}

TEST_CASE("non-finite input is rejected") {
  Mat m = identity(2);
  m(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(all_finite(m));
  CHECK_THROWS(eig(m));
}
