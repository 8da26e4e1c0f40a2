#include <algorithm>

#include "doctest.h"
#include "twistchain/qsym.hpp"

using namespace tc;

namespace {
const cplx eta(0.0, -0.1);

ChainSpec chain(Family f, int n, CaseTag t, int N) {
  ChainSpec s;
  s.model = {f, n, eta};
  s.bc = BoundaryCase::make(t);
  s.N = N;
  return s;
}
}  // namespace

TEST_CASE("C1 generators") {
  const auto g = generators({AlgebraKind::Cn, 1});
  CHECK(max_abs(g.H[0] - (elementary(2, 1, 1) - elementary(2, 2, 2))) == 0.0);
  CHECK(max_abs(g.Eplus[0] - std::sqrt(2.0) * elementary(2, 1, 2)) < 1e-15);
}

TEST_CASE("algebra relations hold") {
  for (int n = 1; n <= 3; ++n) {
    CHECK(verify_algebra({AlgebraKind::Cn, n}, eta).all_pass());
    CHECK(verify_algebra({AlgebraKind::BnEmbedded, n}, eta).all_pass());
    if (n >= 2) CHECK(verify_algebra({AlgebraKind::Dn, n}, eta).all_pass());
  }
}

TEST_CASE("Cartan coproducts are integer diagonal") {
  const AlgebraId alg{AlgebraKind::Cn, 2};
  for (int j = 1; j <= 2; ++j) {
    const Mat h = coproduct_n(alg, {GenKind::H, j}, eta, 3);
    CHECK(max_abs(Mat(h - Mat(h.diagonal().asDiagonal()))) == 0.0);
    for (int i = 0; i < h.rows(); ++i) CHECK(h(i, i) == cplx(std::round(h(i, i).real()), 0.0));
  }
}

TEST_CASE("left and right iterated coproducts agree") {
  const AlgebraId alg{AlgebraKind::BnEmbedded, 2};
  const Mat l = coproduct_n(alg, {GenKind::Eplus, 1}, eta, 3, Iteration::Left);
  const Mat r = coproduct_n(alg, {GenKind::Eplus, 1}, eta, 3, Iteration::Right);
  CHECK(max_abs(l - r) < 1e-12);
}

TEST_CASE("quantum group symmetry of the Hamiltonian and transfer matrix") {
  const auto s = chain(Family::ATwisted, 2, CaseTag::A_I, 3);
  const auto alg = algebra_for(s);
  CHECK(alg.kind == AlgebraKind::Cn);
  CHECK(verify_symmetry(hamiltonian(s).H, alg, eta, 3, false).all_pass());
  const auto d = chain(Family::DTwisted, 1, CaseTag::D_I, 2);
  CHECK(verify_symmetry(transfer(d, cplx(0.3, 0.1)), algebra_for(d), eta, 2, true).all_pass());
  CHECK(verify_symmetry(transfer(d, cplx(0.3, 0.1)), algebra_for(d), eta, 2, false).all_pass());
}

TEST_CASE("algebra for each case") {
  CHECK(algebra_for(chain(Family::ATwisted, 2, CaseTag::A_II, 2)).kind == AlgebraKind::Dn);
  CHECK(algebra_for(chain(Family::DTwisted, 2, CaseTag::D_II, 2)).kind == AlgebraKind::BnEmbedded);
  CHECK_THROWS(algebra_for(chain(Family::ATwisted, 1, CaseTag::A_II, 2)));
}

TEST_CASE("Weyl dimensions") {
  CHECK(weyl_dim(AlgebraKind::Cn, 2, {0, 1}) == 5);
  CHECK(weyl_dim(AlgebraKind::Cn, 2, {2, 0}) == 10);
  CHECK(weyl_dim(AlgebraKind::BnEmbedded, 2, {1, 2}) == 35);
  CHECK(weyl_dim(AlgebraKind::Dn, 3, {1, 1, 1}) == 64);
  for (auto k : {AlgebraKind::Cn, AlgebraKind::BnEmbedded, AlgebraKind::Dn}) CHECK(weyl_dim(k, 3, {0, 0, 0}) == 1);
  CHECK_THROWS(weyl_dim(AlgebraKind::Cn, 2, {1, -1}));
}

TEST_CASE("labels from cardinalities") {
  CHECK(label_from_cardinalities(chain(Family::ATwisted, 2, CaseTag::A_I, 3), {2, 1}) == std::vector<int>{1, 0});
  CHECK(label_from_cardinalities(chain(Family::ATwisted, 2, CaseTag::A_II, 2), {1, 0}) == std::vector<int>{0, 2});
  CHECK(label_from_cardinalities(chain(Family::DTwisted, 1, CaseTag::D_I, 2), {2}) == std::vector<int>{0});
}

TEST_CASE("decomposition of A3 case I, N = 3") {
  const auto rep = decompose_spectrum(chain(Family::ATwisted, 2, CaseTag::A_I, 3));
  const auto counts = label_counts(rep);
  const std::vector<std::pair<std::vector<int>, int>> want{{{1, 0}, 3}, {{1, 1}, 2}, {{3, 0}, 1}};
  CHECK(counts == want);
  int total = 0;
  for (const auto& b : rep.blocks) total += b.observed_degeneracy * b.multiplicity;
  CHECK(total == 64);
  CHECK(rep.anomalies.empty());
}

TEST_CASE("starred merge in A3 case II, N = 2") {
  const auto rep = decompose_spectrum(chain(Family::ATwisted, 2, CaseTag::A_II, 2));
  auto d = level_degeneracies(rep);
  std::sort(d.begin(), d.end());
  CHECK(d == std::vector<int>{1, 6, 9});
  bool starred6 = false;
  for (const auto& b : rep.blocks)
    if (b.observed_degeneracy == 6) starred6 = b.starred && b.components.size() == 2;
  CHECK(starred6);
}

TEST_CASE("D3 case I, N = 3 degeneracies") {
  const auto rep = decompose_spectrum(chain(Family::DTwisted, 2, CaseTag::D_I, 3));
  auto d = level_degeneracies(rep);
  std::sort(d.begin(), d.end());
  const std::vector<int> want{1, 1, 1, 1, 5, 5, 5, 5, 5, 5, 10, 10, 14, 14, 14, 20, 30, 35, 35};
  CHECK(d == want);
}
