#include <algorithm>

#include "doctest.h"
#include "twistchain/bethe.hpp"
#include "twistchain/bethe_system.hpp"
#include "twistchain/qsym.hpp"
#include "twistchain/tables.hpp"

using namespace tc;

namespace {
const cplx eta(0.0, -0.1);

ChainSpec chain(Family f, int n, CaseTag t, int N, cplx p1 = {}, cplx p2 = {}) {
  ChainSpec s;
  s.model = {f, n, eta};
  s.bc = BoundaryCase::make(t, p1, p2);
  s.N = N;
  return s;
}

double max_res(const ChainSpec& s, const BetheRootSet& r) {
  double w = 0;
  for (cplx x : residuals(s, r)) w = std::max(w, std::abs(x));
  return w;
}

bool has_solution(const ChainSpec& s, const std::vector<BetheRootSet>& sols, const std::vector<std::vector<cplx>>& want,
                  double tol = 1e-5) {
  for (const auto& r : sols)
    if (rootset_deviation(s, r, want) <= tol) return true;
  return false;
}

SolveConfig quick(int starts = 2000) {
  SolveConfig cfg;
  cfg.starts = starts;
  return cfg;
}
}  // namespace

TEST_CASE("reference-state eigenvalue") {
  for (auto s : {chain(Family::ATwisted, 1, CaseTag::A_I, 2), chain(Family::ATwisted, 2, CaseTag::A_II, 2),
                 chain(Family::DTwisted, 1, CaseTag::D_I, 2), chain(Family::DTwisted, 1, CaseTag::D_DiagMG, 2),
                 chain(Family::DTwisted, 1, CaseTag::D_BlockPair, 2, 0.2, 1.0 / 7.0)}) {
    BetheRootSet empty;
    empty.levels.assign(s.model.n, {});
    const cplx u(0.31, -0.22);
    const Mat t = transfer(s, u);
    const cplx want = t(0, 0);
    CHECK(std::abs(lambda_eval(s, empty, u) - want) <= 1e-8 * std::abs(want));
    CHECK(t.col(0).tail(t.rows() - 1).norm() < 1e-10 * std::abs(want));
  }
}

TEST_CASE("eigenvalue crossing symmetry and value at zero") {
  const auto s = chain(Family::DTwisted, 2, CaseTag::D_I, 2);
  const BetheRootSet r{{{cplx(0.31, 0.2)}, {cplx(-0.4, 0.7)}}};
  const cplx u(0.17, 0.09);
  const cplx a = lambda_eval(s, r, u), b = lambda_eval(s, r, -u - rho(s.model));
  CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
  const cplx z = xi(s.model, 0.0);
  const cplx want = kappa(s.model, s.bc) * std::pow(z, 2 * s.N) * k_plus(s.model, s.bc, 0.0).trace();
  CHECK(std::abs(lambda_eval(s, r, 0.0) - want) <= 1e-9 * std::abs(want));
}

TEST_CASE("Table 1 root") {
  const auto s = chain(Family::ATwisted, 1, CaseTag::A_I, 2);
  const BetheRootSet r{{{cplx(0.205557, 0.0)}}};
  CHECK(max_res(s, r) <= 1e-5);
  const cplx e = energy(s, r);
  CHECK(std::abs(e - cplx(0.0, 2.365225)) < 1e-5);
  bool found = false;
  for (const auto& c : eig(hamiltonian(s).H).clusters) found = found || std::abs(c.value - e) < 1e-5;
  CHECK(found);
}

TEST_CASE("Table 5 roots give the nondegenerate level") {
  const auto s = chain(Family::ATwisted, 3, CaseTag::A_I, 2);
  const auto sols = solve(s, {2, 2, 1}, quick());
  REQUIRE(sols.size() >= 1);
  const auto H = eig(hamiltonian(s).H);
  bool found = false;
  for (const auto& r : sols)
    for (const auto& c : H.clusters)
      if (c.degeneracy == 1 && std::abs(c.value - energy(s, r)) < 1e-6 * std::max(1.0, std::abs(c.value))) found = true;
  CHECK(found);
}

TEST_CASE("empty-root energy for D_I") {
  for (int n = 1; n <= 2; ++n)
    for (int N = 2; N <= 3; ++N) {
      const auto s = chain(Family::DTwisted, n, CaseTag::D_I, N);
      BetheRootSet empty;
      empty.levels.assign(n, {});
      const cplx want = -double(N - 1) * std::sinh(2.0 * (n + 1) * eta) / (std::sinh(2.0 * eta) * std::sinh(2.0 * n * eta));
      CHECK(std::abs(energy(s, empty) - want) < 1e-12 * std::abs(want));
    }
}

TEST_CASE("Table 13 shift pair satisfies the equations with the printed 3.14159 read as pi") {
  const auto s = chain(Family::DTwisted, 1, CaseTag::D_I, 2);
  CHECK(max_res(s, BetheRootSet{{{cplx(0.100167, 0.0), cplx(0.100167, kPi)}}}) <= 1e-5);
}

TEST_CASE("empty root set has no residuals") {
  const auto s = chain(Family::ATwisted, 2, CaseTag::A_I, 2);
  CHECK(residuals(s, BetheRootSet{{{}, {}}}).empty());
}

TEST_CASE("canonical form") {
  const auto a = chain(Family::ATwisted, 1, CaseTag::A_I, 2);
  CHECK(canonicalize(a, BetheRootSet{{{cplx(-0.205557, 0.0)}}}).levels[0][0] == cplx(0.205557, 0.0));
  const auto c = canonicalize(a, BetheRootSet{{{cplx(0.3, 2 * kPi + 0.1)}}}).levels[0][0];
  CHECK(std::abs(c - cplx(0.3, 0.1)) < 1e-12);
  const auto d = chain(Family::DTwisted, 1, CaseTag::D_I, 2);
  CHECK(std::abs(canonicalize(d, BetheRootSet{{{cplx(0.3, 1.8 + kPi)}}}).levels[0][0] - cplx(0.3, 1.8)) < 1e-12);
  CHECK(std::abs(canonicalize(d, BetheRootSet{{{cplx(-0.3, -1.8)}}}).levels[0][0] - cplx(0.3, 1.8)) < 1e-12);
  const auto two = canonicalize(d, BetheRootSet{{{cplx(0.3, 1.8 + kPi), cplx(0.5, 0.0)}}}).levels[0];
  for (cplx u : two) CHECK(u.imag() < 2 * kPi);
}

TEST_CASE("roots_equivalent") {
  const auto a = chain(Family::ATwisted, 2, CaseTag::A_I, 2);
  CHECK(roots_equivalent(a, 0, cplx(0.4, 0.3), cplx(-0.4, -0.3 + 2 * kPi), 1e-9, 1e-9));
  CHECK_FALSE(roots_equivalent(a, 0, cplx(0.4, 0.3), cplx(0.4, 0.31), 1e-9, 1e-9));
}

TEST_CASE("solve finds the Table 1 root") {
  const auto s = chain(Family::ATwisted, 1, CaseTag::A_I, 2);
  const auto sols = solve(s, {1}, quick());
  REQUIRE(sols.size() == 1);
  CHECK(std::abs(sols[0].levels[0][0] - cplx(0.205557, 0.0)) < 1e-5);
}

TEST_CASE("solve finds the Table 9 solutions") {
  const auto s = chain(Family::ATwisted, 2, CaseTag::A_II, 2);
  const auto sols = solve(s, {2, 1}, quick());
  CHECK(has_solution(s, sols, {{cplx(0.504878, 1.10246), cplx(0.504878, -1.10246)}, {cplx(0.623371, 1.5708)}}, 1e-4));
  for (const auto& r : sols) CHECK(max_res(s, r) <= 1e-11);
}

TEST_CASE("solve finds both Table 13 solutions") {
  const auto s = chain(Family::DTwisted, 1, CaseTag::D_I, 2);
  const auto sols = solve(s, {2}, quick());
  CHECK(has_solution(s, sols, {{cplx(0.545151, 1.5708), cplx(0.545151, -1.5708)}}, 1e-4));
  CHECK(has_solution(s, sols, {{cplx(0.100167, 0.0), cplx(0.100167, 3.14159)}}));
}

TEST_CASE("solve is deterministic and thread independent") {
  const auto s = chain(Family::DTwisted, 1, CaseTag::D_I, 2);
  SolveConfig cfg = quick(300);
  const auto a = solve(s, {2}, cfg);
  cfg.threads = 3;
  const auto b = solve(s, {2}, cfg);
  CHECK(a == b);
}

TEST_CASE("completeness of A1 case II, N = 3") {
  const auto s = chain(Family::ATwisted, 1, CaseTag::A_II, 3);
  const auto mr = completeness(s, {1}, quick());
  CHECK(mr.complete());
  std::vector<int> degs;
  for (const auto& p : mr.pairs) degs.push_back(p.cluster.deg);
  CHECK(degs == std::vector<int>{2, 2, 2, 2});
  for (const auto& p : mr.pairs) CHECK(p.energy_diff <= 1e-6);
}

TEST_CASE("completeness of the diagonal D case, N = 2") {
  const auto s = chain(Family::DTwisted, 1, CaseTag::D_DiagMG, 2);
  const auto mr = completeness(s, {2}, quick());
  CHECK(mr.complete());
  CHECK(mr.pairs.size() == 7);
}

TEST_CASE("block pair case, N = 1, has four nondegenerate levels") {
  const auto s = chain(Family::DTwisted, 1, CaseTag::D_BlockPair, 1, 0.2, 1.0 / 7.0);
  const auto mr = completeness(s, {2}, quick());
  CHECK(mr.complete());
  CHECK(mr.pairs.size() == 4);
  for (const auto& p : mr.pairs) CHECK(p.cluster.deg == 1);
}

TEST_CASE("special manifold solutions contain the special root or satisfy the equations") {
  const auto s = chain(Family::DTwisted, 1, CaseTag::D_BlockPair, 1, 0.2, 0.2);
  CHECK(std::abs(special_root(s) - (cplx(0.2) + eta)) < 1e-14);
  const auto sols = solve(s, {1}, quick());
  int dagger = 0;
  for (const auto& r : sols) {
    if (contains_special_root(s, r))
      ++dagger;
    else
      CHECK(max_res(s, r) <= 1e-10);
  }
  CHECK(dagger == 1);
}

TEST_CASE("unsupported cases") {
  CHECK_THROWS_AS(require_bethe_support(chain(Family::DTwisted, 1, CaseTag::D_II, 2)), unsupported_case);
  CHECK_THROWS_AS(solve(chain(Family::DTwisted, 1, CaseTag::D_II, 2), {1}, quick()), unsupported_case);
  CHECK_THROWS(solve(chain(Family::ATwisted, 2, CaseTag::A_I, 2), {1}, quick()));
}

TEST_CASE("golden fixtures load") {
  const auto g = load_golden(13);
  CHECK(g.spec.model.family == Family::DTwisted);
  CHECK(g.spec.N == 2);
  CHECK(g.m_cap() == std::vector<int>{2});
  CHECK(g.rows.size() == 3);
  CHECK_THROWS(load_golden(99));
}

TEST_CASE("rootset deviation honors reflections and the top-level shift") {
  const auto s = chain(Family::DTwisted, 1, CaseTag::D_I, 2);
  const BetheRootSet r{{{cplx(0.100167, kPi), cplx(-0.100167, 0.0)}}};
  CHECK(rootset_deviation(s, r, {{cplx(0.100167, 0.0), cplx(0.100167, 3.14159)}}) < 1e-5);
  CHECK(rootset_deviation(s, r, {{cplx(0.1, 0.0), cplx(0.1, 3.14159)}}) > 1e-4);
}

TEST_CASE("reproduce Table 2") {
  const auto rep = reproduce_table(load_golden(2), quick());
  CHECK(rep.checks.all_pass());
  CHECK(rep.match.complete());
}
