#include "doctest.h"
#include "twistchain/tensorlin.hpp"
#include "twistchain/vertex.hpp"

using namespace tc;

namespace {
const cplx eta(0.0, -0.1);
}

TEST_CASE("regularity R(0) = xi(0) P") {
  for (Family f : {Family::ATwisted, Family::DTwisted})
    for (int n = 1; n <= 3; ++n) {
      const ModelSpec s{f, n, eta};
      const Mat r = r_matrix(s, 0.0);
      CHECK(max_abs(r - xi(s, 0.0) * permutation(s.dim())) < 1e-12 * max_abs(r));
    }
}

TEST_CASE("xi(0) for A family n = 1") {
  const ModelSpec s{Family::ATwisted, 1, eta};
  CHECK(std::abs(xi(s, 0.0) - cplx(0.0, 0.389418)) < 1e-6);
  CHECK(std::abs(xi(s, 0.0) + 2.0 * std::sinh(2.0 * eta) * std::cosh(2.0 * eta)) < 1e-14);
}

TEST_CASE("crossing parameter") {
  const ModelSpec s{Family::ATwisted, 2, eta};
  CHECK(std::abs(rho(s) - cplx(0.0, -2.341593)) < 1e-6);
}

TEST_CASE("zeta is even and unitarity holds") {
  const cplx u(0.4, 0.2);
  for (Family f : {Family::ATwisted, Family::DTwisted})
    for (int n = 1; n <= 3; ++n) {
      const ModelSpec s{f, n, eta};
      CHECK(std::abs(zeta(s, u) - zeta(s, -u)) < 1e-12 * std::abs(zeta(s, u)));
      const Mat prod = r_matrix(s, u) * r21(s, -u);
      CHECK(max_abs(prod - zeta(s, u) * identity(s.dim() * s.dim())) < 1e-10 * std::abs(zeta(s, u)));
    }
}

TEST_CASE("crossing matrix squares to one and M = eps V^t V") {
  for (Family f : {Family::ATwisted, Family::DTwisted})
    for (int n = 1; n <= 3; ++n) {
      const ModelSpec s{f, n, eta};
      const auto c = crossing_data(s);
      CHECK(max_abs(c.V * c.V - identity(s.dim())) < 1e-14);
      CHECK(max_abs(c.M - double(c.epsilon) * c.V.transpose() * c.V) < 1e-14);
    }
}

TEST_CASE("M for D family n = 1") {
  const ModelSpec s{Family::DTwisted, 1, eta};
  const Mat M = crossing_data(s).M;
  const cplx want[4] = {std::exp(2.0 * eta), 1.0, 1.0, std::exp(-2.0 * eta)};
  for (int a = 0; a < 4; ++a) CHECK(std::abs(M(a, a) - want[a]) < 1e-14);
  CHECK(max_abs(Mat(M - Mat(M.diagonal().asDiagonal()))) == 0.0);
}

TEST_CASE("identity suite passes for both families and n = 1..3") {
  for (Family f : {Family::ATwisted, Family::DTwisted})
    for (int n = 1; n <= 3; ++n) {
      const auto r = verify_r({f, n, eta}, 20, 7);
      CHECK(r.all_pass());
      CHECK(r.checks.size() >= 5);
    }
}

TEST_CASE("invalid model specs are rejected") {
  CHECK_THROWS(validate(ModelSpec{Family::ATwisted, 0, eta}));
  CHECK_THROWS(validate(ModelSpec{Family::ATwisted, 1, cplx(0.0, 0.0)}));
}
