#include <random>
#include <vector>

#include "doctest.h"
#include "twistchain/kernels.hpp"

using namespace tc;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

}  // namespace

TEST_CASE("avx2 axpy and scale agree with the scalar reference") {
  if (!kernels::cpu_has_avx2()) return;
  std::mt19937_64 rng(3);
  for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 64u, 129u}) {
    const auto x = random_vec(n, rng);
    const auto y0 = random_vec(n, rng);
    const cplx a(0.3, -1.7);
    auto ys = y0, yv = y0;
    kernels::axpy_scalar(n, a, x.data(), ys.data());
    kernels::axpy_avx2(n, a, x.data(), yv.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) < 1e-14);
    kernels::scale_into_scalar(n, a, x.data(), ys.data());
    kernels::scale_into_avx2(n, a, x.data(), yv.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) < 1e-14);
  }
}

TEST_CASE("forcing the scalar path changes the active isa") {
  const auto before = kernels::active_isa();
  kernels::force_isa(kernels::Isa::Scalar);
  CHECK(kernels::active_isa() == kernels::Isa::Scalar);
  std::vector<cplx> x{{1, 2}}, y{{0, 0}};
  kernels::axpy(1, cplx(0, 1), x.data(), y.data());
  CHECK(y[0] == cplx(-2, 1));
  kernels::force_isa(before);
}
