#pragma once

#include <functional>
#include <vector>

#include "twistchain/boundary.hpp"
#include "twistchain/report.hpp"

namespace tc {

inline constexpr long kDefaultMemoryCap = 4096;

struct ChainSpec {
  ModelSpec model;
  BoundaryCase bc;
  int N = 2;
  // empty means homogeneous
  std::vector<cplx> thetas;
  long memory_cap = kDefaultMemoryCap;

  int d() const { return model.dim(); }
  long hilbert_dim() const;
  cplx theta(int j) const { return thetas.empty() ? cplx{} : thetas[j - 1]; }
};

void validate(const ChainSpec& spec);

// tr_a K⁺_a(u) T_a(u) K⁻_a(u) T̂_a(u) via sparse two-site gates on the aux ⊗ quantum space.
Mat transfer(const ChainSpec& spec, cplx u, int threads = 1);

// Same operator assembled from explicit Kronecker products; small chains only.
Mat transfer_dense(const ChainSpec& spec, cplx u);

// 4th-order central difference with one Richardson level.
Mat derivative(const std::function<Mat(cplx)>& f, cplx at, int order = 1, double h = 1e-3);

struct HamiltonianBundle {
  Mat H;
  Mat two_site;
  cplx c1;
  cplx c2;
  // μ/2κ, D family only
  cplx boundary_U_coeff;
};

Mat two_site_hamiltonian(const ChainSpec& spec);
HamiltonianBundle hamiltonian(const ChainSpec& spec);
void normalization_constants(const ChainSpec& spec, cplx& c1, cplx& c2);
bool uses_second_derivative(const ChainSpec& spec);

VerificationReport verify_chain(const ChainSpec& spec, int sample_count, std::uint64_t seed);
VerificationReport verify_h_t_relation(const ChainSpec& spec);

cplx fusion_f0(const ChainSpec& spec, cplx u);
cplx fusion_f1(const ModelSpec& model, cplx u);
VerificationReport verify_fusion(const ChainSpec& spec, int site);

}  // namespace tc
