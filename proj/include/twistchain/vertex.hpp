#pragma once

#include <cstdint>

#include "twistchain/report.hpp"
#include "twistchain/types.hpp"

namespace tc {

enum class Family { ATwisted, DTwisted };

struct ModelSpec {
  Family family = Family::ATwisted;
  int n = 1;
  cplx eta{0.0, -0.1};

  // d = 2n for A_{2n-1}^{(2)}, 2n+2 for D_{n+1}^{(2)}
  int dim() const { return family == Family::ATwisted ? 2 * n : 2 * n + 2; }
  cplx q() const { return std::exp(2.0 * eta); }
};

void validate(const ModelSpec& spec);

// α ↦ α' (both families).
int prime_index(const ModelSpec& spec, int alpha);
// α ↦ ᾱ; half-integers for the A family and for α ∈ {n+1, n+2} in the D family.
double bar_index(const ModelSpec& spec, int alpha);
// ε_α, A family only.
int eps_index(const ModelSpec& spec, int alpha);

Mat r_matrix(const ModelSpec& spec, cplx u);

cplx xi(const ModelSpec& spec, cplx u);
cplx zeta(const ModelSpec& spec, cplx u);
cplx rho(const ModelSpec& spec);

struct CrossingData {
  cplx rho;
  Mat V;
  Mat M;
  int epsilon = 1;
};

CrossingData crossing_data(const ModelSpec& spec);

// R_21(u) = P R_12(u) P
Mat r21(const ModelSpec& spec, cplx u);

VerificationReport verify_r(const ModelSpec& spec, int sample_count, std::uint64_t seed);

}  // namespace tc
