#pragma once

#include <cstdint>
#include <string>

#include "twistchain/report.hpp"
#include "twistchain/vertex.hpp"

namespace tc {

enum class CaseTag { A_I, A_II, A_DiagBeta, D_I, D_II, D_DiagMG, D_BlockXi1, D_BlockXi2, D_BlockPair };

struct BoundaryCase {
  CaseTag tag = CaseTag::A_I;
  // β for A_DiagBeta; ξ₋ for D_BlockXi1/2; μ₋ for D_BlockPair
  cplx p1{};
  // μ₊ for D_BlockPair
  cplx p2{};

  static BoundaryCase make(CaseTag t, cplx a = {}, cplx b = {}) { return {t, a, b}; }
  bool quantum_group_case() const {
    return tag == CaseTag::A_I || tag == CaseTag::A_II || tag == CaseTag::D_I || tag == CaseTag::D_II;
  }
  // μ₋ = μ₊ locus of the block-pair family
  bool special_manifold() const { return tag == CaseTag::D_BlockPair && std::abs(p1 - p2) < 1e-14; }
};

Family family_of(CaseTag tag);
std::string tag_name(CaseTag tag);
void check_compatible(const ModelSpec& spec, const BoundaryCase& bc);

Mat k_minus(const ModelSpec& spec, const BoundaryCase& bc, cplx u);
Mat k_plus(const ModelSpec& spec, const BoundaryCase& bc, cplx u);

// Closed form for I/II cases; K⁻(0)₁₁ otherwise.
cplx kappa(const ModelSpec& spec, const BoundaryCase& bc);

VerificationReport verify_k(const ModelSpec& spec, const BoundaryCase& bc, int sample_count,
                            std::uint64_t seed);

}  // namespace tc
