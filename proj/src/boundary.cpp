#include "twistchain/boundary.hpp"

#include <random>
#include <stdexcept>

#include "twistchain/tensorlin.hpp"

namespace tc {

Family family_of(CaseTag tag) {
  switch (tag) {
    case CaseTag::A_I:
    case CaseTag::A_II:
    case CaseTag::A_DiagBeta:
      return Family::ATwisted;
    default:
      return Family::DTwisted;
  }
}

std::string tag_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::A_I: return "A_I";
    case CaseTag::A_II: return "A_II";
    case CaseTag::A_DiagBeta: return "A_DiagBeta";
    case CaseTag::D_I: return "D_I";
    case CaseTag::D_II: return "D_II";
    case CaseTag::D_DiagMG: return "D_DiagMG";
    case CaseTag::D_BlockXi1: return "D_BlockXi1";
    case CaseTag::D_BlockXi2: return "D_BlockXi2";
    case CaseTag::D_BlockPair: return "D_BlockPair";
  }
  return "?";
}

void check_compatible(const ModelSpec& spec, const BoundaryCase& bc) {
  if (family_of(bc.tag) != spec.family)
    throw std::invalid_argument("boundary case " + tag_name(bc.tag) + " does not belong to the model family");
}

namespace {

Mat block_form(int n, cplx k0, cplx k1, cplx k2, cplx k3, cplx k4, cplx k5) {
  const int d = 2 * n + 2;
  Mat K = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    K(i, i) = k0;
    K(n + 2 + i, n + 2 + i) = k5;
  }
  K(n, n) = k1;
  K(n, n + 1) = k2;
  K(n + 1, n) = k3;
  K(n + 1, n + 1) = k4;
  return K;
}

Mat block_xi1(int n, cplx eta, cplx x, cplx u) {
  const cplx e2 = std::exp(2.0 * double(n) * eta), eu = std::exp(u), e2u = eu * eu;
  const cplx x2 = x * x;
  const cplx k0 = (e2u + e2) * (x2 * std::exp(u + 2.0 * double(n) * eta) - 1.0 / eu);
  const cplx k1 = 0.5 * (e2u + 1.0) * (2.0 * x * e2 * (e2u - 1.0) - eu * (1.0 - x2 * e2) * (1.0 + e2));
  const cplx k2 = 0.5 * eu * (e2u - 1.0) * (1.0 + x2 * e2) * (1.0 - e2);
  const cplx k4 = 0.5 * (e2u + 1.0) * (-2.0 * x * e2 * (e2u - 1.0) - eu * (1.0 - x2 * e2) * (1.0 + e2));
  const cplx k5 = (e2u + e2) * (x2 * std::exp(u + 2.0 * double(n) * eta) - e2u * eu);
  return block_form(n, k0, k1, k2, k2, k4, k5);
}

Mat block_xi2(int n, cplx eta, cplx x, cplx u) {
  const cplx e2 = std::exp(2.0 * double(n) * eta), en = std::exp(double(n) * eta);
  const cplx eu = std::exp(u), e2u = eu * eu, x2 = x * x;
  const cplx k0 = (e2u - e2) * (x2 * eu - 1.0 / eu);
  const cplx k1 = 0.5 * (e2u + 1.0) * eu * (1.0 - e2) * (x2 - 1.0);
  const cplx k2 = 0.5 * (e2u - 1.0) * (2.0 * en * (e2u + 1.0) * x + eu * (1.0 + e2) * (1.0 + x2));
  const cplx k3 = 0.5 * (e2u - 1.0) * (-2.0 * en * (e2u + 1.0) * x + eu * (1.0 + e2) * (1.0 + x2));
  const cplx k5 = (e2u - e2) * (x2 - e2u) * eu;
  return block_form(n, k0, k1, k2, k3, k1, k5);
}

Mat k_minus_raw(const ModelSpec& spec, CaseTag tag, cplx p, cplx u) {
  const int n = spec.n;
  const cplx eta = spec.eta;
  const double nd = n;
  switch (tag) {
    case CaseTag::A_I:
      return identity(2 * n);
    case CaseTag::A_II: {
      Mat K = Mat::Zero(2 * n, 2 * n);
      for (int i = 0; i < n; ++i) {
        K(i, i) = std::exp(-u);
        K(n + i, n + i) = std::exp(u);
      }
      return K;
    }
    case CaseTag::A_DiagBeta: {
      Mat K = identity(2 * n);
      K(0, 0) = (std::exp(-u) + p) / (std::exp(u) + p);
      K(2 * n - 1, 2 * n - 1) =
          (std::exp(u + 4.0 * (nd - 1.0) * eta) - p) / (std::exp(-u + 4.0 * (nd - 1.0) * eta) - p);
      return K;
    }
    case CaseTag::D_I:
    case CaseTag::D_II: {
      cplx km, kp, k1, k2;
      if (tag == CaseTag::D_I) {
        km = std::exp(-2.0 * u) * std::cosh(u - nd * eta);
        kp = std::exp(2.0 * u) * std::cosh(u - nd * eta);
        k1 = std::cosh(u) * std::cosh(nd * eta);
        k2 = std::sinh(u) * std::sinh(nd * eta);
      } else {
        km = std::exp(-2.0 * u) * std::sinh(u - nd * eta);
        kp = std::exp(2.0 * u) * std::sinh(u - nd * eta);
        k1 = -std::cosh(u) * std::sinh(nd * eta);
        k2 = -std::sinh(u) * std::cosh(nd * eta);
      }
      return -2.0 * std::exp(2.0 * u + nd * eta) * block_form(n, km, k1, k2, k2, k1, kp);
    }
    case CaseTag::D_DiagMG: {
      const int d = 2 * n + 2;
      Mat K = Mat::Zero(d, d);
      const cplx w = kI * std::exp(-nd * eta);
      for (int i = 0; i < n; ++i) {
        K(i, i) = 1.0;
        K(n + 2 + i, n + 2 + i) = std::exp(2.0 * u);
      }
      K(n, n) = (std::exp(u) - w) / (std::exp(-u) - w);
      K(n + 1, n + 1) = (std::exp(u) + w) / (std::exp(-u) + w);
      return K;
    }
    case CaseTag::D_BlockXi1:
    case CaseTag::D_BlockPair:
      return block_xi1(n, eta, p, u);
    case CaseTag::D_BlockXi2:
      return block_xi2(n, eta, p, u);
  }
  throw std::logic_error("unknown case tag");
}

// ξ₋ = e^{μ₋ - nη}, ξ₊ = e^{μ₊ + nη} for the block pair.
cplx minus_param(const ModelSpec& spec, const BoundaryCase& bc) {
  if (bc.tag == CaseTag::D_BlockPair) return std::exp(bc.p1 - double(spec.n) * spec.eta);
  return bc.p1;
}

cplx plus_param(const ModelSpec& spec, const BoundaryCase& bc) {
  if (bc.tag == CaseTag::D_BlockPair) return std::exp(bc.p2 + double(spec.n) * spec.eta);
  return bc.p1;
}

}  // namespace

Mat k_minus(const ModelSpec& spec, const BoundaryCase& bc, cplx u) {
  check_compatible(spec, bc);
  return k_minus_raw(spec, bc.tag, minus_param(spec, bc), u);
}

Mat k_plus(const ModelSpec& spec, const BoundaryCase& bc, cplx u) {
  check_compatible(spec, bc);
  const CrossingData cd = crossing_data(spec);
  return k_minus_raw(spec, bc.tag, plus_param(spec, bc), -u - cd.rho).transpose() * cd.M;
}

cplx kappa(const ModelSpec& spec, const BoundaryCase& bc) {
  check_compatible(spec, bc);
  const double n = spec.n;
  switch (bc.tag) {
    case CaseTag::A_I:
    case CaseTag::A_II:
      return 1.0;
    case CaseTag::D_I:
      return -2.0 * std::exp(n * spec.eta) * std::cosh(n * spec.eta);
    case CaseTag::D_II:
      return 2.0 * std::exp(n * spec.eta) * std::sinh(n * spec.eta);
    default:
      return k_minus(spec, bc, 0.0)(0, 0);
  }
}

VerificationReport verify_k(const ModelSpec& spec, const BoundaryCase& bc, int sample_count,
                            std::uint64_t seed) {
  check_compatible(spec, bc);
  if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
  const int d = spec.dim();
  const Mat Id = identity(d);
  const CrossingData cd = crossing_data(spec);
  const Mat M1 = kron(cd.M, Id), M1inv = kron(cd.M.inverse(), Id);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);

  double bybe = 0, bybe_plus = 0;
  for (int s = 0; s < sample_count; ++s) {
    const cplx u(box(rng), box(rng)), v(box(rng), box(rng));
    {
      const Mat K1 = kron(k_minus(spec, bc, u), Id), K2 = kron(Id, k_minus(spec, bc, v));
      const Mat lhs = r_matrix(spec, u - v) * K1 * r21(spec, u + v) * K2;
      const Mat rhs = K2 * r_matrix(spec, u + v) * K1 * r21(spec, u - v);
      bybe = std::max(bybe, max_abs(lhs - rhs) / std::max(max_abs(lhs), max_abs(rhs)));
    }
    {
      const Mat K1t = kron(k_plus(spec, bc, u).transpose(), Id);
      const Mat K2t = kron(Id, k_plus(spec, bc, v).transpose());
      const cplx w = -u - v - 2.0 * cd.rho;
      const Mat lhs = r_matrix(spec, -u + v) * K1t * M1inv * r21(spec, w) * M1 * K2t;
      const Mat rhs = K2t * M1 * r_matrix(spec, w) * M1inv * K1t * r21(spec, -u + v);
      bybe_plus = std::max(bybe_plus, max_abs(lhs - rhs) / std::max(max_abs(lhs), max_abs(rhs)));
    }
  }
  VerificationReport rep;
  rep.add("bybe_minus", bybe, kResidualTol);
  rep.add("bybe_plus", bybe_plus, kResidualTol);
  const cplx k = kappa(spec, bc);
  rep.add("regularity", max_abs(k_minus(spec, bc, 0.0) - k * Id) / std::max(1.0, std::abs(k)), kResidualTol);
  if (bc.quantum_group_case()) {
    double sym = 0;
    for (int s = 0; s < sample_count; ++s) {
      const cplx u(box(rng), box(rng));
      const Mat K = k_minus(spec, bc, u);
      sym = std::max(sym, max_abs(K - K.transpose()) / std::max(1.0, max_abs(K)));
    }
    rep.add("symmetry", sym, kResidualTol);
  }
  return rep;
}

}  // namespace tc
