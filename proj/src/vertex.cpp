#include "twistchain/vertex.hpp"

#include <random>
#include <stdexcept>

#include "twistchain/tensorlin.hpp"

namespace tc {

void validate(const ModelSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("rank n must be positive");
  if (spec.eta == cplx(0.0)) throw std::invalid_argument("eta must be nonzero");
}

int prime_index(const ModelSpec& spec, int alpha) {
  return spec.family == Family::ATwisted ? 2 * spec.n + 1 - alpha : 2 * spec.n + 3 - alpha;
}

double bar_index(const ModelSpec& spec, int alpha) {
  const int n = spec.n;
  if (spec.family == Family::ATwisted) return alpha <= n ? alpha - 0.5 : alpha + 0.5;
  if (alpha < n + 1) return alpha + 1;
  if (alpha <= n + 2) return n + 1.5;
  return alpha - 1;
}

int eps_index(const ModelSpec& spec, int alpha) { return alpha <= spec.n ? 1 : -1; }

namespace {

struct Builder {
  int d;
  Mat R;
  explicit Builder(int dim) : d(dim), R(Mat::Zero(dim * dim, dim * dim)) {}
  // adds v · e_{ab} ⊗ e_{cf}
  void add(int a, int b, int c, int f, cplx v) { R((a - 1) * d + (c - 1), (b - 1) * d + (f - 1)) += v; }
};

Mat r_matrix_a(const ModelSpec& spec, cplx u) {
  const int n = spec.n, d = 2 * n;
  const cplx eta = spec.eta;
  Builder B(d);
  const cplx c = 2.0 * std::sinh(u / 2.0 - 2.0 * eta) * std::cosh(u / 2.0 - 2.0 * double(n) * eta);
  const cplx b = 2.0 * std::sinh(u / 2.0) * std::cosh(u / 2.0 - 2.0 * double(n) * eta);
  const cplx e = -2.0 * std::exp(-u / 2.0) * std::sinh(2.0 * eta) * std::cosh(u / 2.0 - 2.0 * double(n) * eta);
  const cplx ebar = std::exp(u) * e;
  const cplx sh2 = 2.0 * std::sinh(2.0 * eta);
  for (int al = 1; al <= d; ++al) {
    const int alp = prime_index(spec, al);
    for (int be = 1; be <= d; ++be) {
      const int bep = prime_index(spec, be);
      if (al == be && al != alp) B.add(al, al, al, al, c);
      if (al != be && be != alp) B.add(al, al, be, be, b);
      if (al < be && al != bep) B.add(al, be, be, al, e);
      if (al > be && al != bep) B.add(al, be, be, al, ebar);
      cplx a;
      if (al == be) {
        a = 2.0 * std::sinh(u / 2.0) * std::cosh(u / 2.0 - 2.0 * double(n - 1) * eta);
      } else {
        const double s = al < be ? 1.0 : -1.0;
        const double ee = eps_index(spec, al) * eps_index(spec, be);
        const double shift = s * n + bar_index(spec, al) - bar_index(spec, be);
        a = sh2 * std::exp(-s * u / 2.0) *
            (-s * ee * std::exp(2.0 * shift * eta) * std::sinh(u / 2.0) -
             (be == alp ? 1.0 : 0.0) * std::cosh(u / 2.0 - 2.0 * double(n) * eta));
      }
      B.add(al, be, alp, bep, a);
    }
  }
  return B.R;
}

Mat r_matrix_d(const ModelSpec& spec, cplx u) {
  const int n = spec.n, d = 2 * n + 2;
  const cplx eta = spec.eta;
  Builder B(d);
  auto inS = [&](int a) { return a == n + 1 || a == n + 2; };
  auto pr = [&](int a) { return prime_index(spec, a); };
  auto bar = [&](int a) { return bar_index(spec, a); };
  const cplx x = std::exp(u), e2u = x * x, q4 = std::exp(4.0 * eta);
  const cplx k4n = std::exp(4.0 * double(n) * eta), e2n = std::exp(2.0 * double(n) * eta);
  const cplx e2eta = std::exp(2.0 * eta);

  for (int al = 1; al <= d; ++al) {
    if (!inS(al)) B.add(al, al, al, al, (e2u - q4) * (e2u - k4n));
    for (int be = 1; be <= d; ++be) {
      if (al != be && be != pr(al) && !(inS(al) && inS(be)))
        B.add(al, al, be, be, e2eta * (e2u - 1.0) * (e2u - k4n));
      if (!inS(al) && !inS(be) && al != pr(be)) {
        if (al < be) B.add(al, be, be, al, -(q4 - 1.0) * (e2u - k4n));
        if (al > be) B.add(al, be, be, al, -(q4 - 1.0) * (e2u - k4n) * e2u);
      }
    }
  }

  const cplx pre = -0.5 * (q4 - 1.0) * (e2u - k4n);
  for (int al = 1; al <= d; ++al) {
    if (inS(al)) continue;
    for (int be : {n + 1, n + 2}) {
      cplx c1, c2;
      if (al < n + 1) {
        c1 = x + 1.0;
        c2 = -(x - 1.0);
      } else {
        c1 = (x + 1.0) * x;
        c2 = (x - 1.0) * x;
      }
      B.add(al, be, be, al, pre * c1);
      B.add(pr(be), pr(al), pr(al), pr(be), pre * c1);
      B.add(al, be, pr(be), al, pre * c2);
      B.add(pr(be), pr(al), pr(al), be, pre * c2);
    }
  }

  for (int al = 1; al <= d; ++al) {
    for (int be = 1; be <= d; ++be) {
      if (inS(al) || inS(be)) continue;
      const cplx gap = std::exp(2.0 * eta * (bar(al) - bar(be)));
      const double conj = be == pr(al) ? 1.0 : 0.0;
      cplx v;
      if (al == be)
        v = (q4 * e2u - k4n) * (e2u - 1.0);
      else if (al < be)
        v = (q4 - 1.0) * (k4n * gap * (e2u - 1.0) - conj * (e2u - k4n));
      else
        v = (q4 - 1.0) * e2u * (gap * (e2u - 1.0) - conj * (e2u - k4n));
      B.add(al, be, pr(al), pr(be), v);
    }
  }

  auto bpm = [&](int al, double s) -> cplx {
    if (al < n + 1) return s * std::exp(2.0 * eta * (al - 0.5)) * (q4 - 1.0) * (e2u - 1.0) * (x + s * e2n);
    return std::exp(2.0 * eta * (al - n - 2.5)) * (q4 - 1.0) * (e2u - 1.0) * x * (x + s * e2n);
  };
  for (int al = 1; al <= d; ++al) {
    if (inS(al)) continue;
    const cplx bp = bpm(al, 1.0), bm = bpm(al, -1.0);
    for (int be : {n + 1, n + 2}) {
      B.add(al, be, pr(al), pr(be), 0.5 * bp);
      B.add(pr(be), pr(al), be, al, 0.5 * bp);
      B.add(al, be, pr(al), be, 0.5 * bm);
      B.add(be, pr(al), be, al, 0.5 * bm);
    }
  }

  for (int al : {n + 1, n + 2}) {
    const cplx base = e2eta * (e2u - 1.0) * (e2u - k4n);
    const cplx cp = 0.5 * (q4 - 1.0) * (e2n + 1.0) * x * (x - 1.0) * (x + e2n) + base;
    const cplx cm = -0.5 * (q4 - 1.0) * (e2n + 1.0) * x * (x + 1.0) * (x - e2n) + base;
    const cplx dp = 0.5 * (q4 - 1.0) * (e2n - 1.0) * x * (x + 1.0) * (x + e2n);
    const cplx dm = -0.5 * (q4 - 1.0) * (e2n - 1.0) * x * (x - 1.0) * (x - e2n);
    B.add(al, al, pr(al), pr(al), cp);
    B.add(al, al, al, al, cm);
    B.add(al, pr(al), pr(al), al, dp);
    B.add(al, pr(al), al, pr(al), dm);
  }
  return std::exp(-2.0 * u) * std::exp(-2.0 * double(n + 1) * eta) * B.R;
}

}  // namespace

Mat r_matrix(const ModelSpec& spec, cplx u) {
  validate(spec);
  return spec.family == Family::ATwisted ? r_matrix_a(spec, u) : r_matrix_d(spec, u);
}

Mat r21(const ModelSpec& spec, cplx u) {
  const Mat P = permutation(spec.dim());
  return P * r_matrix(spec, u) * P;
}

cplx xi(const ModelSpec& spec, cplx u) {
  const double n = spec.n;
  const cplx eta = spec.eta;
  if (spec.family == Family::ATwisted)
    return -2.0 * std::sinh(u / 2.0 + 2.0 * eta) * std::cosh(u / 2.0 + 2.0 * n * eta);
  return 4.0 * std::sinh(u + 2.0 * eta) * std::sinh(u + 2.0 * n * eta);
}

cplx zeta(const ModelSpec& spec, cplx u) { return xi(spec, u) * xi(spec, -u); }

cplx rho(const ModelSpec& spec) {
  const double n = spec.n;
  if (spec.family == Family::ATwisted) return -4.0 * n * spec.eta - kI * kPi;
  return -2.0 * n * spec.eta;
}

CrossingData crossing_data(const ModelSpec& spec) {
  const int n = spec.n, d = spec.dim();
  const cplx eta = spec.eta;
  CrossingData out;
  out.rho = rho(spec);
  out.V = Mat::Zero(d, d);
  for (int k = 1; k <= d; ++k) {
    cplx v;
    if (spec.family == Family::ATwisted) {
      v = k <= n ? kI * std::exp(-2.0 * double(n + 1 - k) * eta) : -kI * std::exp(-2.0 * double(n - k) * eta);
    } else if (k <= n) {
      v = std::exp(-double(2 * n + 1 - 2 * k) * eta);
    } else if (k <= n + 2) {
      v = 1.0;
    } else {
      v = std::exp(-double(2 * n + 5 - 2 * k) * eta);
    }
    out.V(k - 1, d - k) = v;
  }
  out.epsilon = spec.family == Family::ATwisted ? -1 : 1;
  out.M = double(out.epsilon) * out.V.transpose() * out.V;
  return out;
}

namespace {

cplx sample_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  const double re = box(rng);
  const double im = box(rng);
  return {re, im};
}

double rel(const Mat& diff, const Mat& ref) { return max_abs(diff) / std::max(1.0, max_abs(ref)); }

}  // namespace

VerificationReport verify_r(const ModelSpec& spec, int sample_count, std::uint64_t seed) {
  validate(spec);
  if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
  const int d = spec.dim();
  const Mat P = permutation(d), Id = identity(d);
  const CrossingData cd = crossing_data(spec);
  const Mat V1 = kron(cd.V, Id), V2t = kron(Id, cd.V.transpose());
  const Mat P23 = kron(Id, P);
  std::mt19937_64 rng(seed);

  auto away_from_xi_zeros = [&](cplx w) {
    return std::abs(xi(spec, w)) > 1e-4 && std::abs(xi(spec, -w)) > 1e-4;
  };
  auto draw = [&]() {
    cplx w = sample_point(rng);
    while (!away_from_xi_zeros(w)) w = sample_point(rng);
    return w;
  };

  double ybe = 0, pt = 0, uni = 0, cross1 = 0, cross2 = 0;
  for (int s = 0; s < sample_count; ++s) {
    const cplx u = draw(), v = draw();
    const Mat Ru = r_matrix(spec, u);
    const Mat Ruv = r_matrix(spec, u - v), Rv = r_matrix(spec, v);
    const Mat R12 = kron(Ruv, Id), R23 = kron(Id, Rv), R13 = P23 * kron(Ru, Id) * P23;
    const Mat lhs = R12 * R13 * R23, rhs = R23 * R13 * R12;
    ybe = std::max(ybe, rel(lhs - rhs, lhs));

    pt = std::max(pt, rel(P * Ru * P - partial_transpose(partial_transpose(Ru, d, 1), d, 2), Ru));

    const Mat unit = Ru * (P * r_matrix(spec, -u) * P);
    uni = std::max(uni, max_abs(unit - zeta(spec, u) * identity(d * d)) / std::max(1.0, std::abs(zeta(spec, u))));

    const Mat Rc = r_matrix(spec, -u - cd.rho);
    cross1 = std::max(cross1, rel(Ru - V1 * partial_transpose(Rc, d, 2) * V1, Ru));
    cross2 = std::max(cross2, rel(Ru - V2t * partial_transpose(Rc, d, 1) * V2t, Ru));
  }
  const Mat R0 = r_matrix(spec, 0.0);
  VerificationReport rep;
  rep.add("ybe", ybe, kResidualTol);
  rep.add("pt_symmetry", pt, kResidualTol);
  rep.add("unitarity", uni, kResidualTol);
  rep.add("regularity", rel(R0 - xi(spec, 0.0) * P, R0), kResidualTol);
  rep.add("crossing_v1", cross1, kResidualTol);
  rep.add("crossing_v2t", cross2, kResidualTol);
  rep.add("v_squared", max_abs(cd.V * cd.V - Id), kResidualTol);
  Mat Mclosed = Mat::Zero(d, d);
  const double top = spec.family == Family::ATwisted ? spec.n + 0.5 : spec.n + 1.5;
  for (int a = 1; a <= d; ++a) Mclosed(a - 1, a - 1) = std::exp(4.0 * (top - bar_index(spec, a)) * spec.eta);
  rep.add("m_closed_form", max_abs(cd.M - Mclosed), kResidualTol);
  return rep;
}

}  // namespace tc
