#include "twistchain/bethe_system.hpp"

#include <algorithm>
#include <cmath>

#include "twistchain/tensorlin.hpp"

namespace tc {

namespace {

void kernel_log(const Kernel& k, cplx x, cplx& v, cplx* dv) {
  const double s = k.half ? 0.5 : 1.0;
  const cplx a = s * (x + k.c), b = s * (x - k.c);
  const cplx sa = std::sinh(a), sb = std::sinh(b);
  v = std::log(sa) - std::log(sb);
  if (dv) *dv = s * (std::cosh(a) / sa - std::cosh(b) / sb);
}

cplx kernel_value(const Kernel& k, cplx x) {
  if (k.half) return std::sinh(0.5 * (x + k.c)) / std::sinh(0.5 * (x - k.c));
  return std::sinh(x + k.c) / std::sinh(x - k.c);
}

cplx ipow(cplx x, int p) {
  cplx r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

void add_drive(BetheSystem& S, const ChainSpec& spec, int level, Kernel k, cplx shift) {
  if (spec.thetas.empty()) {
    S.drives[level].push_back({double(2 * spec.N), k, shift});
    return;
  }
  for (int j = 1; j <= spec.N; ++j) {
    S.drives[level].push_back({1.0, k, shift - spec.theta(j)});
    S.drives[level].push_back({1.0, k, shift + spec.theta(j)});
  }
}

void set_inter(BetheSystem& S, int a, int b, Kernel k) {
  S.inter[a][b] = k;
  S.inter[b][a] = k;
}

std::pair<long long, long long> root_key(cplx u) {
  return {std::llround(u.real() * 1e6), std::llround(u.imag() * 1e6)};
}

void sort_level(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return root_key(a) < root_key(b); });
}

bool same_levels(const BetheSystem& S, const BetheRootSet& a, const BetheRootSet& b, double tol) {
  for (std::size_t l = 0; l < a.levels.size(); ++l) {
    const auto& x = a.levels[l];
    const auto& y = b.levels[l];
    if (x.size() != y.size()) return false;
    const double P = level_period(S, int(l), int(x.size()));
    std::vector<bool> used(y.size(), false);
    for (cplx u : x) {
      bool hit = false;
      for (std::size_t j = 0; j < y.size() && !hit; ++j)
        if (!used[j] && equivalent_roots(u, y[j], P, tol, tol)) used[j] = hit = true;
      if (!hit) return false;
    }
  }
  return true;
}

}  // namespace

bool equivalent_roots(cplx a, cplx b, double P, double tol_re, double tol_im) {
  for (double s : {1.0, -1.0}) {
    const cplx d = s * a - b;
    if (std::abs(d.real()) > tol_re) continue;
    if (std::abs(std::remainder(d.imag(), P)) <= tol_im) return true;
  }
  return false;
}

BetheSystem build_system(const ChainSpec& spec) {
  require_bethe_support(spec);
  BetheSystem S;
  const int n = spec.model.n;
  const cplx eta = spec.model.eta;
  S.n = n;
  S.eta = eta;
  S.drives.assign(n, {});
  S.chi.assign(n, false);
  S.inter.assign(n, std::vector<std::optional<Kernel>>(n));
  S.period.assign(n, kPi);
  S.half_angle.assign(n, false);
  const CaseTag tag = spec.bc.tag;

  if (spec.model.family == Family::ATwisted) {
    for (int l = 0; l < n; ++l) {
      S.period[l] = l < n - 1 ? 2 * kPi : kPi;
      S.half_angle[l] = l < n - 1;
    }
    S.chi[n - 1] = tag == CaseTag::A_II;
    if (n == 1) {
      add_drive(S, spec, 0, {false, 2.0 * eta}, 0.0);
      set_inter(S, 0, 0, {false, 4.0 * eta});
    } else {
      add_drive(S, spec, 0, {true, 2.0 * eta}, 0.0);
      for (int l = 0; l < n - 1; ++l) set_inter(S, l, l, {true, 4.0 * eta});
      for (int l = 0; l + 2 < n; ++l) set_inter(S, l, l + 1, {true, -2.0 * eta});
      set_inter(S, n - 2, n - 1, {false, -2.0 * eta});
      set_inter(S, n - 1, n - 1, {false, 4.0 * eta});
    }
    return S;
  }

  for (int l = 0; l < n; ++l) {
    S.period[l] = l < n - 1 ? kPi : 2 * kPi;
    S.half_angle[l] = l == n - 1;
  }
  S.special = spec.bc.special_manifold();
  S.shift_quotient = tag != CaseTag::D_BlockPair || S.special;
  add_drive(S, spec, 0, {false, eta}, 0.0);
  if (n == 1) {
    if (tag == CaseTag::D_DiagMG) S.drives[0].push_back({1.0, {false, -eta}, cplx(0, kPi / 2)});
    if (tag == CaseTag::D_BlockPair && !S.special) {
      const cplx mm = spec.bc.p1, mp = spec.bc.p2;
      S.drives[0].push_back({1.0, {true, eta + mp}, cplx(0, kPi)});
      S.drives[0].push_back({1.0, {true, -eta - mm}, cplx(0, kPi)});
    }
    if (S.special) S.special_root = spec.bc.p1 + eta;
    set_inter(S, 0, 0, {true, 2.0 * eta});
    return S;
  }
  for (int l = 0; l < n - 1; ++l) set_inter(S, l, l, {false, 2.0 * eta});
  set_inter(S, n - 1, n - 1, {true, 2.0 * eta});
  for (int l = 0; l + 1 < n; ++l) set_inter(S, l, l + 1, {false, -eta});
  return S;
}

void eval_log_system(const BetheSystem& S, const std::vector<cplx>& z, const std::vector<int>& lev,
                     const std::vector<Fixed>& fixed, Vec& F, Mat* J) {
  const int M = int(z.size());
  F = Vec::Zero(M);
  if (J) *J = Mat::Zero(M, M);
  const cplx eta = S.eta;
  cplx v, dv, v1, d1, v2, d2;
  cplx* pdv = J ? &dv : nullptr;
  cplx* pd1 = J ? &d1 : nullptr;
  cplx* pd2 = J ? &d2 : nullptr;
  for (int k = 0; k < M; ++k) {
    const int l = lev[k];
    const cplx u = z[k];
    for (const Drive& d : S.drives[l]) {
      kernel_log(d.k, u + d.shift, v, pdv);
      F(k) += d.power * v;
      if (J) (*J)(k, k) += d.power * dv;
    }
    if (S.chi[l]) {
      F(k) += 2.0 * (std::log(std::cosh(u - 2.0 * eta)) - std::log(std::cosh(u + 2.0 * eta)));
      if (J) (*J)(k, k) += 2.0 * (std::tanh(u - 2.0 * eta) - std::tanh(u + 2.0 * eta));
    }
    for (int j = 0; j < M; ++j) {
      if (j == k || !S.inter[l][lev[j]]) continue;
      const Kernel& ker = *S.inter[l][lev[j]];
      kernel_log(ker, u - z[j], v1, pd1);
      kernel_log(ker, u + z[j], v2, pd2);
      F(k) -= v1 + v2;
      if (J) {
        (*J)(k, k) -= d1 + d2;
        (*J)(k, j) -= -d1 + d2;
      }
    }
    for (const Fixed& f : fixed) {
      if (!S.inter[l][f.level]) continue;
      const Kernel& ker = *S.inter[l][f.level];
      kernel_log(ker, u - f.u, v1, pd1);
      kernel_log(ker, u + f.u, v2, pd2);
      F(k) -= v1 + v2;
      if (J) (*J)(k, k) -= d1 + d2;
    }
    F(k) = cplx(F(k).real(), std::remainder(F(k).imag(), 2 * kPi));
  }
}

std::optional<std::vector<cplx>> newton(const BetheSystem& S, std::vector<cplx> z, const std::vector<int>& lev,
                                        const std::vector<Fixed>& fixed, double tol, int max_iter) {
  const int M = int(z.size());
  if (M == 0) return z;
  Vec F, Fn;
  Mat J;
  eval_log_system(S, z, lev, fixed, F, &J);
  double nf = max_abs(F);
  std::vector<cplx> zn(M);
  bool polished = false;
  int stalled = 0;
  for (int it = 0; it < max_iter; ++it) {
    if (!F.allFinite() || !std::isfinite(nf)) return std::nullopt;
    if (nf < tol && polished) return z;
    const Vec dz = J.partialPivLu().solve(-F);
    if (!dz.allFinite()) return nf < tol ? std::optional(z) : std::nullopt;
    double lam = 1.0, nn = 0.0;
    bool decreased = false;
    for (int h = 0; h < 9; ++h) {
      for (int i = 0; i < M; ++i) zn[i] = z[i] + lam * dz(i);
      eval_log_system(S, zn, lev, fixed, Fn, nullptr);
      nn = max_abs(Fn);
      if (std::isfinite(nn) && nn < nf) {
        decreased = true;
        break;
      }
      lam *= 0.5;
    }
    if (nf < tol) {
      // one extra step past tolerance; keep it only if it does not hurt
      polished = true;
      if (!(std::isfinite(nn) && nn <= nf)) return z;
    }
    stalled = decreased ? 0 : stalled + 1;
    if (stalled >= 6) return std::nullopt;
    z = zn;
    eval_log_system(S, z, lev, fixed, F, &J);
    nf = max_abs(F);
    for (cplx u : z)
      if (std::abs(u.real()) > 20.0) return std::nullopt;
  }
  if (std::isfinite(nf) && nf < tol) return z;
  return std::nullopt;
}

cplx rational_residual(const BetheSystem& S, const BetheRootSet& r, int level, int k) {
  const cplx u = r.levels[level][k];
  const cplx eta = S.eta;
  cplx lhs = 1.0, rhs = 1.0;
  for (const Drive& d : S.drives[level]) lhs *= ipow(kernel_value(d.k, u + d.shift), int(std::lround(d.power)));
  if (S.chi[level]) {
    const cplx c = std::cosh(u - 2.0 * eta) / std::cosh(u + 2.0 * eta);
    lhs *= c * c;
  }
  for (int l2 = 0; l2 < S.n; ++l2) {
    if (!S.inter[level][l2]) continue;
    const Kernel& ker = *S.inter[level][l2];
    for (std::size_t j = 0; j < r.levels[l2].size(); ++j) {
      if (l2 == level && int(j) == k) continue;
      const cplx w = r.levels[l2][j];
      rhs *= kernel_value(ker, u - w) * kernel_value(ker, u + w);
    }
  }
  return (lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

double level_period(const BetheSystem& S, int level, int m_level) {
  if (S.shift_quotient && level == S.n - 1 && m_level == 1) return kPi;
  return S.period[level];
}

cplx fold_root(cplx u, double P) {
  double x = u.real(), y = u.imag();
  if (x < 0) {
    x = -x;
    y = -y;
  }
  y = std::fmod(y, P);
  if (y < 0) y += P;
  if (P - y < 1e-7) y = 0.0;
  if (std::abs(x) < 1e-7) {
    x = 0.0;
    y = std::min(y, P - y);
  }
  return {x, y};
}

BetheRootSet canonical_form(const BetheSystem& S, const BetheRootSet& r) {
  auto fold = [&](const BetheRootSet& in) {
    BetheRootSet out = in;
    for (int l = 0; l < S.n; ++l) {
      const double P = level_period(S, l, int(in.levels[l].size()));
      for (cplx& u : out.levels[l]) u = fold_root(u, P);
      sort_level(out.levels[l]);
    }
    return out;
  };
  BetheRootSet a = fold(r);
  const int top = S.n - 1;
  if (S.shift_quotient && a.levels[top].size() >= 2) {
    BetheRootSet shifted = r;
    for (cplx& u : shifted.levels[top]) u += cplx(0, kPi);
    BetheRootSet b = fold(shifted);
    std::vector<std::pair<long long, long long>> ka, kb;
    for (cplx u : a.levels[top]) ka.push_back(root_key(u));
    for (cplx u : b.levels[top]) kb.push_back(root_key(u));
    if (kb < ka) a = b;
  }
  return a;
}

bool singular_root(const BetheSystem& S, int level, cplx u) {
  if (std::abs(u.real()) > 1e-7) return false;
  const double s = S.half_angle[level] ? kPi : kPi / 2;
  const double r = std::fmod(std::abs(u.imag()), s);
  return std::min(r, s - r) < 1e-6;
}

bool same_rootset(const BetheSystem& S, const BetheRootSet& a, const BetheRootSet& b, double tol) {
  if (a.m() != b.m()) return false;
  if (same_levels(S, a, b, tol)) return true;
  const int top = S.n - 1;
  if (!S.shift_quotient || a.levels[top].size() < 2) return false;
  BetheRootSet c = b;
  for (cplx& u : c.levels[top]) u += cplx(0, kPi);
  return same_levels(S, a, c, tol);
}

}  // namespace tc
