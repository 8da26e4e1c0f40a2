#include "twistchain/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "twistchain/bethe_system.hpp"
#include "twistchain/qsym.hpp"
#include "twistchain/tensorlin.hpp"

namespace tc {

std::vector<int> BetheRootSet::m() const {
  std::vector<int> out;
  for (const auto& l : levels) out.push_back(int(l.size()));
  return out;
}

int BetheRootSet::total() const {
  int s = 0;
  for (const auto& l : levels) s += int(l.size());
  return s;
}

void require_bethe_support(const ChainSpec& spec) {
  const CaseTag tag = spec.bc.tag;
  switch (tag) {
    case CaseTag::A_I:
    case CaseTag::A_II:
    case CaseTag::D_I:
      return;
    case CaseTag::D_DiagMG:
    case CaseTag::D_BlockPair:
      if (spec.model.n != 1)
        throw unsupported_case(tag_name(tag) + ": eigenvalue formula known for n = 1 only");
      return;
    case CaseTag::D_II:
      throw unsupported_case("D_II: unsupported by source (no eigenvalue formula)");
    default:
      throw unsupported_case(tag_name(tag) + ": unsupported by source (no eigenvalue formula)");
  }
}

bool has_energy_formula(const ChainSpec& spec) {
  const CaseTag tag = spec.bc.tag;
  return tag == CaseTag::A_I || tag == CaseTag::A_II || tag == CaseTag::D_I;
}

namespace {

cplx checked_div(cplx a, cplx b, const char* what) {
  const cplx r = a / b;
  if (b == 0.0 || !std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw pole_error(std::string("lambda_eval: pole in ") + what);
  return r;
}

struct Roots {
  const BetheRootSet& r;
  bool half(int l, int n, Family f) const { return f == Family::DTwisted || l < n; }
  cplx Q(int l, cplx u, int n, Family f) const {
    cplx p = 1.0;
    const bool h = half(l, n, f);
    for (cplx x : r.levels[l - 1])
      p *= h ? std::sinh(0.5 * (u - x)) * std::sinh(0.5 * (u + x)) : std::sinh(u - x) * std::sinh(u + x);
    return p;
  }
};

template <typename F>
cplx vacuum(const ChainSpec& spec, cplx u, F f) {
  cplx p = 1.0;
  for (int j = 1; j <= spec.N; ++j) p *= f(u - spec.theta(j)) * f(u + spec.theta(j));
  return p;
}

cplx lambda_a(const ChainSpec& spec, const BetheRootSet& roots, cplx u) {
  const int n = spec.model.n;
  const cplx eta = spec.model.eta;
  const cplx rh = rho(spec.model);
  const Family fam = Family::ATwisted;
  const Roots R{roots};
  auto Q = [&](int l, cplx w) { return R.Q(l, w, n, fam); };
  const bool two = spec.bc.tag == CaseTag::A_II;
  auto psi = [&](cplx w) -> cplx {
    if (!two) return 1.0;
    return -checked_div(std::cosh(w - 2.0 * (n - 1) * eta), std::cosh(w - 2.0 * (n + 1) * eta), "psi");
  };
  auto A = [&](cplx w) { return checked_div(Q(1, w + 2.0 * eta), Q(1, w - 2.0 * eta), "Q_1 of A"); };
  auto B = [&](int l, cplx w) {
    if (l <= n - 2)
      return checked_div(Q(l, w - 2.0 * (l + 2) * eta) * Q(l + 1, w - 2.0 * (l - 1) * eta),
                         Q(l, w - 2.0 * l * eta) * Q(l + 1, w - 2.0 * (l + 1) * eta), "Q_l of B_l");
    return checked_div(Q(n - 1, w - 2.0 * (n + 1) * eta) * Q(n, w - 2.0 * (n - 2) * eta),
                       Q(n - 1, w - 2.0 * (n - 1) * eta) * Q(n, w - 2.0 * n * eta), "Q_l of B_{n-1}");
  };
  auto z = [&](int l, cplx w) {
    return checked_div(std::sinh(w) * std::sinh(w - 4.0 * n * eta) * std::cosh(w - 2.0 * (n + 1) * eta),
                       std::sinh(w - 2.0 * l * eta) * std::sinh(w - 2.0 * (l + 1) * eta) *
                           std::cosh(w - 2.0 * n * eta),
                       "z_l");
  };
  const cplx ut = -u - rh;
  const cplx V1 = vacuum(spec, u, [&](cplx w) { return 2.0 * std::sinh(0.5 * w - 2.0 * eta) * std::cosh(0.5 * w - 2.0 * n * eta); });
  const cplx V2 = vacuum(spec, u, [&](cplx w) { return 2.0 * std::sinh(0.5 * w) * std::cosh(0.5 * w - 2.0 * (n - 1) * eta); });
  const cplx V3 = vacuum(spec, u, [&](cplx w) { return 2.0 * std::sinh(0.5 * w) * std::cosh(0.5 * w - 2.0 * n * eta); });
  const cplx t1 = A(u) * psi(u) *
                  checked_div(std::sinh(u - 4.0 * n * eta) * std::cosh(u - 2.0 * (n + 1) * eta),
                              std::sinh(u - 2.0 * eta) * std::cosh(u - 2.0 * n * eta), "first dressing") *
                  V1;
  const cplx t2 = A(ut) * psi(ut) *
                  checked_div(std::sinh(u) * std::cosh(u - 2.0 * (n - 1) * eta),
                              std::sinh(u - 2.0 * (2 * n - 1) * eta) * std::cosh(u - 2.0 * n * eta),
                              "last dressing") *
                  V2;
  cplx s = 0.0;
  for (int l = 1; l < n; ++l) s += z(l, u) * psi(u) * B(l, u) + z(l, ut) * psi(ut) * B(l, ut);
  return t1 + t2 + s * V3;
}

cplx a_qg(int n, cplx eta, cplx u) {
  return checked_div(4.0 * std::exp(6.0 * n * eta) * std::cosh(u - double(n) * eta) *
                         std::cosh(u - double(n - 1) * eta) * std::sinh(2.0 * (u - 2.0 * n * eta)) *
                         std::sinh(u - double(n + 1) * eta),
                     std::sinh(2.0 * (u - eta)) * std::sinh(u - double(n) * eta), "a(u)");
}

// extra factor of a(u) in the block-pair case
cplx a_pair_factor(const ChainSpec& spec, cplx u) {
  const int n = spec.model.n;
  const cplx eta = spec.model.eta, mm = spec.bc.p1, mp = spec.bc.p2;
  return -4.0 * std::exp(2.0 * n * eta + mm + mp) * std::sinh(u + mm) * std::sinh(u - mp - 2.0 * n * eta);
}

cplx a_d(const ChainSpec& spec, cplx u) {
  const int n = spec.model.n;
  const cplx eta = spec.model.eta;
  switch (spec.bc.tag) {
    case CaseTag::D_DiagMG:
      return checked_div(4.0 * std::exp(2.0 * n * eta) * std::cosh(u) * std::cosh(u - double(n - 1) * eta) *
                             std::sinh(u - 2.0 * n * eta) * std::sinh(u - double(n + 1) * eta),
                         std::sinh(2.0 * (u - eta)) * std::sinh(2.0 * (u - double(n) * eta)), "a(u)");
    case CaseTag::D_BlockPair:
      return a_qg(n, eta, u) * a_pair_factor(spec, u);
    default:
      return a_qg(n, eta, u);
  }
}

cplx b_d(const ChainSpec& spec, int l, cplx u) {
  const int n = spec.model.n;
  const cplx eta = spec.model.eta;
  if (spec.bc.tag == CaseTag::D_DiagMG) {
    const cplx s = std::sinh(2.0 * (u - eta));
    return checked_div(std::exp(2.0 * eta) * std::sinh(2.0 * u) * std::sinh(2.0 * (u - 2.0 * eta)), s * s, "b_1");
  }
  if (spec.bc.tag == CaseTag::D_BlockPair) {
    const cplx mm = spec.bc.p1, mp = spec.bc.p2;
    const cplx G = checked_div(std::cosh(0.5 * (u + mp)) * std::cosh(0.5 * (u - mm - 2.0 * eta)),
                               std::cosh(0.5 * (u + mm)) * std::cosh(0.5 * (u - mp - 2.0 * eta)), "G(u)");
    return checked_div(std::sinh(u), std::sinh(u - 2.0 * eta), "b_1") * a_d(spec, u) * G;
  }
  const cplx a = a_d(spec, u);
  if (n == 1) return a * checked_div(std::sinh(u), std::sinh(u - 2.0 * eta), "b_1");
  cplx b = a * checked_div(std::sinh(2.0 * u), std::sinh(2.0 * u - 4.0 * eta), "b_1");
  for (int k = 2; k <= std::min(l, n - 1); ++k)
    b *= checked_div(std::sinh(2.0 * u - 2.0 * (k - 1) * eta), std::sinh(2.0 * u - 2.0 * (k + 1) * eta), "b_l");
  if (l == n) b *= checked_div(std::sinh(u - double(n - 1) * eta), std::sinh(u - double(n + 1) * eta), "b_n");
  return b;
}

cplx lambda_d(const ChainSpec& spec, const BetheRootSet& roots, cplx u) {
  const int n = spec.model.n;
  const cplx eta = spec.model.eta;
  const cplx rh = rho(spec.model);
  const cplx ipi(0, kPi);
  const Roots R{roots};
  auto Q = [&](int l, cplx w) { return R.Q(l, w, n, Family::DTwisted); };
  auto QQ = [&](int l, cplx w) { return Q(l, w) * Q(l, w + ipi); };
  auto A = [&](cplx w) { return checked_div(QQ(1, w + eta), QQ(1, w - eta), "Q_1 of A"); };
  auto B = [&](int l, cplx w) {
    if (l <= n - 2)
      return checked_div(QQ(l, w - double(l + 2) * eta) * QQ(l + 1, w - double(l - 1) * eta),
                         QQ(l, w - double(l) * eta) * QQ(l + 1, w - double(l + 1) * eta), "Q_l of B_l");
    if (l == n - 1)
      return checked_div(QQ(n - 1, w - double(n + 1) * eta) * QQ(n, w - double(n - 2) * eta),
                         QQ(n - 1, w - double(n - 1) * eta) * QQ(n, w - double(n) * eta), "Q_l of B_{n-1}");
    return checked_div(Q(n, w - double(n + 2) * eta) * Q(n, w - double(n - 2) * eta + ipi),
                       Q(n, w - double(n) * eta) * Q(n, w - double(n) * eta + ipi), "Q_n of B_n");
  };
  const cplx ut = -u - rh;
  const cplx V1 = vacuum(spec, u, [&](cplx w) { return 4.0 * std::sinh(w - 2.0 * eta) * std::sinh(w - 2.0 * n * eta); });
  const cplx V2 = vacuum(spec, u, [&](cplx w) { return 4.0 * std::sinh(w) * std::sinh(w - 2.0 * n * eta); });
  const cplx V3 = vacuum(spec, u, [&](cplx w) { return 4.0 * std::sinh(w) * std::sinh(w - 2.0 * (n - 1) * eta); });
  cplx s = 0.0;
  for (int l = 1; l <= n; ++l) s += b_d(spec, l, u) * B(l, u) + b_d(spec, l, ut) * B(l, ut);
  return a_d(spec, u) * A(u) * V1 + s * V2 + a_d(spec, ut) * A(ut) * V3;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::vector<int>> cardinality_box(const std::vector<int>& cap) {
  std::vector<std::vector<int>> out{std::vector<int>(cap.size(), 0)};
  for (std::size_t l = 0; l < cap.size(); ++l) {
    std::vector<std::vector<int>> next;
    for (const auto& m : out)
      for (int k = 0; k <= cap[l]; ++k) {
        auto m2 = m;
        m2[l] = k;
        next.push_back(m2);
      }
    out = std::move(next);
  }
  std::stable_sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    int sa = 0, sb = 0;
    for (int x : a) sa += x;
    for (int x : b) sb += x;
    if (sa != sb) return sa < sb;
    return a < b;
  });
  return out;
}

std::vector<std::vector<cplx>> singular_seeds(const BetheSystem& S) {
  std::vector<std::vector<cplx>> out(S.n);
  for (int l = 0; l < S.n; ++l) {
    for (const Drive& d : S.drives[l]) {
      out[l].push_back(d.k.c - d.shift);
      out[l].push_back(-d.k.c - d.shift);
    }
    if (S.chi[l]) {
      out[l].push_back(2.0 * S.eta + cplx(0, kPi / 2));
      out[l].push_back(-2.0 * S.eta + cplx(0, kPi / 2));
    }
  }
  return out;
}

bool admissible(const ChainSpec& spec, const BetheSystem& S, const BetheRootSet& c, const SolveConfig& cfg) {
  for (int l = 0; l < S.n; ++l) {
    const auto& v = c.levels[l];
    const double P = level_period(S, l, int(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (singular_root(S, l, v[i])) return false;
      for (std::size_t j = 0; j < i; ++j)
        if (equivalent_roots(v[i], v[j], P, cfg.dedup_tol, cfg.dedup_tol)) return false;
    }
  }
  // isolated solutions only; cardinalities with an identically satisfied equation give continua
  std::vector<cplx> z;
  std::vector<int> lev;
  std::vector<Fixed> fixed;
  for (int l = 0; l < S.n; ++l)
    for (cplx u : c.levels[l]) {
      if (S.special && l == 0 && fixed.empty() && contains_special_root(spec, BetheRootSet{{{u}}})) {
        fixed.push_back({0, u});
        continue;
      }
      z.push_back(u);
      lev.push_back(l);
    }
  if (!z.empty()) {
    Vec F;
    Mat J;
    eval_log_system(S, z, lev, fixed, F, &J);
    if (!J.allFinite()) return false;
    const auto sv = Eigen::JacobiSVD<Mat>(J).singularValues();
    if (!(sv(sv.size() - 1) > 1e-9 * std::max(1.0, sv(0)))) return false;
  }
  std::vector<cplx> res;
  try {
    res = residuals(spec, c);
  } catch (const std::exception&) {
    return false;
  }
  for (cplx r : res)
    if (!(std::abs(r) <= 10.0 * cfg.newton_tol)) return false;
  try {
    for (cplx p : probe_points()) {
      const cplx v = lambda_eval(spec, c, p);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

std::vector<BetheRootSet> solve_with_pool(const ChainSpec& spec, const BetheSystem& S, const std::vector<int>& m,
                                          const SolveConfig& cfg, const std::vector<std::vector<cplx>>& pool,
                                          const std::vector<BetheRootSet>& prior) {
  const int n = S.n;
  int total = 0;
  for (int x : m) total += x;
  if (total == 0) return {BetheRootSet{std::vector<std::vector<cplx>>(n)}};

  std::uint64_t mh = splitmix(cfg.rng_seed);
  for (int x : m) mh = splitmix(mh ^ std::uint64_t(x + 1));
  const auto seeds = singular_seeds(S);
  const int starts = std::max(1, cfg.starts);
  std::vector<std::vector<BetheRootSet>> found(starts);

  auto run = [&](int t) {
    std::mt19937_64 gen(splitmix(mh ^ std::uint64_t(t)));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> G(0.0, 1.0);
    const bool special_start = S.special && m[0] >= 1 && (t % 4) >= 2;
    std::vector<int> lev;
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < m[l] - (special_start && l == 0 ? 1 : 0); ++k) lev.push_back(l);
    const bool exact_pool = t % 3 == 2;
    const bool line_mode = t % 3 == 1;
    auto draw_root = [&](int l) -> cplx {
      const double P = S.period[l];
      const double r = U(gen);
      if (exact_pool && !pool[l].empty() && r < 0.8)
        return pool[l][std::size_t(U(gen) * pool[l].size()) % pool[l].size()] + 0.01 * cplx(G(gen), G(gen));
      if (!pool[l].empty() && r < 0.5) {
        cplx p = pool[l][std::size_t(U(gen) * pool[l].size()) % pool[l].size()];
        if (U(gen) < 0.5) p = std::conj(p);
        if (U(gen) < 0.5) p += cplx(0, kPi);
        return p + 0.02 * cplx(G(gen), G(gen));
      }
      const double c = U(gen);
      const double x = U(gen);
      if (c < 0.25) return cplx(0.0, U(gen) * P);
      if (c < 0.6) return cplx(4.0 * x * x, std::floor(U(gen) * 4.0) * kPi / 2);
      if (c < 0.7 && !seeds[l].empty())
        return seeds[l][std::size_t(U(gen) * seeds[l].size()) % seeds[l].size()] +
               0.05 * std::pow(0.01, U(gen)) * cplx(G(gen), G(gen));
      return cplx(4.0 * x * x, U(gen) * P);
    };
    auto log_re = [&] { return 0.02 * std::pow(150.0, U(gen)); };
    // roots of a level laid out in blocks invariant under u -> -conj(u)
    auto draw_pattern = [&](int l, int count, cplx* out) {
      const double P = S.period[l];
      int k = 0;
      while (k < count) {
        const double c = U(gen);
        if (count - k >= 2 && c < 0.3) {
          const double x = log_re();
          if (P > 4.0 && U(gen) < 0.4) {
            out[k] = cplx(x, 0.0);
            out[k + 1] = cplx(x, kPi);
          } else {
            const double y = U(gen) * P / 2;
            out[k] = cplx(x, y);
            out[k + 1] = cplx(x, -y);
          }
          k += 2;
        } else if (c < 0.6) {
          out[k++] = cplx(0.0, U(gen) * P);
        } else if (c < 0.65 && !seeds[l].empty()) {
          out[k++] = seeds[l][std::size_t(U(gen) * seeds[l].size()) % seeds[l].size()] +
                     0.05 * std::pow(0.01, U(gen)) * cplx(G(gen), G(gen));
        } else {
          const double w = U(gen);
          const double y = w < 0.5 ? 0.0 : w < 0.85 ? kPi / 2 : std::floor(U(gen) * P / (kPi / 2)) * kPi / 2;
          out[k++] = cplx(log_re(), y);
        }
      }
    };
    // smaller solution with the missing roots filled in by pattern blocks
    std::vector<const BetheRootSet*> below;
    for (const auto& p : prior) {
      bool ok = true;
      for (int l = 0; l < n && ok; ++l) ok = int(p.levels[l].size()) <= m[l];
      if (ok) below.push_back(&p);
    }
    auto draw_extension = [&] {
      const BetheRootSet& p = *below[std::size_t(U(gen) * below.size()) % below.size()];
      std::vector<cplx> z;
      for (int l = 0; l < n; ++l) {
        std::vector<cplx> v(p.levels[l].begin(), p.levels[l].end());
        const int want = m[l] - (special_start && l == 0 ? 1 : 0);
        while (int(v.size()) > want) v.pop_back();
        const int have = int(v.size());
        v.resize(std::size_t(want));
        draw_pattern(l, want - have, v.data() + have);
        z.insert(z.end(), v.begin(), v.end());
      }
      return z;
    };
    auto draw = [&] {
      std::vector<cplx> z(lev.size());
      if (line_mode) {
        std::size_t i = 0;
        while (i < lev.size()) {
          std::size_t j = i;
          while (j < lev.size() && lev[j] == lev[i]) ++j;
          draw_pattern(lev[i], int(j - i), z.data() + i);
          i = j;
        }
        return z;
      }
      for (std::size_t i = 0; i < lev.size(); ++i) z[i] = draw_root(lev[i]);
      if (t % 2 == 1) {
        for (int l = 0; l < n; ++l) {
          int first = -1;
          for (std::size_t i = 0; i < lev.size(); ++i) {
            if (lev[i] != l) continue;
            if (first < 0) {
              first = int(i);
            } else {
              const bool shift_pair = S.period[l] > 4.0 && U(gen) < 0.5;
              z[i] = shift_pair ? z[first] + cplx(0, kPi) : std::conj(z[first]);
              break;
            }
          }
        }
      }
      return z;
    };
    std::vector<Fixed> fixed;
    if (special_start) fixed.push_back({0, S.special_root});
    auto finish = [&](const std::vector<cplx>& sol) {
      BetheRootSet raw{std::vector<std::vector<cplx>>(n)};
      if (special_start) raw.levels[0].push_back(S.special_root);
      for (std::size_t i = 0; i < lev.size(); ++i) raw.levels[lev[i]].push_back(sol[i]);
      const BetheRootSet c = canonical_form(S, raw);
      if (admissible(spec, S, c, cfg)) found[t].push_back(c);
    };
    if (line_mode) {
      for (int a = 0; a < 16; ++a)
        if (const auto sol = newton(S, draw(), lev, fixed, cfg.newton_tol, 40)) finish(*sol);
      return;
    }
    if (exact_pool) {
      for (int a = 0; a < 8; ++a) {
        const auto z0 = (a % 2 == 0 && !below.empty()) ? draw_extension() : draw();
        if (const auto sol = newton(S, z0, lev, fixed, cfg.newton_tol, 40)) finish(*sol);
      }
      return;
    }
    // best of several random candidates by residual size
    std::vector<cplx> z = draw();
    double best = std::numeric_limits<double>::infinity();
    Vec F;
    for (int k = 0; k < std::max(1, cfg.candidates); ++k) {
      std::vector<cplx> c = k == 0 ? z : draw();
      eval_log_system(S, c, lev, fixed, F, nullptr);
      const double v = F.allFinite() ? F.norm() : std::numeric_limits<double>::infinity();
      if (v < best) {
        best = v;
        z = std::move(c);
      }
    }
    // nested start: each level solved with the lower levels held fixed and the higher ones dropped
    const bool nested = n > 1 && U(gen) < 0.5;
    if (nested) {
      for (int l = 0; l < n; ++l) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < lev.size(); ++i)
          if (lev[i] == l) idx.push_back(int(i));
        if (idx.empty()) continue;
        std::vector<Fixed> below = fixed;
        for (std::size_t i = 0; i < lev.size(); ++i)
          if (lev[i] < l) below.push_back({lev[i], z[i]});
        const std::vector<int> sub_lev(idx.size(), l);
        for (int attempt = 0; attempt < 6; ++attempt) {
          std::vector<cplx> sub(idx.size());
          for (std::size_t a = 0; a < idx.size(); ++a) sub[a] = attempt == 0 ? z[idx[a]] : draw_root(l);
          const auto got = newton(S, sub, sub_lev, below, 1e-10, 60);
          if (!got) continue;
          for (std::size_t a = 0; a < idx.size(); ++a) z[idx[a]] = (*got)[a];
          break;
        }
      }
    }
    if (const auto sol = newton(S, z, lev, fixed, cfg.newton_tol, cfg.max_iter)) finish(*sol);
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (int t = 0; t < starts; ++t) run(t);
  } else {
    std::vector<std::thread> pool_threads;
    for (int w = 0; w < threads; ++w)
      pool_threads.emplace_back([&, w] {
        for (int t = w; t < starts; t += threads) run(t);
      });
    for (auto& th : pool_threads) th.join();
  }

  std::vector<BetheRootSet> out;
  for (const auto& list : found)
    for (const auto& f : list) {
      bool dup = false;
      for (const auto& o : out)
        if (same_rootset(S, o, f, cfg.dedup_tol)) {
          dup = true;
          break;
        }
      if (!dup) out.push_back(f);
    }
  auto key = [](const BetheRootSet& r) {
    std::vector<std::pair<long long, long long>> k;
    for (const auto& l : r.levels) {
      for (cplx u : l) k.push_back({std::llround(u.real() * 1e6), std::llround(u.imag() * 1e6)});
      k.push_back({-1, -1});
    }
    return k;
  };
  std::stable_sort(out.begin(), out.end(), [&](const BetheRootSet& a, const BetheRootSet& b) { return key(a) < key(b); });
  return out;
}

}  // namespace

cplx lambda_eval(const ChainSpec& spec, const BetheRootSet& roots, cplx u) {
  require_bethe_support(spec);
  if (int(roots.levels.size()) != spec.model.n) throw std::invalid_argument("lambda_eval: wrong number of levels");
  if (spec.model.family == Family::ATwisted) return lambda_a(spec, roots, u);
  return lambda_d(spec, roots, u);
}

cplx energy(const ChainSpec& spec, const BetheRootSet& roots) {
  if (!has_energy_formula(spec)) throw unsupported_case(tag_name(spec.bc.tag) + ": no energy formula");
  const int n = spec.model.n, N = spec.N;
  const cplx eta = spec.model.eta;
  cplx E = 0.0;
  auto term = [](cplx num, cplx den) {
    if (den == 0.0) throw pole_error("energy: root at an energy-denominator zero");
    return num / den;
  };
  if (spec.model.family == Family::ATwisted) {
    if (n == 1) {
      for (cplx u : roots.levels[0])
        E -= term(std::sinh(4.0 * eta), std::sinh(u - 2.0 * eta) * std::sinh(u + 2.0 * eta));
      return E - double(N - 1) * std::cosh(4.0 * eta) / std::sinh(4.0 * eta);
    }
    for (cplx u : roots.levels[0])
      E -= term(std::sinh(2.0 * eta), 2.0 * std::sinh(0.5 * u - eta) * std::sinh(0.5 * u + eta));
    return E - double(N - 1) * std::cosh(2.0 * (n + 1) * eta) / (2.0 * std::sinh(2.0 * eta) * std::cosh(2.0 * n * eta));
  }
  for (cplx u : roots.levels[0]) E -= term(std::sinh(2.0 * eta), std::sinh(u - eta) * std::sinh(u + eta));
  return E - double(N - 1) * std::sinh(2.0 * (n + 1) * eta) / (std::sinh(2.0 * eta) * std::sinh(2.0 * n * eta));
}

std::vector<cplx> residuals(const ChainSpec& spec, const BetheRootSet& roots) {
  const BetheSystem S = build_system(spec);
  std::vector<cplx> out;
  for (int l = 0; l < S.n; ++l)
    for (std::size_t k = 0; k < roots.levels[l].size(); ++k) {
      cplx r = rational_residual(S, roots, l, int(k));
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        throw pole_error("residuals: pole in a Bethe-equation factor at level " + std::to_string(l + 1));
      if (S.special) {
        const cplx alt = a_pair_factor(spec, roots.levels[l][k] + spec.model.eta);
        if (std::abs(alt) < std::abs(r)) r = alt;
      }
      out.push_back(r);
    }
  return out;
}

BetheRootSet canonicalize(const ChainSpec& spec, const BetheRootSet& roots) {
  return canonical_form(build_system(spec), roots);
}

cplx special_root(const ChainSpec& spec) {
  if (!spec.bc.special_manifold()) throw std::invalid_argument("special_root: not on the special manifold");
  return spec.bc.p1 + spec.model.eta;
}

bool contains_special_root(const ChainSpec& spec, const BetheRootSet& roots, double tol) {
  if (!spec.bc.special_manifold() || roots.levels.empty()) return false;
  const cplx s = special_root(spec);
  for (cplx u : roots.levels[0])
    for (double sg : {1.0, -1.0}) {
      const cplx d = sg * u - s;
      if (std::abs(d.real()) <= tol && std::abs(std::remainder(d.imag(), kPi)) <= tol) return true;
    }
  return false;
}

bool roots_equivalent(const ChainSpec& spec, int level, cplx a, cplx b, double tol_re, double tol_im) {
  return equivalent_roots(a, b, build_system(spec).period[level], tol_re, tol_im);
}

std::vector<BetheRootSet> solve(const ChainSpec& spec, const std::vector<int>& m, const SolveConfig& cfg) {
  return solve_all(spec, m, cfg).at(m);
}

std::map<std::vector<int>, std::vector<BetheRootSet>> solve_all(const ChainSpec& spec, const std::vector<int>& m_cap,
                                                                const SolveConfig& cfg) {
  validate(spec);
  const BetheSystem S = build_system(spec);
  if (int(m_cap.size()) != S.n) throw std::invalid_argument("solve: cardinality vector must have n entries");
  std::map<std::vector<int>, std::vector<BetheRootSet>> out;
  std::vector<std::vector<cplx>> pool(S.n);
  std::vector<BetheRootSet> prior;
  for (const auto& m : cardinality_box(m_cap)) {
    auto sols = solve_with_pool(spec, S, m, cfg, pool, prior);
    for (const auto& s : sols) {
      for (int l = 0; l < S.n; ++l)
        for (cplx u : s.levels[l]) pool[l].push_back(u);
      prior.push_back(s);
    }
    out[m] = std::move(sols);
  }
  return out;
}

std::vector<cplx> probe_points() { return {cplx(0.37, 0.21), cplx(-0.23, 0.41), cplx(0.61, -0.17)}; }

MatchReport match_solutions(const ChainSpec& spec, const std::map<std::vector<int>, std::vector<BetheRootSet>>& sols,
                            int threads) {
  const SpectrumReport rep = spectrum_levels(spec, threads);
  const auto probes = probe_points();
  const int L = int(rep.levels.size());
  std::vector<std::vector<cplx>> vals(L, std::vector<cplx>(probes.size()));
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const Mat t = transfer(spec, probes[p], threads);
    for (int i = 0; i < L; ++i) {
      const Vec& w = rep.levels[i].witness;
      vals[i][p] = w.dot(t * w);
    }
  }
  const bool with_energy = has_energy_formula(spec) && spec.thetas.empty();
  MatchReport mr;
  std::vector<bool> hit(L, false);
  for (const auto& [m, list] : sols)
    for (const BetheRootSet& r : list) {
      std::vector<cplx> lam;
      try {
        for (cplx p : probes) lam.push_back(lambda_eval(spec, r, p));
      } catch (const std::exception&) {
        mr.unmatched_rootsets.push_back(r);
        continue;
      }
      int best = -1;
      double best_diff = 0.0;
      for (int i = 0; i < L; ++i) {
        double worst = 0.0;
        for (std::size_t p = 0; p < probes.size(); ++p)
          worst = std::max(worst, std::abs(lam[p] - vals[i][p]) / std::max(std::abs(vals[i][p]), 1e-300));
        if (worst <= 1e-6 && (best < 0 || worst < best_diff)) {
          best = i;
          best_diff = worst;
        }
      }
      if (best < 0) {
        mr.unmatched_rootsets.push_back(r);
        continue;
      }
      hit[best] = true;
      MatchPair mp;
      mp.cluster = {rep.levels[best].t_value, rep.levels[best].degeneracy};
      mp.roots = r;
      mp.lambda_diff = best_diff;
      if (with_energy) {
        const cplx Ed = rep.levels[best].energy;
        mp.energy_diff = std::abs(energy(spec, r) - Ed) / std::max(1.0, std::abs(Ed));
      }
      mr.pairs.push_back(mp);
    }
  for (int i = 0; i < L; ++i)
    if (!hit[i]) mr.unmatched_eigenvalues.push_back({rep.levels[i].t_value, rep.levels[i].degeneracy});
  return mr;
}

MatchReport completeness(const ChainSpec& spec, const std::vector<int>& m_cap, const SolveConfig& cfg) {
  return match_solutions(spec, solve_all(spec, m_cap, cfg), cfg.threads);
}

}  // namespace tc
