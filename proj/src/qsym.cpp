#include "twistchain/qsym.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace tc {

namespace {

using Diag = Eigen::VectorXcd;

Mat e(int d, int a, int b) { return elementary(d, a, b); }

// Diagonal of H_j for the A-family layout (2n states) or the D-family layout (2n+2 states).
std::vector<int> cartan_local(int d, int n, int j) {
  std::vector<int> h(d, 0);
  if (j < 1 || j > n) return h;
  h[j - 1] = 1;
  h[d - j] = -1;
  return h;
}

Diag diag_exp(const std::vector<std::pair<cplx, std::vector<int>>>& terms, int d) {
  Diag v(d);
  for (int s = 0; s < d; ++s) {
    cplx x = 0;
    for (const auto& [c, h] : terms) x += c * double(h[s]);
    v(s) = std::exp(x);
  }
  return v;
}

Mat kron_diag_power(const Diag& x, int times) {
  Diag r = Diag::Ones(1);
  for (int k = 0; k < times; ++k) {
    Diag next(r.size() * x.size());
    for (int i = 0; i < r.size(); ++i)
      for (int j = 0; j < x.size(); ++j) next(i * x.size() + j) = r(i) * x(j);
    r = next;
  }
  return r.asDiagonal();
}

struct Twisted {
  Mat E;
  Diag X, Y;
};

// Δ(E) = E ⊗ X + Y ⊗ E iterated to N factors.
Mat iterate(const Twisted& tw, int N, Iteration it) {
  Mat acc = tw.E;
  for (int m = 1; m < N; ++m) {
    if (it == Iteration::Left)
      acc = kron(acc, Mat(tw.X.asDiagonal())) + kron(kron_diag_power(tw.Y, m), tw.E);
    else
      acc = kron(tw.E, kron_diag_power(tw.X, m)) + kron(Mat(tw.Y.asDiagonal()), acc);
  }
  return acc;
}

Mat cartan_coproduct(const Mat& h, int N) {
  const int d = int(h.rows());
  Mat acc = h;
  for (int m = 1; m < N; ++m) acc = kron(acc, identity(d)) + kron(kron_power(identity(d), m), h);
  return acc;
}

struct TwistTable {
  std::vector<Twisted> plus, minus;  // j = 1..n-1 (C also j = n)
  bool has_E0 = false;
  Twisted e0p, e0m;
};

TwistTable twists(const AlgebraId& alg, const GeneratorSet& g, cplx eta) {
  const int n = alg.n, d = alg.rep_dim();
  const cplx ipi = kI * kPi;
  auto H = [&](int j) { return cartan_local(d, n, j); };
  TwistTable t;
  const int direct = alg.kind == AlgebraKind::Cn ? n : n - 1;
  for (int j = 1; j <= direct; ++j) {
    Diag X, Y;
    if (alg.kind == AlgebraKind::Cn && j == n) {
      X = diag_exp({{2.0 * eta, H(n)}}, d);
      Y = diag_exp({{-2.0 * eta, H(n)}}, d);
    } else if (alg.kind == AlgebraKind::BnEmbedded) {
      X = diag_exp({{ipi, H(j + 1)}}, d);
      Y = diag_exp({{-2.0 * eta, H(j)}, {2.0 * eta, H(j + 1)}, {ipi, H(j + 1)}}, d);
    } else {
      X = diag_exp({{ipi, H(j)}, {eta, H(j)}, {-eta, H(j + 1)}}, d);
      Y = diag_exp({{-ipi, H(j)}, {-eta, H(j)}, {eta, H(j + 1)}}, d);
    }
    t.plus.push_back({g.Eplus[j - 1], X, Y});
    t.minus.push_back({g.Eminus[j - 1], X, Y});
  }
  if (g.has_E0) {
    Diag X, Y;
    if (alg.kind == AlgebraKind::Dn) {
      X = diag_exp({{ipi, H(2)}}, d);
      Y = diag_exp({{2.0 * eta, H(1)}, {2.0 * eta, H(2)}, {ipi, H(2)}}, d);
    } else if (n % 2 == 0) {
      X = diag_exp({{-eta, H(1)}}, d);
      Y = diag_exp({{eta, H(1)}}, d);
    } else {
      X = diag_exp({{ipi - eta, H(1)}}, d);
      Y = diag_exp({{-(ipi - eta), H(1)}}, d);
    }
    t.has_E0 = true;
    t.e0p = {g.E0plus, X, Y};
    t.e0m = {g.E0minus, X, Y};
  }
  return t;
}

// E_n from E_0 via the multiple commutators; `lower` holds the opposite-sign generators.
Mat composite_top(const AlgebraId& alg, const Mat& e0, const std::vector<Mat>& lower, bool plus) {
  const int n = alg.n;
  Mat x = e0;
  if (alg.kind == AlgebraKind::Dn) {
    for (int j = 2; j <= n - 1; ++j) x = commutator(x, lower[j - 1]);
    for (int j = 1; j <= n - 2; ++j) x = commutator(x, lower[j - 1]);
    return (n % 2 == 0 ? 1.0 : -1.0) * x;
  }
  for (int j = 1; j <= n - 1; ++j) x = commutator(x, lower[j - 1]);
  const double sign = plus ? ((n + 1) % 2 == 0 ? 1.0 : -1.0) : 1.0;
  return sign * x;
}

double rel(const Mat& diff, const Mat& scale) { return max_abs(diff) / std::max(1.0, max_abs(scale)); }

}  // namespace

std::string algebra_name(const AlgebraId& alg) {
  const char* k = alg.kind == AlgebraKind::Cn ? "C" : alg.kind == AlgebraKind::Dn ? "D" : "B";
  return std::string(k) + std::to_string(alg.n);
}

AlgebraId algebra_for(const ChainSpec& spec) {
  const int n = spec.model.n;
  switch (spec.bc.tag) {
    case CaseTag::A_I:
      return {AlgebraKind::Cn, n};
    case CaseTag::A_II:
      if (n < 2) throw std::invalid_argument("A_II with n = 1 has no U_q(D_n) symmetry");
      return {AlgebraKind::Dn, n};
    case CaseTag::D_I:
    case CaseTag::D_II:
      return {AlgebraKind::BnEmbedded, n};
    default:
      throw std::invalid_argument("case " + tag_name(spec.bc.tag) + " has no quantum-group symmetry");
  }
}

GeneratorSet generators(const AlgebraId& alg) {
  const int n = alg.n, d = alg.rep_dim();
  if (n < 1) throw std::invalid_argument("rank must be positive");
  if (alg.kind == AlgebraKind::Dn && n < 2) throw std::invalid_argument("D_n requires n >= 2");
  GeneratorSet g;
  for (int j = 1; j <= n; ++j) {
    const auto h = cartan_local(d, n, j);
    Mat H = Mat::Zero(d, d);
    for (int s = 0; s < d; ++s) H(s, s) = double(h[s]);
    g.H.push_back(H);
  }
  const double r2 = std::sqrt(2.0);
  switch (alg.kind) {
    case AlgebraKind::Cn:
    case AlgebraKind::Dn:
      for (int i = 1; i < n; ++i) g.Eplus.push_back(e(d, i, i + 1) + e(d, 2 * n - i, 2 * n + 1 - i));
      if (alg.kind == AlgebraKind::Cn) {
        g.Eplus.push_back(r2 * e(d, n, n + 1));
      } else {
        g.Eplus.push_back(e(d, n - 1, n + 1) + e(d, n, n + 2));
        g.has_E0 = true;
        g.E0plus = e(d, 1, 2 * n - 1) + e(d, 2, 2 * n);
      }
      break;
    case AlgebraKind::BnEmbedded: {
      for (int j = 1; j < n; ++j) g.Eplus.push_back(e(d, j, j + 1) + e(d, 2 * n + 2 - j, 2 * n + 3 - j));
      g.Eplus.push_back((e(d, n, n + 1) - e(d, n, n + 2) + e(d, n + 2, n + 3) - e(d, n + 1, n + 3)) / r2);
      const double sg = n % 2 == 0 ? 1.0 : -1.0;
      g.has_E0 = true;
      g.E0plus = (e(d, 1, n + 1) - e(d, 1, n + 2) + sg * (e(d, n + 1, 2 * n + 2) - e(d, n + 2, 2 * n + 2))) / r2;
      break;
    }
  }
  for (const Mat& m : g.Eplus) g.Eminus.push_back(m.transpose());
  if (g.has_E0) g.E0minus = g.E0plus.transpose();
  for (int j = 1; j <= n; ++j) {
    std::vector<int> a(n, 0);
    if (j < n) {
      a[j - 1] = 1;
      a[j] = -1;
    } else if (alg.kind == AlgebraKind::Cn) {
      a[n - 1] = 2;
    } else if (alg.kind == AlgebraKind::Dn) {
      a[n - 2] = 1;
      a[n - 1] = 1;
    } else {
      a[n - 1] = 1;
    }
    g.simple_roots.push_back(a);
  }
  return g;
}

Coproducts all_coproducts(const AlgebraId& alg, cplx eta, int N, Iteration it) {
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  const GeneratorSet g = generators(alg);
  const TwistTable tw = twists(alg, g, eta);
  Coproducts c;
  for (const Mat& h : g.H) c.H.push_back(cartan_coproduct(h, N));
  for (const Twisted& t : tw.plus) c.Eplus.push_back(iterate(t, N, it));
  for (const Twisted& t : tw.minus) c.Eminus.push_back(iterate(t, N, it));
  if (tw.has_E0) {
    c.has_E0 = true;
    c.E0plus = iterate(tw.e0p, N, it);
    c.E0minus = iterate(tw.e0m, N, it);
  }
  if (alg.kind != AlgebraKind::Cn) {
    const std::vector<Mat> lowm = c.Eminus, lowp = c.Eplus;
    c.Eplus.push_back(composite_top(alg, c.E0plus, lowm, true));
    c.Eminus.push_back(composite_top(alg, c.E0minus, lowp, false));
  }
  return c;
}

Mat coproduct_n(const AlgebraId& alg, GeneratorId gen, cplx eta, int N, Iteration it) {
  const Coproducts c = all_coproducts(alg, eta, N, it);
  auto pick = [&](const std::vector<Mat>& v) -> Mat {
    if (gen.j < 1 || gen.j > int(v.size())) throw std::invalid_argument("generator index out of range");
    return v[gen.j - 1];
  };
  switch (gen.kind) {
    case GenKind::H: return pick(c.H);
    case GenKind::Eplus: return pick(c.Eplus);
    case GenKind::Eminus: return pick(c.Eminus);
    case GenKind::E0plus:
    case GenKind::E0minus:
      if (!c.has_E0) throw std::invalid_argument("algebra has no E_0 generators");
      return gen.kind == GenKind::E0plus ? c.E0plus : c.E0minus;
  }
  throw std::invalid_argument("unknown generator id");
}

std::vector<std::vector<int>> basis_weights(const AlgebraId& alg, int N) {
  const int d = alg.rep_dim(), n = alg.n;
  long D = 1;
  for (int k = 0; k < N; ++k) D *= d;
  std::vector<std::vector<int>> w(D, std::vector<int>(n, 0));
  std::vector<std::vector<int>> local(n);
  for (int j = 1; j <= n; ++j) local[j - 1] = cartan_local(d, n, j);
  for (long s = 0; s < D; ++s) {
    long r = s;
    for (int k = 0; k < N; ++k) {
      const int digit = int(r % d);
      r /= d;
      for (int j = 0; j < n; ++j) w[s][j] += local[j][digit];
    }
  }
  return w;
}

VerificationReport verify_algebra(const AlgebraId& alg, cplx eta) {
  const int n = alg.n;
  const GeneratorSet g = generators(alg);
  VerificationReport rep;

  double r53 = 0, r54 = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const double a = g.simple_roots[j - 1][i - 1];
      r53 = std::max(r53, max_abs(commutator(g.H[i - 1], g.Eplus[j - 1]) - a * g.Eplus[j - 1]));
      r53 = std::max(r53, max_abs(commutator(g.H[i - 1], g.Eminus[j - 1]) + a * g.Eminus[j - 1]));
      Mat rhs = Mat::Zero(alg.rep_dim(), alg.rep_dim());
      if (i == j)
        for (int k = 1; k <= n; ++k) rhs += double(g.simple_roots[j - 1][k - 1]) * g.H[k - 1];
      r54 = std::max(r54, max_abs(commutator(g.Eplus[i - 1], g.Eminus[j - 1]) - rhs));
    }
  rep.add("cartan_relations", r53, kResidualTol);
  rep.add("raising_lowering_relations", r54, kResidualTol);

  if (g.has_E0) {
    const Coproducts one = all_coproducts(alg, eta, 1);
    rep.add("top_generator_from_E0",
            std::max(max_abs(one.Eplus[n - 1] - g.Eplus[n - 1]), max_abs(one.Eminus[n - 1] - g.Eminus[n - 1])),
            kResidualTol);
  }

  const Coproducts c2 = all_coproducts(alg, eta, 2);
  double r57 = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const double a = g.simple_roots[j - 1][i - 1];
      r57 = std::max(r57, rel(commutator(c2.H[i - 1], c2.Eplus[j - 1]) - a * c2.Eplus[j - 1], c2.Eplus[j - 1]));
      r57 = std::max(r57, rel(commutator(c2.H[i - 1], c2.Eminus[j - 1]) + a * c2.Eminus[j - 1], c2.Eminus[j - 1]));
    }
  rep.add("coproduct_cartan_relations", r57, kResidualTol);

  const int D2 = alg.rep_dim() * alg.rep_dim();
  const Mat I2 = identity(D2);
  auto qpow = [&](const Mat& diagm, cplx scale) {
    Mat r = Mat::Zero(D2, D2);
    for (int s = 0; s < D2; ++s) r(s, s) = std::exp(scale * diagm(s, s));
    return r;
  };
  if (alg.kind != AlgebraKind::BnEmbedded) {
    const cplx q = std::exp(2.0 * eta);
    const int top = alg.kind == AlgebraKind::Cn ? n : n - 1;
    double r58 = 0;
    for (int i = 1; i <= top; ++i)
      for (int j = 1; j <= top; ++j) {
        Mat Om = I2;
        if (std::abs(i - j) == 1 && std::min(i, j) >= 1 && std::min(i, j) <= n - 2) {
          Mat ph = Mat::Zero(alg.rep_dim(), alg.rep_dim());
          for (int s = 0; s < alg.rep_dim(); ++s) ph(s, s) = std::exp(kI * kPi * g.H[std::max(i, j) - 1](s, s));
          Om = kron(ph, identity(alg.rep_dim()));
        }
        const Mat L = Om * c2.Eplus[i - 1] * c2.Eminus[j - 1] - c2.Eminus[j - 1] * c2.Eplus[i - 1] * Om;
        Mat R = Mat::Zero(D2, D2);
        if (i == j && i < n) {
          const Mat dh = c2.H[i - 1] - (i + 1 <= n ? c2.H[i] : Mat::Zero(D2, D2));
          R = (qpow(dh, 2.0 * eta) - qpow(dh, -2.0 * eta)) / (q - 1.0 / q);
        } else if (i == j) {
          R = 2.0 * (qpow(c2.H[n - 1], 4.0 * eta) - qpow(c2.H[n - 1], -4.0 * eta)) / (q * q - 1.0 / (q * q));
        }
        r58 = std::max(r58, max_abs(L - R));
      }
    rep.add("q_commutation_relations", r58, kResidualTol);
  } else {
    double r545 = 0;
    for (int j = 1; j < n; ++j) {
      const Mat L = c2.Eplus[j - 1] * c2.Eminus[j - 1] - std::exp(4.0 * eta) * c2.Eminus[j - 1] * c2.Eplus[j - 1];
      const Mat R = (qpow(c2.H[j - 1] - c2.H[j], -4.0 * eta) - I2) / (std::exp(-4.0 * eta) - 1.0);
      r545 = std::max(r545, max_abs(L - R));
    }
    rep.add("q_commutation_relations", r545, kResidualTol);
    const Mat L = c2.E0plus * c2.E0minus - c2.E0minus * c2.E0plus;
    const Mat R = (qpow(c2.H[0], 2.0 * eta) - qpow(c2.H[0], -2.0 * eta)) / (std::exp(2.0 * eta) - std::exp(-2.0 * eta));
    rep.add("e0_relation", max_abs(L - R), kResidualTol);
  }

  const Coproducts left = all_coproducts(alg, eta, 3, Iteration::Left);
  const Coproducts right = all_coproducts(alg, eta, 3, Iteration::Right);
  double co = 0;
  for (int j = 0; j < n; ++j) {
    co = std::max(co, max_abs(left.Eplus[j] - right.Eplus[j]));
    co = std::max(co, max_abs(left.Eminus[j] - right.Eminus[j]));
  }
  rep.add("coassociativity", co, kResidualTol);
  return rep;
}

VerificationReport verify_symmetry(const Mat& target, const AlgebraId& alg, cplx eta, int N, bool cartan_only) {
  long D = 1;
  for (int k = 0; k < N; ++k) D *= alg.rep_dim();
  if (target.rows() != D || target.cols() != D) throw std::invalid_argument("target dimension mismatch");
  const Coproducts c = all_coproducts(alg, eta, N);
  auto worst = [&](const std::vector<Mat>& ops) {
    double w = 0;
    for (const Mat& g : ops)
      w = std::max(w, max_abs(commutator(g, target)) / std::max(1.0, max_abs(g) * max_abs(target)));
    return w;
  };
  VerificationReport rep;
  rep.add("cartan_commutators", worst(c.H), kResidualTol);
  if (!cartan_only) {
    rep.add("raising_commutators", worst(c.Eplus), kResidualTol);
    rep.add("lowering_commutators", worst(c.Eminus), kResidualTol);
  }
  return rep;
}

int weyl_dim(AlgebraKind kind, int n, const std::vector<int>& label) {
  if (int(label.size()) != n) throw std::invalid_argument("label length must equal the rank");
  for (int a : label)
    if (a < 0) throw std::invalid_argument("Dynkin label entries must be non-negative");
  // highest weight and Weyl vector in the orthogonal basis
  std::vector<double> lam(n, 0.0), rho(n, 0.0);
  auto add_fund = [&](int i, double coeff) {
    const int top = i;
    if (kind == AlgebraKind::BnEmbedded && i == n) {
      for (int k = 0; k < n; ++k) lam[k] += 0.5 * coeff;
    } else if (kind == AlgebraKind::Dn && i >= n - 1) {
      for (int k = 0; k < n - 1; ++k) lam[k] += 0.5 * coeff;
      lam[n - 1] += (i == n ? 0.5 : -0.5) * coeff;
    } else {
      for (int k = 0; k < top; ++k) lam[k] += coeff;
    }
  };
  for (int i = 1; i <= n; ++i) add_fund(i, label[i - 1]);
  for (int k = 0; k < n; ++k) {
    switch (kind) {
      case AlgebraKind::Cn: rho[k] = n - k; break;
      case AlgebraKind::BnEmbedded: rho[k] = n - k - 0.5; break;
      case AlgebraKind::Dn: rho[k] = n - k - 1; break;
    }
  }
  double num = 1, den = 1;
  auto root = [&](const std::vector<double>& a) {
    double x = 0, y = 0;
    for (int k = 0; k < n; ++k) {
      x += (lam[k] + rho[k]) * a[k];
      y += rho[k] * a[k];
    }
    num *= x;
    den *= y;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> a(n, 0.0), b(n, 0.0);
      a[i] = 1;
      a[j] = -1;
      b[i] = 1;
      b[j] = 1;
      root(a);
      root(b);
    }
  if (kind != AlgebraKind::Dn)
    for (int i = 0; i < n; ++i) {
      std::vector<double> a(n, 0.0);
      a[i] = kind == AlgebraKind::Cn ? 2.0 : 1.0;
      root(a);
    }
  return int(std::lround(num / den));
}

std::vector<int> label_from_weight(AlgebraKind kind, const std::vector<int>& h) {
  const int n = int(h.size());
  std::vector<int> a(n);
  for (int i = 0; i + 1 < n; ++i) a[i] = h[i] - h[i + 1];
  switch (kind) {
    case AlgebraKind::Cn: a[n - 1] = h[n - 1]; break;
    case AlgebraKind::Dn: a[n - 1] = n >= 2 ? h[n - 2] + h[n - 1] : h[0]; break;
    case AlgebraKind::BnEmbedded: a[n - 1] = 2 * h[n - 1]; break;
  }
  return a;
}

std::vector<int> weight_from_cardinalities(const ChainSpec& spec, const std::vector<int>& m) {
  const int n = spec.model.n, N = spec.N;
  if (int(m.size()) != n) throw std::invalid_argument("cardinality vector must have n entries");
  for (int x : m)
    if (x < 0) throw std::invalid_argument("cardinalities must be non-negative");
  std::vector<int> h(n);
  h[0] = N - m[0];
  for (int i = 1; i < n; ++i) h[i] = m[i - 1] - m[i];
  if (spec.model.family == Family::ATwisted) h[n - 1] -= m[n - 1];
  return h;
}

std::vector<int> label_from_cardinalities(const ChainSpec& spec, const std::vector<int>& m) {
  const AlgebraKind kind = spec.model.family == Family::DTwisted ? AlgebraKind::BnEmbedded
                           : spec.bc.tag == CaseTag::A_II         ? AlgebraKind::Dn
                                                                  : AlgebraKind::Cn;
  return label_from_weight(kind, weight_from_cardinalities(spec, m));
}

namespace {

bool weyl_closed(AlgebraKind kind, std::vector<std::vector<int>> w) {
  const int n = int(w.front().size());
  std::sort(w.begin(), w.end());
  // generators of the Weyl group: adjacent transpositions and one sign change
  std::vector<std::vector<std::vector<int>>> images;
  for (int i = 0; i + 1 < n; ++i) {
    auto img = w;
    for (auto& x : img) std::swap(x[i], x[i + 1]);
    images.push_back(img);
  }
  auto img = w;
  if (kind == AlgebraKind::Dn && n >= 2) {
    for (auto& x : img) {
      std::swap(x[n - 2], x[n - 1]);
      x[n - 2] = -x[n - 2];
      x[n - 1] = -x[n - 1];
    }
  } else {
    for (auto& x : img) x[n - 1] = -x[n - 1];
  }
  images.push_back(img);
  for (auto& im : images) {
    std::sort(im.begin(), im.end());
    if (im != w) return false;
  }
  return true;
}

// Orthonormal basis of the k-dimensional (near-)null space of A.
Mat null_basis(const Mat& A, int k) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const int c = int(A.cols());
  return svd.matrixV().rightCols(std::min(k, c));
}

}  // namespace

SpectrumReport spectrum_levels(const ChainSpec& spec, int threads) {
  validate(spec);
  SpectrumReport rep;
  rep.probe_u = cplx(0.37, 0.21);
  const Mat t = transfer(spec, rep.probe_u, threads);
  const cplx mix(0.3, 0.7);
  const bool qg = spec.bc.quantum_group_case();
  Mat H;
  Mat G;
  if (qg) {
    H = hamiltonian(spec).H;
    G = H + mix * t / std::max(1e-300, max_abs(t));
  } else {
    const Mat t2 = transfer(spec, cplx(-0.23, 0.41), threads);
    G = t / std::max(1e-300, max_abs(t)) + mix * t2 / std::max(1e-300, max_abs(t2));
  }

  const int n = spec.model.n, d = spec.d();
  const long D = spec.hilbert_dim();
  // Cartan sectors only where t is known to commute with the Cartan coproducts
  std::vector<std::vector<int>> w(D, std::vector<int>(n, 0));
  if (qg)
    for (long s = 0; s < D; ++s) {
      long r = s;
      for (int k = 0; k < spec.N; ++k) {
        const int digit = int(r % d);
        r /= d;
        for (int j = 1; j <= n; ++j) w[s][j - 1] += cartan_local(d, n, j)[digit];
      }
    }
  std::map<std::vector<int>, std::vector<int>> sectors;
  for (long s = 0; s < D; ++s) sectors[w[s]].push_back(int(s));

  std::vector<std::vector<int>> sector_weight, sector_idx;
  std::vector<Mat> blocks;
  std::vector<cplx> vals;
  std::vector<int> owner;
  for (const auto& [wt, idx] : sectors) {
    const int m = int(idx.size());
    Mat B(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) B(a, b) = G(idx[a], idx[b]);
    const Eigensystem es = eig_full(B, false);
    for (int a = 0; a < m; ++a) {
      vals.push_back(es.values(a));
      owner.push_back(int(blocks.size()));
    }
    blocks.push_back(B);
    sector_weight.push_back(wt);
    sector_idx.push_back(idx);
  }
  Vec all(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) all(i) = vals[i];
  const EigenClusterSet cs = cluster_values(all);

  for (const Cluster& cl : cs.clusters) {
    Level lv;
    lv.degeneracy = cl.degeneracy;
    std::map<int, int> per_sector;
    for (int i : cl.members) {
      per_sector[owner[i]]++;
      if (qg) lv.weights.push_back(sector_weight[owner[i]]);
    }
    std::sort(lv.weights.begin(), lv.weights.end());
    const int s0 = per_sector.begin()->first;
    const std::vector<int>& idx = sector_idx[s0];
    const int m = int(idx.size());
    const Mat v = null_basis(blocks[s0] - cl.value * identity(m), 1);
    Vec full = Vec::Zero(D);
    for (int a = 0; a < m; ++a) full(idx[a]) = v(a, 0);
    const cplx nrm = full.squaredNorm();
    lv.energy = qg ? cplx(full.dot(H * full) / nrm) : cplx{};
    lv.t_value = full.dot(t * full) / nrm;
    lv.witness = full / std::sqrt(nrm.real());
    rep.levels.push_back(lv);
  }
  std::stable_sort(rep.levels.begin(), rep.levels.end(), [](const Level& a, const Level& b) {
    if (std::abs(a.energy.real() - b.energy.real()) > 1e-9) return a.energy.real() < b.energy.real();
    if (std::abs(a.energy.imag() - b.energy.imag()) > 1e-9) return a.energy.imag() < b.energy.imag();
    if (std::abs(a.t_value.real() - b.t_value.real()) > 1e-9) return a.t_value.real() < b.t_value.real();
    return a.t_value.imag() < b.t_value.imag();
  });
  return rep;
}

SpectrumReport decompose_spectrum(const ChainSpec& spec, int threads) {
  const AlgebraId alg = algebra_for(spec);
  validate(spec);
  const HamiltonianBundle hb = hamiltonian(spec);
  SpectrumReport rep;
  rep.probe_u = cplx(0.37, 0.21);
  const Mat t = transfer(spec, rep.probe_u, threads);
  const cplx mix(0.3, 0.7);
  const Mat G = hb.H + mix * t / std::max(1e-300, max_abs(t));
  const Coproducts cop = all_coproducts(alg, spec.model.eta, spec.N);
  const std::vector<std::vector<int>> w = basis_weights(alg, spec.N);
  const long D = spec.hilbert_dim();

  std::map<std::vector<int>, std::vector<int>> sectors;
  for (long s = 0; s < D; ++s) sectors[w[s]].push_back(int(s));
  std::vector<std::vector<int>> sector_weight;
  std::vector<std::vector<int>> sector_idx;
  std::vector<Mat> blocks;
  std::vector<cplx> vals;
  std::vector<int> owner;
  for (const auto& [wt, idx] : sectors) {
    const int m = int(idx.size());
    Mat B(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) B(a, b) = G(idx[a], idx[b]);
    const Eigensystem es = eig_full(B, false);
    for (int a = 0; a < m; ++a) {
      vals.push_back(es.values(a));
      owner.push_back(int(blocks.size()));
    }
    blocks.push_back(B);
    sector_weight.push_back(wt);
    sector_idx.push_back(idx);
  }
  Vec all(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) all(i) = vals[i];
  const EigenClusterSet cs = cluster_values(all);

  for (const Cluster& cl : cs.clusters) {
    Level lv;
    lv.degeneracy = cl.degeneracy;
    std::map<int, int> per_sector;
    for (int i : cl.members) per_sector[owner[i]]++;
    bool value_set = false;
    for (const auto& [s, k] : per_sector) {
      for (int r = 0; r < k; ++r) lv.weights.push_back(sector_weight[s]);
      const std::vector<int>& idx = sector_idx[s];
      const int m = int(idx.size());
      const Mat V = null_basis(blocks[s] - cl.value * identity(m), k);
      Mat full = Mat::Zero(D, k);
      for (int a = 0; a < m; ++a) full.row(idx[a]) = V.row(a);
      if (!value_set) {
        const Vec v = full.col(0);
        const cplx nrm = v.squaredNorm();
        lv.energy = v.dot(hb.H * v) / nrm;
        lv.t_value = v.dot(t * v) / nrm;
        lv.witness = v / std::sqrt(nrm.real());
        value_set = true;
      }
      Mat stacked(D * alg.n, k);
      for (int j = 0; j < alg.n; ++j) stacked.block(D * j, 0, D, k) = cop.Eplus[j] * full;
      Eigen::JacobiSVD<Mat> svd(stacked);
      const auto sv = svd.singularValues();
      const double cut = 1e-8 * std::max(1.0, sv.size() ? sv(0) : 0.0);
      int rank = 0;
      for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
      for (int r = 0; r < k - rank; ++r) lv.hw_labels.push_back(label_from_weight(alg.kind, sector_weight[s]));
    }
    std::sort(lv.weights.begin(), lv.weights.end());
    std::sort(lv.hw_labels.begin(), lv.hw_labels.end());
    int predicted = 0;
    bool bad = false;
    for (const auto& a : lv.hw_labels) {
      if (*std::min_element(a.begin(), a.end()) < 0) {
        bad = true;
        continue;
      }
      predicted += weyl_dim(alg.kind, alg.n, a);
    }
    lv.starred = lv.hw_labels.size() > 1;
    if (bad || predicted != lv.degeneracy || lv.hw_labels.empty())
      rep.anomalies.push_back("level with degeneracy " + std::to_string(lv.degeneracy) +
                              " has highest weights totalling dimension " + std::to_string(predicted));
    if (!weyl_closed(alg.kind, lv.weights))
      rep.anomalies.push_back("weights of level with degeneracy " + std::to_string(lv.degeneracy) +
                              " are not Weyl-group closed");
    rep.levels.push_back(lv);
  }
  std::stable_sort(rep.levels.begin(), rep.levels.end(), [](const Level& a, const Level& b) {
    if (std::abs(a.energy.real() - b.energy.real()) > 1e-9) return a.energy.real() < b.energy.real();
    if (std::abs(a.energy.imag() - b.energy.imag()) > 1e-9) return a.energy.imag() < b.energy.imag();
    if (std::abs(a.t_value.real() - b.t_value.real()) > 1e-9) return a.t_value.real() < b.t_value.real();
    return a.t_value.imag() < b.t_value.imag();
  });

  std::map<std::pair<std::vector<std::vector<int>>, int>, int> groups;
  for (const Level& lv : rep.levels) groups[{lv.hw_labels, lv.degeneracy}]++;
  for (const auto& [key, count] : groups) {
    const auto& [labels, deg] = key;
    if (labels.empty()) continue;
    IrrepBlock b;
    b.components = labels;
    b.label = labels.back();
    b.dim = *std::min_element(b.label.begin(), b.label.end()) >= 0 ? weyl_dim(alg.kind, alg.n, b.label) : 0;
    b.multiplicity = count;
    b.observed_degeneracy = deg;
    b.starred = labels.size() > 1 || b.dim != deg;
    rep.blocks.push_back(b);
  }
  return rep;
}

std::vector<int> level_degeneracies(const SpectrumReport& rep) {
  std::vector<int> out;
  for (const Level& lv : rep.levels) out.push_back(lv.degeneracy);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::vector<int>, int>> label_counts(const SpectrumReport& rep) {
  std::map<std::vector<int>, int> c;
  for (const Level& lv : rep.levels)
    for (const auto& a : lv.hw_labels) c[a]++;
  return {c.begin(), c.end()};
}

}  // namespace tc
