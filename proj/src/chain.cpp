#include "twistchain/chain.hpp"

#include <random>
#include <stdexcept>
#include <thread>

#include "twistchain/kernels.hpp"
#include "twistchain/tensorlin.hpp"

namespace tc {

namespace {

bool supported_hamiltonian(const BoundaryCase& bc) { return bc.quantum_group_case(); }

struct Entry {
  int out1, out2, in1, in2;
  cplx v;
};

std::vector<Entry> nonzeros(const Mat& R, int d) {
  std::vector<Entry> out;
  for (int r = 0; r < d * d; ++r)
    for (int c = 0; c < d * d; ++c)
      if (R(r, c) != cplx{}) out.push_back({r / d, r % d, c / d, c % d, R(r, c)});
  return out;
}

// Row layout of the (d·D) × D work buffer: row = a·D + Σ_j s_j d^{N-j}.
class GateRunner {
 public:
  GateRunner(int d, int N) : d_(d), N_(N) {
    D_ = 1;
    for (int j = 0; j < N; ++j) D_ *= d;
    stride_.resize(N + 1);
    stride_[0] = D_;
    long s = 1;
    for (int j = N; j >= 1; --j) {
      stride_[j] = s;
      s *= d;
    }
  }

  long D() const { return D_; }
  long rows() const { return long(d_) * D_; }

  // Apply a two-site operator acting on factors (f1, f2); 0 is the aux space.
  void apply(const std::vector<Entry>& nz, int f1, int f2, const std::vector<cplx>& in,
             std::vector<cplx>& out) const {
    std::fill(out.begin(), out.end(), cplx{});
    const std::vector<long> bases = bases_excluding(f1, f2);
    const long s1 = stride_[f1], s2 = stride_[f2];
    for (const Entry& e : nz) {
      const long din = e.in1 * s1 + e.in2 * s2, dout = e.out1 * s1 + e.out2 * s2;
      for (long b : bases)
        kernels::axpy(std::size_t(D_), e.v, &in[std::size_t((b + din) * D_)], &out[std::size_t((b + dout) * D_)]);
    }
  }

  void apply_aux(const Mat& K, const std::vector<cplx>& in, std::vector<cplx>& out) const {
    std::fill(out.begin(), out.end(), cplx{});
    const std::size_t block = std::size_t(D_ * D_);
    for (int a = 0; a < d_; ++a)
      for (int b = 0; b < d_; ++b)
        if (K(a, b) != cplx{}) kernels::axpy(block, K(a, b), &in[b * block], &out[a * block]);
  }

 private:
  std::vector<long> bases_excluding(int f1, int f2) const {
    std::vector<long> bases{0};
    for (int f = 0; f <= N_; ++f) {
      if (f == f1 || f == f2) continue;
      std::vector<long> next;
      next.reserve(bases.size() * d_);
      for (long b : bases)
        for (int s = 0; s < d_; ++s) next.push_back(b + s * stride_[f]);
      bases.swap(next);
    }
    return bases;
  }

  int d_, N_;
  long D_;
  std::vector<long> stride_;
};

cplx scalar_part(const Mat& m, double& off) {
  const cplx s = m.diagonal().mean();
  off = max_abs(m - s * identity(int(m.rows())));
  return s;
}

}  // namespace

long ChainSpec::hilbert_dim() const {
  long D = 1;
  for (int j = 0; j < N; ++j) D *= d();
  return D;
}

void validate(const ChainSpec& spec) {
  validate(spec.model);
  check_compatible(spec.model, spec.bc);
  if (spec.N < 1) throw std::invalid_argument("N must be at least 1");
  if (!spec.thetas.empty() && int(spec.thetas.size()) != spec.N)
    throw std::invalid_argument("thetas must have N entries");
  if (spec.hilbert_dim() > spec.memory_cap)
    throw std::invalid_argument("d^N = " + std::to_string(spec.hilbert_dim()) + " exceeds memory cap " +
                                std::to_string(spec.memory_cap));
}

Mat transfer(const ChainSpec& spec, cplx u, int threads) {
  validate(spec);
  const int d = spec.d(), N = spec.N;
  const GateRunner run(d, N);
  const long D = run.D();
  std::vector<std::vector<Entry>> hat(N + 1), mono(N + 1);
  for (int j = 1; j <= N; ++j) {
    hat[j] = nonzeros(r_matrix(spec.model, u + spec.theta(j)), d);
    mono[j] = nonzeros(r_matrix(spec.model, u - spec.theta(j)), d);
  }
  const Mat Km = k_minus(spec.model, spec.bc, u), Kp = k_plus(spec.model, spec.bc, u);

  auto column = [&](int b0, Mat& acc) {
    std::vector<cplx> x(std::size_t(run.rows() * D)), y(x.size());
    for (long s = 0; s < D; ++s) x[std::size_t((b0 * D + s) * D + s)] = 1.0;
    for (int j = N; j >= 1; --j) {
      run.apply(hat[j], j, 0, x, y);
      x.swap(y);
    }
    run.apply_aux(Km, x, y);
    x.swap(y);
    for (int j = 1; j <= N; ++j) {
      run.apply(mono[j], 0, j, x, y);
      x.swap(y);
    }
    std::vector<cplx> t(std::size_t(D * D));
    for (int a = 0; a < d; ++a)
      if (Kp(b0, a) != cplx{}) kernels::axpy(t.size(), Kp(b0, a), &x[std::size_t(a * D * D)], t.data());
    acc = Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(t.data(), D, D);
  };

  std::vector<Mat> parts(d);
  threads = std::max(1, std::min(threads, d));
  if (threads == 1) {
    for (int b0 = 0; b0 < d; ++b0) column(b0, parts[b0]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (int b0 = w; b0 < d; b0 += threads) column(b0, parts[b0]);
      });
    for (auto& th : pool) th.join();
  }
  Mat t = Mat::Zero(D, D);
  for (int b0 = 0; b0 < d; ++b0) t += parts[b0];
  if (!all_finite(t)) throw std::runtime_error("transfer matrix has non-finite entries");
  return t;
}

Mat transfer_dense(const ChainSpec& spec, cplx u) {
  validate(spec);
  const int d = spec.d(), N = spec.N;
  if (spec.hilbert_dim() * d > 1024) throw std::invalid_argument("transfer_dense limited to d^{N+1} <= 1024");
  const long D = spec.hilbert_dim();
  const Mat P = permutation(d);
  // operator on factors (0, j) of aux ⊗ sites: conjugate by swaps bringing site j next to aux
  auto on_aux_site = [&](const Mat& op, int j) {
    Mat swap = identity(int(D * d));
    for (int k = j; k >= 2; --k) swap = embed(P, d, k, N + 1) * swap;
    return Mat(swap.adjoint() * embed(op, d, 1, N + 1) * swap);
  };
  Mat That = identity(int(D * d));
  for (int j = 1; j <= N; ++j) That = That * on_aux_site(r21(spec.model, u + spec.theta(j)), j);
  Mat T = identity(int(D * d));
  for (int j = 1; j <= N; ++j) T = on_aux_site(r_matrix(spec.model, u - spec.theta(j)), j) * T;
  const Mat full = kron(k_plus(spec.model, spec.bc, u), identity(int(D))) * T *
                   kron(k_minus(spec.model, spec.bc, u), identity(int(D))) * That;
  Mat t = Mat::Zero(D, D);
  for (int a = 0; a < d; ++a) t += full.block(a * D, a * D, D, D);
  return t;
}

Mat derivative(const std::function<Mat(cplx)>& f, cplx at, int order, double h) {
  auto g = [&](double s) -> Mat {
    if (order == 1) return (-f(at + 2.0 * s) + 8.0 * f(at + s) - 8.0 * f(at - s) + f(at - 2.0 * s)) / (12.0 * s);
    if (order == 2)
      return (-f(at + 2.0 * s) + 16.0 * f(at + s) - 30.0 * f(at) + 16.0 * f(at - s) - f(at - 2.0 * s)) /
             (12.0 * s * s);
    throw std::invalid_argument("derivative order must be 1 or 2");
  };
  return (16.0 * g(h / 2.0) - g(h)) / 15.0;
}

bool uses_second_derivative(const ChainSpec& spec) {
  return spec.bc.tag == CaseTag::D_II && spec.model.n == 1;
}

Mat two_site_hamiltonian(const ChainSpec& spec) {
  validate(spec);
  if (!supported_hamiltonian(spec.bc))
    throw std::invalid_argument("no quantum-group-invariant Hamiltonian for case " + tag_name(spec.bc.tag));
  const ModelSpec& m = spec.model;
  const int d = m.dim();
  Mat h = permutation(d) * derivative([&](cplx w) { return r_matrix(m, w); }, 0.0) / xi(m, 0.0);
  if (spec.bc.tag != CaseTag::A_I) {
    const Mat kd = derivative([&](cplx w) { return k_minus(m, spec.bc, w); }, 0.0);
    h += (kron(kd, identity(d)) - kron(identity(d), kd)) / (2.0 * kappa(m, spec.bc));
  }
  return h;
}

void normalization_constants(const ChainSpec& spec, cplx& c1, cplx& c2) {
  const int n = spec.model.n, N = spec.N;
  const cplx e = spec.model.eta;
  auto s = [](cplx x) { return std::sinh(x); };
  auto c = [](cplx x) { return std::cosh(x); };
  auto th = [](cplx x) { return std::tanh(x); };
  auto cth = [](cplx x) { return 1.0 / std::tanh(x); };
  const double nd = n;
  switch (spec.bc.tag) {
    case CaseTag::A_I:
      c1 = std::pow(4.0, N + 1) * s(2.0 * nd * e) * c(2.0 * (nd + 1) * e) * std::pow(s(2.0 * e), 2 * N - 1) *
           std::pow(c(2.0 * nd * e), 2 * N);
      c2 = c(2.0 * (3 * nd + 1) * e) / (2.0 * s(4.0 * nd * e) * c(2.0 * (nd + 1) * e));
      return;
    case CaseTag::A_II:
      c1 = -std::pow(4.0, N + 1) * s(2.0 * nd * e) * c(2.0 * (nd - 1) * e) * std::pow(s(2.0 * e), 2 * N - 1) *
           std::pow(c(2.0 * nd * e), 2 * N);
      c2 = c(2.0 * (3 * nd - 1) * e) / (2.0 * s(4.0 * nd * e) * c(2.0 * (nd - 1) * e));
      return;
    case CaseTag::D_I:
      c1 = std::pow(2.0, 4 * N + 4) * std::exp(6.0 * nd * e) * std::pow(s(2.0 * nd * e) * s(2.0 * e), 2 * N - 1) *
           s((nd + 1) * e) * s(4.0 * nd * e) * c(nd * e) * c(nd * e) * c((nd - 1) * e);
      c2 = 0.5 * (cth(e) - 2.0 * cth(2.0 * e) + 2.0 * cth(4.0 * nd * e) + cth((nd + 1) * e) + th(e) +
                  th((nd - 1) * e) + 2.0 * th(nd * e));
      return;
    case CaseTag::D_II:
      if (n == 1) {
        c1 = std::pow(2.0, 4 * N + 4) * std::exp(6.0 * e) * s(e) * s(e) * s(4.0 * e) * s(4.0 * e) *
             std::pow(s(2.0 * e), 4 * N - 3);
        c2 = th(2.0 * e) + 0.25 * th(e) + 1.25 * cth(e);
      } else {
        c1 = -std::pow(2.0, 4 * N + 4) * std::exp(6.0 * nd * e) * std::pow(s(2.0 * nd * e) * s(2.0 * e), 2 * N - 1) *
             s((nd - 1) * e) * s(4.0 * nd * e) * s(nd * e) * s(nd * e) * c((nd + 1) * e);
        c2 = 0.5 * (2.0 * cth(4.0 * nd * e) + cth((nd - 1) * e) + 2.0 * cth(nd * e) + th((nd + 1) * e));
      }
      return;
    default:
      throw std::invalid_argument("no normalization constants for case " + tag_name(spec.bc.tag));
  }
}

HamiltonianBundle hamiltonian(const ChainSpec& spec) {
  HamiltonianBundle hb;
  hb.two_site = two_site_hamiltonian(spec);
  const ModelSpec& m = spec.model;
  const int d = m.dim(), N = spec.N;
  const long D = spec.hilbert_dim();
  hb.H = Mat::Zero(D, D);
  for (int k = 1; k <= N - 1; ++k) hb.H += embed(hb.two_site, d, k, N);
  hb.boundary_U_coeff = 0.0;
  if (m.family == Family::DTwisted) {
    const double nd = m.n;
    const cplx mu = spec.bc.tag == CaseTag::D_I ? -4.0 * std::exp(nd * m.eta) * std::sinh(nd * m.eta)
                                                 : 4.0 * std::exp(nd * m.eta) * std::cosh(nd * m.eta);
    Mat U = Mat::Zero(d, d);
    U.block(m.n, m.n, 2, 2).setOnes();
    hb.boundary_U_coeff = mu / (2.0 * kappa(m, spec.bc));
    hb.H += hb.boundary_U_coeff * embed_site(U, d, N, N);
  }
  normalization_constants(spec, hb.c1, hb.c2);
  return hb;
}

VerificationReport verify_chain(const ChainSpec& spec, int sample_count, std::uint64_t seed) {
  validate(spec);
  if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  const cplx r = rho(spec.model);
  double comm = 0, cross = 0;
  for (int s = 0; s < sample_count; ++s) {
    const cplx u(box(rng), box(rng)), v(box(rng), box(rng));
    const Mat tu = transfer(spec, u), tv = transfer(spec, v);
    comm = std::max(comm, max_abs(commutator(tu, tv)) / std::max(1.0, max_abs(tu) * max_abs(tv)));
    cross = std::max(cross, max_abs(tu - transfer(spec, -u - r)) / std::max(1.0, max_abs(tu)));
  }
  VerificationReport rep;
  rep.add("commutativity", comm, kResidualTol);
  rep.add("crossing", cross, kResidualTol);
  if (spec.thetas.empty()) {
    const Mat t0 = transfer(spec, 0.0);
    const cplx expect = kappa(spec.model, spec.bc) * std::pow(xi(spec.model, 0.0), 2 * spec.N) *
                        k_plus(spec.model, spec.bc, 0.0).trace();
    const double scale = std::max({1.0, std::abs(expect), max_abs(t0)});
    rep.add("t_at_zero", max_abs(t0 - expect * identity(int(t0.rows()))) / scale, kResidualTol);
  }
  return rep;
}

VerificationReport verify_h_t_relation(const ChainSpec& spec) {
  const HamiltonianBundle hb = hamiltonian(spec);
  const int order = uses_second_derivative(spec) ? 2 : 1;
  const Mat td = derivative([&](cplx w) { return transfer(spec, w); }, 0.0, order);
  const Mat res = hb.H - td / hb.c1 - hb.c2 * identity(int(hb.H.rows()));
  VerificationReport rep;
  rep.add(order == 2 ? "h_t_second_derivative" : "h_t_first_derivative", max_abs(res) / std::max(1.0, max_abs(hb.H)),
          order == 2 ? 1e-5 : 1e-6);
  return rep;
}

cplx fusion_f0(const ChainSpec& spec, cplx u) {
  const cplx r = rho(spec.model);
  cplx f = 1.0;
  for (int k = 1; k <= spec.N; ++k)
    f *= zeta(spec.model, u - spec.theta(k) + r) * zeta(spec.model, u + spec.theta(k) + r);
  return f;
}

cplx fusion_f1(const ModelSpec& model, cplx u) {
  const double n = model.n;
  const cplx e = model.eta;
  auto ch = [](cplx x) { return std::cosh(x); };
  auto sh = [](cplx x) { return std::sinh(x); };
  return 1024.0 * std::exp(12.0 * n * e) * ch(u - 3.0 * n * e) * ch(u - 3.0 * n * e) * ch(u - n * e) *
         ch(u - n * e) * ch(u - (n + 1) * e) * ch(u - (3 * n - 1) * e) * sh(2.0 * u) * sh(u - (n - 1) * e) *
         sh(2.0 * (u - 4.0 * n * e)) * sh(u - (3 * n + 1) * e);
}

VerificationReport verify_fusion(const ChainSpec& spec, int site) {
  validate(spec);
  if (spec.model.family != Family::DTwisted || spec.bc.tag != CaseTag::D_I)
    throw std::invalid_argument("fusion relation is checked for D_I only");
  if (spec.thetas.empty()) throw std::invalid_argument("fusion check requires inhomogeneities");
  if (site < 1 || site > spec.N) throw std::invalid_argument("site index out of range");
  for (int j = 1; j <= spec.N; ++j)
    for (int k = j + 1; k <= spec.N; ++k)
      if (std::abs(spec.theta(j) - spec.theta(k)) < 1e-6) throw std::invalid_argument("thetas must be distinct");
  const cplx th = spec.theta(site), r = rho(spec.model);
  const cplx z = zeta(spec.model, 2.0 * th);
  if (std::abs(z) < 1e-10) throw std::invalid_argument("singular theta configuration: zeta(2 theta) = 0");
  const Mat prod = transfer(spec, th - r) * transfer(spec, th);
  const cplx expect = fusion_f0(spec, th - r) * fusion_f1(spec.model, th - r) / z;
  double off = 0;
  scalar_part(prod, off);
  const double scale = std::max({1e-300, std::abs(expect), max_abs(prod)});
  VerificationReport rep;
  rep.add("product_is_scalar", off / scale, 1e-8);
  rep.add("fusion_relation", max_abs(prod - expect * identity(int(prod.rows()))) / scale, 1e-8);
  return rep;
}

}  // namespace tc
