// Acceptance run: one PASS/FAIL line per criterion.
// usage: acceptance <path-to-tchain> [--only 1,2,...]

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "twistchain/bethe.hpp"
#include "twistchain/chain.hpp"
#include "twistchain/qsym.hpp"
#include "twistchain/tables.hpp"

using namespace tc;

namespace {

const cplx eta(0.0, -0.1);

struct Outcome {
  bool pass = true;
  std::string detail;
};

ChainSpec chain(Family f, int n, CaseTag t, int N) {
  ChainSpec s;
  s.model = {f, n, eta};
  s.bc = BoundaryCase::make(t);
  s.N = N;
  return s;
}

BoundaryCase default_case(CaseTag t) {
  switch (t) {
    case CaseTag::A_DiagBeta: return BoundaryCase::make(t, 1.3);
    case CaseTag::D_BlockXi1:
    case CaseTag::D_BlockXi2: return BoundaryCase::make(t, 0.7);
    case CaseTag::D_BlockPair: return BoundaryCase::make(t, 0.2, 1.0 / 7.0);
    default: return BoundaryCase::make(t);
  }
}

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what;
  }
}

void require_report(Outcome& o, const VerificationReport& r, const std::string& what) {
  for (const auto& c : r.checks)
    if (!c.pass()) {
      std::ostringstream os;
      os << what << " " << c.name << " residual " << c.residual << " > " << c.tol;
      require(o, false, os.str());
    }
}

Outcome criterion1() {
  Outcome o;
  for (Family f : {Family::ATwisted, Family::DTwisted})
    for (int n = 1; n <= 3; ++n) {
      const auto r = verify_r({f, n, eta}, 20, 7);
      require(o, r.checks.size() >= 5, "missing identities");
      require_report(o, r, (f == Family::ATwisted ? "A n=" : "D n=") + std::to_string(n));
    }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (CaseTag t : {CaseTag::A_I, CaseTag::A_II, CaseTag::A_DiagBeta, CaseTag::D_I, CaseTag::D_II, CaseTag::D_DiagMG,
                    CaseTag::D_BlockXi1, CaseTag::D_BlockXi2, CaseTag::D_BlockPair})
    for (int n = 1; n <= 2; ++n)
      require_report(o, verify_k({family_of(t), n, eta}, default_case(t), 20, 11), tag_name(t) + " n=" + std::to_string(n));
  for (cplx beta : {cplx(1.3), cplx(2.0, -1.0)})
    for (int n = 1; n <= 2; ++n)
      require_report(o, verify_k({Family::ATwisted, n, eta}, BoundaryCase::make(CaseTag::A_DiagBeta, beta), 20, 5),
                     "diag-beta");
  for (int n = 1; n <= 2; ++n) {
    const ModelSpec s{Family::ATwisted, n, eta};
    for (cplx u : {cplx(0.5), cplx(0.3, -0.2), cplx(-0.7, 0.4)}) {
      const double d = max_abs(k_minus(s, BoundaryCase::make(CaseTag::A_DiagBeta, 1e8), u) -
                               k_minus(s, BoundaryCase::make(CaseTag::A_I), u));
      require(o, d <= 1e-7, "beta = 1e8 differs from A_I");
    }
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (CaseTag t : {CaseTag::A_I, CaseTag::A_II, CaseTag::D_I, CaseTag::D_II})
    for (int n = 1; n <= 2; ++n)
      for (int N = 1; N <= 2; ++N) {
        const auto s = chain(family_of(t), n, t, N);
        const std::string what = tag_name(t) + " n=" + std::to_string(n) + " N=" + std::to_string(N);
        require_report(o, verify_chain(s, 10, 17), what);
        require_report(o, verify_h_t_relation(s), what);
      }
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (int n = 1; n <= 3; ++n) {
    require_report(o, verify_algebra({AlgebraKind::Cn, n}, eta), "C");
    require_report(o, verify_algebra({AlgebraKind::BnEmbedded, n}, eta), "B");
    if (n >= 2) require_report(o, verify_algebra({AlgebraKind::Dn, n}, eta), "D");
  }
  for (CaseTag t : {CaseTag::A_I, CaseTag::A_II, CaseTag::D_I, CaseTag::D_II})
    for (int n = 1; n <= 3; ++n)
      for (int N = 2; N <= 3; ++N) {
        if (t == CaseTag::A_II && n == 1) continue;
        const auto s = chain(family_of(t), n, t, N);
        if (s.hilbert_dim() > 512) continue;
        const auto alg = algebra_for(s);
        const std::string what = tag_name(t) + " n=" + std::to_string(n) + " N=" + std::to_string(N);
        require_report(o, verify_symmetry(hamiltonian(s).H, alg, eta, N, false), what + " hamiltonian");
        require_report(o, verify_symmetry(transfer(s, cplx(0.37, 0.21)), alg, eta, N, true), what + " transfer");
      }
  return o;
}

using Counts = std::vector<std::pair<std::vector<int>, int>>;

Counts sorted(Counts c) {
  std::sort(c.begin(), c.end());
  return c;
}

std::vector<int> expand(const std::vector<std::pair<int, int>>& mult) {
  std::vector<int> out;
  for (auto [k, d] : mult)
    for (int i = 0; i < k; ++i) out.push_back(d);
  std::sort(out.begin(), out.end());
  return out;
}

Outcome criterion5() {
  Outcome o;
  struct Case {
    CaseTag tag;
    int n, N;
    Counts labels;
    std::vector<int> degs;
  };
  const std::vector<Case> cases{
      {CaseTag::A_I, 1, 2, {{{0}, 1}, {{2}, 1}}, expand({{1, 1}, {1, 3}})},
      {CaseTag::A_I, 1, 3, {{{1}, 2}, {{3}, 1}}, expand({{2, 2}, {1, 4}})},
      {CaseTag::A_I, 2, 2, {{{0, 0}, 1}, {{0, 1}, 1}, {{2, 0}, 1}}, expand({{1, 1}, {1, 5}, {1, 10}})},
      {CaseTag::A_I, 2, 3, {{{1, 0}, 3}, {{1, 1}, 2}, {{3, 0}, 1}}, expand({{3, 4}, {2, 16}, {1, 20}})},
      {CaseTag::A_I, 3, 2, {{{0, 0, 0}, 1}, {{0, 1, 0}, 1}, {{2, 0, 0}, 1}}, expand({{1, 1}, {1, 14}, {1, 21}})},
      {CaseTag::A_I,
       3,
       3,
       {{{1, 0, 0}, 3}, {{0, 0, 1}, 1}, {{3, 0, 0}, 1}, {{1, 1, 0}, 2}},
       expand({{3, 6}, {1, 14}, {1, 56}, {2, 64}})},
      {CaseTag::A_II, 2, 2, {{{0, 0}, 1}, {{2, 0}, 1}, {{0, 2}, 1}, {{2, 2}, 1}}, expand({{1, 1}, {1, 6}, {1, 9}})},
      {CaseTag::A_II, 2, 3, {{{1, 1}, 4}, {{3, 1}, 2}, {{1, 3}, 2}, {{3, 3}, 1}}, expand({{4, 4}, {3, 16}})},
      {CaseTag::A_II, 3, 2, {{{0, 0, 0}, 1}, {{0, 1, 1}, 1}, {{2, 0, 0}, 1}}, expand({{1, 1}, {1, 15}, {1, 20}})},
      {CaseTag::A_II,
       3,
       3,
       {{{1, 0, 0}, 3}, {{0, 2, 0}, 1}, {{0, 0, 2}, 1}, {{3, 0, 0}, 1}, {{1, 1, 1}, 2}},
       expand({{3, 6}, {1, 20}, {1, 50}, {2, 64}})},
  };
  std::vector<Case> all = cases;
  for (CaseTag t : {CaseTag::D_I, CaseTag::D_II}) {
    all.push_back({t, 1, 2, {{{0}, 2}, {{2}, 3}, {{4}, 1}}, expand({{2, 1}, {1, 3}, {1, 5}, {1, 6}})});
    all.push_back({t, 1, 3, {{{0}, 5}, {{2}, 9}, {{4}, 5}, {{6}, 1}},
                   expand({{3, 1}, {1, 2}, {3, 3}, {1, 5}, {3, 6}, {1, 7}, {2, 10}})});
    all.push_back({t, 2, 2, {{{0, 0}, 2}, {{1, 0}, 2}, {{0, 2}, 1}, {{2, 0}, 1}}, expand({{2, 1}, {2, 5}, {1, 10}, {1, 14}})});
    all.push_back({t, 2, 3, {{{0, 0}, 4}, {{1, 0}, 6}, {{0, 2}, 4}, {{2, 0}, 3}, {{3, 0}, 1}, {{1, 2}, 2}},
                   expand({{4, 1}, {6, 5}, {2, 10}, {3, 14}, {1, 20}, {1, 30}, {2, 35}})});
    all.push_back({t, 3, 2, {{{0, 0, 0}, 2}, {{1, 0, 0}, 2}, {{0, 1, 0}, 1}, {{2, 0, 0}, 1}},
                   expand({{2, 1}, {2, 7}, {1, 21}, {1, 27}})});
    all.push_back({t,
                   3,
                   3,
                   {{{0, 0, 0}, 4}, {{1, 0, 0}, 6}, {{0, 1, 0}, 3}, {{2, 0, 0}, 3}, {{0, 0, 2}, 1}, {{3, 0, 0}, 1}, {{1, 1, 0}, 2}},
                   expand({{4, 1}, {6, 7}, {3, 21}, {3, 27}, {1, 35}, {1, 77}, {2, 105}})});
  }
  for (const auto& c : all) {
    const auto s = chain(family_of(c.tag), c.n, c.tag, c.N);
    const auto rep = decompose_spectrum(s);
    auto degs = level_degeneracies(rep);
    std::sort(degs.begin(), degs.end());
    const std::string what = tag_name(c.tag) + " n=" + std::to_string(c.n) + " N=" + std::to_string(c.N);
    require(o, degs == c.degs, what + " degeneracies");
    require(o, sorted(label_counts(rep)) == sorted(c.labels), what + " multiplicities");
    int total = 0;
    for (const auto& b : rep.blocks) total += b.observed_degeneracy * b.multiplicity;
    require(o, total == int(s.hilbert_dim()), what + " dimension count");
  }
  return o;
}

std::map<int, TableReproduction> reproduced;

TableReproduction& table(int k) {
  auto it = reproduced.find(k);
  if (it == reproduced.end()) {
    SolveConfig cfg;
    cfg.starts = 2000;
    it = reproduced.emplace(k, reproduce_table(load_golden(k), cfg)).first;
  }
  return it->second;
}

void require_table(Outcome& o, int k, const std::function<bool(const Check&)>& select) {
  const auto& r = table(k);
  for (const auto& c : r.checks.checks)
    if (select(c) && !c.pass()) {
      std::ostringstream os;
      os << "table " << k << " " << c.name << " (" << c.residual << " > " << c.tol << ")";
      require(o, false, os.str());
    }
}

bool is_completeness(const Check& c) { return c.name == "complete" || c.name == "energy"; }

Outcome criterion6() {
  Outcome o;
  for (int k = 1; k <= 16; ++k) require_table(o, k, [](const Check& c) { return !is_completeness(c); });
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (int k = 1; k <= 16; ++k) {
    require_table(o, k, is_completeness);
    const auto& r = table(k);
    require(o, r.match.complete(), "table " + std::to_string(k) + " has unmatched eigenvalues");
    if (has_energy_formula(r.golden.spec)) {
      bool energy_checked = false;
      for (const auto& c : r.checks.checks) energy_checked = energy_checked || c.name == "energy";
      require(o, energy_checked, "table " + std::to_string(k) + " energy not compared");
    }
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  for (int n = 1; n <= 2; ++n)
    for (int trial = 0; trial < 3; ++trial) {
      ChainSpec s = chain(Family::DTwisted, n, CaseTag::D_I, 2);
      for (int j = 0; j < 2; ++j) {
        const double re = U(rng), im = U(rng);
        s.thetas.emplace_back(re, im);
      }
      for (int site = 1; site <= 2; ++site) {
        const auto r = verify_fusion(s, site);
        require(o, r.worst() <= 1e-8, "fusion residual " + std::to_string(r.worst()));
        require_report(o, r, "fusion n=" + std::to_string(n));
      }
    }
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (int k = 17; k <= 22; ++k) {
    require_table(o, k, [](const Check&) { return true; });
    require(o, table(k).match.complete(), "table " + std::to_string(k) + " incomplete");
  }
  for (int k : {19, 20}) {
    bool checked = false;
    for (const auto& c : table(k).checks.checks) checked = checked || c.name == "nondegenerate";
    require(o, checked, "table " + std::to_string(k) + " degeneracy not checked");
  }
  int dagger = 0;
  for (int k : {21, 22})
    for (const auto& row : table(k).golden.rows)
      for (const auto& s : row.solutions) dagger += s.dagger;
  require(o, dagger > 0, "no dagger solutions in the special-manifold tables");
  return o;
}

std::string tchain_path;

std::pair<int, std::string> run_capture(const std::string& args) {
  const std::string cmd = "\"" + tchain_path + "\" " + args + " --no-timing";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe.release());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome criterion10() {
  Outcome o;
  const std::vector<std::string> commands{
      "verify r --family a-twisted --n 2 --eta 0,-0.1 --samples 20 --seed 7",
      "verify k --family d-twisted --n 1 --case pair --samples 20 --seed 3",
      "verify fusion --family d-twisted --n 1 --sites 2 --seed 5",
      "decompose --family a-twisted --n 2 --case II --sites 2",
      "bethe solve --family a-twisted --n 2 --case II --sites 2 --m 2,1 --seed 11",
      "bethe complete --family d-twisted --case I --n 1 --sites 3 --mcap 3",
      "reproduce table1",
      "reproduce table19",
  };
  for (const auto& c : commands) {
    const auto a = run_capture(c), b = run_capture(c);
    require(o, a.first == 0, "exit " + std::to_string(a.first) + " for: " + c);
    require(o, !a.second.empty() && a.second == b.second, "output differs for: " + c);
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <tchain> [--only 1,2,...]\n";
    return 2;
  }
  tchain_path = argv[1];
  std::set<int> only;
  for (int i = 2; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--only") {
      std::stringstream ss(argv[i + 1]);
      std::string tok;
      while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
    }

  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    Outcome (*fn)();
  };
  const Criterion list[] = {
      {1, "R-matrix identities", 30, criterion1},
      {2, "K-matrix identities", 60, criterion2},
      {3, "chain identities", 300, criterion3},
      {4, "quantum group symmetry", 600, criterion4},
      {5, "degeneracies and multiplicities", 600, criterion5},
      {6, "Bethe tables 1-16", 1800, criterion6},
      {7, "completeness", 0, criterion7},
      {8, "fusion relation", 60, criterion8},
      {9, "alternate boundaries, tables 17-22", 600, criterion9},
      {10, "determinism", 0, criterion10},
  };

  bool all = true;
  for (const auto& c : list) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && dt > c.limit_s) {
      o.pass = false;
      if (!o.detail.empty()) o.detail += "; ";
      o.detail += "over the time limit of " + std::to_string(int(c.limit_s)) + " s";
    }
    all = all && o.pass;
    std::printf("criterion %2d  %s  %-36s %8.1f s%s%s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, dt,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
