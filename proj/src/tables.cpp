#include "twistchain/tables.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "twistchain/bethe_system.hpp"
#include "twistchain/qsym.hpp"

namespace tc {

namespace {

double pair_deviation(cplx a, cplx b, double P) {
  double best = std::numeric_limits<double>::infinity();
  for (double s : {1.0, -1.0}) {
    const cplx d = a - s * b;
    double y = d.imag();
    if (std::isfinite(P) && P > 0) y -= P * std::round(y / P);
    best = std::min(best, std::max(std::abs(d.real()), std::abs(y)));
  }
  return best;
}

double level_deviation(const std::vector<cplx>& f, const std::vector<cplx>& g, double P) {
  if (f.size() != g.size()) return std::numeric_limits<double>::infinity();
  std::vector<int> perm(f.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double w = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) w = std::max(w, pair_deviation(f[perm[i]], g[i], P));
    best = std::min(best, w);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::string m_name(const std::vector<int>& m) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
  os << ")";
  return os.str();
}

double mismatch(bool ok) { return ok ? 0.0 : 1.0; }

}  // namespace

std::vector<int> GoldenTable::m_cap() const {
  std::vector<int> cap(spec.model.n, 0);
  for (const auto& r : rows)
    for (int l = 0; l < spec.model.n; ++l) cap[l] = std::max(cap[l], r.m[l]);
  return cap;
}

GoldenTable golden_from_json(const io::json& j) {
  GoldenTable g;
  g.table = j.at("table").get<int>();
  io::json man{{"command", "reproduce"},  {"family", j.at("family")}, {"n", j.at("n")},
               {"eta", j.at("eta")},      {"case", j.at("case")},     {"params", j.at("params")},
               {"sites", j.at("sites")}};
  g.spec = io::manifest_from_json(man).spec;
  for (const auto& r : j.at("rows")) {
    GoldenRow row;
    row.m = r.at("m").get<std::vector<int>>();
    if (!r.at("label").is_null()) row.label = r.at("label").get<std::vector<int>>();
    if (!r.at("mult").is_null()) row.mult = r.at("mult").get<int>();
    if (r.contains("printed_label")) row.printed_label = r.at("printed_label").get<std::vector<int>>();
    for (const auto& s : r.at("solutions")) {
      GoldenSolution gs;
      gs.deg = s.at("deg").get<int>();
      gs.starred = s.at("starred").get<bool>();
      gs.dagger = s.at("dagger").get<bool>();
      gs.tol = s.at("tol").get<double>();
      for (const auto& lv : s.at("levels")) {
        std::vector<cplx> roots;
        for (const auto& z : lv) roots.emplace_back(std::stod(z.at(0).get<std::string>()), std::stod(z.at(1).get<std::string>()));
        gs.levels.push_back(std::move(roots));
      }
      row.solutions.push_back(std::move(gs));
    }
    g.rows.push_back(std::move(row));
  }
  return g;
}

GoldenTable load_golden(int k, const std::string& dir) {
  const std::string path = dir + "/table" + std::to_string(k) + ".json";
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("no golden table " + std::to_string(k) + " (" + path + ")");
  std::stringstream ss;
  ss << in.rdbuf();
  return golden_from_json(io::parse(ss.str()));
}

double rootset_deviation(const ChainSpec& spec, const BetheRootSet& found, const std::vector<std::vector<cplx>>& golden) {
  const BetheSystem S = build_system(spec);
  if (found.levels.size() != golden.size()) return std::numeric_limits<double>::infinity();
  const int n = int(golden.size());
  auto total = [&](const BetheRootSet& f) {
    double w = 0.0;
    for (int l = 0; l < n; ++l)
      w = std::max(w, level_deviation(f.levels[l], golden[l], level_period(S, l, int(golden[l].size()))));
    return w;
  };
  double best = total(found);
  if (S.shift_quotient && !found.levels.back().empty()) {
    BetheRootSet shifted = found;
    for (cplx& u : shifted.levels.back()) u += cplx(0.0, kPi);
    best = std::min(best, total(shifted));
  }
  return best;
}

TableReproduction reproduce_table(const GoldenTable& g, const SolveConfig& cfg) {
  TableReproduction out;
  out.golden = g;
  const ChainSpec& spec = g.spec;
  const auto sols = solve_all(spec, g.m_cap(), cfg);
  out.match = match_solutions(spec, sols, cfg.threads);
  const MatchReport& mr = out.match;
  VerificationReport& rep = out.checks;

  rep.add("complete", double(mr.unmatched_eigenvalues.size()), 0.0);
  if (has_energy_formula(spec)) {
    double worst = 0.0;
    for (const auto& p : mr.pairs) worst = std::max(worst, p.energy_diff);
    rep.add("energy", worst, 1e-6);
  }
  if (spec.bc.tag == CaseTag::D_BlockPair && !spec.bc.special_manifold()) {
    int maxdeg = 0;
    for (const auto& p : mr.pairs) maxdeg = std::max(maxdeg, p.cluster.deg);
    for (const auto& e : mr.unmatched_eigenvalues) maxdeg = std::max(maxdeg, e.deg);
    rep.add("nondegenerate", double(maxdeg - 1), 0.0);
  }

  bool qg = false;
  for (const auto& row : g.rows) qg = qg || row.label.has_value();
  std::vector<std::pair<std::vector<int>, int>> counts;
  AlgebraKind kind = AlgebraKind::Cn;
  if (qg) {
    kind = algebra_for(spec).kind;
    counts = label_counts(decompose_spectrum(spec, cfg.threads));
  }

  out.rows = io::json::array();
  for (const auto& row : g.rows) {
    const std::string tag = "m=" + m_name(row.m) + " ";
    std::vector<const MatchPair*> found;
    for (const auto& p : mr.pairs)
      if (p.roots.m() == row.m) found.push_back(&p);
    rep.add(tag + "count", std::abs(double(found.size()) - double(row.solutions.size())), 0.0);

    if (row.label) rep.add(tag + "label", mismatch(label_from_cardinalities(spec, row.m) == *row.label), 0.0);
    if (row.mult) {
      rep.add(tag + "mult", std::abs(double(*row.mult) - double(row.solutions.size())), 0.0);
      if (qg && row.label) {
        int c = 0;
        for (const auto& [lab, k] : counts)
          if (lab == *row.label) c = k;
        rep.add(tag + "mult spectrum", std::abs(double(*row.mult - c)), 0.0);
      }
    }

    // greedy one-to-one assignment by deviation
    const std::size_t G = row.solutions.size(), F = found.size();
    std::vector<std::vector<double>> dev(G, std::vector<double>(F));
    for (std::size_t i = 0; i < G; ++i)
      for (std::size_t k = 0; k < F; ++k) dev[i][k] = rootset_deviation(spec, found[k]->roots, row.solutions[i].levels);
    std::vector<int> assign(G, -1);
    std::vector<bool> used(F, false);
    for (std::size_t step = 0; step < std::min(G, F); ++step) {
      double best = std::numeric_limits<double>::infinity();
      int bi = -1, bk = -1;
      for (std::size_t i = 0; i < G; ++i)
        for (std::size_t k = 0; k < F; ++k)
          if (assign[i] < 0 && !used[k] && dev[i][k] < best) {
            best = dev[i][k];
            bi = int(i);
            bk = int(k);
          }
      if (bi < 0) break;
      assign[bi] = bk;
      used[bk] = true;
    }

    io::json jsol = io::json::array();
    for (std::size_t i = 0; i < G; ++i) {
      const GoldenSolution& gs = row.solutions[i];
      const std::string st = tag + "solution " + std::to_string(i) + " ";
      const MatchPair* p = assign[i] >= 0 ? found[assign[i]] : nullptr;
      const double d = p ? dev[i][assign[i]] : std::numeric_limits<double>::infinity();
      rep.add(st + "roots", d, gs.tol);
      rep.add(st + "deg", p ? std::abs(double(p->cluster.deg - gs.deg)) : 1.0, 0.0);
      if (row.label && !gs.starred) rep.add(st + "weyl dim", std::abs(double(weyl_dim(kind, spec.model.n, *row.label) - gs.deg)), 0.0);
      if (spec.bc.special_manifold())
        rep.add(st + "dagger", p ? mismatch(contains_special_root(spec, p->roots) == gs.dagger) : 1.0, 0.0);
      io::json js{{"deg", p ? p->cluster.deg : 0},
                  {"starred", gs.starred},
                  {"dagger", p ? contains_special_root(spec, p->roots) : false},
                  {"roots", p ? io::to_json(p->roots) : io::json(nullptr)},
                  {"deviation", std::isfinite(d) ? io::json(d) : io::json(nullptr)}};
      jsol.push_back(js);
    }
    io::json jr{{"m", row.m},
                {"label", row.label ? io::json(*row.label) : io::json(nullptr)},
                {"mult", row.mult ? io::json(*row.mult) : io::json(nullptr)},
                {"solutions", jsol}};
    if (row.printed_label) jr["printed_label"] = *row.printed_label;
    out.rows.push_back(jr);
  }
  return out;
}

io::json to_json(const TableReproduction& r) {
  return io::json{{"table", r.golden.table},
                  {"rows", r.rows},
                  {"match", io::to_json(r.match)},
                  {"checks", io::to_json(r.checks)}};
}

}  // namespace tc
