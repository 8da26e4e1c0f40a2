#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "twistchain/bethe.hpp"
#include "twistchain/chain.hpp"
#include "twistchain/io.hpp"
#include "twistchain/qsym.hpp"
#include "twistchain/tables.hpp"

using namespace tc;
using io::json;

namespace {

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

cplx parse_cplx(const std::string& s) {
  std::stringstream ss(s);
  double re = 0, im = 0;
  char comma = 0;
  if (!(ss >> re)) throw usage_error("cannot parse complex value \"" + s + "\" (expected re,im)");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) throw usage_error("cannot parse complex value \"" + s + "\" (expected re,im)");
  }
  std::string rest;
  if (ss >> rest) throw usage_error("trailing characters in \"" + s + "\"");
  return {re, im};
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw usage_error("cannot parse integer list \"" + s + "\"");
    }
  }
  return out;
}

std::vector<cplx> parse_thetas(const std::string& s) {
  std::vector<cplx> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ';')) out.push_back(parse_cplx(tok));
  return out;
}

template <class T>
T opt(const json& o, const char* key, T def) {
  if (!o.contains(key)) return def;
  try {
    return o.at(key).get<T>();
  } catch (const json::exception&) {
    throw usage_error(std::string("option \"") + key + "\" has the wrong type");
  }
}

std::vector<int> cardinalities(const json& o, const char* key, int n) {
  if (!o.contains(key)) throw usage_error(std::string("missing --") + key);
  const auto v = opt<std::vector<int>>(o, key, {});
  if (int(v.size()) != n) throw usage_error(std::string("--") + key + " needs " + std::to_string(n) + " entries");
  return v;
}

SolveConfig solve_config(const json& o) {
  SolveConfig cfg;
  cfg.starts = opt(o, "starts", cfg.starts);
  cfg.rng_seed = opt<std::uint64_t>(o, "seed", cfg.rng_seed);
  cfg.newton_tol = opt(o, "newton_tol", cfg.newton_tol);
  cfg.max_iter = opt(o, "max_iter", cfg.max_iter);
  cfg.dedup_tol = opt(o, "dedup_tol", cfg.dedup_tol);
  cfg.threads = opt(o, "threads", 1);
  return cfg;
}

int exit_for(const VerificationReport& r) { return r.all_pass() ? 0 : 1; }

// Runs the manifest; fills the payload and returns the exit code.
int execute(io::RunManifest& m, json& payload) {
  const json& o = m.options;
  const int threads = opt(o, "threads", 1);
  const int samples = opt(o, "samples", 20);
  const auto seed = opt<std::uint64_t>(o, "seed", 1);
  ChainSpec& spec = m.spec;
  const std::string& c = m.command;

  if (c == "verify r") {
    const auto r = verify_r(spec.model, samples, seed);
    payload = io::to_json(r);
    return exit_for(r);
  }
  if (c == "verify k") {
    const auto r = verify_k(spec.model, spec.bc, samples, seed);
    payload = io::to_json(r);
    return exit_for(r);
  }
  if (c == "verify chain") {
    validate(spec);
    auto r = verify_chain(spec, samples, seed);
    r.merge(verify_h_t_relation(spec));
    payload = io::to_json(r);
    return exit_for(r);
  }
  if (c == "verify symmetry") {
    validate(spec);
    const AlgebraId alg = algebra_for(spec);
    VerificationReport r;
    r.merge(verify_algebra(alg, spec.model.eta), "algebra ");
    r.merge(verify_symmetry(hamiltonian(spec).H, alg, spec.model.eta, spec.N, false), "hamiltonian ");
    r.merge(verify_symmetry(transfer(spec, probe_points()[0], threads), alg, spec.model.eta, spec.N, false),
            "transfer ");
    payload = io::to_json(r);
    return exit_for(r);
  }
  if (c == "verify fusion") {
    if (spec.thetas.empty()) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> U(-0.5, 0.5);
      for (int j = 0; j < spec.N; ++j) {
        const double re = U(rng), im = U(rng);
        spec.thetas.emplace_back(re, im);
      }
    }
    const auto r = verify_fusion(spec, opt(o, "site", 1));
    payload = io::to_json(r);
    return exit_for(r);
  }
  if (c == "spectrum") {
    payload = io::to_json(spectrum_levels(spec, threads));
    return 0;
  }
  if (c == "decompose") {
    payload = io::to_json(decompose_spectrum(spec, threads));
    return 0;
  }
  if (c == "bethe solve") {
    require_bethe_support(spec);
    const auto mv = cardinalities(o, "m", spec.model.n);
    payload = io::to_json(solve(spec, mv, solve_config(o)));
    return 0;
  }
  if (c == "bethe check") {
    require_bethe_support(spec);
    if (!o.contains("roots")) throw usage_error("missing --roots");
    const BetheRootSet roots = io::rootset_from_json(o.at("roots"), "/options/roots");
    if (int(roots.levels.size()) != spec.model.n) throw usage_error("--roots needs one list per level");
    const double tol = opt(o, "tol", 1e-9);
    VerificationReport r;
    double worst = 0.0;
    for (cplx x : residuals(spec, roots)) worst = std::max(worst, std::abs(x));
    r.add("bethe_residual", worst, tol);
    payload = json{{"roots", io::to_json(roots)}, {"checks", io::to_json(r)}};
    if (has_energy_formula(spec)) payload["energy"] = io::to_json(energy(spec, roots));
    if (spec.bc.special_manifold()) payload["special_root"] = contains_special_root(spec, roots);
    return exit_for(r);
  }
  if (c == "bethe complete") {
    require_bethe_support(spec);
    const auto cap = cardinalities(o, "mcap", spec.model.n);
    const MatchReport r = completeness(spec, cap, solve_config(o));
    payload = io::to_json(r);
    return r.complete() ? 0 : 1;
  }
  if (c == "reproduce") {
    const GoldenTable g = load_golden(opt(o, "table", 0));
    spec = g.spec;
    const TableReproduction r = reproduce_table(g, solve_config(o));
    payload = to_json(r);
    return exit_for(r.checks);
  }
  throw usage_error("unknown command \"" + c + "\"");
}

int run(io::RunManifest m, bool timing) {
  io::ResultDocument doc;
  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    code = execute(m, doc.payload);
  } catch (const usage_error&) {
    throw;
  } catch (const unsupported_case&) {
    throw;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    doc.payload = json{{"error", e.what()}};
    code = 1;
  }
  if (timing) doc.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  doc.manifest = io::to_json(m);
  const std::string text = io::encode(doc);
  if (m.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(m.output, std::ios::binary);
    if (!out) throw usage_error("cannot write " + m.output);
    out << text;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted open-chain toolkit: identities, spectra, Bethe roots"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string family = "a-twisted", eta = "0,-0.1", bcase = "I", beta = "1.3", xi = "0.7", mu_minus = "0.2",
              mu_plus = "0.14285714285714285", thetas, output, manifest_path, m_str, mcap_str, roots;
  int n = 1, sites = 2, samples = 20, site = 1, starts = 2000, threads = 1;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  bool no_timing = false;

  app.add_option("--family", family, "a-twisted or d-twisted")->capture_default_str();
  app.add_option("--n", n, "rank")->capture_default_str();
  app.add_option("--eta", eta, "anisotropy as re,im")->capture_default_str();
  app.add_option("--case", bcase, "I, II, diag-beta, mg, block-xi1, block-xi2, pair")->capture_default_str();
  app.add_option("--beta", beta, "diag-beta parameter")->capture_default_str();
  app.add_option("--xi", xi, "block-xi parameter")->capture_default_str();
  app.add_option("--mu-minus", mu_minus, "pair case left parameter")->capture_default_str();
  app.add_option("--mu-plus", mu_plus, "pair case right parameter")->capture_default_str();
  app.add_option("--sites", sites, "chain length N")->capture_default_str();
  app.add_option("--thetas", thetas, "inhomogeneities re,im;re,im;...");
  app.add_option("--threads", threads, "worker threads")->capture_default_str();
  app.add_option("--output", output, "write the result document here instead of stdout");
  app.add_flag("--no-timing", no_timing, "write wall_time_seconds as 0");
  app.add_option("--manifest", manifest_path, "run a manifest file");

  auto* verify = app.add_subcommand("verify", "identity checks");
  verify->require_subcommand(1);
  CLI::App* vsub[5];
  const char* vnames[5] = {"r", "k", "chain", "symmetry", "fusion"};
  for (int i = 0; i < 5; ++i) {
    vsub[i] = verify->add_subcommand(vnames[i]);
    vsub[i]->add_option("--samples", samples)->capture_default_str();
    vsub[i]->add_option("--seed", seed)->capture_default_str();
  }
  vsub[4]->add_option("--site", site)->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "joint spectrum of the Hamiltonian and transfer matrix");
  auto* decompose = app.add_subcommand("decompose", "irreducible content of the spectrum");

  auto* bethe = app.add_subcommand("bethe", "Bethe ansatz");
  bethe->require_subcommand(1);
  auto* bsolve = bethe->add_subcommand("solve", "all admissible root sets with level cardinalities m");
  auto* bcheck = bethe->add_subcommand("check", "residuals and eigenvalue of a given root set");
  auto* bcomplete = bethe->add_subcommand("complete", "match root sets up to mcap against the exact spectrum");
  bsolve->add_option("--m", m_str, "cardinalities, comma separated")->required();
  bcomplete->add_option("--mcap", mcap_str, "cardinality cap, comma separated")->required();
  for (auto* s : {bsolve, bcomplete}) {
    s->add_option("--starts", starts)->capture_default_str();
    s->add_option("--seed", seed)->capture_default_str();
  }
  bcheck->add_option("--roots", roots, "root set as JSON {\"levels\": ...}")->required();
  bcheck->add_option("--tol", tol)->capture_default_str();

  auto* reproduce = app.add_subcommand("reproduce", "reproduce a bundled table");
  std::string target;
  reproduce->add_option("table", target, "table<k>")->required();
  reproduce->add_option("--starts", starts)->capture_default_str();
  reproduce->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    io::RunManifest m;
    if (!manifest_path.empty()) {
      if (!app.get_subcommands().empty()) throw usage_error("--manifest cannot be combined with a subcommand");
      std::ifstream in(manifest_path);
      if (!in) throw usage_error("cannot read " + manifest_path);
      std::stringstream ss;
      ss << in.rdbuf();
      m = io::manifest_from_json(io::parse(ss.str()));
      if (!output.empty()) m.output = output;
      return run(m, !no_timing);
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }

    json j{{"family", family}, {"n", n}, {"eta", io::to_json(parse_cplx(eta))}, {"case", bcase}, {"sites", sites}};
    const Family fam = io::family_from_name(family);
    const CaseTag tag = io::case_from_name(fam, bcase);
    json params = json::object();
    if (tag == CaseTag::A_DiagBeta) params["beta"] = io::to_json(parse_cplx(beta));
    if (tag == CaseTag::D_BlockXi1 || tag == CaseTag::D_BlockXi2) params["xi"] = io::to_json(parse_cplx(xi));
    if (tag == CaseTag::D_BlockPair) {
      params["mu_minus"] = io::to_json(parse_cplx(mu_minus));
      params["mu_plus"] = io::to_json(parse_cplx(mu_plus));
    }
    j["params"] = params;
    if (!thetas.empty()) {
      json t = json::array();
      for (cplx x : parse_thetas(thetas)) t.push_back(io::to_json(x));
      j["thetas"] = t;
    }
    if (!output.empty()) j["output"] = output;

    json o = json::object();
    o["threads"] = threads;
    std::string command;
    for (int i = 0; i < 5; ++i)
      if (vsub[i]->parsed()) {
        command = std::string("verify ") + vnames[i];
        o["samples"] = samples;
        o["seed"] = seed;
        if (i == 4) o["site"] = site;
      }
    if (spectrum->parsed()) command = "spectrum";
    if (decompose->parsed()) command = "decompose";
    if (bsolve->parsed() || bcomplete->parsed()) {
      command = bsolve->parsed() ? "bethe solve" : "bethe complete";
      o["starts"] = starts;
      o["seed"] = seed;
      if (bsolve->parsed()) o["m"] = parse_ints(m_str);
      if (bcomplete->parsed()) o["mcap"] = parse_ints(mcap_str);
    }
    if (bcheck->parsed()) {
      command = "bethe check";
      json r = io::parse(roots);
      o["roots"] = r.is_array() ? json{{"levels", r}} : r;
      o["tol"] = tol;
    }
    if (reproduce->parsed()) {
      command = "reproduce";
      if (target.rfind("table", 0) != 0) throw usage_error("reproduce expects table<k>");
      const int k = parse_ints(target.substr(5)).at(0);
      const GoldenTable g = load_golden(k);
      j = io::to_json(io::RunManifest{"reproduce", g.spec, json::object(), output});
      o["table"] = k;
      o["starts"] = starts;
      o["seed"] = seed;
    }
    j["command"] = command;
    j["options"] = o;
    return run(io::manifest_from_json(j), !no_timing);
  } catch (const std::exception& e) {
    std::cerr << "tchain: " << e.what() << "\n";
    return 2;
  }
}
