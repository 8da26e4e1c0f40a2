#include "twistchain/io.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace tc::io {

namespace {

[[noreturn]] void fail(const std::string& at, const std::string& what) {
  throw decode_error("decode: at " + (at.empty() ? std::string("/") : at) + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) fail(at, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(at, "missing key \"" + key + "\"");
  return *it;
}

double number(const json& j, const std::string& at) {
  // non-finite residuals are written as null
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) fail(at, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& at) {
  if (!j.is_number_integer()) fail(at, "expected an integer");
  return j.get<int>();
}

bool boolean(const json& j, const std::string& at) {
  if (!j.is_boolean()) fail(at, "expected true or false");
  return j.get<bool>();
}

std::string string(const json& j, const std::string& at) {
  if (!j.is_string()) fail(at, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& at) {
  if (!j.is_array()) fail(at, "expected an array");
  return j;
}

std::vector<int> int_list(const json& j, const std::string& at) {
  std::vector<int> out;
  const json& a = array(j, at);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(integer(a[i], at + "/" + std::to_string(i)));
  return out;
}

std::vector<std::vector<int>> int_lists(const json& j, const std::string& at) {
  std::vector<std::vector<int>> out;
  const json& a = array(j, at);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(int_list(a[i], at + "/" + std::to_string(i)));
  return out;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string family_name(Family f) { return f == Family::ATwisted ? "a-twisted" : "d-twisted"; }

Family family_from_name(const std::string& s) {
  if (s == "a-twisted") return Family::ATwisted;
  if (s == "d-twisted") return Family::DTwisted;
  throw std::invalid_argument("unknown family \"" + s + "\" (expected a-twisted or d-twisted)");
}

std::string case_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::A_I:
    case CaseTag::D_I: return "I";
    case CaseTag::A_II:
    case CaseTag::D_II: return "II";
    case CaseTag::A_DiagBeta: return "diag-beta";
    case CaseTag::D_DiagMG: return "mg";
    case CaseTag::D_BlockXi1: return "block-xi1";
    case CaseTag::D_BlockXi2: return "block-xi2";
    case CaseTag::D_BlockPair: return "pair";
  }
  return "?";
}

CaseTag case_from_name(Family f, const std::string& s) {
  const bool a = f == Family::ATwisted;
  if (s == "I") return a ? CaseTag::A_I : CaseTag::D_I;
  if (s == "II") return a ? CaseTag::A_II : CaseTag::D_II;
  if (a && s == "diag-beta") return CaseTag::A_DiagBeta;
  if (!a && s == "mg") return CaseTag::D_DiagMG;
  if (!a && s == "block-xi1") return CaseTag::D_BlockXi1;
  if (!a && s == "block-xi2") return CaseTag::D_BlockXi2;
  if (!a && s == "pair") return CaseTag::D_BlockPair;
  throw std::invalid_argument("unknown case \"" + s + "\" for family " + family_name(f));
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const BetheRootSet& r) {
  json levels = json::array();
  for (const auto& l : r.levels) {
    json lv = json::array();
    for (cplx u : l) lv.push_back(to_json(u));
    levels.push_back(lv);
  }
  return json{{"levels", levels}};
}

json to_json(const std::vector<BetheRootSet>& list) {
  json a = json::array();
  for (const auto& r : list) a.push_back(to_json(r));
  return a;
}

json to_json(const EigenEntry& e) { return json{{"value", to_json(e.value)}, {"deg", e.deg}}; }

json to_json(const MatchReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs)
    pairs.push_back(json{{"cluster", to_json(p.cluster)},
                         {"roots", to_json(p.roots)},
                         {"lambda_diff", finite_or_null(p.lambda_diff)},
                         {"energy_diff", finite_or_null(p.energy_diff)}});
  json eig = json::array();
  for (const auto& e : r.unmatched_eigenvalues) eig.push_back(to_json(e));
  return json{{"pairs", pairs},
              {"unmatched_eigenvalues", eig},
              {"unmatched_rootsets", to_json(r.unmatched_rootsets)},
              {"complete", r.complete()}};
}

json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back(
        json{{"name", c.name}, {"residual", finite_or_null(c.residual)}, {"tol", c.tol}, {"pass", c.pass()}});
  return json{{"checks", checks}, {"all_pass", r.all_pass()}};
}

json to_json(const SpectrumReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back(json{{"value", to_json(l.t_value)},
                          {"deg", l.degeneracy},
                          {"energy", to_json(l.energy)},
                          {"weights", l.weights},
                          {"hw_labels", l.hw_labels},
                          {"starred", l.starred}});
  json blocks = json::array();
  for (const auto& b : r.blocks)
    blocks.push_back(json{{"label", b.label},
                          {"dim", b.dim},
                          {"multiplicity", b.multiplicity},
                          {"observed_degeneracy", b.observed_degeneracy},
                          {"starred", b.starred},
                          {"components", b.components}});
  return json{{"levels", levels}, {"blocks", blocks}, {"anomalies", r.anomalies}, {"probe_u", to_json(r.probe_u)}};
}

cplx cplx_from_json(const json& j, const std::string& at) {
  if (!j.is_array() || j.size() != 2) fail(at, "expected [re, im]");
  return {number(j[0], at + "/0"), number(j[1], at + "/1")};
}

BetheRootSet rootset_from_json(const json& j, const std::string& at) {
  BetheRootSet r;
  const json& levels = array(field(j, "levels", at), at + "/levels");
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const std::string la = at + "/levels/" + std::to_string(l);
    std::vector<cplx> lv;
    const json& a = array(levels[l], la);
    for (std::size_t k = 0; k < a.size(); ++k) lv.push_back(cplx_from_json(a[k], la + "/" + std::to_string(k)));
    r.levels.push_back(std::move(lv));
  }
  return r;
}

std::vector<BetheRootSet> rootsets_from_json(const json& j, const std::string& at) {
  std::vector<BetheRootSet> out;
  const json& a = array(j, at);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(rootset_from_json(a[i], at + "/" + std::to_string(i)));
  return out;
}

EigenEntry eigen_entry_from_json(const json& j, const std::string& at) {
  return {cplx_from_json(field(j, "value", at), at + "/value"), integer(field(j, "deg", at), at + "/deg")};
}

MatchReport match_report_from_json(const json& j, const std::string& at) {
  MatchReport r;
  const json& pairs = array(field(j, "pairs", at), at + "/pairs");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string pa = at + "/pairs/" + std::to_string(i);
    MatchPair p;
    p.cluster = eigen_entry_from_json(field(pairs[i], "cluster", pa), pa + "/cluster");
    p.roots = rootset_from_json(field(pairs[i], "roots", pa), pa + "/roots");
    p.lambda_diff = number(field(pairs[i], "lambda_diff", pa), pa + "/lambda_diff");
    p.energy_diff = number(field(pairs[i], "energy_diff", pa), pa + "/energy_diff");
    r.pairs.push_back(std::move(p));
  }
  const json& eig = array(field(j, "unmatched_eigenvalues", at), at + "/unmatched_eigenvalues");
  for (std::size_t i = 0; i < eig.size(); ++i)
    r.unmatched_eigenvalues.push_back(eigen_entry_from_json(eig[i], at + "/unmatched_eigenvalues/" + std::to_string(i)));
  r.unmatched_rootsets = rootsets_from_json(field(j, "unmatched_rootsets", at), at + "/unmatched_rootsets");
  return r;
}

VerificationReport verification_from_json(const json& j, const std::string& at) {
  VerificationReport r;
  const json& checks = array(field(j, "checks", at), at + "/checks");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string ca = at + "/checks/" + std::to_string(i);
    r.add(string(field(checks[i], "name", ca), ca + "/name"), number(field(checks[i], "residual", ca), ca + "/residual"),
          number(field(checks[i], "tol", ca), ca + "/tol"));
  }
  return r;
}

SpectrumReport spectrum_from_json(const json& j, const std::string& at) {
  SpectrumReport r;
  const json& levels = array(field(j, "levels", at), at + "/levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string la = at + "/levels/" + std::to_string(i);
    const json& l = levels[i];
    Level lv;
    lv.t_value = cplx_from_json(field(l, "value", la), la + "/value");
    lv.degeneracy = integer(field(l, "deg", la), la + "/deg");
    lv.energy = cplx_from_json(field(l, "energy", la), la + "/energy");
    lv.weights = int_lists(field(l, "weights", la), la + "/weights");
    lv.hw_labels = int_lists(field(l, "hw_labels", la), la + "/hw_labels");
    lv.starred = boolean(field(l, "starred", la), la + "/starred");
    r.levels.push_back(std::move(lv));
  }
  const json& blocks = array(field(j, "blocks", at), at + "/blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string ba = at + "/blocks/" + std::to_string(i);
    const json& b = blocks[i];
    IrrepBlock blk;
    blk.label = int_list(field(b, "label", ba), ba + "/label");
    blk.dim = integer(field(b, "dim", ba), ba + "/dim");
    blk.multiplicity = integer(field(b, "multiplicity", ba), ba + "/multiplicity");
    blk.observed_degeneracy = integer(field(b, "observed_degeneracy", ba), ba + "/observed_degeneracy");
    blk.starred = boolean(field(b, "starred", ba), ba + "/starred");
    blk.components = int_lists(field(b, "components", ba), ba + "/components");
    r.blocks.push_back(std::move(blk));
  }
  const json& an = array(field(j, "anomalies", at), at + "/anomalies");
  for (std::size_t i = 0; i < an.size(); ++i) r.anomalies.push_back(string(an[i], at + "/anomalies/" + std::to_string(i)));
  r.probe_u = cplx_from_json(field(j, "probe_u", at), at + "/probe_u");
  return r;
}

json boundary_params(const BoundaryCase& bc) {
  switch (bc.tag) {
    case CaseTag::A_DiagBeta: return json{{"beta", to_json(bc.p1)}};
    case CaseTag::D_BlockXi1:
    case CaseTag::D_BlockXi2: return json{{"xi", to_json(bc.p1)}};
    case CaseTag::D_BlockPair: return json{{"mu_minus", to_json(bc.p1)}, {"mu_plus", to_json(bc.p2)}};
    default: return json::object();
  }
}

json to_json(const RunManifest& m) {
  json j{{"command", m.command},
         {"family", family_name(m.spec.model.family)},
         {"n", m.spec.model.n},
         {"eta", to_json(m.spec.model.eta)},
         {"case", case_name(m.spec.bc.tag)},
         {"params", boundary_params(m.spec.bc)},
         {"sites", m.spec.N},
         {"options", m.options}};
  if (!m.spec.thetas.empty()) {
    json t = json::array();
    for (cplx x : m.spec.thetas) t.push_back(to_json(x));
    j["thetas"] = t;
  }
  if (!m.output.empty()) j["output"] = m.output;
  return j;
}

RunManifest manifest_from_json(const json& j) {
  static const std::set<std::string> keys{"command", "family", "n",      "eta",    "case",
                                          "params",  "sites",  "thetas", "options", "output"};
  static const std::set<std::string> option_keys{"samples", "seed",  "site",       "mcap",     "m",
                                                 "starts",  "threads", "newton_tol", "max_iter", "dedup_tol",
                                                 "roots",   "tol",     "beta",       "table"};
  if (!j.is_object()) fail("", "manifest must be an object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) fail("/" + k, "unknown manifest key");
  RunManifest m;
  m.command = string(field(j, "command", ""), "/command");
  try {
    m.spec.model.family = family_from_name(string(field(j, "family", ""), "/family"));
    m.spec.model.n = integer(field(j, "n", ""), "/n");
    if (j.contains("eta")) m.spec.model.eta = cplx_from_json(j["eta"], "/eta");
    const CaseTag tag = case_from_name(m.spec.model.family, j.contains("case") ? string(j["case"], "/case") : "I");
    cplx p1{}, p2{};
    if (j.contains("params")) {
      const json& p = j["params"];
      if (!p.is_object()) fail("/params", "expected an object");
      for (const auto& [k, v] : p.items()) {
        const std::string pa = "/params/" + k;
        if ((k == "beta" && tag == CaseTag::A_DiagBeta) ||
            (k == "xi" && (tag == CaseTag::D_BlockXi1 || tag == CaseTag::D_BlockXi2)) ||
            (k == "mu_minus" && tag == CaseTag::D_BlockPair))
          p1 = cplx_from_json(v, pa);
        else if (k == "mu_plus" && tag == CaseTag::D_BlockPair)
          p2 = cplx_from_json(v, pa);
        else
          fail(pa, "unknown boundary parameter for case " + case_name(tag));
      }
    }
    m.spec.bc = BoundaryCase::make(tag, p1, p2);
    if (j.contains("sites")) m.spec.N = integer(j["sites"], "/sites");
    if (j.contains("thetas")) {
      const json& t = array(j["thetas"], "/thetas");
      for (std::size_t i = 0; i < t.size(); ++i) m.spec.thetas.push_back(cplx_from_json(t[i], "/thetas/" + std::to_string(i)));
    }
    if (j.contains("options")) {
      if (!j["options"].is_object()) fail("/options", "expected an object");
      for (const auto& [k, v] : j["options"].items())
        if (!option_keys.count(k)) fail("/options/" + k, "unknown option");
      m.options = j["options"];
    }
    if (j.contains("output")) m.output = string(j["output"], "/output");
    validate(m.spec.model);
    check_compatible(m.spec.model, m.spec.bc);
  } catch (const decode_error&) {
    throw;
  } catch (const std::exception& e) {
    fail("", e.what());
  }
  return m;
}

std::string encode(const ResultDocument& doc) {
  json j{{"schema_version", doc.schema_version},
         {"manifest", doc.manifest},
         {"payload", doc.payload},
         {"wall_time_seconds", doc.wall_time_seconds}};
  return j.dump(2) + "\n";
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "decode: line " << line << ", column " << col << " (byte " << e.byte << "): " << e.what();
    throw decode_error(os.str());
  }
}

ResultDocument decode(const std::string& text) {
  const json j = parse(text);
  ResultDocument d;
  d.schema_version = integer(field(j, "schema_version", ""), "/schema_version");
  if (d.schema_version != kSchemaVersion) fail("/schema_version", "unsupported schema version");
  d.manifest = field(j, "manifest", "");
  d.payload = field(j, "payload", "");
  d.wall_time_seconds = number(field(j, "wall_time_seconds", ""), "/wall_time_seconds");
  return d;
}

}  // namespace tc::io
