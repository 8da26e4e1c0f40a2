#include "doctest.h"
#include "twistchain/io.hpp"

using namespace tc;
using io::json;

TEST_CASE("complex and root set encoding") {
  CHECK(io::to_json(cplx(0.0, -0.1)).dump() == "[0.0,-0.1]");
  const BetheRootSet r{{{cplx(0.100167, 0.0), cplx(0.100167, 3.14159)}}};
  CHECK(io::to_json(r).dump() == R"({"levels":[[[0.100167,0.0],[0.100167,3.14159]]]})");
  CHECK(io::to_json(EigenEntry{cplx(1.5, -2.0), 3}).dump() == R"({"deg":3,"value":[1.5,-2.0]})");
}

TEST_CASE("match report round trip") {
  MatchReport m;
  MatchPair p;
  p.cluster = {cplx(0.25, -1.0 / 3.0), 5};
  p.roots = BetheRootSet{{{cplx(0.1, 0.2), cplx(std::sqrt(2.0), kPi)}, {}}};
  p.lambda_diff = 1.2345678901234567e-11;
  p.energy_diff = 3.0e-14;
  m.pairs.push_back(p);
  m.unmatched_eigenvalues.push_back({cplx(-7.0, 1e-300), 2});
  m.unmatched_rootsets.push_back(BetheRootSet{{{cplx(2.0, 0.0)}, {cplx(0.0, 1.5707963267948966)}}});
  io::ResultDocument doc;
  doc.payload = io::to_json(m);
  doc.wall_time_seconds = 0.125;
  const auto back = io::decode(io::encode(doc));
  CHECK(io::match_report_from_json(back.payload) == m);
  CHECK(back.wall_time_seconds == 0.125);
  CHECK(io::encode(back) == io::encode(doc));
}

TEST_CASE("verification report round trip") {
  VerificationReport r;
  r.add("ybe", 1e-16, 1e-9);
  r.add("broken", std::numeric_limits<double>::infinity(), 1e-9);
  const auto j = io::to_json(r);
  CHECK(j["all_pass"] == false);
  const auto back = io::verification_from_json(io::parse(j.dump()));
  REQUIRE(back.checks.size() == 2);
  CHECK(back.checks[0].residual == 1e-16);
  CHECK_FALSE(back.checks[1].pass());
}

TEST_CASE("keys come out sorted") {
  io::ResultDocument doc;
  doc.payload = json{{"zeta", 1}, {"alpha", 2}};
  const std::string s = io::encode(doc);
  CHECK(s.find("\"alpha\"") < s.find("\"zeta\""));
  CHECK(s.find("\"manifest\"") < s.find("\"payload\""));
  CHECK(s.find("\"schema_version\"") < s.find("\"wall_time_seconds\""));
}

TEST_CASE("decode errors carry positions") {
  try {
    io::decode("{\n  \"schema_version\": 1,\n  \"payload\": [1, 2,\n}");
    FAIL("expected a decode error");
  } catch (const io::decode_error& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  try {
    io::rootset_from_json(io::parse(R"({"levels": [[[0.1, 0.2], [0.3]]]})"));
    FAIL("expected a decode error");
  } catch (const io::decode_error& e) {
    CHECK(std::string(e.what()).find("/levels/0/1") != std::string::npos);
  }
  CHECK_THROWS_AS(io::decode(R"({"schema_version": 7, "manifest": {}, "payload": null, "wall_time_seconds": 0})"),
                  io::decode_error);
}

TEST_CASE("manifest parsing") {
  const auto j = io::parse(R"({"command": "verify k", "family": "d-twisted", "n": 1, "eta": [0.0, -0.1],
    "case": "pair", "params": {"mu_minus": [0.2, 0.0], "mu_plus": [0.2, 0.0]}, "sites": 2,
    "options": {"samples": 5, "seed": 3}})");
  const auto m = io::manifest_from_json(j);
  CHECK(m.spec.bc.tag == CaseTag::D_BlockPair);
  CHECK(m.spec.bc.special_manifold());
  CHECK(m.spec.model.eta == cplx(0.0, -0.1));
  CHECK(io::manifest_from_json(io::to_json(m)).spec.N == 2);
  CHECK(io::to_json(io::manifest_from_json(io::to_json(m))) == io::to_json(m));
}

TEST_CASE("manifest rejects unknown keys and invalid chains") {
  auto base = io::parse(R"({"command": "spectrum", "family": "a-twisted", "n": 1, "sites": 2})");
  CHECK_NOTHROW(io::manifest_from_json(base));
  auto extra = base;
  extra["colour"] = "red";
  CHECK_THROWS_AS(io::manifest_from_json(extra), io::decode_error);
  auto opt = base;
  opt["options"] = json{{"sample", 3}};
  CHECK_THROWS_AS(io::manifest_from_json(opt), io::decode_error);
  auto bad = base;
  bad["n"] = 0;
  CHECK_THROWS_AS(io::manifest_from_json(bad), io::decode_error);
  auto wrong = base;
  wrong["case"] = "mg";
  CHECK_THROWS_AS(io::manifest_from_json(wrong), io::decode_error);
  auto param = base;
  param["params"] = json{{"beta", {1.3, 0.0}}};
  CHECK_THROWS_AS(io::manifest_from_json(param), io::decode_error);
}

TEST_CASE("spectrum report round trip") {
  SpectrumReport r;
  Level l;
  l.energy = cplx(0.5, -1.0);
  l.t_value = cplx(3.0, 0.25);
  l.degeneracy = 2;
  l.weights = {{1, 0}, {0, 1}};
  l.hw_labels = {{1, 0}};
  r.levels.push_back(l);
  r.blocks.push_back(IrrepBlock{{1, 0}, 4, 1, 4, false, {{1, 0}}});
  r.anomalies = {"none"};
  r.probe_u = cplx(0.37, 0.21);
  const auto back = io::spectrum_from_json(io::parse(io::to_json(r).dump()));
  CHECK(io::to_json(back) == io::to_json(r));
}
