#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistchain/bethe.hpp"
#include "twistchain/qsym.hpp"
#include "twistchain/report.hpp"

namespace tc::io {

// std::map-backed, so keys come out sorted
using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class decode_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string family_name(Family f);
Family family_from_name(const std::string& s);
// I, II, diag-beta, mg, block-xi1, block-xi2, pair
std::string case_name(CaseTag tag);
CaseTag case_from_name(Family f, const std::string& s);

json to_json(cplx z);
json to_json(const BetheRootSet& r);
json to_json(const std::vector<BetheRootSet>& list);
json to_json(const EigenEntry& e);
json to_json(const MatchReport& r);
json to_json(const VerificationReport& r);
json to_json(const SpectrumReport& r);

// `at` names the location inside the document for error messages
cplx cplx_from_json(const json& j, const std::string& at = "");
BetheRootSet rootset_from_json(const json& j, const std::string& at = "");
std::vector<BetheRootSet> rootsets_from_json(const json& j, const std::string& at = "");
EigenEntry eigen_entry_from_json(const json& j, const std::string& at = "");
MatchReport match_report_from_json(const json& j, const std::string& at = "");
VerificationReport verification_from_json(const json& j, const std::string& at = "");
SpectrumReport spectrum_from_json(const json& j, const std::string& at = "");

struct RunManifest {
  std::string command;
  ChainSpec spec;
  // command-specific options: samples, seed, site, mcap, m, starts, threads, ...
  json options = json::object();
  std::string output;
};

json boundary_params(const BoundaryCase& bc);
json to_json(const RunManifest& m);
// Rejects unknown keys and anything that does not describe a valid chain.
RunManifest manifest_from_json(const json& j);

struct ResultDocument {
  int schema_version = kSchemaVersion;
  json manifest = json::object();
  json payload;
  double wall_time_seconds = 0.0;
};

std::string encode(const ResultDocument& doc);
ResultDocument decode(const std::string& text);

// Parse with position-annotated errors.
json parse(const std::string& text);

}  // namespace tc::io
