#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "freeze/equilibria.hpp"
#include "freeze/gaussian_limits.hpp"
#include "freeze/report.hpp"
#include "freeze/root_system.hpp"
#include "freeze/sample_batch.hpp"

namespace freeze {

using Json = nlohmann::ordered_json;

// What produced an output file. `parameters` holds every option value of the
// command, so the command line can be rebuilt from it.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> flags;
  std::vector<std::string> positionals;
  std::uint64_t seed = 0;
  bool has_seed = false;
  unsigned threads = 0;
  std::string version = FREEZE_VERSION;
  std::string timestamp;

  // Arguments after the program name: command, positionals, --key value
  // pairs, flags.
  std::vector<std::string> argv() const;
};

// UTC, ISO 8601, second resolution.
std::string utc_timestamp();

Json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const Json& j);

// Reads the manifest embedded in a CSV file (first line "# manifest: {...}")
// or a JSON file (top-level "manifest" member).
RunManifest read_manifest(const std::string& path);

Json to_json(const RootSystemSpec& spec);
RootSystemSpec spec_from_json(const Json& j);

Json to_json(const VerificationReport& report);
VerificationReport report_from_json(const Json& j);

// {"manifest", "pass", "reports": [...]}.
Json reports_document(const RunManifest& manifest, const std::vector<VerificationReport>& reports);

// One row per statistic and tolerance: report,pass,field,key,value.
std::string summary_csv(const RunManifest& manifest, const std::vector<VerificationReport>& reports);

// "# manifest: <json>", then x1,...,xn, then one row per point with %.17g.
std::string batch_csv(const RunManifest& manifest, const SampleBatch& batch);

Json to_json(const SampleBatch& batch);
SampleBatch batch_from_json(const Json& j);
Json batch_document(const RunManifest& manifest, const SampleBatch& batch);

Json to_json(const FreezingTarget& target);
Json to_json(const PrecisionMatrix& precision);
Json to_json(const Eigen::MatrixXd& m);

// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& text);

}  // namespace freeze
