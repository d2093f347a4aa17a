#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "freeze/error.hpp"
#include "freeze/exact_sampler.hpp"
#include "freeze/serialize.hpp"

using namespace freeze;

namespace {

RunManifest manifest() {
  RunManifest m;
  m.command = "sample";
  m.parameters = {{"system", "A"}, {"n", "2"}, {"k", "3"}};
  m.positionals = {};
  m.flags = {"quick"};
  m.seed = 18446744073709551615ull;
  m.has_seed = true;
  m.threads = 4;
  m.timestamp = "2026-01-01T00:00:00Z";
  return m;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("manifest round trip and argv") {
  const RunManifest m = manifest();
  const RunManifest back = manifest_from_json(Json::parse(to_json(m).dump()));
  CHECK(back.command == m.command);
  CHECK(back.parameters == m.parameters);
  CHECK(back.flags == m.flags);
  CHECK(back.seed == m.seed);
  CHECK(back.has_seed);
  CHECK(back.threads == 4);
  CHECK(back.version == FREEZE_VERSION);
  const std::vector<std::string> argv = {"sample", "--k", "3", "--n", "2", "--system", "A", "--quick"};
  CHECK(m.argv() == argv);

  RunManifest unseeded = m;
  unseeded.has_seed = false;
  CHECK(to_json(unseeded)["seed"].is_null());
  CHECK_FALSE(manifest_from_json(to_json(unseeded)).has_seed);
  CHECK_THROWS_AS(manifest_from_json(Json::parse("{\"command\": 1}")), InvalidArgument);
}

TEST_CASE("timestamps are UTC ISO 8601") {
  const std::string ts = utc_timestamp();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts.back() == 'Z');
}

TEST_CASE("batch CSV layout") {
  SampleBatch b(RootSystemSpec::B(2, 1.0, 2.0), 1.0, SamplerMethod::TridiagB, 5);
  b.data() = {0.1, 1.0 / 3.0, 2.0, 1e-300};
  const auto ls = lines(batch_csv(manifest(), b));
  REQUIRE(ls.size() == 4);
  CHECK(ls[0].rfind("# manifest: {", 0) == 0);
  CHECK(manifest_from_json(Json::parse(ls[0].substr(12))).command == "sample");
  CHECK(ls[1] == "x1,x2");
  CHECK(ls[2] == "0.10000000000000001,0.33333333333333331");
  CHECK(std::strtod(ls[2].substr(ls[2].find(',') + 1).c_str(), nullptr) == 1.0 / 3.0);
  CHECK(ls[3] == "2,1e-300");
  CHECK(std::strtod(ls[3].substr(2).c_str(), nullptr) == 1e-300);
}

TEST_CASE("batch JSON mirrors the batch field for field") {
  SampleBatch b = sample_exact(RootSystemSpec::D(3, 2.0), 0.5, 50, 9);
  b.diagnostics.aborted_paths = 2;
  const Json doc = batch_document(manifest(), b);
  CHECK(doc["manifest"]["command"] == "sample");
  const SampleBatch back = batch_from_json(Json::parse(doc.dump())["batch"]);
  CHECK(back.spec() == b.spec());
  CHECK(back.t() == b.t());
  CHECK(back.method() == b.method());
  CHECK(back.seed() == b.seed());
  CHECK(back.parameters == b.parameters);
  CHECK(back.diagnostics.aborted_paths == 2);
  CHECK(back.data() == b.data());

  Json bad = doc["batch"];
  bad["points"][0].push_back(1.0);
  CHECK_THROWS_AS(batch_from_json(bad), InvalidArgument);
}

TEST_CASE("reports serialize to JSON and a CSV summary") {
  VerificationReport r;
  r.name = "demo";
  r.param("n", 2);
  r.statistics["p"] = 0.25;
  r.statistics["bad"] = std::nan("");
  r.tolerances["p"] = 0.01;
  r.notes = {"a note"};
  r.pass = true;
  VerificationReport f = r;
  f.name = "fails";
  f.pass = false;

  const Json doc = reports_document(manifest(), {r, f});
  CHECK(doc["pass"] == false);
  REQUIRE(doc["reports"].size() == 2);
  const VerificationReport back = report_from_json(Json::parse(doc.dump())["reports"][0]);
  CHECK(back.name == "demo");
  CHECK(back.pass);
  CHECK(back.parameters == r.parameters);
  CHECK(back.statistics.at("p") == 0.25);
  CHECK(std::isnan(back.statistics.at("bad")));
  CHECK(back.notes == r.notes);

  const auto ls = lines(summary_csv(manifest(), {r, f}));
  REQUIRE(ls.size() == 8);
  CHECK(ls[1] == "report,pass,field,key,value");
  CHECK(ls[2] == "demo,1,statistic,bad,nan");
  CHECK(ls[3] == "demo,1,statistic,p,0.25");
  CHECK(ls[4] == "demo,1,tolerance,p,0.01");
  CHECK(ls[5].rfind("fails,0,", 0) == 0);
}

TEST_CASE("read_manifest from CSV and JSON files") {
  const RunManifest m = manifest();
  SampleBatch b(RootSystemSpec::A(1, 1.0), 1.0, SamplerMethod::TridiagA, 1);
  b.data() = {0.5};
  const std::string csv = "/tmp/freeze_test_manifest.csv";
  const std::string json = "/tmp/freeze_test_manifest.json";
  write_output(csv, batch_csv(m, b));
  write_output(json, batch_document(m, b).dump(2));
  CHECK(read_manifest(csv).parameters == m.parameters);
  CHECK(read_manifest(json).seed == m.seed);
  write_output(json, "{\"no\": 1}");
  CHECK_THROWS_AS(read_manifest(json), InvalidArgument);
  CHECK_THROWS_AS(read_manifest("/tmp/does/not/exist.csv"), InvalidArgument);
  std::remove(csv.c_str());
  std::remove(json.c_str());
}
