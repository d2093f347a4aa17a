#include "freeze/serialize.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "freeze/error.hpp"

namespace freeze {

namespace {

// nlohmann writes non-finite doubles as null.
double number_or_nan(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

constexpr const char* kCsvPrefix = "# manifest: ";

}  // namespace

std::vector<std::string> RunManifest::argv() const {
  std::vector<std::string> out{command};
  out.insert(out.end(), positionals.begin(), positionals.end());
  for (const auto& [key, value] : parameters) {
    out.push_back("--" + key);
    out.push_back(value);
  }
  for (const auto& f : flags) out.push_back("--" + f);
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["positionals"] = m.positionals;
  j["parameters"] = m.parameters;
  j["flags"] = m.flags;
  j["seed"] = m.has_seed ? Json(m.seed) : Json(nullptr);
  j["threads"] = m.threads;
  j["version"] = m.version;
  j["timestamp"] = m.timestamp;
  return j;
}

RunManifest manifest_from_json(const Json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.positionals = j.value("positionals", std::vector<std::string>{});
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.flags = j.value("flags", std::vector<std::string>{});
    if (j.contains("seed") && !j["seed"].is_null()) {
      m.seed = j["seed"].get<std::uint64_t>();
      m.has_seed = true;
    }
    m.threads = j.value("threads", 0u);
    m.version = j.value("version", std::string{});
    m.timestamp = j.value("timestamp", std::string{});
    return m;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed manifest: ") + e.what());
  }
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot read " + path);
  std::string first;
  std::getline(in, first);
  try {
    if (first.rfind(kCsvPrefix, 0) == 0) {
      return manifest_from_json(Json::parse(first.substr(std::string(kCsvPrefix).size())));
    }
    std::stringstream rest;
    rest << first << '\n' << in.rdbuf();
    const Json doc = Json::parse(rest.str());
    require(doc.contains("manifest"), path + " has no manifest");
    return manifest_from_json(doc["manifest"]);
  } catch (const Json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

Json to_json(const RootSystemSpec& spec) {
  Json j;
  j["system"] = to_string(spec.kind());
  j["n"] = spec.n();
  if (spec.kind() == RootKind::B) {
    j["k1"] = spec.k1();
    j["k2"] = spec.k2();
  } else {
    j["k"] = spec.k();
  }
  return j;
}

RootSystemSpec spec_from_json(const Json& j) {
  const RootKind kind = parse_root_kind(j.at("system").get<std::string>());
  const int n = j.at("n").get<int>();
  switch (kind) {
    case RootKind::A: return RootSystemSpec::A(n, j.at("k").get<double>());
    case RootKind::B: return RootSystemSpec::B(n, j.at("k1").get<double>(), j.at("k2").get<double>());
    case RootKind::D: return RootSystemSpec::D(n, j.at("k").get<double>());
  }
  throw InvalidArgument("unknown root system");
}

Json to_json(const VerificationReport& r) {
  Json j;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["parameters"] = r.parameters;
  j["statistics"] = r.statistics;
  j["tolerances"] = r.tolerances;
  j["notes"] = r.notes;
  return j;
}

VerificationReport report_from_json(const Json& j) {
  VerificationReport r;
  r.name = j.at("name").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  r.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
  for (const auto& [k, v] : j.at("statistics").items()) r.statistics[k] = number_or_nan(v);
  for (const auto& [k, v] : j.at("tolerances").items()) r.tolerances[k] = number_or_nan(v);
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

Json reports_document(const RunManifest& manifest, const std::vector<VerificationReport>& reports) {
  Json j;
  j["manifest"] = to_json(manifest);
  j["pass"] = all_pass(reports);
  j["reports"] = Json::array();
  for (const auto& r : reports) j["reports"].push_back(to_json(r));
  return j;
}

std::string summary_csv(const RunManifest& manifest, const std::vector<VerificationReport>& reports) {
  std::string out = kCsvPrefix + to_json(manifest).dump() + "\n";
  out += "report,pass,field,key,value\n";
  for (const auto& r : reports) {
    const std::string head = r.name + "," + (r.pass ? "1" : "0") + ",";
    for (const auto& [k, v] : r.statistics) out += head + "statistic," + k + "," + format_number(v) + "\n";
    for (const auto& [k, v] : r.tolerances) out += head + "tolerance," + k + "," + format_number(v) + "\n";
  }
  return out;
}

std::string batch_csv(const RunManifest& manifest, const SampleBatch& batch) {
  std::string out = kCsvPrefix + to_json(manifest).dump() + "\n";
  const int n = batch.dim();
  for (int j = 0; j < n; ++j) out += (j ? ",x" : "x") + std::to_string(j + 1);
  out += "\n";
  char buf[40];
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const auto row = batch.row(i);
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, j ? ",%.17g" : "%.17g", row[j]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

Json to_json(const SampleBatch& b) {
  Json j;
  j["spec"] = to_json(b.spec());
  j["t"] = b.t();
  j["method"] = to_string(b.method());
  j["seed"] = b.seed();
  j["parameters"] = b.parameters;
  const auto& d = b.diagnostics;
  j["diagnostics"] = {{"acceptance_rate", d.acceptance_rate},
                      {"effective_sample_size", d.effective_sample_size},
                      {"thinning", d.thinning},
                      {"burn_in", d.burn_in},
                      {"max_lag1_autocorrelation", d.max_lag1_autocorrelation},
                      {"aborted_paths", d.aborted_paths}};
  Json points = Json::array();
  for (std::size_t i = 0; i < b.count(); ++i) {
    const auto row = b.row(i);
    points.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["points"] = std::move(points);
  return j;
}

SampleBatch batch_from_json(const Json& j) {
  try {
    SampleBatch b(spec_from_json(j.at("spec")), j.at("t").get<double>(),
                  parse_sampler_method(j.at("method").get<std::string>()),
                  j.at("seed").get<std::uint64_t>());
    b.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    const Json& d = j.at("diagnostics");
    b.diagnostics.acceptance_rate = number_or_nan(d.at("acceptance_rate"));
    b.diagnostics.effective_sample_size = number_or_nan(d.at("effective_sample_size"));
    b.diagnostics.thinning = d.at("thinning").get<int>();
    b.diagnostics.burn_in = d.at("burn_in").get<int>();
    b.diagnostics.max_lag1_autocorrelation = number_or_nan(d.at("max_lag1_autocorrelation"));
    b.diagnostics.aborted_paths = d.at("aborted_paths").get<std::size_t>();
    for (const auto& p : j.at("points")) {
      require(p.size() == static_cast<std::size_t>(b.dim()), "point has the wrong dimension");
      for (const auto& v : p) b.data().push_back(v.get<double>());
    }
    return b;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed batch: ") + e.what());
  }
}

Json batch_document(const RunManifest& manifest, const SampleBatch& batch) {
  Json j;
  j["manifest"] = to_json(manifest);
  j["batch"] = to_json(batch);
  return j;
}

Json to_json(const FreezingTarget& t) {
  Json j;
  j["system"] = to_string(t.kind);
  j["n"] = t.n;
  if (t.kind == RootKind::B) j["nu"] = t.nu;
  j["coords"] = t.coords;
  j["source"] = to_string(t.source);
  if (t.source != ZeroSource::HermiteZeros) j["alpha"] = t.alpha;
  return j;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) r[c] = m(i, c);
    rows.push_back(r);
  }
  return rows;
}

Json to_json(const PrecisionMatrix& p) {
  Json j;
  j["system"] = to_string(p.kind);
  j["n"] = p.n;
  if (p.kind == RootKind::B) j["nu"] = p.nu;
  j["S"] = to_json(p.entries);
  j["cholesky"] = to_json(p.chol);
  j["det"] = p.det;
  j["log_det"] = p.log_det;
  j["Sigma"] = to_json(covariance(p));
  return j;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write " + path);
  out << text;
  require(out.good(), "failed writing " + path);
}

}  // namespace freeze
