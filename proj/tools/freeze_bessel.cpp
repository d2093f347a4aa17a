// freeze_bessel: command-line front end of the freeze library.
// Exit codes: 0 pass, 1 statistical failure, 2 bad input, 3 runtime abort.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "freeze/equilibria.hpp"
#include "freeze/error.hpp"
#include "freeze/exact_sampler.hpp"
#include "freeze/gaussian_limits.hpp"
#include "freeze/parallel.hpp"
#include "freeze/sde.hpp"
#include "freeze/serialize.hpp"
#include "freeze/suites.hpp"

using namespace freeze;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitAbort = 3;

struct Options {
  // global
  unsigned threads = 0;
  std::string replay;
  std::string out;

  // shared by several subcommands
  std::string family;
  std::string system;
  int n = 1;
  double alpha = 0.0;
  double nu = 1.0;
  std::optional<double> k, k1, k2, beta;
  double t = 1.0;
  std::uint64_t seed = 0;
  std::string format;
  std::vector<double> x;

  // sample
  std::size_t count = 1000;
  std::string method = "exact";
  double inflation = 1.5;

  // sde
  std::vector<double> x0;
  std::size_t paths = kDefaultPaths;
  int steps = 0;
  double clip = kDriftClip;
  double wall_buffer = 1e-6;

  // verify
  std::string suite;
  bool quick = false;
  int n_max = 12;
  std::optional<int> v_n;
  std::optional<double> v_nu, v_t, v_clip;
  std::optional<std::size_t> v_count, v_paths;
  std::optional<int> v_steps;
};

RootSystemSpec make_spec(const Options& o) {
  const RootKind kind = parse_root_kind(o.system);
  switch (kind) {
    case RootKind::A: return RootSystemSpec::A(o.n, o.k.value_or(1.0));
    case RootKind::B: return RootSystemSpec::B(o.n, o.k1.value_or(1.0), o.k2.value_or(o.k.value_or(1.0)));
    case RootKind::D: return RootSystemSpec::D(o.n, o.k.value_or(1.0));
  }
  throw InvalidArgument("unknown root system");
}

TargetRequest make_request(const Options& o) {
  const RootKind kind = parse_root_kind(o.system);
  switch (kind) {
    case RootKind::A: return TargetRequest::A(o.n);
    case RootKind::B: return TargetRequest::B(o.n, o.nu);
    case RootKind::D: return TargetRequest::D(o.n);
  }
  throw InvalidArgument("unknown root system");
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s;
}

// Every option of the selected subcommand, given or defaulted.
RunManifest collect_manifest(const CLI::App& sub, const Options& o) {
  RunManifest m;
  m.command = sub.get_name();
  m.threads = thread_limit();
  m.timestamp = utc_timestamp();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    if (opt->get_expected_min() == 0) {
      if (opt->count() > 0) m.flags.push_back(name);
      continue;
    }
    std::string value;
    if (opt->count() > 0) {
      value = join(opt->results());
    } else {
      value = opt->get_default_str();
      if (value.empty()) continue;
    }
    if (opt->nonpositional()) {
      m.parameters[name] = value;
    } else {
      m.positionals.push_back(value);
    }
  }
  if (sub.get_name() == "sample" || sub.get_name() == "sde" || sub.get_name() == "verify") {
    m.seed = o.seed;
    m.has_seed = true;
  }
  return m;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

bool wants_json(const std::string& format, const std::string& out, bool json_default) {
  if (!format.empty()) return format == "json";
  if (out.size() >= 5 && out.compare(out.size() - 5, 5, ".json") == 0) return true;
  if (out.size() >= 4 && out.compare(out.size() - 4, 4, ".csv") == 0) return false;
  return json_default;
}

int cmd_zeros(const Options& o, const RunManifest& m) {
  std::vector<double> zeros;
  if (o.family == "hermite") zeros = hermite_zeros(o.n);
  else if (o.family == "laguerre") zeros = laguerre_zeros(o.n, o.alpha);
  else zeros = laguerre_minus_one_zeros(o.n);
  if (wants_json(o.format, o.out, true)) {
    Json j;
    j["manifest"] = to_json(m);
    j["family"] = o.family;
    j["n"] = o.n;
    if (o.family == "laguerre") j["alpha"] = o.alpha;
    j["zeros"] = zeros;
    write_output(o.out, dump(j));
  } else {
    std::string text = "# manifest: " + to_json(m).dump() + "\nzero\n";
    for (double z : zeros) text += format_number(z) + "\n";
    write_output(o.out, text);
  }
  return kExitPass;
}

int cmd_target(const Options& o, const RunManifest& m) {
  const FreezingTarget target = freezing_target(make_request(o));
  Json j;
  j["manifest"] = to_json(m);
  j["target"] = to_json(target);
  j["stationarity_residual"] = stationarity_residual(target);
  write_output(o.out, dump(j));
  return kExitPass;
}

int cmd_sigma(const Options& o, const RunManifest& m) {
  Json j;
  j["manifest"] = to_json(m);
  j["precision"] = to_json(precision_matrix(make_request(o)));
  write_output(o.out, dump(j));
  return kExitPass;
}

int cmd_constants(const Options& o, const RunManifest& m) {
  ConstantParams p;
  p.n = o.n;
  p.k = o.k.value_or(0.0);
  p.k1 = o.k1.value_or(0.0);
  p.k2 = o.k2.value_or(0.0);
  p.nu = o.nu;
  p.beta = o.beta.value_or(1.0);
  p.x = o.x;
  const NormalizationConstant c = log_norm_constant(parse_constant_family(o.family), p);
  Json j;
  j["manifest"] = to_json(m);
  j["family"] = to_string(c.family);
  j["log_value"] = c.log_value;
  j["value"] = std::exp(c.log_value);
  write_output(o.out, dump(j));
  return kExitPass;
}

void write_batch(const Options& o, const RunManifest& m, const SampleBatch& batch) {
  if (wants_json(o.format, o.out, false)) {
    write_output(o.out, dump(batch_document(m, batch)));
  } else {
    write_output(o.out, batch_csv(m, batch));
  }
}

int cmd_sample(const Options& o, const RunManifest& m) {
  const RootSystemSpec spec = make_spec(o);
  SampleBatch batch = o.method == "exact"
                          ? sample_exact(spec, o.t, o.count, o.seed)
                          : sample_metropolis(spec, o.t, o.count, o.seed, o.inflation,
                                              parse_sampler_method(o.method));
  write_batch(o, m, batch);
  return kExitPass;
}

int cmd_sde(const Options& o, const RunManifest& m) {
  SdeConfig cfg{make_spec(o), StartDistribution::point(o.x0), o.t, o.steps, o.paths, o.seed,
                o.wall_buffer, o.clip};
  const SampleBatch batch = simulate_endpoints(cfg);
  if (batch.diagnostics.aborted_paths > 0) {
    std::cerr << "warning: " << batch.diagnostics.aborted_paths << " paths aborted on NaN\n";
  }
  write_batch(o, m, batch);
  return kExitPass;
}

int cmd_verify(const Options& o, const RunManifest& m) {
  SuiteOptions s;
  s.seed = o.seed;
  s.quick = o.quick;
  s.n_max = o.n_max;
  s.n = o.v_n;
  s.k = o.k;
  s.k1 = o.k1;
  s.k2 = o.k2;
  s.nu = o.v_nu;
  s.beta = o.beta;
  s.t = o.v_t;
  s.count = o.v_count;
  s.paths = o.v_paths;
  s.steps = o.v_steps;
  s.clip = o.v_clip;
  s.x0 = o.x0;
  const auto reports = run_suite(o.suite, s);
  for (const auto& r : reports) std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << "\n";
  if (wants_json(o.format, o.out, true)) {
    write_output(o.out, dump(reports_document(m, reports)));
  } else {
    write_output(o.out, summary_csv(m, reports));
  }
  return all_pass(reports) ? kExitPass : kExitFail;
}

void add_system(CLI::App* sub, Options& o) {
  sub->add_option("--system", o.system, "Root system")
      ->required()
      ->check(CLI::IsMember({"A", "B", "D"}));
  sub->add_option("--n", o.n, "Number of particles")->required();
}

void add_multiplicities(CLI::App* sub, Options& o) {
  sub->add_option("--k", o.k, "Pair multiplicity (A, D; B when --k2 is absent)");
  sub->add_option("--k1", o.k1, "B wall multiplicity");
  sub->add_option("--k2", o.k2, "B pair multiplicity");
}

void add_format(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format (default from the --out suffix)")
      ->check(CLI::IsMember({"json", "csv"}));
}

int run(std::vector<std::string> args) {
  Options o;
  CLI::App app{"Freezing limits of multivariate Bessel processes"};
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  app.add_option("--threads", o.threads, "Worker threads (0: all cores)");
  app.add_option("--replay", o.replay, "Re-run the command recorded in an output file");
  app.add_option("--out", o.out, "Output file (default stdout)");
  app.add_flag_callback("--version", [] { throw CLI::CallForVersion(FREEZE_VERSION, 0); },
                        "Print the version");

  auto* zeros = app.add_subcommand("zeros", "Zeros of Hermite and Laguerre polynomials");
  zeros->add_option("family", o.family, "hermite, laguerre or laguerre-1")
      ->required()
      ->check(CLI::IsMember({"hermite", "laguerre", "laguerre-1"}));
  zeros->add_option("--n", o.n, "Degree")->required();
  zeros->add_option("--alpha", o.alpha, "Laguerre index");
  add_format(zeros, o);

  auto* target = app.add_subcommand("target", "Freezing target configuration");
  add_system(target, o);
  target->add_option("--nu", o.nu, "k1/k2 (B)");

  auto* sigma = app.add_subcommand("sigma", "Limit precision matrix S and covariance");
  add_system(sigma, o);
  sigma->add_option("--nu", o.nu, "k1/k2 (B)");

  auto* constants = app.add_subcommand("constants", "Log normalization constants");
  constants->add_option("--family", o.family, "cA, cB, cD, tildeA or tildeB")
      ->required()
      ->check(CLI::IsMember({"cA", "cB", "cD", "tildeA", "tildeB"}));
  constants->add_option("--n", o.n, "Number of particles");
  add_multiplicities(constants, o);
  constants->add_option("--nu", o.nu, "k1/k2 (tildeB)");
  constants->add_option("--beta", o.beta, "beta (tildeB)");
  constants->add_option("--x", o.x, "Start point (tildeB)")->delimiter(',');

  auto* sample = app.add_subcommand("sample", "Fixed-time samples of the process started at 0");
  add_system(sample, o);
  add_multiplicities(sample, o);
  sample->add_option("--t", o.t, "Time");
  sample->add_option("--count", o.count, "Number of points");
  sample->add_option("--seed", o.seed, "Seed");
  sample->add_option("--method", o.method, "exact, indep-metropolis or rw-metropolis")
      ->check(CLI::IsMember({"exact", "indep-metropolis", "rw-metropolis"}));
  sample->add_option("--inflation", o.inflation, "Metropolis proposal inflation");
  add_format(sample, o);

  auto* sde = app.add_subcommand("sde", "Euler-Maruyama endpoints from a fixed start");
  add_system(sde, o);
  add_multiplicities(sde, o);
  sde->add_option("--x0", o.x0, "Start point, comma separated")->required()->delimiter(',');
  sde->add_option("--t", o.t, "Time");
  sde->add_option("--paths", o.paths, "Number of paths");
  sde->add_option("--steps", o.steps, "Euler steps on [0, t] (0: 2000 per unit time)");
  sde->add_option("--seed", o.seed, "Seed");
  sde->add_option("--clip", o.clip, "Drift clip in units of 1/sqrt(h)");
  sde->add_option("--wall-buffer", o.wall_buffer, "Minimum start distance from the walls");
  add_format(sde, o);

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", o.suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(kSuiteNames));
  verify->add_option("--seed", o.seed, "Seed (required)")->required();
  verify->add_flag("--quick", o.quick, "Smaller samples and grids");
  verify->add_option("--n-max", o.n_max, "Largest N for the determinant identities");
  verify->add_option("--n", o.v_n, "Number of particles");
  add_multiplicities(verify, o);
  verify->add_option("--nu", o.v_nu, "k1/k2");
  verify->add_option("--beta", o.beta, "beta = k2 (B1)");
  verify->add_option("--t", o.v_t, "Time");
  verify->add_option("--count", o.v_count, "Exact sample size");
  verify->add_option("--paths", o.v_paths, "SDE paths");
  verify->add_option("--steps", o.v_steps, "SDE steps");
  verify->add_option("--clip", o.v_clip, "SDE drift clip");
  verify->add_option("--x0", o.x0, "SDE start point")->delimiter(',');
  add_format(verify, o);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitBadInput;
  }

  try {
    set_thread_limit(o.threads);
    if (!o.replay.empty()) {
      require(app.get_subcommands().empty(), "--replay takes no subcommand");
      const RunManifest m = read_manifest(o.replay);
      std::vector<std::string> again = m.argv();
      if (!o.out.empty()) again.insert(again.begin(), {"--out", o.out});
      again.insert(again.begin(), {"--threads", std::to_string(o.threads)});
      return run(again);
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return kExitBadInput;
    }
    const CLI::App* sub = app.get_subcommands().front();
    const RunManifest m = collect_manifest(*sub, o);
    const std::string name = sub->get_name();
    if (name == "zeros") return cmd_zeros(o, m);
    if (name == "target") return cmd_target(o, m);
    if (name == "sigma") return cmd_sigma(o, m);
    if (name == "constants") return cmd_constants(o, m);
    if (name == "sample") return cmd_sample(o, m);
    if (name == "sde") return cmd_sde(o, m);
    if (name == "verify") return cmd_verify(o, m);
    return kExitBadInput;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const RuntimeAbort& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kExitAbort;
  } catch (const std::exception& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kExitAbort;
  }
}

}  // namespace

int main(int argc, char** argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc));
}
