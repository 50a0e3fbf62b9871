// Copyright 2026 The DLS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dls/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dls/aem_compiler.hpp"
#include "dls/error.hpp"
#include "dls/map_io.hpp"
#include "dls/stream.hpp"
#include "dls/tm.hpp"
#include "json.hpp"

namespace dls::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Usage and I/O problems detected by the subcommands themselves.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_u64(std::string_view text, const std::string& what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ContractViolation("bad " + what + ": '" + std::string(text) + "'");
  }
  return v;
}

// "kind:arg" -> {kind, arg}
std::pair<std::string, std::string> split_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::unique_ptr<RandomSource> make_source(const std::string& spec,
                                          int qrng_timeout_ms,
                                          int qrng_retries) {
  auto [kind, arg] = split_spec(spec);
  if (kind == "seeded") {
    return std::make_unique<SeededSource>(parse_u64(arg, "seed"));
  }
  if (kind == "os" && arg.empty()) return std::make_unique<OsEntropySource>();
  if (kind == "qrng") {
    std::string url = arg;
    if (url.empty()) {
      const char* env = std::getenv("DLS_QRNG_URL");
      if (!env || !*env) {
        throw ContractViolation("--rng qrng needs a URL or DLS_QRNG_URL");
      }
      url = env;
    }
    return std::make_unique<QrngSource>(
        QrngConfig{url, qrng_timeout_ms, qrng_retries});
  }
  throw ContractViolation("unknown random source '" + spec + "'");
}

Family make_family(const std::string& spec, int width,
                   std::span<const StateId> states) {
  auto [kind, arg] = split_spec(spec);
  // xorfam and swap default to seed 0.
  const auto seed = [&]() -> std::uint64_t {
    return arg.empty() ? 0 : parse_u64(arg, "seed");
  };
  if (kind == "xorfam") return make_xor_family(width, states, seed());
  if (kind == "swap") return make_swap_control_family(width, states, seed());
  if (kind == "affine") {
    return make_affine_family(width, states, parse_u64(arg, "seed"));
  }
  if (kind == "identity" && arg.empty()) {
    Family f;
    for (const auto& s : states) f.insert_or_assign(s, InvertibleMap::identity(width));
    return f;
  }
  if (kind == "file") {
    // A directory holds one "<q>_<a>.map" per state; a single file serves
    // every state.
    const fs::path path(arg);
    Family f;
    if (fs::is_directory(path)) {
      for (const auto& s : states) {
        const fs::path file =
            path / (std::to_string(s.q) + "_" + std::to_string(s.symbol) + ".map");
        if (!fs::exists(file)) throw UsageError("missing map file " + file.string());
        f.insert_or_assign(s, load_map(file));
      }
    } else {
      if (!fs::exists(path)) throw UsageError("missing map file " + path.string());
      const InvertibleMap map = load_map(path);
      for (const auto& s : states) f.insert_or_assign(s, map);
    }
    for (const auto& [s, m] : f) {
      if (m.width() != width) {
        throw ContractViolation("map for " + s.to_string() + " has width " +
                                std::to_string(m.width()) + ", expected " +
                                std::to_string(width));
      }
    }
    return f;
  }
  throw ContractViolation("unknown family spec '" + spec + "'");
}

void ArtifactSet::add(std::string name, std::string content) {
  files_.emplace_back(std::move(name), std::move(content));
}

std::vector<fs::path> ArtifactSet::commit(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<fs::path> temps;
  auto cleanup = [&]() {
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [name, content] : files_) {
    const fs::path tmp = dir / ("." + name + ".tmp");
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      cleanup();
      throw UsageError("cannot write " + tmp.string());
    }
  }
  std::vector<fs::path> final_paths;
  for (std::size_t i = 0; i < files_.size(); ++i) {
    const fs::path dest = dir / files_[i].first;
    fs::rename(temps[i], dest, ec);
    if (ec) {
      cleanup();
      throw UsageError("cannot publish " + dest.string() + ": " + ec.message());
    }
    final_paths.push_back(dest);
  }
  return final_paths;
}

namespace {

std::vector<StateId> all_instructions() {
  return instruction_states(kMaxTmStates * kMaxTmSymbols);
}

ordered_json manifest(const std::string& subcommand, const ordered_json& params,
                      const RandomSource* source,
                      const std::vector<std::string>& artifacts) {
  ordered_json m;
  m["tool"] = "dlsctl";
  m["version"] = kToolVersion;
  m["subcommand"] = subcommand;
  m["parameters"] = params;
  m["source"] = source ? source->descriptor() : "none";
  if (const auto* seeded = dynamic_cast<const SeededSource*>(source)) {
    m["seed"] = seeded->seed();
  } else {
    m["seed"] = nullptr;
  }
  m["artifacts"] = artifacts;
  return m;
}

// --- run-utm ---------------------------------------------------------------

struct RunUtmArgs {
  std::string tm;
  std::string dls = "xorfam";
  std::uint64_t steps = 1000;
  std::string rng;
  std::string out = ".";
  std::string eta = "fixture";
  int qrng_timeout_ms = 5000;
  int qrng_retries = 3;
};

int run_utm(const RunUtmArgs& a, std::ostream& out) {
  if (!fs::exists(a.tm)) throw UsageError("machine file not found: " + a.tm);
  const TmFile machine = load_tm(a.tm);
  const auto states = all_instructions();
  const DlsDecomposition dls(
      aem::kUtmWidth, make_family(a.dls, aem::kUtmWidth, states),
      std::make_shared<PeriodicScheduler>(states));
  BoolFn eta = eta3_fixture_fn();
  if (a.eta == "derived") {
    eta = eta_components(machine.program)[3];
  } else if (a.eta != "fixture") {
    throw ContractViolation("--eta must be fixture or derived");
  }
  auto source = make_source(a.rng, a.qrng_timeout_ms, a.qrng_retries);

  const aem::UtmRun run = aem::run_utm_realization(
      machine.program, dls, machine.initial, a.steps, *source, eta);

  std::ostringstream report;
  report << "requested_steps=" << run.requested_steps
         << " effective_steps=" << run.effective_steps
         << " aem_mismatches=" << run.aem_mismatches << '\n';
  report << run.report.summary() << '\n';
  for (const auto& v : run.report.violations) {
    report << "violation step=" << v.step << " expected=" << v.expected
           << " decoded=" << v.decoded
           << " random_part_mismatch=" << v.random_part_mismatch << '\n';
  }
  report << "pass=" << (run.ok() ? "true" : "false") << '\n';

  ordered_json params;
  params["tm"] = a.tm;
  params["dls"] = a.dls;
  params["steps"] = a.steps;
  params["rng"] = a.rng;
  params["eta"] = a.eta;
  params["qrng-timeout-ms"] = a.qrng_timeout_ms;
  params["qrng-retries"] = a.qrng_retries;

  ArtifactSet files;
  files.add("trace.jsonl", aem::to_jsonl(run.trace));
  files.add("report.txt", report.str());
  files.add("manifest.json",
            manifest("run-utm", params, source.get(),
                     {"trace.jsonl", "report.txt", "manifest.json"})
                    .dump(2) +
                "\n");
  files.commit(a.out);
  out << report.str();
  return run.ok() ? kPass : kViolation;
}

// --- verify-secrecy --------------------------------------------------------

struct SecrecyArgs {
  std::string dls = "xorfam";
  int width = 8;
  std::size_t states = 12;
  std::uint64_t sample = 0;
  std::string rng = "seeded:0";
  std::string out;
  int qrng_timeout_ms = 5000;
  int qrng_retries = 3;
};

inline constexpr double kSampledAlpha = 0.001;

int verify_secrecy(const SecrecyArgs& a, std::ostream& out) {
  if (a.width < 2 || a.width > BitVec::kMaxWidth) {
    throw UsageError("--width must be in 2.." + std::to_string(BitVec::kMaxWidth));
  }
  if (a.sample == 0 && a.width > kMaxExhaustiveWidth) {
    throw UsageError("exact mode supports --width <= " +
                     std::to_string(kMaxExhaustiveWidth) + "; pass --sample");
  }
  if (a.states < 1 || a.states > kMaxTmStates * kMaxTmSymbols) {
    throw UsageError("--states must be in 1..32");
  }
  const auto states = instruction_states(a.states);
  const DlsDecomposition dls(a.width, make_family(a.dls, a.width, states),
                             std::make_shared<PeriodicScheduler>(states));

  ordered_json params;
  params["dls"] = a.dls;
  params["width"] = a.width;
  params["states"] = a.states;
  params["sample"] = a.sample;

  std::string text;
  bool pass = false;
  std::unique_ptr<RandomSource> source;
  if (a.sample == 0) {
    const SecrecyReport report = verify_perfect_secrecy(dls);
    text = report.serialize();
    pass = report.pass();
  } else {
    params["rng"] = a.rng;
    source = make_source(a.rng, a.qrng_timeout_ms, a.qrng_retries);
    std::ostringstream os;
    double min_p = 1.0;
    for (const auto& s : states) {
      const auto r = sample_secrecy(dls, s, a.sample, *source);
      os << "state=" << s.to_string() << " samples=" << r.samples
         << " chi2=" << r.chi_square << " p=" << r.p_value << '\n';
      min_p = std::min(min_p, r.p_value);
    }
    pass = min_p > kSampledAlpha;
    os << "min_p=" << min_p << " alpha=" << kSampledAlpha
       << " pass=" << (pass ? "true" : "false") << '\n';
    text = os.str();
  }
  if (!a.out.empty()) {
    ArtifactSet files;
    files.add("secrecy.txt", text);
    files.add("manifest.json",
              manifest("verify-secrecy", params, source.get(),
                       {"secrecy.txt", "manifest.json"})
                      .dump(2) +
                  "\n");
    files.commit(a.out);
  }
  out << text;
  return pass ? kPass : kViolation;
}

// --- stream ----------------------------------------------------------------

struct StreamArgs {
  std::string action;
  std::string in;
  std::string out;
  std::string dls = "affine:0";
  int n = 15;
  std::size_t m = 6;
  std::string sched = "periodic:6";
};

std::shared_ptr<const Scheduler> make_stream_scheduler(
    const std::string& spec, const std::vector<StateId>& states,
    std::uint64_t blocks) {
  auto [kind, arg] = split_spec(spec);
  if (kind == "periodic") {
    const auto p = parse_u64(arg, "period");
    if (p < 1 || p > states.size()) {
      throw UsageError("periodic:<p> needs 1 <= p <= m");
    }
    return std::make_shared<PeriodicScheduler>(
        std::vector<StateId>(states.begin(), states.begin() + static_cast<std::ptrdiff_t>(p)));
  }
  if (kind == "trace") {
    if (!fs::exists(arg)) throw UsageError("machine file not found: " + arg);
    const TmFile machine = load_tm(arg);
    auto trace = std::make_shared<TraceScheduler>(instruction_scheduler(
        machine.program, machine.initial, std::max<std::uint64_t>(blocks, 1)));
    if (trace->horizon() < blocks) {
      throw UsageError("machine halts after " + std::to_string(trace->horizon()) +
                       " steps but the stream has " + std::to_string(blocks) +
                       " blocks");
    }
    return std::make_shared<RemappedScheduler>(trace, states);
  }
  throw UsageError("--sched must be periodic:<p> or trace:<file>");
}

std::string stream_header(int n, std::size_t m, const std::string& sched) {
  return "n=" + std::to_string(n) + " m=" + std::to_string(m) + " sched=" + sched +
         "\n";
}

int stream(StreamArgs a, std::ostream& out) {
  std::string input = read_file(a.in);
  std::string payload;
  if (a.action == "recover") {
    const auto nl = input.find('\n');
    if (nl == std::string::npos) throw UsageError("missing stream header");
    std::istringstream header(input.substr(0, nl));
    std::string nt, mt, st;
    header >> nt >> mt >> st;
    if (!nt.starts_with("n=") || !mt.starts_with("m=") || !st.starts_with("sched=")) {
      throw UsageError("malformed stream header");
    }
    a.n = static_cast<int>(parse_u64(nt.substr(2), "n"));
    a.m = parse_u64(mt.substr(2), "m");
    a.sched = st.substr(6);
    payload = input.substr(nl + 1);
  } else if (a.action == "transform") {
    payload = std::move(input);
  } else {
    throw UsageError("stream action must be transform or recover");
  }
  if (a.n < 1 || a.n > BitVec::kMaxWidth) throw UsageError("--n out of range");
  if (a.m < 1 || a.m > kMaxTmStates * kMaxTmSymbols) {
    throw UsageError("--m must be in 1..32");
  }

  const std::span<const std::uint8_t> bytes(
      reinterpret_cast<const std::uint8_t*>(payload.data()), payload.size());
  const BitStream bits = BitStream::from_bytes(bytes);
  if (bits.size() % static_cast<std::size_t>(a.n) != 0) {
    throw UsageError("stream of " + std::to_string(bits.size()) +
                     " bits is not a multiple of n=" + std::to_string(a.n));
  }
  const auto states = instruction_states(a.m);
  const std::uint64_t blocks = bits.size() / static_cast<std::size_t>(a.n);
  const StreamTransform st(a.n, make_family(a.dls, a.n, states),
                           make_stream_scheduler(a.sched, states, blocks));

  const BitStream result = a.action == "transform" ? transform(st, bits)
                                                   : recover(st, bits);
  const auto out_bytes = result.to_bytes();
  std::string content =
      a.action == "transform" ? stream_header(a.n, a.m, a.sched) : std::string();
  content.append(reinterpret_cast<const char*>(out_bytes.data()), out_bytes.size());

  const fs::path dest(a.out);
  ArtifactSet files;
  files.add(dest.filename().string(), std::move(content));
  files.commit(dest.has_parent_path() ? dest.parent_path() : fs::path("."));
  out << a.action << ": " << blocks << " blocks of " << a.n << " bits\n";
  return kPass;
}

// --- CLI wiring --------------------------------------------------------------

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

int replay(const std::string& manifest_path, const std::string& out_dir,
           std::ostream& out, std::ostream& err) {
  ordered_json m;
  try {
    m = ordered_json::parse(read_file(manifest_path));
  } catch (const ordered_json::exception& e) {
    throw UsageError(std::string("bad manifest: ") + e.what());
  }
  if (!m.contains("subcommand") || !m.contains("parameters")) {
    throw UsageError("manifest lacks subcommand or parameters");
  }
  std::vector<std::string> args{m["subcommand"].get<std::string>()};
  for (const auto& [key, value] : m["parameters"].items()) {
    args.push_back("--" + key);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  args.push_back("--out");
  args.push_back(out_dir);
  return dispatch(args, out, err);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Dynamic level set toolkit", "dlsctl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  RunUtmArgs utm;
  auto* run_cmd = app.add_subcommand("run-utm", "Realize a Turing machine run on an AEM");
  run_cmd->add_option("--tm", utm.tm, "Machine file")->required();
  run_cmd->add_option("--dls", utm.dls, "Family spec");
  run_cmd->add_option("--steps", utm.steps, "Machine steps");
  run_cmd->add_option("--rng", utm.rng, "Random source")->required();
  run_cmd->add_option("--out", utm.out, "Output directory");
  run_cmd->add_option("--eta", utm.eta, "fixture or derived");
  run_cmd->add_option("--qrng-timeout-ms", utm.qrng_timeout_ms);
  run_cmd->add_option("--qrng-retries", utm.qrng_retries);

  SecrecyArgs sec;
  auto* sec_cmd = app.add_subcommand("verify-secrecy", "Check observable distributions");
  sec_cmd->add_option("--dls", sec.dls, "Family spec");
  sec_cmd->add_option("--width", sec.width, "Pattern width n");
  sec_cmd->add_option("--states", sec.states, "Number of states");
  sec_cmd->add_option("--sample", sec.sample, "Samples per state (sampling mode)");
  sec_cmd->add_option("--rng", sec.rng, "Random source for sampling");
  sec_cmd->add_option("--out", sec.out, "Output directory");
  sec_cmd->add_option("--qrng-timeout-ms", sec.qrng_timeout_ms);
  sec_cmd->add_option("--qrng-retries", sec.qrng_retries);

  StreamArgs str;
  auto* str_cmd = app.add_subcommand("stream", "Block-stream transform and recovery");
  str_cmd->add_option("action", str.action, "transform or recover")->required();
  str_cmd->add_option("--in", str.in, "Input file")->required();
  str_cmd->add_option("--out", str.out, "Output file")->required();
  str_cmd->add_option("--dls", str.dls, "Family spec (the maps B_1..B_m)");
  str_cmd->add_option("--n", str.n, "Block width");
  str_cmd->add_option("--m", str.m, "Number of maps");
  str_cmd->add_option("--sched", str.sched, "periodic:<p> or trace:<file>");

  std::string manifest_path, replay_out;
  auto* rep_cmd = app.add_subcommand("replay", "Re-run from a manifest");
  rep_cmd->add_option("--manifest", manifest_path)->required();
  rep_cmd->add_option("--out", replay_out)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  if (*run_cmd) return run_utm(utm, out);
  if (*sec_cmd) return verify_secrecy(sec, out);
  if (*str_cmd) return stream(str, out);
  return replay(manifest_path, replay_out, out, err);
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err) {
  try {
    return dispatch(std::vector<std::string>(args.begin(), args.end()), out, err);
  } catch (const SourceFailure& e) {
    err << "dlsctl: random source failure: " << e.what() << '\n';
    return kSourceFailure;
  } catch (const std::exception& e) {
    err << "dlsctl: " << e.what() << '\n';
    return kUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace dls::cli
