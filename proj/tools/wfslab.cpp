// Copyright 2026 The wfslab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point. Exit codes: 0 success, 1 runtime failure, 2 usage
// or configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wfslab/analysis.hpp"
#include "wfslab/config.hpp"
#include "wfslab/csv.hpp"
#include "wfslab/errors.hpp"
#include "wfslab/experiment.hpp"
#include "wfslab/osc.hpp"
#include "wfslab/wavefield.hpp"

namespace fs = std::filesystem;
using namespace wfslab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Thrown for bad flags that CLI11 cannot check itself.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<double> numbers(const std::string& text, std::size_t count, const std::string& flag) {
  std::vector<double> out;
  for (const auto& f : csv::split(text)) {
    double v = 0;
    if (!csv::parse(csv::trim(f), v)) throw UsageError(flag + ": bad number '" + f + "'");
    out.push_back(v);
  }
  if (out.size() != count) {
    throw UsageError(flag + " expects " + std::to_string(count) + " comma-separated values");
  }
  return out;
}

// Flags shared by generate and simulate.
struct CohortFlags {
  std::string config;
  std::string out;
  std::optional<long long> seed;
  std::optional<int> participants;
  std::string first_system;
  bool tutorial = false;

  void add(CLI::App& cmd) {
    cmd.add_option("--config", config, "Simulation config file")->check(CLI::ExistingFile);
    cmd.add_option("--out", out, "Output directory");
    cmd.add_option("--seed", seed, "Seed of the first participant");
    cmd.add_option("--participants", participants, "Number of participants");
    cmd.add_option("--first-system", first_system, "wfs, stereo or split (config ratio)")
        ->check(CLI::IsMember({"wfs", "stereo", "split"}));
    cmd.add_flag("--tutorial", tutorial, "Add the four tutorial trials");
  }

  [[nodiscard]] CohortConfig resolve() const {
    SimulationConfig cfg = config.empty() ? SimulationConfig{} : load_config(config);
    CohortConfig& c = cfg.cohort;
    if (!out.empty()) c.out_dir = out;
    if (seed) {
      if (*seed < 0) throw UsageError("--seed must be non-negative");
      c.base_seed = static_cast<std::uint64_t>(*seed);
    }
    if (participants) c.participants = *participants;
    if (first_system == "wfs") c.wfs_first = c.participants;
    if (first_system == "stereo") c.wfs_first = 0;
    if (tutorial) c.tutorial = true;
    if (c.wfs_first > c.participants) c.wfs_first = -1;
    validate_config(cfg);
    return c;
  }
};

int cmd_generate(const CohortFlags& flags) {
  CohortConfig c = flags.resolve();
  if (flags.out.empty()) c.out_dir = "sessions";
  fs::create_directories(c.out_dir);
  for (const SessionPlan& plan : cohort_plans(c)) {
    validate_plan(plan, c.session.geometry);
    const fs::path file = c.out_dir / (plan.participant_id + "_" + std::to_string(plan.seed) + ".csv");
    write_session_file(file, plan);
    std::cout << file.string() << ": " << plan.trials.size() << " trials, first system "
              << to_string(plan.first_system) << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const CohortFlags& flags) {
  const CohortConfig c = flags.resolve();
  // Participants run one after another so earlier logs survive a later failure.
  for (const SessionPlan& plan : cohort_plans(c)) {
    const SessionRun run = run_session(plan, c.session);
    const fs::path dir = session_log_dir(c.out_dir, plan);
    Demographics dems = c.demographics;
    dems.participant_id = plan.participant_id;
    write_session_run(run, dems, dir);

    double sum[2] = {0.0, 0.0};
    int n[2] = {0, 0};
    for (std::size_t i = 0; i < run.results.size(); ++i) {
      const int s = plan.trials[i].system == System::WFS ? 0 : 1;
      sum[s] += run.results[i].score;
      ++n[s];
    }
    std::cout << plan.participant_id << " seed=" << plan.seed
              << " first=" << to_string(plan.first_system) << " trials=" << run.results.size()
              << " mean_wfs=" << csv::format(n[0] ? sum[0] / n[0] : 0.0)
              << " mean_stereo=" << csv::format(n[1] ? sum[1] / n[1] : 0.0) << " -> "
              << dir.string() << '\n';
  }
  return kExitOk;
}

struct FieldFlags {
  std::string source;
  std::string listener = "0,-0.5";
  double frequency = 500.0;
  std::string mode = "both";
  int grid = 20;
  double extent = 1.0;
  double side = 2.0;
  int speakers = 16;
  double height = 1.6;
  std::string subarray = "nearest";
  std::string out = "field";
};

void write_speakers_csv(const fs::path& file, const SpeakerArray& array, const DrivingSet& d) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << "index,side,x,y,active,delay,gain\n";
  for (std::size_t i = 0; i < array.speakers.size(); ++i) {
    const auto& s = array.speakers[i];
    const auto& e = d.entries[i];
    out << csv::join({csv::format(static_cast<long long>(i)), csv::format(static_cast<long long>(s.side_id)),
                      csv::format(s.position.x()), csv::format(s.position.y()),
                      std::string(e.active ? "1" : "0"), csv::format(e.delay), csv::format(e.gain)})
        << '\n';
  }
}

int cmd_field(const FieldFlags& f) {
  const auto src = numbers(f.source, 2, "--source");
  const auto lis = numbers(f.listener, 2, "--listener");
  if (!(f.frequency > 0.0)) throw UsageError("--frequency must be positive");
  if (f.grid < 2) throw UsageError("--grid must be at least 2");
  if (!(f.extent > 0.0 && f.extent <= f.side)) {
    throw UsageError("--extent must be positive and no larger than --side");
  }

  SpeakerArray array;
  try {
    array = build_square_array(f.side, f.speakers, f.height, Vec3::Zero());
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("invalid array geometry: ") + e.what());
  }
  DrivingOptions options;
  if (f.subarray == "nearest") {
    options.static_subarray = StaticSubarray::nearest();
  } else {
    int side = 0;
    if (!csv::parse(f.subarray, side) || side < 0 || side > 3) {
      throw UsageError("--subarray must be nearest or 0..3");
    }
    options.static_subarray = StaticSubarray::fixed(side);
  }

  const VirtualSource source = classify_source(Vec3(src[0], src[1], f.height), array);
  const Vec3 listener(lis[0], lis[1], f.height);
  GridSpec grid{Rect::centered_square(Vec2::Zero(), f.extent), f.grid, f.grid, f.height};
  const auto points = grid.points();

  std::vector<std::pair<std::string, RenderMode>> modes;
  if (f.mode == "static" || f.mode == "both") modes.emplace_back("static", RenderMode::Static);
  if (f.mode == "ud" || f.mode == "both") modes.emplace_back("ud", RenderMode::UserDependent);

  fs::create_directories(f.out);
  std::cout << "source " << (source.kind == SourceKind::Focused ? "focused" : "exterior")
            << " aliasing_frequency=" << csv::format(array.aliasing_frequency()) << '\n';
  for (const auto& [name, mode] : modes) {
    DrivingSet driving;
    try {
      driving = driving_functions(source, array, listener, mode, options);
    } catch (const GeometryError& e) {
      throw UsageError(e.what());
    } catch (const NoValidZone& e) {
      throw UsageError(e.what());
    }
    ReconstructionResult result;
    try {
      result = reconstruction_error_detail(source, array, driving, points, f.frequency);
    } catch (const SingularityError& e) {
      throw UsageError(std::string(e.what()) + "; move the source or change --grid");
    }
    const fs::path map_file = fs::path(f.out) / ("error_map_" + name + ".csv");
    std::ofstream out(map_file, std::ios::binary);
    if (!out) throw Error("cannot write " + map_file.string());
    write_error_map_csv(out, grid, result, f.frequency);
    out.close();
    write_speakers_csv(fs::path(f.out) / ("speakers_" + name + ".csv"), array, driving);
    std::cout << "mode=" << name << " active=" << driving.active_count()
              << " subarray=" << (driving.subarray ? std::to_string(*driving.subarray) : "-")
              << " error=" << csv::format(result.error) << " -> " << map_file.string() << '\n';
  }
  return kExitOk;
}

struct OscFlags {
  std::string endpoint;
  int id = 1;
  std::string position;
  std::string trajectory;
  std::string schema;
  std::string address;
  bool dry_run = false;
};

int cmd_osc_send(const OscFlags& f) {
  std::optional<osc::Endpoint> endpoint;
  if (!f.endpoint.empty()) {
    try {
      endpoint = osc::Endpoint::parse(f.endpoint);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }
  if (!endpoint && !f.dry_run) throw UsageError("--endpoint is required unless --dry-run is given");
  if (f.position.empty() == f.trajectory.empty()) {
    throw UsageError("give exactly one of --position and --trajectory");
  }

  osc::AddressSchema schema;
  if (!f.schema.empty()) {
    try {
      schema = osc::AddressSchema::load(f.schema);
    } catch (const ParseError& e) {
      throw UsageError(e.what());
    }
  }

  osc::Message msg;
  try {
    if (!f.position.empty()) {
      const auto v = numbers(f.position, 2, "--position");
      if (!f.address.empty()) schema.position = f.address;
      msg = osc::position_message({f.id, v[0], v[1]}, schema);
    } else {
      const auto v = numbers(f.trajectory, 5, "--trajectory");
      if (!f.address.empty()) schema.trajectory = f.address;
      msg = osc::trajectory_message({f.id, v[0], v[1], v[2], v[3], v[4]}, schema);
    }
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  std::vector<std::uint8_t> bytes;
  try {
    bytes = osc::encode(msg);
  } catch (const osc::EncodeError& e) {
    throw UsageError(e.what());
  }

  if (f.dry_run) {
    std::cout << osc::hex_dump(bytes) << '\n';
    std::cerr << msg.address << ": " << bytes.size() << " bytes (not sent)\n";
    return kExitOk;
  }
  osc::UdpSender sender(*endpoint);
  sender.send(bytes);
  std::cout << "sent " << msg.address << " (" << bytes.size() << " bytes) to " << endpoint->host
            << ':' << endpoint->port << '\n';
  return kExitOk;
}

struct AnalyzeFlags {
  std::string logs;
  std::string out = "analysis";
  int k = 15;
  int bins = 40;
  std::string attribution = "source";
};

int cmd_analyze(const AnalyzeFlags& f) {
  if (f.k < 1) throw UsageError("--k must be at least 1");
  if (f.bins < 1) throw UsageError("--bins must be at least 1");
  const auto dirs = find_session_dirs(f.logs);
  if (dirs.empty()) {
    std::cerr << "error: no session logs under " << f.logs << '\n';
    return kExitFailure;
  }
  std::vector<SessionLog> sessions;
  for (const auto& d : dirs) sessions.push_back(read_session(d));
  AnalysisOptions opt;
  opt.k = f.k;
  opt.nx = opt.ny = f.bins;
  opt.attribution = f.attribution == "guess" ? KnnAttribution::Guess : KnnAttribution::Source;
  const auto files = export_analysis(sessions, f.out, opt);
  std::cout << sessions.size() << " sessions, " << files.size() << " files -> " << f.out << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated WFS and stereo sound-localization experiments"};
  app.require_subcommand(1);

  CohortFlags gen_flags;
  auto* gen = app.add_subcommand("generate", "Write one session definition file per participant");
  gen_flags.add(*gen);

  CohortFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "Run a simulated cohort and write its logs");
  sim_flags.add(*sim);

  FieldFlags field_flags;
  auto* field = app.add_subcommand("field", "Reconstruction error maps for one virtual source");
  field->add_option("--source", field_flags.source, "Source position x,y")->required();
  field->add_option("--listener", field_flags.listener, "Listener position x,y for user-dependent mode");
  field->add_option("--frequency", field_flags.frequency, "Frequency in Hz");
  field->add_option("--mode", field_flags.mode, "static, ud or both")
      ->check(CLI::IsMember({"static", "ud", "both"}));
  field->add_option("--grid", field_flags.grid, "Grid points per axis");
  field->add_option("--extent", field_flags.extent, "Side of the square evaluation zone (m)");
  field->add_option("--side", field_flags.side, "Array side length (m)");
  field->add_option("--speakers", field_flags.speakers, "Speakers per side");
  field->add_option("--height", field_flags.height, "Array height (m)");
  field->add_option("--subarray", field_flags.subarray, "Static sub-array: nearest or side 0..3");
  field->add_option("--out", field_flags.out, "Output directory");

  OscFlags osc_flags;
  auto* oscs = app.add_subcommand("osc-send", "Send one position or trajectory message over UDP");
  oscs->add_option("--endpoint", osc_flags.endpoint, "host:port");
  oscs->add_option("--id", osc_flags.id, "Source id")->check(CLI::NonNegativeNumber);
  oscs->add_option("--position", osc_flags.position, "x,y");
  oscs->add_option("--trajectory", osc_flags.trajectory, "x0,y0,x1,y1,duration");
  oscs->add_option("--schema", osc_flags.schema, "Address schema file")->check(CLI::ExistingFile);
  oscs->add_option("--address", osc_flags.address, "Address template overriding the schema");
  oscs->add_flag("--dry-run", osc_flags.dry_run, "Print the datagram as hex instead of sending");

  AnalyzeFlags an_flags;
  auto* an = app.add_subcommand("analyze", "Export the analysis bundle for a log directory");
  an->add_option("logs", an_flags.logs, "Log directory (one session or a cohort)")->required();
  an->add_option("--out", an_flags.out, "Output directory");
  an->add_option("--k", an_flags.k, "Neighbors for the kNN score maps");
  an->add_option("--bins", an_flags.bins, "Heatmap bins per axis");
  an->add_option("--attribution", an_flags.attribution, "kNN sample positions: source or guess")
      ->check(CLI::IsMember({"source", "guess"}));

  auto* defaults = app.add_subcommand("print-config", "Print the default simulation config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_flags);
    if (*sim) return cmd_simulate(sim_flags);
    if (*field) return cmd_field(field_flags);
    if (*oscs) return cmd_osc_send(osc_flags);
    if (*an) return cmd_analyze(an_flags);
    if (*defaults) {
      std::cout << default_config_text();
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
