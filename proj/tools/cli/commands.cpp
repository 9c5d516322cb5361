#include "cli/commands.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ios>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "qbackbone/engine.hpp"
#include "qbackbone/errors.hpp"
#include "qbackbone/scenario.hpp"
#include "qbackbone/sweep.hpp"
#include "qbackbone/telemetry.hpp"

namespace qbackbone::cli {
namespace {

namespace fs = std::filesystem;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

std::uint64_t parse_seed(std::string_view text, const std::string& what) {
  std::uint64_t seed = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ConfigError(what, "not an unsigned integer: " + std::string(text));
  }
  return seed;
}

void ensure_source(ScenarioConfig& c, const std::string& id) {
  if (c.find_source(id)) return;
  auto preset = preset_source(id);
  if (!preset) throw ConfigError("--source", "unknown source " + id);
  c.sources.push_back(*preset);
}

// Config file, then QBACKBONE_SEED, then command-line flags.
ScenarioConfig load_scenario(const CommonOptions& opts) {
  ScenarioConfig c = default_scenario();
  if (opts.config) {
    std::ifstream in(*opts.config, std::ios::binary);
    if (!in) throw IoError("cannot read config " + opts.config->string());
    std::string doc((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("cannot read config " + opts.config->string());
    c = load_config(doc);
  }
  if (const char* env = std::getenv(kSeedEnvVar); env && *env) {
    c.seed = parse_seed(env, kSeedEnvVar);
  }
  if (opts.seed) c.seed = *opts.seed;

  if (opts.policy) {
    const auto kind = parse_policy_name(*opts.policy);
    if (!kind) throw ConfigError("--policy", "unknown policy " + *opts.policy);
    c.policy = SourcePolicy{*kind, ""};
    if (*kind == PolicyKind::fiber_only || *kind == PolicyKind::satellite_only) {
      if (opts.source) {
        ensure_source(c, *opts.source);
        c.policy.source = *opts.source;
      }
    }
  } else if (opts.source) {
    ensure_source(c, *opts.source);
    c = single_source_scenario(c, *opts.source);
  }
  c.validate();
  return c;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void prepare_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

const EntanglementSource& lookup_source(const ScenarioConfig& c, const std::string& id,
                                        std::optional<EntanglementSource>& storage) {
  if (const auto* s = c.find_source(id)) return *s;
  storage = preset_source(id);
  if (!storage) throw ConfigError("--source", "unknown source " + id);
  return *storage;
}

}  // namespace

int cmd_simulate(const SimulateOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    ScenarioConfig config = load_scenario(opts);
    if (opts.memory) {
      const auto m = parse_memory_list(*opts.memory);
      if (m.size() != 1) throw ConfigError("--memory", "simulate takes a single capacity");
      config.memory_capacity = m.front();
    }
    if (opts.out.empty()) throw ConfigError("--out", "required");
    prepare_directory(opts.out);
    const RunResult result = run(config);
    write_file(opts.out / "timeseries.csv", [&](std::ostream& o) { write_timeseries_csv(o, result); });
    write_file(opts.out / "frames.csv", [&](std::ostream& o) { write_frames_csv(o, result); });
    write_file(opts.out / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, result); });
    write_file(opts.out / "sources.csv", [&](std::ostream& o) { write_sources_csv(o, result); });
    write_file(opts.out / "config.json", [&](std::ostream& o) { o << dump_config(config); });
    return kExitOk;
  });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    CommonOptions base = opts;
    base.policy.reset();
    base.source.reset();
    const ScenarioConfig config = load_scenario(base);

    SweepPlan plan;
    plan.memories = parse_memory_list(opts.memory);
    if (opts.seeds_per_point < 1) throw ConfigError("--seeds-per-point", "must be >= 1");
    plan.seeds_per_point = opts.seeds_per_point;
    plan.base_seed = config.seed;
    plan.threads = opts.threads;

    std::optional<PolicyKind> only;
    if (opts.policy) {
      only = parse_policy_name(*opts.policy);
      if (!only) throw ConfigError("--policy", "unknown policy " + *opts.policy);
    }
    if (opts.source) {
      ScenarioConfig c = config;
      ensure_source(c, *opts.source);
      plan.variants.push_back({*opts.source, single_source_scenario(c, *opts.source)});
    } else {
      plan.variants = sweep_variants(config, only);
    }
    if (plan.variants.empty()) throw ConfigError("--policy", "no source matches the policy");
    if (opts.out.empty()) throw ConfigError("--out", "required");

    const auto parent = opts.out.parent_path();
    if (!parent.empty()) prepare_directory(parent);
    const auto points = run_sweep(plan);
    write_file(opts.out, [&](std::ostream& o) { write_sweep_csv(o, points); });
    return kExitOk;
  });
}

int cmd_passes(const PassesOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig config = load_scenario(opts);
    if (!(opts.min_elevation_deg > 0.0 && opts.min_elevation_deg <= 90.0)) {
      throw ConfigError("--min-elevation", "must lie in (0, 90]");
    }
    std::vector<SatellitePassModel> passes;
    for (const auto& s : config.sources) {
      if (const auto* sat = s.satellite()) passes.push_back(sat->pass);
    }
    if (passes.empty()) {
      for (const auto& id : preset_source_ids()) {
        const auto preset = preset_source(id);
        if (const auto* sat = preset->satellite()) passes.push_back(sat->pass);
      }
    }
    std::vector<PassSummary> rows;
    for (const auto& p : passes) rows.push_back(summarize_pass(p, opts.min_elevation_deg));
    write_passes_csv(out, rows);
    return kExitOk;
  });
}

int cmd_linkbudget(const LinkbudgetOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    CommonOptions base = opts;
    base.source.reset();
    const ScenarioConfig config = load_scenario(base);
    if (!opts.source) throw ConfigError("--source", "required");
    std::optional<EntanglementSource> storage;
    const EntanglementSource& src = lookup_source(config, *opts.source, storage);
    src.validate();

    std::vector<AttenuationSample> samples;
    if (const auto* f = src.fiber()) {
      AttenuationSample s;
      s.slant_range_km = {f->arms[0].length_km, f->arms[1].length_km};
      s.transmittance = src.arm_transmittance(0.0);
      samples.push_back(s);
    } else {
      const auto* sat = src.satellite();
      const double step = opts.step_s.value_or(config.channel_step_s);
      samples = attenuation_profile(sat->pass, sat->freespace, step,
                                    visibility_window(sat->pass, sat->freespace.min_elevation_deg));
    }
    write_attenuation_csv(out, samples);
    return kExitOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum backbone discrete-event simulator", "qbackbone"};
  app.require_subcommand(1);

  SimulateOptions sim;
  SweepOptions sweep;
  PassesOptions passes;
  LinkbudgetOptions link;

  const auto add_common = [](CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "Scenario JSON file (defaults if omitted)");
    cmd->add_option("--seed", o.seed, "Master seed; overrides config and QBACKBONE_SEED");
    cmd->add_option("--policy", o.policy, "fiber-only | satellite-only | best-source | all-sources");
    cmd->add_option("--source", o.source, "Source id");
  };

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write CSV telemetry");
  add_common(simulate, sim);
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--memory", sim.memory, "Memory capacity override (N or unlimited)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Total delivered qubits over memory sizes");
  add_common(sweep_cmd, sweep);
  sweep_cmd->add_option("--memory", sweep.memory, "Comma-separated capacities, e.g. 10,100,unlimited")
      ->required();
  sweep_cmd->add_option("--seeds-per-point", sweep.seeds_per_point, "Seeds per (source, M)");
  sweep_cmd->add_option("--out", sweep.out, "Output CSV file")->required();
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0 = hardware)");

  auto* passes_cmd = app.add_subcommand("passes", "Satellite pass table (CSV on stdout)");
  add_common(passes_cmd, passes);
  passes_cmd->add_option("--min-elevation", passes.min_elevation_deg, "Elevation mask in degrees");

  auto* link_cmd = app.add_subcommand("linkbudget", "Attenuation profile of one source (CSV on stdout)");
  add_common(link_cmd, link);
  link_cmd->add_option("--step", link.step_s, "Sampling step in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
  }

  if (*simulate) return cmd_simulate(sim, err);
  if (*sweep_cmd) return cmd_sweep(sweep, err);
  if (*passes_cmd) return cmd_passes(passes, out, err);
  return cmd_linkbudget(link, out, err);
}

}  // namespace qbackbone::cli
