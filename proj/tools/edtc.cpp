// Command-line front end: simulate pulse programs, analyze spectra, run
// phase-diagram sweeps, fit power laws and regenerate the canned figure
// datasets. All outputs are CSV/JSON with a reproduction manifest beside
// every file.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "edtc/fit.hpp"
#include "edtc/io.hpp"
#include "edtc/parser.hpp"
#include "edtc/spectrum.hpp"
#include "edtc/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitNumeric = 2;

struct InputError : std::runtime_error {  // config/recipe problems -> exit 1
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// serialization helpers
// ---------------------------------------------------------------------------

json params_to_json(const edtc::SystemParams& p) {
  json j{{"t1", p.t1}, {"t2", p.t2}, {"meq", p.m_eq}, {"omega1", p.omega1}};
  if (p.t_phi.is_infinite()) j["tphi"] = "inf";
  else j["tphi"] = p.t_phi.value();
  return j;
}

json sequence_to_json(const edtc::PulseSequence& seq) {
  json segments = json::array();
  for (const edtc::Segment& seg : seq.segments) {
    if (const auto* delay = std::get_if<edtc::DelaySegment>(&seg)) {
      segments.push_back({{"delay", delay->duration}});
    } else {
      const edtc::PulseSpec& p = std::get<edtc::PulseSegment>(seg).pulse;
      segments.push_back({{"pulse",
                           {{"axis", p.axis() == edtc::Axis::x ? "x" : "y"},
                            {"theta", p.theta()},
                            {"delta", p.delta()},
                            {"duration", p.duration()}}}});
    }
  }
  return json{{"unit", seq.unit == edtc::TimeUnit::seconds ? "seconds" : "t2"},
              {"segments", segments},
              {"cycles", seq.cycles},
              {"init",
               {{"mx", seq.initial.mx},
                {"my", seq.initial.my},
                {"mz", seq.initial.mz}}},
              {"period", seq.period()}};
}

std::string series_csv(const edtc::StroboscopicSeries& series) {
  std::ostringstream out;
  out << "n,t,mx,my,mz\n";
  for (const edtc::Sample& s : series.samples) {
    out << s.n << ',' << edtc::format_double(s.t) << ','
        << edtc::format_double(s.m.mx) << ',' << edtc::format_double(s.m.my)
        << ',' << edtc::format_double(s.m.mz) << '\n';
  }
  return out.str();
}

std::string trace_csv(const std::vector<edtc::TracePoint>& trace) {
  std::ostringstream out;
  out << "t,mx,my,mz\n";
  for (const edtc::TracePoint& p : trace) {
    out << edtc::format_double(p.t) << ',' << edtc::format_double(p.m.mx)
        << ',' << edtc::format_double(p.m.my) << ','
        << edtc::format_double(p.m.mz) << '\n';
  }
  return out.str();
}

std::string spectrum_csv(const edtc::SpectralResult& spec) {
  std::ostringstream out;
  out << "nu,re,im,power\n";
  for (std::size_t k = 0; k < spec.pad; ++k) {
    out << edtc::format_double(spec.nu[k]) << ','
        << edtc::format_double(spec.amp[k].real()) << ','
        << edtc::format_double(spec.amp[k].imag()) << ','
        << edtc::format_double(spec.power[k]) << '\n';
  }
  return out.str();
}

std::string phase_csv(const edtc::PhaseDiagram& grid) {
  std::ostringstream out;
  out << grid.y.name << '\\' << grid.x.name;
  for (const double x : grid.x.values) out << ',' << edtc::format_double(x);
  out << '\n';
  for (std::size_t r = 0; r < grid.y.values.size(); ++r) {
    out << edtc::format_double(grid.y.values[r]);
    for (std::size_t c = 0; c < grid.x.values.size(); ++c) {
      out << ',' << edtc::format_double(grid.at(r, c));
    }
    out << '\n';
  }
  return out.str();
}

json phase_json(const std::string& kind, const edtc::PhaseDiagram& grid) {
  json rows = json::array();
  for (std::size_t r = 0; r < grid.y.values.size(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < grid.x.values.size(); ++c) {
      const double v = grid.at(r, c);
      if (std::isnan(v)) row.push_back(nullptr);
      else row.push_back(v);
    }
    rows.push_back(row);
  }
  json errors = json::array();
  for (const edtc::CellError& e : grid.errors) {
    errors.push_back({{"row", e.row}, {"col", e.col}, {"message", e.message}});
  }
  return json{{"kind", kind},
              {"x", {{"name", grid.x.name}, {"values", grid.x.values}}},
              {"y", {{"name", grid.y.name}, {"values", grid.y.values}}},
              {"f", rows},
              {"errors", errors}};
}

void write_manifest(const fs::path& base, edtc::RunManifest manifest) {
  edtc::write_file_atomic(base.string() + ".manifest.json",
                          manifest.to_json().dump(2) + "\n");
}

edtc::RunManifest make_manifest(const std::string& command,
                                const std::vector<fs::path>& inputs,
                                json resolved,
                                const std::vector<std::string>& outputs) {
  edtc::RunManifest m;
  m.command = command;
  for (const fs::path& p : inputs) {
    m.input_hashes.emplace_back(p.filename().string(),
                                edtc::content_hash(edtc::read_file(p)));
  }
  m.resolved = std::move(resolved);
  m.outputs = outputs;
  return m;
}

// ---------------------------------------------------------------------------
// inputs
// ---------------------------------------------------------------------------

edtc::CompiledProgram load_sequence_file(const fs::path& path,
                                         std::optional<std::uint64_t> cycles) {
  edtc::CompiledProgram prog = edtc::parse_sequence(edtc::read_file(path));
  if (cycles) prog.sequence.cycles = *cycles;
  return prog;
}

std::vector<double> mz_column(const edtc::CsvTable& table,
                              const fs::path& path) {
  const int col = table.column("mz");
  if (col < 0) throw InputError(path.string() + ": no `mz` column");
  std::vector<double> mz;
  mz.reserve(table.rows.size());
  for (const auto& row : table.rows) mz.push_back(row[std::size_t(col)]);
  return mz;
}

std::vector<double> grid_from_json(const json& spec, const std::string& name) {
  std::vector<double> values;
  if (spec.contains("values")) {
    values = spec.at("values").get<std::vector<double>>();
  } else {
    const double start = spec.at("start");
    const double stop = spec.at("stop");
    const std::size_t count = spec.at("count");
    if (count < 1) throw InputError(name + ": count must be >= 1");
    const bool log_scale = spec.value("scale", "linear") == std::string("log");
    if (log_scale && (start <= 0.0 || stop <= 0.0)) {
      throw InputError(name + ": log scale requires positive bounds");
    }
    for (std::size_t i = 0; i < count; ++i) {
      const double frac =
          count == 1 ? 0.0 : double(i) / double(count - 1);
      values.push_back(log_scale
                           ? std::exp(std::log(start) +
                                      frac * (std::log(stop) - std::log(start)))
                           : start + frac * (stop - start));
    }
  }
  const std::string unit = spec.value("unit", "rad");
  double factor = 1.0;
  if (unit == "pi") factor = edtc::kPi;
  else if (unit == "deg") factor = edtc::kPi / 180.0;
  else if (unit != "rad") throw InputError(name + ": unknown unit " + unit);
  for (double& v : values) v *= factor;
  return values;
}

// Sweep axes other than angles carry no unit key; reuse the grid reader.
std::vector<double> plain_grid(const json& spec, const std::string& name) {
  json copy = spec;
  copy.erase("unit");
  return grid_from_json(copy, name);
}

edtc::SystemParams base_params(const json& base, bool need_t1) {
  edtc::RawParams raw;
  if (base.contains("t1")) raw.t1 = base.at("t1").get<double>();
  if (base.contains("t2")) raw.t2 = base.at("t2").get<double>();
  if (base.contains("tphi")) {
    if (base.at("tphi").is_string() && base.at("tphi") == "inf") {
      raw.t_phi = edtc::Timescale::infinite();
    } else {
      raw.t_phi = edtc::Timescale::finite(base.at("tphi").get<double>());
    }
  }
  raw.m_eq = base.at("meq").get<double>();
  if (base.contains("omega1")) raw.omega1 = base.at("omega1").get<double>();
  if (!raw.t1 && !need_t1) raw.t1 = raw.t2;  // placeholder, overridden per row
  return edtc::validate_params(raw);
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string input;
  std::string out;
  std::string format = "csv";
  std::optional<std::uint64_t> cycles;
  int trace = 0;
  bool dissipative_pulse = false;
};

int cmd_simulate(const SimulateArgs& args) {
  edtc::CompiledProgram prog;
  try {
    prog = load_sequence_file(args.input, args.cycles);
  } catch (const edtc::ParseError& e) {
    std::cerr << args.input << ':' << e.pos().line << ':' << e.pos().col
              << ": error: " << e.what() << '\n';
    return kExitParse;
  } catch (const edtc::Error& e) {
    std::cerr << args.input << ": error: " << e.what() << '\n';
    return kExitParse;
  }

  const fs::path base = args.out.empty()
                            ? fs::path(args.input).stem()
                            : fs::path(args.out);
  std::vector<std::string> outputs;
  try {
    const edtc::StroboscopicSeries series =
        evolve(prog.params, prog.sequence, args.dissipative_pulse);
    if (args.format == "json") {
      json rows = json::array();
      for (const edtc::Sample& s : series.samples) {
        rows.push_back({s.n, s.t, s.m.mx, s.m.my, s.m.mz});
      }
      const json doc{{"columns", {"n", "t", "mx", "my", "mz"}},
                     {"params", params_to_json(prog.params)},
                     {"sequence", sequence_to_json(prog.sequence)},
                     {"rows", rows}};
      edtc::write_file_atomic(base.string() + ".series.json", doc.dump(2) + "\n");
      outputs.push_back(base.filename().string() + ".series.json");
    } else {
      edtc::write_file_atomic(base.string() + ".series.csv", series_csv(series));
      outputs.push_back(base.filename().string() + ".series.csv");
    }
    if (args.trace > 0) {
      const auto trace =
          intra_cycle_trace(prog.params, prog.sequence, args.trace);
      edtc::write_file_atomic(base.string() + ".trace.csv", trace_csv(trace));
      outputs.push_back(base.filename().string() + ".trace.csv");
    }
  } catch (const edtc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }

  json resolved{{"params", params_to_json(prog.params)},
                {"sequence", sequence_to_json(prog.sequence)},
                {"format", args.format},
                {"trace", args.trace},
                {"dissipative_pulse", args.dissipative_pulse}};
  write_manifest(base, make_manifest("simulate", {args.input},
                                     std::move(resolved), outputs));
  return kExitOk;
}

struct SpectrumArgs {
  std::string input;
  std::string out;
  std::size_t pad = 0;
  std::optional<std::size_t> window_bins;
  std::optional<std::uint64_t> cycles;
  bool dissipative_pulse = false;
};

int cmd_spectrum(const SpectrumArgs& args) {
  std::vector<double> mz;
  json source;
  try {
    if (fs::path(args.input).extension() == ".csv") {
      mz = mz_column(edtc::read_csv(args.input), args.input);
      source = {{"series", args.input}};
    } else {
      const edtc::CompiledProgram prog =
          load_sequence_file(args.input, args.cycles);
      const edtc::StroboscopicSeries series =
          evolve(prog.params, prog.sequence, args.dissipative_pulse);
      for (const edtc::Sample& s : series.samples) mz.push_back(s.m.mz);
      source = {{"params", params_to_json(prog.params)},
                {"sequence", sequence_to_json(prog.sequence)}};
    }
  } catch (const edtc::ParseError& e) {
    std::cerr << args.input << ':' << e.pos().line << ':' << e.pos().col
              << ": error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const edtc::Error& e) {
    std::cerr << args.input << ": error: " << e.what() << '\n';
    return kExitParse;
  }

  const fs::path base =
      args.out.empty() ? fs::path(args.input).stem() : fs::path(args.out);
  try {
    const edtc::SpectralResult spec =
        edtc::spectrum_of(mz, args.pad, args.window_bins);
    edtc::write_file_atomic(base.string() + ".spectrum.csv", spectrum_csv(spec));

    const std::size_t peak = edtc::peak_bin(spec);
    json resolved{{"source", source},
                  {"pad", spec.pad},
                  {"samples", spec.sample_count},
                  {"window_halfwidth_bins",
                   args.window_bins.value_or(edtc::default_window_halfwidth(
                       spec.sample_count, spec.pad))}};
    const std::vector<std::string> outputs{
        base.filename().string() + ".spectrum.csv",
        base.filename().string() + ".summary.json"};
    edtc::RunManifest manifest =
        make_manifest("spectrum", {args.input}, resolved, outputs);

    json summary{{"f", spec.f},
                 {"fwhm", nullptr},
                 {"peak_nu", spec.nu[peak]},
                 {"peak_power", spec.power[peak]},
                 {"manifest", manifest.to_json()}};
    if (spec.fwhm) summary["fwhm"] = *spec.fwhm;
    edtc::write_file_atomic(base.string() + ".summary.json", summary.dump(2) + "\n");
    write_manifest(base, std::move(manifest));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const edtc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

struct SweepArgs {
  std::string config;
  std::string out;
  int jobs = 0;
  std::optional<std::uint64_t> cycles;
};

edtc::SweepOptions sweep_options(const json& config, int jobs,
                                 std::optional<std::uint64_t> cycles) {
  edtc::SweepOptions opt;
  opt.cycles = cycles.value_or(config.value("cycles", std::uint64_t(200)));
  opt.jobs = jobs;
  if (config.contains("init_mz")) opt.init_mz = config.at("init_mz").get<double>();
  if (config.contains("pad_to")) opt.pad_to = config.at("pad_to").get<std::size_t>();
  if (config.contains("window_halfwidth")) {
    opt.window_halfwidth = config.at("window_halfwidth").get<std::size_t>();
  }
  return opt;
}

int cmd_sweep(const SweepArgs& args) {
  json config;
  std::string kind;
  edtc::PhaseDiagram grid;
  try {
    config = json::parse(edtc::read_file(args.config));
    kind = config.at("kind");
    const edtc::SweepOptions opt =
        sweep_options(config, args.jobs, args.cycles);
    if (kind == "delta-ratio") {
      const edtc::SystemParams base =
          base_params(config.at("base"), /*need_t1=*/false);
      const auto deltas = grid_from_json(config.at("delta"), "delta");
      const auto ratios = plain_grid(config.at("ratio"), "ratio");
      grid = sweep_delta_ratio(base, deltas, ratios,
                               config.at("tau").get<double>(), opt);
    } else if (kind == "delta-tau") {
      const edtc::SystemParams base =
          base_params(config.at("base"), /*need_t1=*/true);
      const auto deltas = grid_from_json(config.at("delta"), "delta");
      const auto taus = plain_grid(config.at("tau"), "tau");
      grid = sweep_delta_tau(base, deltas, taus, opt);
    } else {
      throw InputError("unknown sweep kind `" + kind + "`");
    }
  } catch (const json::exception& e) {
    std::cerr << args.config << ": error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InputError& e) {
    std::cerr << args.config << ": error: " << e.what() << '\n';
    return kExitParse;
  } catch (const edtc::Error& e) {
    std::cerr << args.config << ": error: " << e.what() << '\n';
    return kExitParse;
  }

  const fs::path base =
      args.out.empty() ? fs::path(args.config).stem() : fs::path(args.out);
  edtc::write_file_atomic(base.string() + ".phase.csv", phase_csv(grid));
  edtc::write_file_atomic(base.string() + ".phase.json",
                          phase_json(kind, grid).dump(2) + "\n");

  json resolved = config;
  resolved["jobs_note"] = "worker count does not affect results";
  write_manifest(base,
                 make_manifest("sweep", {args.config}, std::move(resolved),
                               {base.filename().string() + ".phase.csv",
                                base.filename().string() + ".phase.json"}));

  const std::size_t total = grid.f.size();
  const std::size_t failed = grid.errors.size();
  if (failed > 0) {
    std::cerr << failed << " of " << total << " cells failed\n";
  }
  return (10 * failed <= total) ? kExitOk : kExitNumeric;
}

struct FitArgs {
  std::string input;
  std::string out;
  std::string model = "a*d^l+b";
};

int cmd_fit(const FitArgs& args) {
  if (args.model != "a*d^l+b") {
    std::cerr << "error: unsupported model `" << args.model
              << "` (only a*d^l+b)\n";
    return kExitParse;
  }
  std::vector<std::pair<double, double>> points;
  try {
    const edtc::CsvTable table = edtc::read_csv(args.input);
    if (table.header.size() < 2) {
      throw InputError(args.input + ": need two CSV columns");
    }
    for (const auto& row : table.rows) points.emplace_back(row[0], row[1]);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }

  const fs::path base =
      args.out.empty() ? fs::path(args.input).stem() : fs::path(args.out);
  try {
    const edtc::PowerLawFit fit = edtc::fit_power_law(points);
    json cov = json::array();
    for (int r = 0; r < 3; ++r) {
      cov.push_back({fit.covariance(r, 0), fit.covariance(r, 1),
                     fit.covariance(r, 2)});
    }
    edtc::RunManifest manifest = make_manifest(
        "fit", {args.input},
        json{{"model", args.model}, {"points", points.size()}},
        {base.filename().string() + ".fit.json"});
    const json doc{{"a", fit.a},
                   {"lambda", fit.lambda},
                   {"b", fit.b},
                   {"residual", fit.residual},
                   {"iterations", fit.iterations},
                   {"covariance", cov},
                   {"manifest", manifest.to_json()}};
    edtc::write_file_atomic(base.string() + ".fit.json", doc.dump(2) + "\n");
    write_manifest(base, std::move(manifest));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const edtc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    std::cerr << "points: " << points.size() << " rows from " << args.input
              << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

struct FiguresArgs {
  std::string name;
  std::string out = ".";
  std::string recipes;
  int jobs = 0;
  std::optional<std::uint64_t> cycles;
};

fs::path recipes_dir(const FiguresArgs& args) {
  if (!args.recipes.empty()) return args.recipes;
  if (const char* env = std::getenv("EDTC_RECIPES")) return env;
  return "recipes";
}

// simulate + spectrum bundle for one sequence recipe
void figure_run(const fs::path& recipe, const fs::path& base,
                std::optional<std::uint64_t> cycles, int trace,
                std::vector<std::string>& outputs) {
  const edtc::CompiledProgram prog = load_sequence_file(recipe, cycles);
  const edtc::StroboscopicSeries series = evolve(prog.params, prog.sequence);
  edtc::write_file_atomic(base.string() + ".series.csv", series_csv(series));
  outputs.push_back(base.filename().string() + ".series.csv");
  if (trace > 0) {
    edtc::write_file_atomic(
        base.string() + ".trace.csv",
        trace_csv(intra_cycle_trace(prog.params, prog.sequence, trace)));
    outputs.push_back(base.filename().string() + ".trace.csv");
  }
  const edtc::SpectralResult spec = edtc::spectrum(series);
  edtc::write_file_atomic(base.string() + ".spectrum.csv", spectrum_csv(spec));
  outputs.push_back(base.filename().string() + ".spectrum.csv");
  json summary{{"f", spec.f},
               {"fwhm", nullptr},
               {"peak_nu", spec.nu[edtc::peak_bin(spec)]}};
  if (spec.fwhm) summary["fwhm"] = *spec.fwhm;
  edtc::write_file_atomic(base.string() + ".summary.json", summary.dump(2) + "\n");
  outputs.push_back(base.filename().string() + ".summary.json");
}

int cmd_figures(const FiguresArgs& args) {
  const fs::path rdir = recipes_dir(args);
  const fs::path out = args.out;
  fs::create_directories(out);
  std::vector<std::string> outputs;
  std::vector<fs::path> inputs;

  try {
    if (args.name == "fig1") {
      inputs = {rdir / "fig1.seq"};
      figure_run(inputs[0], out / "fig1", args.cycles, 32, outputs);

      // theta-resolved stroboscopic map and spectral map
      const edtc::CompiledProgram prog =
          load_sequence_file(inputs[0], args.cycles);
      std::vector<double> thetas;
      for (int i = 0; i <= 80; ++i) thetas.push_back((-2.0 + 0.05 * i) * edtc::kPi);
      std::ostringstream mz_map, power_map;
      mz_map << "theta_over_pi";
      for (const edtc::Sample& s :
           evolve(prog.params, prog.sequence).samples) {
        mz_map << ",n" << s.n;
      }
      mz_map << '\n';
      power_map << "theta_over_pi,nu,power\n";
      for (const double theta : thetas) {
        edtc::PulseSequence seq = prog.sequence;
        seq.segments = {edtc::DelaySegment{prog.sequence.tau()},
                        edtc::PulseSegment{edtc::PulseSpec::from_theta(
                            edtc::Axis::y, theta, prog.params.omega1)}};
        const edtc::StroboscopicSeries series = evolve(prog.params, seq);
        mz_map << edtc::format_double(theta / edtc::kPi);
        for (const edtc::Sample& s : series.samples) {
          mz_map << ',' << edtc::format_double(s.m.mz);
        }
        mz_map << '\n';
        const edtc::SpectralResult spec = edtc::spectrum(series, 1024);
        for (std::size_t k = 0; k < spec.pad; ++k) {
          power_map << edtc::format_double(theta / edtc::kPi) << ','
                    << edtc::format_double(spec.nu[k]) << ','
                    << edtc::format_double(spec.power[k]) << '\n';
        }
      }
      edtc::write_file_atomic(out / "fig1.mz_map.csv", mz_map.str());
      edtc::write_file_atomic(out / "fig1.power_map.csv", power_map.str());
      outputs.push_back("fig1.mz_map.csv");
      outputs.push_back("fig1.power_map.csv");
    } else if (args.name == "fig2") {
      for (const char* part : {"fig2a", "fig2b", "fig2c"}) {
        const fs::path recipe = rdir / (std::string(part) + ".seq");
        inputs.push_back(recipe);
        figure_run(recipe, out / part, args.cycles, 0, outputs);
      }
    } else if (args.name == "fig3a" || args.name == "fig3b" ||
               args.name == "fig4") {
      const fs::path recipe = rdir / (args.name + ".json");
      inputs = {recipe};
      SweepArgs sweep;
      sweep.config = recipe.string();
      sweep.out = (out / args.name).string();
      sweep.jobs = args.jobs;
      sweep.cycles = args.cycles;
      const int rc = cmd_sweep(sweep);
      if (rc != kExitOk) return rc;
      outputs.push_back(args.name + ".phase.csv");
      outputs.push_back(args.name + ".phase.json");
    } else if (args.name == "fig3c") {
      const fs::path recipe = rdir / "fig3c.json";
      inputs = {recipe};
      const json config = json::parse(edtc::read_file(recipe));
      const edtc::SystemParams base = base_params(config.at("base"), true);
      const auto deltas = grid_from_json(config.at("delta"), "delta");
      edtc::SweepOptions opt = sweep_options(config, args.jobs, args.cycles);
      const auto points =
          fwhm_vs_delta(base, deltas, config.at("tau").get<double>(), opt);

      std::ostringstream csv;
      csv << "delta,fwhm\n";
      for (const auto& [d, w] : points) {
        csv << edtc::format_double(d) << ',' << edtc::format_double(w) << '\n';
      }
      edtc::write_file_atomic(out / "fig3c.fwhm.csv", csv.str());
      outputs.push_back("fig3c.fwhm.csv");

      const edtc::PowerLawFit fit = edtc::fit_power_law(points);
      const json doc{{"a", fit.a},
                     {"lambda", fit.lambda},
                     {"b", fit.b},
                     {"residual", fit.residual},
                     {"reference_experimental_lambda", 2.24}};
      edtc::write_file_atomic(out / "fig3c.fit.json", doc.dump(2) + "\n");
      outputs.push_back("fig3c.fit.json");
    } else if (args.name == "fig5") {
      const fs::path recipe = rdir / "fig5.json";
      inputs = {recipe};
      const json config = json::parse(edtc::read_file(recipe));
      const edtc::SystemParams base = base_params(config.at("base"), true);
      double delta = config.at("delta").get<double>();
      if (config.value("delta_unit", "rad") == std::string("pi")) {
        delta *= edtc::kPi;
      }
      const auto taus = plain_grid(config.at("tau"), "tau");
      edtc::SweepOptions opt = sweep_options(config, args.jobs, args.cycles);

      const auto points = lifetime_vs_tau(base, delta, taus, opt);
      std::ostringstream csv;
      csv << "tau,period,lifetime_cycles,lifetime_time\n";
      for (const edtc::LifetimePoint& pt : points) {
        csv << edtc::format_double(pt.tau) << ','
            << edtc::format_double(pt.period) << ',';
        if (pt.lifetime_cycles) {
          csv << edtc::format_double(*pt.lifetime_cycles) << ','
              << edtc::format_double(*pt.lifetime_cycles * pt.period);
        } else {
          csv << "nan,nan";
        }
        csv << '\n';
      }
      edtc::write_file_atomic(out / "fig5.lifetimes.csv", csv.str());
      outputs.push_back("fig5.lifetimes.csv");

      for (const double tau : taus) {
        const edtc::PulseSpec pulse =
            edtc::PulseSpec::from_delta(edtc::Axis::y, delta, base.omega1);
        const edtc::PulseSequence seq = edtc::make_sequence(
            tau, pulse, opt.cycles, {0.0, 0.0, -0.9 * base.m_eq});
        std::ostringstream name;
        name << "fig5.series_tau" << tau << ".csv";
        edtc::write_file_atomic(out / name.str(),
                                series_csv(evolve(base, seq)));
        outputs.push_back(name.str());
      }
    } else {
      std::cerr << "error: unknown figure `" << args.name << "`\n";
      return kExitParse;
    }
  } catch (const edtc::ParseError& e) {
    std::cerr << args.name << ':' << e.pos().line << ':' << e.pos().col
              << ": error: " << e.what() << '\n';
    return kExitParse;
  } catch (const json::exception& e) {
    std::cerr << args.name << ": error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const edtc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }

  json resolved{{"figure", args.name}};
  if (args.cycles) resolved["cycles_override"] = *args.cycles;
  write_manifest(out / args.name,
                 make_manifest("figures", inputs, std::move(resolved),
                               outputs));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative two-level system under a delay-plus-pulse drive: "
               "stroboscopic simulation and subharmonic-response analysis"};
  app.set_version_flag("--version", std::string(edtc::kToolVersion));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a pulse program and write the stroboscopic series");
  simulate->add_option("input", sim.input, "sequence file")->required();
  simulate->add_option("--out", sim.out, "output path prefix");
  simulate->add_option("--format", sim.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  std::uint64_t sim_cycles = 0;
  auto* sim_cycles_opt =
      simulate->add_option("--cycles", sim_cycles, "override repeat count");
  simulate->add_option("--trace", sim.trace,
                       "samples per segment for a dense trace");
  simulate->add_flag("--dissipative-pulse", sim.dissipative_pulse,
                     "evolve dissipation during pulses");

  SpectrumArgs spec;
  auto* spectrum_cmd = app.add_subcommand(
      "spectrum", "Spectrum, crystalline fraction and FWHM of a series");
  spectrum_cmd->add_option("input", spec.input, "series CSV or sequence file")
      ->required();
  spectrum_cmd->add_option("--out", spec.out, "output path prefix");
  spectrum_cmd->add_option("--pad", spec.pad,
                           "zero-pad length (power of two; 0 = auto)");
  std::size_t window_bins = 0;
  auto* window_opt = spectrum_cmd->add_option(
      "--window-bins", window_bins, "subharmonic window halfwidth in bins");
  std::uint64_t spec_cycles = 0;
  auto* spec_cycles_opt = spectrum_cmd->add_option(
      "--cycles", spec_cycles, "override repeat count (sequence input)");
  spectrum_cmd->add_flag("--dissipative-pulse", spec.dissipative_pulse,
                         "evolve dissipation during pulses");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Crystalline-fraction phase diagram from a grid config");
  sweep_cmd->add_option("config", sweep.config, "sweep config JSON")
      ->required();
  sweep_cmd->add_option("--out", sweep.out, "output path prefix");
  sweep_cmd->add_option("--jobs", sweep.jobs,
                        "worker count (default: EDTC_JOBS or all cores)");
  std::uint64_t sweep_cycles = 0;
  auto* sweep_cycles_opt =
      sweep_cmd->add_option("--cycles", sweep_cycles, "override cycle count");

  FitArgs fit;
  auto* fit_cmd =
      app.add_subcommand("fit", "Power-law fit y = a*d^l+b of a 2-column CSV");
  fit_cmd->add_option("input", fit.input, "points CSV")->required();
  fit_cmd->add_option("--out", fit.out, "output path prefix");
  fit_cmd->add_option("--model", fit.model, "model expression");

  FiguresArgs figs;
  auto* figures_cmd = app.add_subcommand(
      "figures", "Regenerate a canned figure dataset from its recipe");
  figures_cmd->add_option("name", figs.name, "fig1 fig2 fig3a fig3b fig3c fig4 fig5")
      ->required();
  figures_cmd->add_option("--out", figs.out, "output directory");
  figures_cmd->add_option("--recipes", figs.recipes,
                          "recipe directory (default: EDTC_RECIPES or ./recipes)");
  figures_cmd->add_option("--jobs", figs.jobs, "worker count");
  std::uint64_t fig_cycles = 0;
  auto* fig_cycles_opt = figures_cmd->add_option(
      "--cycles", fig_cycles, "override recipe cycle counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  if (*sim_cycles_opt) sim.cycles = sim_cycles;
  if (*spec_cycles_opt) spec.cycles = spec_cycles;
  if (*sweep_cycles_opt) sweep.cycles = sweep_cycles;
  if (*fig_cycles_opt) figs.cycles = fig_cycles;
  if (*window_opt) spec.window_bins = window_bins;

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (spectrum_cmd->parsed()) return cmd_spectrum(spec);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep);
    if (fit_cmd->parsed()) return cmd_fit(fit);
    if (figures_cmd->parsed()) return cmd_figures(figs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}
