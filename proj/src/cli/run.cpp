#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "scatter1d/cli.hpp"
#include "scatter1d/parallel.hpp"

namespace scatter1d::cli {

using ojson = nlohmann::ordered_json;

const char* to_string(Command c) {
  switch (c) {
    case Command::Sweep: return "sweep";
    case Command::Spectra: return "spectra";
    case Command::Laser: return "laser";
    case Command::Symmetry: return "symmetry";
    case Command::Verify: return "verify";
    case Command::Profile: return "profile";
    case Command::Invisibility: return "invisibility";
  }
  return "?";
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::Sweep, Command::Spectra, Command::Laser, Command::Symmetry,
                    Command::Verify, Command::Profile, Command::Invisibility}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void missing(const std::string& field, const std::string& command) {
  throw Error(ErrorCode::Validation, field + ": required by '" + command + "'");
}

ojson pair(Complex z) { return ojson::array({z.real(), z.imag()}); }

ojson header(Command command, const JobConfig& c) {
  ojson j;
  j["schema"] = 1;
  j["command"] = to_string(command);
  if (c.model) j["model"] = c.model_tag;
  return j;
}

ScatteringSystem system_for(const JobConfig& c, Command command) {
  if (!c.model) missing("model", to_string(command));
  ScatteringSystem sys = ScatteringSystem::from_model(*c.model);
  if (c.fault_m11_scale) sys = with_corrupted_m11(std::move(sys), *c.fault_m11_scale);
  return sys;
}

std::vector<double> grid_for(const JobConfig& c, const Overrides& o, Command command,
                             bool has_default) {
  if (o.grid) return o.grid->points();
  if (c.grid) return c.grid->points();
  if (has_default) return default_grid();
  missing("grid", to_string(command));
}

Format format_for(const JobConfig& c, const Overrides& o, Format fallback) {
  if (c.format) return *c.format;
  const auto& path = o.out ? o.out : c.out_path;
  if (path && path->size() >= 5 && path->substr(path->size() - 5) == ".json") return Format::Json;
  if (path && path->size() >= 4 && path->substr(path->size() - 4) == ".csv") return Format::Csv;
  return fallback;
}

ojson report_json(const ResidualReport& r) {
  ojson j;
  j["identity"] = r.identity_name;
  j["status"] = to_string(r.status);
  j["max_residual"] = r.max_residual;
  j["mean_residual"] = r.mean_residual;
  j["tolerance"] = r.tolerance;
  j["points"] = r.grid.size();
  j["skipped_points"] = r.skipped_points;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

ojson verdict_json(const SymmetryVerdict& v) {
  ojson j;
  j["op"] = to_string(v.op);
  j["holds"] = v.holds;
  j["max_residual"] = v.max_residual;
  j["tolerance"] = v.tolerance;
  j["exactness"] = to_string(v.exactness);
  j["tau_max"] = v.tau_max;
  j["skipped_points"] = v.skipped_points;
  return j;
}

CommandResult sweep(const JobConfig& c, const Overrides& o) {
  const ScatteringSystem sys = system_for(c, Command::Sweep);
  const auto grid = grid_for(c, o, Command::Sweep, false);
  struct Row {
    std::optional<ScatteringData> d;
    TransferMatrix m;
  };
  std::vector<Row> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    rows[i].m = sys.source(grid[i]);
    try {
      rows[i].d = scattering_from_transfer(rows[i].m);
    } catch (const SpectralSingularityProximity&) {
    }
  });

  CommandResult res;
  res.format = format_for(c, o, Format::Csv);
  ojson events = ojson::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!rows[i].d) {
      std::ostringstream os;
      os << "k = " << format_number(grid[i]) << ": spectral singularity proximity, |M22| = "
         << format_number(std::abs(rows[i].m.m22));
      res.events.push_back(os.str());
      ojson e;
      e["k"] = grid[i];
      e["event"] = "spectral_singularity_proximity";
      e["abs_m22"] = std::abs(rows[i].m.m22);
      events.push_back(e);
    }
  }

  if (res.format == Format::Csv) {
    std::string out =
        "k,re_r_l,im_r_l,re_r_r,im_r_r,re_t_l,im_t_l,re_t_r,im_t_r,abs_r_l_sq,abs_t_l_sq,"
        "re_det_m,im_det_m,re_det_s,im_det_s\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!rows[i].d) continue;
      const ScatteringData& d = *rows[i].d;
      const Complex dm = rows[i].m.det();
      const Complex ds = det_s(d);
      const double cols[] = {grid[i],       d.r_l.real(),      d.r_l.imag(),    d.r_r.real(),
                             d.r_r.imag(),  d.t_l.real(),      d.t_l.imag(),    d.t_r.real(),
                             d.t_r.imag(),  std::norm(d.r_l),  std::norm(d.t_l), dm.real(),
                             dm.imag(),     ds.real(),         ds.imag()};
      bool first = true;
      for (double v : cols) {
        if (!first) out += ',';
        first = false;
        out += format_number(v);
      }
      out += '\n';
    }
    res.content = std::move(out);
    return res;
  }

  ojson j = header(Command::Sweep, c);
  ojson data = ojson::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!rows[i].d) continue;
    const ScatteringData& d = *rows[i].d;
    ojson row;
    row["k"] = grid[i];
    row["r_l"] = pair(d.r_l);
    row["r_r"] = pair(d.r_r);
    row["t_l"] = pair(d.t_l);
    row["t_r"] = pair(d.t_r);
    row["abs_r_l_sq"] = std::norm(d.r_l);
    row["abs_t_l_sq"] = std::norm(d.t_l);
    row["det_m"] = pair(rows[i].m.det());
    row["det_s"] = pair(det_s(d));
    data.push_back(row);
  }
  j["rows"] = data;
  j["events"] = events;
  res.content = dump_json(j);
  return res;
}

CommandResult spectra(const JobConfig& c, const Overrides& o) {
  const ScatteringSystem sys = system_for(c, Command::Spectra);
  if (!c.region) missing("region", "spectra");
  SpectrumOptions opts;
  opts.zeros.nx = c.region_nx;
  opts.zeros.ny = c.region_ny;
  opts.zeros.tol_res = o.tol.value_or(c.tol.root);
  opts.zeros.tol_sep = c.tol.separation;
  const auto points = classify_spectrum(sys.source, *c.region, opts);

  CommandResult res;
  ojson j = header(Command::Spectra, c);
  ojson region;
  region["re_min"] = c.region->re_min;
  region["re_max"] = c.region->re_max;
  region["im_min"] = c.region->im_min;
  region["im_max"] = c.region->im_max;
  j["region"] = region;
  ojson list = ojson::array();
  for (const SpectralPoint& p : points) {
    ojson e;
    e["k"] = pair(p.k);
    e["energy"] = p.energy;
    e["width"] = p.width;
    e["kind"] = to_string(p.kind);
    e["residual"] = p.residual;
    e["converged"] = p.converged;
    list.push_back(e);
    if (!p.converged) {
      res.code = ExitCode::NotConverged;
      res.events.push_back("root at k = " + format_number(p.k.real()) + " + " +
                           format_number(p.k.imag()) + "i did not converge");
    }
  }
  j["points"] = list;
  res.content = dump_json(j);
  return res;
}

CommandResult laser(const JobConfig& c) {
  if (!c.laser) missing("laser", "laser");
  const LaserSolution s = slab_laser_solve(*c.laser);
  ojson j = header(Command::Laser, c);
  j["k0"] = s.k0;
  j["n0"] = pair(s.n0);
  j["eta0"] = s.eta0;
  j["kappa0"] = s.kappa0;
  j["m"] = s.m;
  j["phi0"] = s.phi0;
  j["g"] = s.g;
  j["g_threshold"] = threshold_gain(s.n0, s.width);
  j["width"] = s.width;
  j["m22_residual"] = s.m22_residual;
  j["iterations"] = s.iterations;
  CommandResult res;
  res.content = dump_json(j);
  return res;
}

CommandResult symmetry(const JobConfig& c, const Overrides& o) {
  const ScatteringSystem sys = system_for(c, Command::Symmetry);
  const auto grid = grid_for(c, o, Command::Symmetry, true);
  const double tol = o.tol.value_or(c.tol.symmetry);
  std::vector<SymmetryOp> ops{SymmetryOp::parity(), SymmetryOp::time_reversal(), SymmetryOp::pt()};
  if (c.symmetry_about) {
    ops.push_back(SymmetryOp::parity_about(*c.symmetry_about));
    ops.push_back(SymmetryOp::pt_about(*c.symmetry_about));
  }
  ojson j = header(Command::Symmetry, c);
  ojson list = ojson::array();
  for (const SymmetryOp& op : ops) list.push_back(verdict_json(classify(sys.source, grid, op, tol)));
  j["verdicts"] = list;
  CommandResult res;
  res.content = dump_json(j);
  return res;
}

CommandResult verify(const JobConfig& c, const Overrides& o) {
  const ScatteringSystem sys = system_for(c, Command::Verify);
  const auto grid = grid_for(c, o, Command::Verify, true);
  VerifyOptions opts;
  opts.tol = o.tol.value_or(c.tol.check);
  opts.symmetry_tol = c.tol.symmetry;
  const VerifySummary summary = run_all(sys, grid, opts);

  ojson j = header(Command::Verify, c);
  j["system"] = sys.name;
  ojson sym = ojson::array();
  for (const auto& v : summary.symmetries) sym.push_back(verdict_json(v));
  j["symmetries"] = sym;
  ojson reps = ojson::array();
  for (const auto& r : summary.reports) reps.push_back(report_json(r));
  j["reports"] = reps;
  j["passed"] = summary.all_passed();
  CommandResult res;
  res.content = dump_json(j);
  if (o.ci && !summary.all_passed()) res.code = ExitCode::VerifyFailed;
  return res;
}

CommandResult profile(const JobConfig& c, const Overrides& o) {
  if (!c.model) missing("model", "profile");
  const auto entries = coefficient_profile(*c.model, c.profile_k, c.profile_left);
  CommandResult res;
  res.format = format_for(c, o, Format::Csv);
  if (res.format == Format::Csv) {
    // Unbounded ends are left empty rather than written as infinities.
    std::string out = "x_from,x_to,re_a,im_a,re_b,im_b\n";
    for (const auto& e : entries) {
      out += (std::isfinite(e.x_from) ? format_number(e.x_from) : "") + ",";
      out += (std::isfinite(e.x_to) ? format_number(e.x_to) : "") + ",";
      out += format_number(e.pair.a.real()) + "," + format_number(e.pair.a.imag()) + ",";
      out += format_number(e.pair.b.real()) + "," + format_number(e.pair.b.imag()) + "\n";
    }
    res.content = std::move(out);
    return res;
  }
  ojson j = header(Command::Profile, c);
  j["k"] = c.profile_k;
  ojson list = ojson::array();
  for (const auto& e : entries) {
    ojson r;
    r["x_from"] = std::isfinite(e.x_from) ? ojson(e.x_from) : ojson(nullptr);
    r["x_to"] = std::isfinite(e.x_to) ? ojson(e.x_to) : ojson(nullptr);
    r["a"] = pair(e.pair.a);
    r["b"] = pair(e.pair.b);
    list.push_back(r);
  }
  j["regions"] = list;
  res.content = dump_json(j);
  return res;
}

CommandResult invisibility(const JobConfig& c, const Overrides& o) {
  if (!c.model) missing("model", "invisibility");
  double lo = 0.0, hi = 0.0;
  if (c.invisibility_min && c.invisibility_max) {
    lo = *c.invisibility_min;
    hi = *c.invisibility_max;
  } else if (o.grid || c.grid) {
    const GridSpec g = o.grid ? *o.grid : *c.grid;
    lo = g.min;
    hi = g.max;
  } else {
    missing("invisibility.k_min/k_max", "invisibility");
  }
  InvisibilityOptions opts;
  opts.samples = c.invisibility_samples;
  opts.tol = o.tol.value_or(c.tol.invisibility);
  opts.tol_sep = c.tol.separation;
  const InvisibilityResult r = find_invisibility(*c.model, lo, hi, opts);

  ojson j = header(Command::Invisibility, c);
  j["k_min"] = lo;
  j["k_max"] = hi;
  j["transparent_everywhere"] = r.transparent_everywhere;
  ojson list = ojson::array();
  for (const auto& p : r.points) {
    ojson e;
    e["k"] = p.k;
    e["kind"] = to_string(p.kind);
    e["abs_r_l"] = p.abs_r_l;
    e["abs_r_r"] = p.abs_r_r;
    e["abs_t_minus_one"] = p.abs_t_minus_one;
    list.push_back(e);
  }
  j["points"] = list;
  CommandResult res;
  res.content = dump_json(j);
  return res;
}

}  // namespace

CommandResult execute(Command command, JobConfig config, const Overrides& overrides) {
  if (overrides.tol && !(*overrides.tol > 0.0)) {
    throw Error(ErrorCode::Validation, "--tol: must be > 0");
  }
  switch (command) {
    case Command::Sweep: return sweep(config, overrides);
    case Command::Spectra: return spectra(config, overrides);
    case Command::Laser: return laser(config);
    case Command::Symmetry: return symmetry(config, overrides);
    case Command::Verify: return verify(config, overrides);
    case Command::Profile: return profile(config, overrides);
    case Command::Invisibility: return invisibility(config, overrides);
  }
  throw Error(ErrorCode::Validation, "unknown command");
}

int run(int argc, char** argv) {
  CLI::App app{"scatter1d: one-dimensional transfer-matrix scattering"};
  std::string command_name;
  std::string config_path;
  std::string out;
  std::string grid;
  double tol = 0.0;
  Overrides overrides;
  app.add_option("command", command_name,
                 "sweep | spectra | laser | symmetry | verify | profile | invisibility")
      ->required();
  app.add_option("--config", config_path, "JSON job file (schema 1)")->required();
  app.add_option("--out", out, "output path (stdout when absent)");
  auto* tol_opt = app.add_option("--tol", tol, "tolerance override for the command's main check");
  app.add_option("--grid", grid, "k grid as min,max,count,log|lin");
  app.add_flag("--ci", overrides.ci, "verify: exit 3 when any identity check fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(ExitCode::Validation);
  }

  try {
    const auto command = parse_command(command_name);
    if (!command) throw Error(ErrorCode::Validation, "command: unknown '" + command_name + "'");
    if (!out.empty()) overrides.out = out;
    if (tol_opt->count() > 0) overrides.tol = tol;
    if (!grid.empty()) overrides.grid = parse_grid_flag(grid);

    JobConfig config = load_config(config_path);
    const std::optional<std::string> path = overrides.out ? overrides.out : config.out_path;
    CommandResult result = execute(*command, std::move(config), overrides);
    for (const auto& e : result.events) std::cerr << "event: " << e << "\n";
    if (path) {
      write_atomically(*path, result.content);
    } else {
      std::cout << result.content;
    }
    return static_cast<int>(result.code);
  } catch (const NotConverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::NotConverged);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Validation);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Validation);
  }
}

}  // namespace scatter1d::cli
