#include "xcal/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>

#include "xcal/balance.hpp"

namespace xcal::cli {
namespace {

CommandResult config_error(const std::string& msg) {
  CommandResult res;
  res.exit_code = 2;
  res.report = {{"error", msg}};
  return res;
}

// Build the scenario or fill `err` with a configuration failure.
std::optional<Scenario> build_scenario(const RunConfig& config,
                                       CommandResult& err) {
  try {
    validate(config);
    return make_scenario(config.scenario, config.params);
  } catch (const std::invalid_argument& e) {
    err = config_error(e.what());
    return std::nullopt;
  }
}

bool write_text_file(const std::filesystem::path& path,
                     const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << body;
  return static_cast<bool>(out);
}

// Create the output directory and write the command's JSON report into it.
bool emit_report(const RunConfig& config, const std::string& filename,
                 CommandResult& res) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) return false;
  const auto path = std::filesystem::path(config.out_dir) / filename;
  if (!write_text_file(path, res.report.dump(2) + "\n")) return false;
  res.files.push_back(path.string());
  return true;
}

const char* status_name(WorldlineStatus s) {
  switch (s) {
    case WorldlineStatus::completed: return "completed";
    case WorldlineStatus::left_domain: return "left_domain";
    case WorldlineStatus::max_steps: return "max_steps";
  }
  return "unknown";
}

std::string pixel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string short_float(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void parse_params(const nlohmann::json& doc, ScenarioParams& p) {
  for (const auto& [key, val] : doc.items()) {
    if (key == "a_t") p.a_t = val.get<double>();
    else if (key == "a_x") p.a_x = val.get<double>();
    else if (key == "rho0") p.rho0 = val.get<double>();
    else if (key == "v0") p.v0 = val.get<double>();
    else if (key == "r0") p.r0 = val.get<double>();
    else if (key == "t0") p.t0 = val.get<double>();
    else if (key == "t_end") p.t_end = val.get<double>();
    else if (key == "x_min") p.x_min = val.get<double>();
    else if (key == "x_max") p.x_max = val.get<double>();
    else if (key == "r_min") p.r_min = val.get<double>();
    else if (key == "r_max") p.r_max = val.get<double>();
    else if (key == "analytic_fields") p.analytic_fields = val.get<bool>();
    else
      throw std::invalid_argument("unknown scenario parameter '" + key + "'");
  }
}

}  // namespace

// ===========================================================================
// Configuration.
// ===========================================================================

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object())
    throw std::invalid_argument("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, val] : doc.items()) {
      if (key == "scenario") c.scenario = val.get<std::string>();
      else if (key == "params") parse_params(val, c.params);
      else if (key == "quad-order") {
        c.quad_order = val.get<int>();
        c.quad_order_given = true;
      } else if (key == "subcells") {
        c.subcells = val.get<int>();
        c.subcells_given = true;
      } else if (key == "ode-step") c.ode_step = val.get<double>();
      else if (key == "seeds") {
        c.seeds_given = true;
        c.seeds.clear();
        for (const auto& row : val)
          c.seeds.push_back(row.get<std::vector<double>>());
      } else if (key == "seed") c.rng_seed = val.get<std::uint64_t>();
      else if (key == "bump-count") c.bump_count = val.get<int>();
      else if (key == "sample-count") c.sample_count = val.get<int>();
      else if (key == "out-dir") c.out_dir = val.get<std::string>();
      else if (key == "formats") {
        c.write_csv = false;
        c.write_svg = false;
        for (const auto& fmt : val) {
          const std::string s = fmt.get<std::string>();
          if (s == "csv") c.write_csv = true;
          else if (s == "svg") c.write_svg = true;
          else throw std::invalid_argument("unknown output format '" + s + "'");
        }
      } else if (key == "perturb-sigma") c.perturb_sigma = val.get<double>();
      else if (key == "balance-tol") c.balance_tol = val.get<double>();
      else if (key == "region-tol") c.region_tol = val.get<double>();
      else if (key == "current-tol") c.current_tol = val.get<double>();
      else throw std::invalid_argument("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config file '" + path + "': " + e.what());
  }
  return parse_config(doc);
}

void validate(const RunConfig& config) {
  const auto positive = [](double v, const char* what) {
    if (!(v > 0.0))
      throw std::invalid_argument(std::string(what) + " must be positive");
  };
  positive(config.quad_order, "quad-order");
  positive(config.subcells, "subcells");
  positive(config.ode_step, "ode-step");
  positive(config.sample_count, "sample-count");
  positive(config.balance_tol, "balance-tol");
  positive(config.region_tol, "region-tol");
  positive(config.current_tol, "current-tol");
  if (config.bump_count < 0)
    throw std::invalid_argument("bump-count must be nonnegative");
}

// ===========================================================================
// Formatting helpers.
// ===========================================================================

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string worldline_csv(const Worldline& w) {
  std::string out = "param,t";
  for (int a = 1; a < w.dim; ++a) out += ",x" + std::to_string(a);
  out += "\n";
  for (size_t i = 0; i < w.points.size(); ++i) {
    out += format_float(w.params[i]);
    for (int a = 0; a < w.dim; ++a)
      out += "," + format_float(w.points[i][static_cast<size_t>(a)]);
    out += "\n";
  }
  return out;
}

std::string worldlines_svg(const std::vector<Worldline>& tracks) {
  constexpr double kW = 640.0, kH = 480.0, kMargin = 50.0;
  static const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60",
                                   "#8e44ad", "#d68910", "#16a085"};

  double t_lo = std::numeric_limits<double>::infinity(), t_hi = -t_lo;
  double v_lo = t_lo, v_hi = -t_lo;
  for (const Worldline& w : tracks)
    for (const Vec& p : w.points) {
      t_lo = std::min(t_lo, p[0]);
      t_hi = std::max(t_hi, p[0]);
      v_lo = std::min(v_lo, p[1]);
      v_hi = std::max(v_hi, p[1]);
    }
  if (!(t_hi > t_lo)) { t_lo -= 0.5; t_hi += 0.5; }
  if (!(v_hi > v_lo)) { v_lo -= 0.5; v_hi += 0.5; }
  if (!std::isfinite(t_lo)) { t_lo = 0.0; t_hi = 1.0; v_lo = 0.0; v_hi = 1.0; }

  const auto px = [&](double t) {
    return kMargin + (t - t_lo) / (t_hi - t_lo) * (kW - 2.0 * kMargin);
  };
  const auto py = [&](double v) {
    return kH - kMargin - (v - v_lo) / (v_hi - v_lo) * (kH - 2.0 * kMargin);
  };

  std::string svg =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n"
      "  <rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  // axes along the data bounding box
  svg += "  <line x1=\"" + pixel(px(t_lo)) + "\" y1=\"" + pixel(py(v_lo)) +
         "\" x2=\"" + pixel(px(t_hi)) + "\" y2=\"" + pixel(py(v_lo)) +
         "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  svg += "  <line x1=\"" + pixel(px(t_lo)) + "\" y1=\"" + pixel(py(v_lo)) +
         "\" x2=\"" + pixel(px(t_lo)) + "\" y2=\"" + pixel(py(v_hi)) +
         "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  const auto label = [](double x, double y, const std::string& text) {
    return "  <text x=\"" + pixel(x) + "\" y=\"" + pixel(y) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#444\">" +
           text + "</text>\n";
  };
  svg += label(px(t_lo), kH - kMargin + 20.0, "t = " + short_float(t_lo));
  svg += label(px(t_hi) - 40.0, kH - kMargin + 20.0, "t = " + short_float(t_hi));
  svg += label(8.0, py(v_lo), short_float(v_lo));
  svg += label(8.0, py(v_hi) + 4.0, short_float(v_hi));

  int color = 0;
  for (const Worldline& w : tracks) {
    if (w.points.empty()) continue;
    std::string pts;
    for (const Vec& p : w.points) {
      if (!pts.empty()) pts += " ";
      pts += pixel(px(p[0])) + "," + pixel(py(p[1]));
    }
    svg += "  <polyline fill=\"none\" stroke=\"";
    svg += kPalette[color % 6];
    svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    ++color;
  }
  svg += "</svg>\n";
  return svg;
}

// ===========================================================================
// Commands.
// ===========================================================================

CommandResult cmd_worldlines(const RunConfig& config) {
  CommandResult res;
  std::optional<Scenario> sc = build_scenario(config, res);
  if (!sc) return res;
  if (!sc->fields)
    return config_error("scenario '" + sc->name +
                        "' declares no kinematic flux to integrate");

  const int dim = sc->chart.dim();
  std::vector<Vec> seeds;
  if (config.seeds_given) {
    for (const auto& s : config.seeds) {
      if (static_cast<int>(s.size()) != dim)
        return config_error("worldline seed needs " + std::to_string(dim) +
                            " coordinates");
      Vec v{};
      for (int a = 0; a < dim; ++a) v[static_cast<size_t>(a)] = s[static_cast<size_t>(a)];
      seeds.push_back(v);
    }
  } else {
    seeds = sc->default_seeds;
  }
  for (const Vec& s : seeds)
    if (!sc->chart.chart().contains(Pt(s.data(), dim)))
      return config_error("worldline seed outside the chart");

  WorldlineOptions opts;
  opts.step = config.ode_step;
  std::vector<Worldline> tracks;
  for (const Vec& s : seeds)
    tracks.push_back(integrate_worldline(sc->fields->velocity,
                                         sc->chart.chart(), Pt(s.data(), dim),
                                         opts));

  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec)
    return config_error("cannot create output directory '" + config.out_dir +
                        "'");
  const std::filesystem::path od(config.out_dir);

  nlohmann::json track_meta = nlohmann::json::array();
  for (size_t k = 0; k < tracks.size(); ++k) {
    if (config.write_csv) {
      char name[32];
      std::snprintf(name, sizeof(name), "worldline_%02zu.csv", k);
      const auto path = od / name;
      if (!write_text_file(path, worldline_csv(tracks[k])))
        return config_error("cannot write '" + path.string() + "'");
      res.files.push_back(path.string());
    }
    track_meta.push_back({{"status", status_name(tracks[k].status)},
                          {"points", tracks[k].points.size()}});
  }
  if (config.write_svg && !tracks.empty()) {
    const auto path = od / "worldlines.svg";
    if (!write_text_file(path, worldlines_svg(tracks)))
      return config_error("cannot write '" + path.string() + "'");
    res.files.push_back(path.string());
  }

  res.report = {{"command", "worldlines"},
                {"scenario", sc->name},
                {"seeds", seeds.size()},
                {"ode-step", config.ode_step},
                {"tracks", track_meta},
                {"files", res.files}};
  res.exit_code = 0;
  return res;
}

CommandResult cmd_balance(const RunConfig& config) {
  CommandResult res;
  std::optional<Scenario> sc = build_scenario(config, res);
  if (!sc) return res;
  if (!sc->fields)
    return config_error("scenario '" + sc->name +
                        "' declares no smooth fields to balance");
  const SmoothFields& f = *sc->fields;

  // optional deliberate defect on the supply's leading spatial slot
  DifferentialForm supply = f.source;
  if (config.perturb_sigma != 0.0) {
    const int dim = sc->chart.dim();
    std::vector<int> axes;
    for (int a = 1; a < dim; ++a) axes.push_back(a);
    DifferentialForm pert(dim, dim - 1);
    pert.set(MultiIndex(axes), ScalarField::constant(config.perturb_sigma));
    supply = supply + pert;
  }
  const DifferentialForm st_source = assemble_spacetime_source(supply);

  std::mt19937_64 rng(config.rng_seed);
  const std::vector<Vec> pts =
      sample_points(sc->chart.chart(), config.sample_count, rng);

  const BalanceReport spatial =
      residual_report(f.rate + spatial_derivative(f.flux) - supply, pts);
  const BalanceReport spacetime =
      residual_report(exterior_derivative(f.st_flux) - st_source, pts);
  bool pass = spatial.max_residual < config.balance_tol &&
              spacetime.max_residual < config.balance_tol;

  res.report = {{"command", "balance"},
                {"scenario", sc->name},
                {"rng-seed", config.rng_seed},
                {"perturb-sigma", config.perturb_sigma},
                {"tolerances",
                 {{"balance", config.balance_tol},
                  {"region", config.region_tol}}},
                {"spatial", spatial.to_json()},
                {"spacetime", spacetime.to_json()}};

  if (sc->region) {
    QuadratureOptions quad;
    quad.order = config.quad_order;
    quad.subcells = config.subcells;
    const AxisSpec& time = sc->chart.chart().axis(0);
    const double t_mid = 0.5 * (time.lo + time.hi);
    const RegionBalanceReport region =
        region_balance(f.density, f.flux, supply, t_mid, *sc->region, quad);
    res.report["region"] = region.to_json();
    pass = pass && region.relative() < config.region_tol;
  }

  res.report["pass"] = pass;
  res.exit_code = pass ? 0 : 1;
  if (!emit_report(config, "balance_report.json", res))
    return config_error("cannot write report into '" + config.out_dir + "'");
  return res;
}

CommandResult cmd_currents(const RunConfig& config) {
  CommandResult res;
  std::optional<Scenario> sc = build_scenario(config, res);
  if (!sc) return res;
  if (!sc->current)
    return config_error("scenario '" + sc->name + "' declares no current");

  res.report = {{"command", "currents"},
                {"scenario", sc->name},
                {"rng-seed", config.rng_seed},
                {"count", config.bump_count},
                {"tolerance", config.current_tol}};

  if (config.bump_count == 0) {
    // nothing was tested; flag the pass as vacuous
    res.report["max_defect"] = 0.0;
    res.report["tests"] = nlohmann::json::array();
    res.report["vacuous"] = true;
    res.report["pass"] = true;
    res.exit_code = 0;
  } else {
    std::mt19937_64 rng(config.rng_seed);
    std::vector<TestForm> probes;
    probes.reserve(static_cast<size_t>(config.bump_count));
    for (int i = 0; i < config.bump_count; ++i)
      probes.push_back(sc->current->make_probe(rng));

    QuadratureOptions quad = sc->current->quad;
    if (config.quad_order_given) quad.order = config.quad_order;
    if (config.subcells_given) quad.subcells = config.subcells;

    const CurrentBalanceReport rep = verify_current_balance(
        sc->current->T, sc->current->S_expected, probes, quad);
    const bool pass = rep.max_defect < config.current_tol;
    res.report.update(rep.to_json());
    res.report["quad"] = {{"order", quad.order}, {"subcells", quad.subcells}};
    res.report["vacuous"] = false;
    res.report["pass"] = pass;
    res.exit_code = pass ? 0 : 1;
  }

  if (!emit_report(config, "currents_report.json", res))
    return config_error("cannot write report into '" + config.out_dir + "'");
  return res;
}

}  // namespace xcal::cli
