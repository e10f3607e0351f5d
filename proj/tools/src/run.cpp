#include "gedge_cli/run.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "gedge/abm.hpp"
#include "gedge/acceptance.hpp"
#include "gedge/asymptotics.hpp"
#include "gedge/cdf_point.hpp"
#include "gedge/error.hpp"
#include "gedge/fredholm.hpp"
#include "gedge/ginibre.hpp"
#include "gedge/walk.hpp"

namespace gedge::cli {
namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

GridSpec default_grid(Command c) {
  switch (c) {
    case Command::cdf: return {-6.0, 3.0, 0.5};
    case Command::mc: return {-4.0, 1.0, 1.0};
    case Command::ginibre: return {-4.0, 3.0, 0.25};
    case Command::abm: return {-3.0, 2.0, 0.25};
    case Command::tails: return {1.5, 4.0, 0.5};
    case Command::verify: return {0.0, 0.0, 1.0};
  }
  return {};
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = to_string(c.command);
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  switch (c.command) {
    case Command::cdf:
      j["t"] = {c.t_grid.lo, c.t_grid.hi, c.t_grid.step};
      j["nodes"] = c.n_nodes;
      break;
    case Command::mc:
      j["t"] = {c.t_grid.lo, c.t_grid.hi, c.t_grid.step};
      j["paths"] = c.n_paths;
      break;
    case Command::ginibre:
      j["t"] = {c.t_grid.lo, c.t_grid.hi, c.t_grid.step};
      j["n"] = c.matrix_n;
      j["samples"] = c.n_samples;
      break;
    case Command::abm:
      j["t"] = {c.t_grid.lo, c.t_grid.hi, c.t_grid.step};
      j["intensity"] = c.intensity;
      j["s"] = c.s;
      j["dt"] = c.dt;
      j["runs"] = c.runs;
      break;
    case Command::tails:
      j["t"] = {c.t_grid.lo, c.t_grid.hi, c.t_grid.step};
      j["window"] = {c.t_lo, c.t_hi};
      j["nodes"] = c.n_nodes;
      break;
    case Command::verify:
      j["tier"] = c.quick ? "quick" : "full";
      break;
  }
  j["format"] = c.format == Format::csv ? "csv" : "json";
  return j;
}

struct Output {
  std::vector<EdgeCdfPoint> records;
  ordered_json summary = ordered_json::object();
  std::vector<std::string> notes;  ///< human-readable lines (CSV comments)
};

void write(const RunConfig& c, const Output& o, std::ostream& out) {
  const std::string seed = std::to_string(c.seed);
  if (c.format == Format::json) {
    ordered_json doc;
    doc["config"] = config_json(c);
    if (!o.summary.empty()) doc["summary"] = o.summary;
    ordered_json rows = ordered_json::array();
    for (const EdgeCdfPoint& p : o.records) {
      rows.push_back({{"t", p.t},
                      {"probability", p.probability},
                      {"std_error", p.error_estimate},
                      {"method", std::string(to_string(p.method))},
                      {"seed", c.seed}});
    }
    doc["records"] = rows;
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# config: " << config_json(c).dump() << '\n';
  for (const std::string& line : o.notes) out << "# " << line << '\n';
  out << "t,probability,std_error,method,seed\n";
  for (const EdgeCdfPoint& p : o.records) {
    out << format_double(p.t) << ',' << format_double(p.probability) << ','
        << format_double(p.error_estimate) << ',' << to_string(p.method) << ',' << seed << '\n';
  }
}

Output run_cdf(const RunConfig& c, const std::vector<double>& grid) {
  Output o;
  o.records = cdf_curve(grid, c.n_nodes, c.workers);
  return o;
}

Output run_mc(const RunConfig& c, const std::vector<double>& grid) {
  WalkConfig cfg;
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  Output o;
  for (double t : grid) o.records.push_back(cdf_mc(t, c.n_paths, cfg));
  return o;
}

Output run_ginibre(const RunConfig& c, const std::vector<double>& grid) {
  const GinibreEnsemble e = run_ginibre_ensemble(c.matrix_n, c.n_samples, c.seed, c.workers);
  Output o;
  o.records = empirical_cdf_points(e.lambda_max, grid, Method::ginibre_empirical);
  o.summary["mean_real_eigenvalues"] = e.real_count.mean;
  o.summary["parity_violations"] = e.parity_violations;
  o.summary["retries"] = e.retries;
  o.notes.push_back("mean real eigenvalue count " + format_double(e.real_count.mean) +
                    ", parity violations " + std::to_string(e.parity_violations));
  return o;
}

Output run_abm(const RunConfig& c, const std::vector<double>& grid, std::ostream& err) {
  AbmConfig cfg;
  cfg.intensity = c.intensity;
  cfg.s = c.s;
  cfg.dt = c.dt;
  cfg.n_runs = c.runs;
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  const RightmostLaw law = rightmost_law(cfg, {});
  for (const std::string& w : law.warnings) err << "warning: " << w << '\n';
  Output o;
  o.records = law.rescaled(grid);
  o.summary["coordinate"] = "x / sqrt(4 s)";
  o.summary["boundary_contaminated"] = law.boundary_contaminated;
  o.summary["empty_runs"] = law.empty_runs;
  o.summary["odd_decrements"] = law.odd_decrements;
  o.notes.push_back("t is the rescaled position x / sqrt(4 s)");
  return o;
}

Output run_tails(const RunConfig& c, const std::vector<double>& grid) {
  const RightTailReport right = right_tail_check(grid, c.n_nodes);
  const TailFitReport left = left_tail_fit(c.t_lo, c.t_hi, c.n_nodes, c.workers);
  Output o;
  for (std::size_t i = 0; i < left.t.size(); ++i) {
    o.records.push_back({left.t[i], std::exp(left.log_probability[i]), Method::fredholm, 0.0});
  }
  for (const RightTailPoint& p : right.points) {
    o.records.push_back({p.t, p.probability, Method::fredholm, 0.0});
  }
  o.summary["left_slope"] = left.slope;
  o.summary["left_slope_std_error"] = left.slope_std_error;
  o.summary["left_endpoint_slope"] = left.endpoint_slope;
  o.summary["log_det_slope"] = left.log_det_slope;
  o.summary["log_det_rate"] = left.log_det_rate;
  o.summary["target_slope"] = left.target_slope;
  o.summary["residual_max"] = left.residual_max;
  o.summary["right_max_ratio"] = right.max_ratio;
  o.summary["right_max_a_t_ratio"] = right.max_a_t_ratio;
  o.notes.push_back("left tail slope " + format_double(left.slope) + " (target " +
                    format_double(left.target_slope) + ", endpoint " +
                    format_double(left.endpoint_slope) + ")");
  o.notes.push_back("right tail max |P - (1 - erfc(t)/4)| e^{2t^2} = " +
                    format_double(right.max_ratio));
  return o;
}

int run_verify(const RunConfig& c, std::ostream& out) {
  AcceptanceOptions opt;
  opt.tier = c.quick ? Tier::quick : Tier::full;
  opt.workers = c.workers;
  if (c.seed_given) opt.seed = c.seed;
  const bool table = c.format == Format::csv;
  if (table) out << "verify (" << (c.quick ? "quick" : "full") << ", seed " << opt.seed << ")\n";
  const auto results = run_acceptance(opt, [&](const CriterionResult& r) {
    if (table) out << format_result(r) << std::endl;
  });
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  if (table) {
    out << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
        << '\n';
  } else {
    ordered_json doc;
    doc["config"] = config_json(c);
    ordered_json rows = ordered_json::array();
    for (const auto& r : results) {
      rows.push_back({{"id", r.id},
                      {"name", r.name},
                      {"passed", r.passed},
                      {"seconds", r.seconds},
                      {"detail", r.detail}});
    }
    doc["criteria"] = rows;
    out << doc.dump(2) << '\n';
  }
  return failed == 0 ? kExitOk : kExitFailure;
}

template <class T>
void positive(T value, const char* name) {
  if (!(value > 0)) throw ConfigError(std::string(name) + " must be positive");
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::cdf: return "cdf";
    case Command::mc: return "mc";
    case Command::ginibre: return "ginibre";
    case Command::abm: return "abm";
    case Command::tails: return "tails";
    case Command::verify: return "verify";
  }
  return "unknown";
}

GridSpec parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw ConfigError("bad grid '" + text + "': expected lo:hi:step or a single value");
    }
    parts.push_back(v);
  }
  if (parts.size() == 1) return {parts[0], parts[0], 1.0};
  if (parts.size() != 3) {
    throw ConfigError("bad grid '" + text + "': expected lo:hi:step or a single value");
  }
  return {parts[0], parts[1], parts[2]};
}

void RunConfig::validate() const {
  if (command != Command::verify) {
    if (!(t_grid.step > 0.0)) throw ConfigError("grid step must be positive");
    if (t_grid.hi < t_grid.lo) throw ConfigError("grid is empty: hi < lo");
    if ((t_grid.hi - t_grid.lo) / t_grid.step > 1e6) throw ConfigError("grid has too many points");
  }
  positive(n_nodes, "--nodes");
  positive(n_paths, "--paths");
  positive(n_samples, "--samples");
  positive(matrix_n, "--n");
  positive(intensity, "--intensity");
  positive(s, "--s");
  positive(dt, "--dt");
  positive(runs, "--runs");
  if (command == Command::tails && !(t_lo < t_hi)) throw ConfigError("--window needs lo < hi");
}

bool parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out) {
  CLI::App app{"Edge law of the largest real eigenvalue of the real Ginibre ensemble", "gedge"};
  app.require_subcommand(1);

  std::string grid_text, window_text = "-12:-6", format_text = "csv";
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;

  auto common = [&](CLI::App* sub) {
    seed_opt = sub->add_option("--seed", seed, "64-bit seed (random if omitted, always echoed)");
    sub->add_option("--workers", config.workers, "worker threads; 0 uses all cores");
    sub->add_option("-o,--output", config.output_path, "output file (default stdout)");
    sub->add_option("--format", format_text, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--t", grid_text, "grid lo:hi:step or a single t");
  };

  struct Sub {
    Command command;
    CLI::App* app;
    CLI::Option* seed;
  };
  std::vector<Sub> subs;

  auto* cdf = app.add_subcommand("cdf", "P(lambda_max < t) from the Fredholm determinant");
  grid(cdf);
  cdf->add_option("--nodes", config.n_nodes, "quadrature nodes");
  common(cdf);
  subs.push_back({Command::cdf, cdf, seed_opt});

  auto* mc = app.add_subcommand("mc", "P(lambda_max < t) from the random-walk Monte Carlo");
  grid(mc);
  mc->add_option("--paths", config.n_paths, "paths per t");
  common(mc);
  subs.push_back({Command::mc, mc, seed_opt});

  auto* gin = app.add_subcommand("ginibre", "empirical law from sampled Ginibre matrices");
  grid(gin);
  gin->add_option("--n", config.matrix_n, "matrix size");
  gin->add_option("--samples", config.n_samples, "number of matrices");
  common(gin);
  subs.push_back({Command::ginibre, gin, seed_opt});

  auto* abm = app.add_subcommand("abm", "rightmost particle of annihilating Brownian motions");
  grid(abm);
  abm->add_option("--intensity", config.intensity, "initial Poisson intensity");
  abm->add_option("--s", config.s, "observation time");
  abm->add_option("--dt", config.dt, "largest time step");
  abm->add_option("--runs", config.runs, "independent runs");
  common(abm);
  subs.push_back({Command::abm, abm, seed_opt});

  auto* tails = app.add_subcommand("tails", "right-tail check and left-tail slope fit");
  grid(tails);
  tails->add_option("--window", window_text, "left-tail window lo:hi");
  tails->add_option("--nodes", config.n_nodes, "quadrature nodes");
  common(tails);
  subs.push_back({Command::tails, tails, seed_opt});

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_flag("--quick", config.quick, "reduced sample sizes");
  common(verify);
  subs.push_back({Command::verify, verify, seed_opt});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return false;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return false;
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    msg << e.what();
    throw ConfigError(msg.str());
  }

  for (const Sub& sub : subs) {
    if (!sub.app->parsed()) continue;
    config.command = sub.command;
    config.seed_given = sub.seed->count() > 0;
  }
  config.t_grid = grid_text.empty() ? default_grid(config.command) : parse_grid(grid_text);
  if (config.command == Command::tails) {
    const GridSpec w = parse_grid(window_text + ":1");
    config.t_lo = w.lo;
    config.t_hi = w.hi;
  }
  config.format = format_text == "json" ? Format::json : Format::csv;
  if (config.seed_given) {
    config.seed = seed;
  } else {
    std::random_device rd;
    config.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  config.validate();
  return true;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!config.output_path.empty() && config.output_path != "-") {
    file.open(config.output_path);
    if (!file) {
      err << "error: cannot open " << config.output_path << " for writing\n";
      return kExitConfig;
    }
    sink = &file;
  }

  try {
    if (config.command == Command::verify) return run_verify(config, *sink);
    const std::vector<double> grid =
        make_grid(config.t_grid.lo, config.t_grid.hi, config.t_grid.step);
    Output o;
    switch (config.command) {
      case Command::cdf: o = run_cdf(config, grid); break;
      case Command::mc: o = run_mc(config, grid); break;
      case Command::ginibre: o = run_ginibre(config, grid); break;
      case Command::abm: o = run_abm(config, grid, err); break;
      case Command::tails: o = run_tails(config, grid); break;
      case Command::verify: break;
    }
    write(config, o, *sink);
  } catch (const NumericalError& e) {
    err << "numerical failure in module " << e.module() << ": " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    if (!parse_args(argc, argv, config, out)) return kExitOk;
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    return run(config, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace gedge::cli
