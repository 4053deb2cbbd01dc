#include "rpcoh/cli.hpp"

#include "rpcoh/coherence.hpp"
#include "rpcoh/io.hpp"
#include "rpcoh/selfcheck.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace rpcoh {

namespace {

constexpr double kPi = std::numbers::pi;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "name",   "out",     "input",   "nuclei", "hyperfine", "omega",       "phi",    "J",
      "larmor", "engine",  "kd",      "dt",     "t_max",     "nphi",        "epsilon", "samples",
      "seed",   "threads", "a_xx",    "a_yy",   "a_zz",      "j_range",     "stride", "bins",
      "exchange_kd", "j_bin_width", "j_band"};
  return keys;
}

bool is_hyperfine_key(const std::string& key) {
  if (key.rfind("hyperfine_", 0) != 0 || key.size() == 10) return false;
  return key.find_first_not_of("0123456789", 10) == std::string::npos;
}

std::size_t count_value(const ConfigFile& f, const std::string& key, std::size_t minimum) {
  const double v = f.number(key);
  if (!std::isfinite(v) || v != std::floor(v) || v < static_cast<double>(minimum) || v > 9.0e15) {
    throw ConfigError("config key '" + key + "' must be an integer >= " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(v);
}

ParameterRange range_value(const ConfigFile& f, const std::string& key) {
  const std::vector<double> v = f.numbers(key);
  if (v.size() != 2) throw ConfigError("config key '" + key + "' must be [lo, hi]");
  return {v[0], v[1]};
}

HyperfineTensor tensor_value(const ConfigFile& f, const std::string& key) {
  const std::vector<double> v = f.numbers(key);
  HyperfineTensor a = HyperfineTensor::Zero();
  if (v.size() == 3) {
    a.diagonal() << v[0], v[1], v[2];
  } else if (v.size() == 9) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = v[static_cast<std::size_t>(3 * i + j)];
  } else {
    throw ConfigError("config key '" + key + "' needs 3 (diagonal) or 9 (row-major) entries");
  }
  return a;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw ConfigError("failed writing '" + path.string() + "'");
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  fn(s);
  return s.str();
}

std::filesystem::path output_path(const RunConfig& c, const std::string& suffix) {
  return c.out / (c.name + suffix);
}

std::string trajectory_script(const std::string& csv, const std::string& png) {
  return "# p_S(t) and C(t) from the trajectory CSV\n"
         "set datafile separator ','\n"
         "set terminal pngcairo size 800,500\n"
         "set output '" + png + "'\n"
         "set xlabel 'kt'\n"
         "set yrange [0:1.05]\n"
         "set key outside\n"
         "plot '" + csv + "' using 1:3 skip 1 with lines title 'p_S', \\\n"
         "     '" + csv + "' using 1:4 skip 1 with lines title 'C'\n";
}

std::string sweep_script(const std::string& csv, const std::string& png) {
  return "# singlet yield against field angle\n"
         "set datafile separator ','\n"
         "set terminal pngcairo size 800,500\n"
         "set output '" + png + "'\n"
         "set xlabel 'phi (rad)'\n"
         "set ylabel 'Y_S'\n"
         "plot '" + csv + "' using 1:2 skip 1 with linespoints title 'Y_S'\n";
}

std::string ensemble_script(const RunConfig& c, const std::string& csv, const std::string& hist,
                            const std::string& exchange) {
  std::string kd_list;
  for (double kd : c.ensemble.dephasing_rates) kd_list += (kd_list.empty() ? "" : " ") + format_number(kd);
  std::string s =
      "# scatter of mean coherence against the figure of merit, yield histograms\n"
      "# and per-J-bin correlations\n"
      "set datafile separator ','\n"
      "set terminal pngcairo size 800,600\n"
      "rates = '" + kd_list + "'\n"
      "set output '" + c.name + "_scatter.png'\n"
      "set xlabel 'C_bar'\n"
      "set ylabel 'delta Y_S'\n"
      "plot for [kd in rates] '" + csv + "' using ($2 == kd ? $9 : 1/0):8 skip 1 with points pt 7 ps 0.3 "
      "title sprintf('K_d = %s', kd)\n"
      "set output '" + c.name + "_hist.png'\n"
      "set xlabel 'yield'\n"
      "set ylabel 'count'\n"
      "set style fill transparent solid 0.4\n"
      "plot for [kd in rates] '" + hist + "' using ($1 == kd ? ($2 + $3) / 2 : 1/0):4 skip 1 with boxes "
      "title sprintf('Y_S, K_d = %s', kd)\n"
      "set output '" + c.name + "_exchange.png'\n"
      "set xlabel 'J (bin centre)'\n"
      "set ylabel 'Pearson r'\n"
      "plot '" + exchange + "' using (($1 + $2) / 2):4 skip 1 with linespoints title 'r(delta Y_S, C_bar)'\n";
  return s;
}

EvolutionParams evolution_for(const RunConfig& c, const Operator& h) {
  EvolutionParams p = EvolutionParams::defaults(h, c.dephasing.front(), c.engine);
  if (c.t_max) p.t_max = *c.t_max;
  if (c.dt) p.dt = *c.dt;
  p.validate();
  return p;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const Operator h = hamiltonian_for(c.spec);
  const EvolutionParams p = evolution_for(c, h);
  EvolutionParams run = p;
  run.keep_states = false;
  const Trajectory traj = propagate(h, initial_state(c.spec.system), run);

  const auto csv = output_path(c, "_trajectory.csv");
  write_file(csv, render([&](std::ostream& s) { write_trajectory_csv(s, traj); }));
  write_file(output_path(c, ".gp"),
             trajectory_script(csv.filename().string(), c.name + "_trajectory.png"));

  double max_c = 0.0;
  for (double v : traj.coherence) max_c = std::max(max_c, v);
  const MeanCoherence cbar = mean_coherence(traj, p.k);
  out << "trajectory: " << traj.size() << " points, dt = " << format_number(p.dt)
      << ", t_max = " << format_number(p.t_max) << '\n'
      << "final p_S = " << format_number(traj.singlet_probability.back()) << '\n'
      << "max C = " << format_number(max_c) << '\n'
      << "C_bar = " << format_number(cbar.value) << (cbar.truncated ? " (horizon too short; truncated)" : "")
      << '\n'
      << "wrote " << csv.string() << '\n';
  return 0;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  if (c.spec.larmor_mode()) throw ModeError("sweep needs a hyperfine-mode system, not a Larmor pair");
  const Operator h = build_hamiltonian(c.spec);
  const EvolutionParams p = evolution_for(c, h);
  const SweepResult r = angular_sweep(c.spec, p, c.sweep);

  const auto csv = output_path(c, "_sweep.csv");
  write_file(csv, render([&](std::ostream& s) { write_sweep_csv(s, r); }));
  write_file(output_path(c, ".gp"), sweep_script(csv.filename().string(), c.name + "_sweep.png"));
  const nlohmann::json summary{{"delta_Y_S", r.delta_yield},
                               {"phi_star", r.phi_star},
                               {"n_phi", c.sweep.n_phi},
                               {"epsilon", c.sweep.epsilon},
                               {"K_d", p.dephasing}};
  write_file(output_path(c, "_sweep.json"), summary.dump(2) + "\n");
  out << "delta_Y_S = " << format_number(r.delta_yield) << '\n'
      << "phi_star = " << format_number(r.phi_star) << '\n'
      << "wrote " << csv.string() << '\n';
  return 0;
}

void write_analysis(const RunConfig& c, std::span<const EnsembleRecord> records, std::ostream& out) {
  const EnsembleStats stats = compute_stats(records, c.bins, c.exchange_dephasing, c.exchange);
  write_file(output_path(c, "_stats.txt"), render([&](std::ostream& s) { write_stats_report(s, stats); }));
  write_file(output_path(c, "_stats.json"), stats_to_json(stats).dump(2) + "\n");

  const auto hist = output_path(c, "_hist.csv");
  write_file(hist, render([&](std::ostream& s) {
               s << "K_d,bin_lo,bin_hi,count_Y_S,count_Y_T\n";
               for (const auto& d : stats.per_dephasing) {
                 const std::size_t n = d.singlet_hist.counts.size();
                 for (std::size_t b = 0; b < n; ++b) {
                   const double w = (d.singlet_hist.hi - d.singlet_hist.lo) / static_cast<double>(n);
                   s << format_number(d.dephasing) << ',' << format_number(d.singlet_hist.lo + w * b) << ','
                     << format_number(d.singlet_hist.lo + w * (b + 1)) << ',' << d.singlet_hist.counts[b] << ','
                     << d.triplet_hist.counts[b] << '\n';
                 }
               }
             }));
  const auto exchange = output_path(c, "_exchange.csv");
  write_file(exchange, render([&](std::ostream& s) {
               s << "J_lo,J_hi,count,pearson,mean_delta_Y_S\n";
               if (!stats.exchange) return;
               for (const auto& b : stats.exchange->bins) {
                 s << format_number(b.lo) << ',' << format_number(b.hi) << ',' << b.count << ','
                   << (b.correlation ? format_number(*b.correlation) : "nan") << ','
                   << format_number(b.mean_delta_yield) << '\n';
               }
             }));
  write_stats_report(out, stats);
}

int cmd_ensemble(const RunConfig& c, std::ostream& out, std::ostream& err) {
  int last_decile = -1;
  const EnsembleResult result = run_ensemble(c.ensemble, [&](std::size_t done, std::size_t total) {
    const int decile = static_cast<int>(10 * done / total);
    if (decile != last_decile) {
      last_decile = decile;
      err << "ensemble: " << done << "/" << total << " samples\n" << std::flush;
    }
  });
  const auto csv = output_path(c, "_ensemble.csv");
  write_file(csv, render([&](std::ostream& s) { write_ensemble_csv(s, result.records); }));
  write_file(output_path(c, ".gp"),
             ensemble_script(c, csv.filename().string(), c.name + "_hist.csv", c.name + "_exchange.csv"));
  out << "records: " << result.records.size() << ", dropped (numerical failure): " << result.failed << '\n';
  write_analysis(c, result.records, out);
  out << "wrote " << csv.string() << '\n';
  return 0;
}

int cmd_analyze(const RunConfig& c, std::ostream& out) {
  if (!c.input) throw ConfigError("analyze needs an input CSV (--input or key 'input')");
  std::ifstream in(*c.input, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + c.input->string() + "'");
  const std::vector<EnsembleRecord> records = read_ensemble_csv(in);
  RunConfig with_rates = c;
  with_rates.ensemble.dephasing_rates = dephasing_values(records);
  write_file(output_path(c, ".gp"), ensemble_script(with_rates, c.input->filename().string(),
                                                     c.name + "_hist.csv", c.name + "_exchange.csv"));
  write_analysis(c, records, out);
  return 0;
}

int cmd_oracle(std::ostream& out) {
  bool all = true;
  for (const OracleResult& r : run_oracle_suites()) {
    all = all && r.passed();
    out << (r.passed() ? "pass  " : "FAIL  ") << r.name << ": max error " << format_number(r.max_error)
        << " (tolerance " << format_number(r.tolerance) << ", " << r.cases << " cases)\n";
  }
  if (!all) throw OracleFailure("one or more self-checks failed");
  out << "all self-checks passed\n";
  return 0;
}

}  // namespace

Mode parse_mode(const std::string& text) {
  if (text == "simulate") return Mode::Simulate;
  if (text == "sweep") return Mode::Sweep;
  if (text == "ensemble") return Mode::Ensemble;
  if (text == "analyze") return Mode::Analyze;
  if (text == "oracle") return Mode::Oracle;
  throw ConfigError("unknown mode '" + text + "' (expected simulate, sweep, ensemble, analyze or oracle)");
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Simulate: return "simulate";
    case Mode::Sweep: return "sweep";
    case Mode::Ensemble: return "ensemble";
    case Mode::Analyze: return "analyze";
    case Mode::Oracle: break;
  }
  return "oracle";
}

void RunConfig::validate() const {
  if (name.empty() || name.find('/') != std::string::npos) throw ConfigError("name must be a plain file stem");
  for (double kd : dephasing) {
    if (!(kd >= 0.0) || !std::isfinite(kd)) throw ConfigError("K_d must be finite and >= 0");
  }
  switch (mode) {
    case Mode::Simulate:
    case Mode::Sweep:
      if (dephasing.size() != 1) throw ConfigError(mode_name(mode) + " takes a single K_d value");
      if (engine == Engine::Haberkorn && dephasing.front() != 0.0) {
        throw ConfigError("the haberkorn engine has no dephasing; use engine = \"dephasing\" for K_d > 0");
      }
      spec.validate();
      if (mode == Mode::Sweep) {
        if (spec.larmor_mode()) throw ConfigError("sweep needs a hyperfine-mode system, not a Larmor pair");
        sweep.epsilon_steps();
      }
      if (dt && !(*dt > 0.0)) throw ConfigError("dt must be positive");
      if (t_max && !(*t_max > 0.0)) throw ConfigError("t_max must be positive");
      break;
    case Mode::Ensemble:
      ensemble.validate();
      [[fallthrough]];
    case Mode::Analyze:
      if (bins < 2) throw ConfigError("histograms need at least 2 bins");
      if (!(exchange.bin_width > 0.0) || !(exchange.j_hi > exchange.j_lo) || !(exchange.band > 0.0)) {
        throw ConfigError("exchange binning needs j_hi > j_lo, positive bin width and band");
      }
      if (mode == Mode::Analyze && !input) throw ConfigError("analyze needs an input CSV (--input or key 'input')");
      break;
    case Mode::Oracle:
      break;
  }
}

RunConfig run_config_from(const ConfigFile& f, Mode mode) {
  for (const auto& [key, value] : f.values()) {
    if (!known_keys().count(key) && !is_hyperfine_key(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig c;
  c.mode = mode;
  if (f.contains("name")) c.name = f.string("name");
  if (f.contains("out")) c.out = f.string("out");
  if (f.contains("input")) c.input = f.string("input");

  // System.
  if (f.contains("larmor")) {
    const std::vector<double> w = f.numbers("larmor");
    if (w.size() != 2) throw ConfigError("config key 'larmor' must be [omega1, omega2]");
    c.spec = HamiltonianSpec::fictitious(w[0], w[1]);
    if (f.contains("nuclei") || f.contains("hyperfine")) {
      throw ConfigError("a Larmor pair has no nuclei; drop 'nuclei' and 'hyperfine'");
    }
  } else {
    c.spec.system = f.contains("nuclei") ? SpinSystem::from_spins(f.numbers("nuclei")) : SpinSystem::single_proton();
  }
  if (f.contains("hyperfine")) c.spec.hyperfine[0] = tensor_value(f, "hyperfine");
  for (const auto& [key, value] : f.values()) {
    if (!is_hyperfine_key(key)) continue;
    const std::size_t m = std::stoul(key.substr(10));
    if (m == 0) throw ConfigError("nuclei are numbered from 1 in '" + key + "'");
    if (c.spec.hyperfine.count(m - 1)) throw ConfigError("hyperfine tensor for nucleus " + std::to_string(m) + " given twice");
    c.spec.hyperfine[m - 1] = tensor_value(f, key);
  }
  const bool ensemble_like = mode == Mode::Ensemble || mode == Mode::Analyze;
  if (f.contains("omega")) c.spec.omega = f.number("omega");
  if (f.contains("phi")) c.spec.phi = f.number("phi");
  if (f.contains("J")) c.spec.exchange = f.number("J");

  // Evolution.
  if (f.contains("engine")) {
    const std::string e = f.string("engine");
    if (e == "dephasing") c.engine = Engine::Dephasing;
    else if (e == "haberkorn") c.engine = Engine::Haberkorn;
    else throw ConfigError("engine must be \"dephasing\" or \"haberkorn\", got \"" + e + "\"");
  }
  if (ensemble_like) c.dephasing = c.ensemble.dephasing_rates;
  if (f.contains("kd")) c.dephasing = f.numbers("kd");
  if (f.contains("dt")) c.dt = f.number("dt");
  if (f.contains("t_max")) c.t_max = f.number("t_max");

  // Angular sweep: epsilon defaults to one grid step.
  if (f.contains("nphi")) c.sweep.n_phi = count_value(f, "nphi", 1);
  c.sweep.epsilon = f.contains("epsilon") ? f.number("epsilon") : kPi / static_cast<double>(c.sweep.n_phi);

  // Ensemble.
  EnsembleConfig& e = c.ensemble;
  e.dephasing_rates = c.dephasing;
  if (f.contains("samples")) e.samples = count_value(f, "samples", 1);
  if (f.contains("seed")) e.seed = count_value(f, "seed", 0);
  if (f.contains("threads")) e.threads = static_cast<unsigned>(count_value(f, "threads", 0));
  if (f.contains("a_xx")) e.a_xx = range_value(f, "a_xx");
  if (f.contains("a_yy")) e.a_yy = range_value(f, "a_yy");
  if (f.contains("a_zz")) e.a_zz = range_value(f, "a_zz");
  if (f.contains("j_range")) e.exchange = range_value(f, "j_range");
  if (f.contains("stride")) e.observable_stride = static_cast<int>(count_value(f, "stride", 1));
  e.omega = f.contains("omega") ? f.number("omega") : 1.0;
  e.sweep = c.sweep;

  // Statistics.
  if (f.contains("bins")) c.bins = count_value(f, "bins", 2);
  if (f.contains("exchange_kd")) c.exchange_dephasing = f.number("exchange_kd");
  c.exchange.j_lo = e.exchange.lo;
  c.exchange.j_hi = e.exchange.hi;
  if (f.contains("j_bin_width")) c.exchange.bin_width = f.number("j_bin_width");
  if (f.contains("j_band")) c.exchange.band = f.number("j_band");

  c.validate();
  return c;
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Numerical: return 3;
    case ErrorKind::Oracle: break;
  }
  return 4;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singlet-triplet coherence of radical pairs: simulations, compass sweeps and ensembles"};
  std::string mode_text;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir, input, name, kd;
  std::optional<unsigned> threads;
  std::optional<std::size_t> samples, nphi;
  std::optional<double> epsilon;

  app.add_option("mode", mode_text, "simulate | sweep | ensemble | analyze | oracle")->required();
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--seed", seed, "ensemble seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--kd", kd, "dephasing rate(s) in units of k, comma separated");
  app.add_option("--samples", samples, "ensemble size");
  app.add_option("--nphi", nphi, "angular grid points over [0, pi)");
  app.add_option("--epsilon", epsilon, "angular offset in radians (multiple of pi/nphi)");
  app.add_option("--input", input, "ensemble CSV to analyze");
  app.add_option("--name", name, "output file stem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    const Mode mode = parse_mode(mode_text);
    if (mode == Mode::Oracle) return cmd_oracle(out);

    ConfigFile file = config_path.empty() ? ConfigFile{} : ConfigFile::load(config_path);
    // Flags override file keys.
    if (seed) file.set("seed", static_cast<double>(*seed));
    if (out_dir) file.set("out", *out_dir);
    if (threads) file.set("threads", static_cast<double>(*threads));
    if (samples) file.set("samples", static_cast<double>(*samples));
    if (nphi) file.set("nphi", static_cast<double>(*nphi));
    if (epsilon) file.set("epsilon", *epsilon);
    if (input) file.set("input", *input);
    if (name) file.set("name", *name);
    if (kd) {
      std::istringstream list("kd = [" + *kd + "]");
      file.set("kd", ConfigFile::parse(list).numbers("kd"));
    }
    const RunConfig config = run_config_from(file, mode);
    std::filesystem::create_directories(config.out);

    switch (mode) {
      case Mode::Simulate: return cmd_simulate(config, out);
      case Mode::Sweep: return cmd_sweep(config, out);
      case Mode::Ensemble: return cmd_ensemble(config, out, err);
      case Mode::Analyze: return cmd_analyze(config, out);
      case Mode::Oracle: break;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace rpcoh
