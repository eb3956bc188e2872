#pragma once

// Command-line front end: configuration (file + flags), the preset
// experiments and CSV emission. run_cli() is the whole program; the `cbt`
// executable only forwards argv to it.

#include <cbt/access_sim.hpp>
#include <cbt/analytic.hpp>
#include <cbt/csv.hpp>
#include <cbt/errors.hpp>
#include <cbt/gossip.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace cbt::cli {

enum class Command { Analytic, Sim, Fig4, Fig5, Fig6, Crossing };
enum class Format { Csv, Tsv };

struct CliConfig {
  Command command{Command::Analytic};
  sim::ScenarioConfig scenario{};
  std::optional<std::string> output;
  bool trace{false};
  Format format{Format::Csv};
  // Explicit sweep points for the presets (n_r, n, or gamma levels).
  std::vector<double> values;
  // Keys set by the config file or a flag; presets leave these alone.
  std::set<std::string> explicit_keys;
};

namespace internal {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::int64_t parse_int(const std::string& key, const std::string& v, std::int64_t min) {
  std::size_t used = 0;
  std::int64_t x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  if (x < min) throw ConfigError(key + ": must be >= " + std::to_string(min));
  return x;
}

inline double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

template <typename T>
T parse_choice(const std::string& key, const std::string& v, const std::map<std::string, T>& choices) {
  auto it = choices.find(v);
  if (it != choices.end()) return it->second;
  std::string allowed;
  for (const auto& [name, _] : choices) allowed += (allowed.empty() ? "" : "|") + name;
  throw ConfigError(key + ": expected one of {" + allowed + "}, got '" + v + "'");
}

struct Setting {
  std::string key;   // config-file key
  std::string flag;  // long flag without dashes
  std::string help;
  bool is_switch{false};
  std::function<void(CliConfig&, const std::string&)> apply;
};

inline const std::vector<Setting>& settings() {
  using sim::ScenarioConfig;
  static const std::vector<Setting> table = [] {
    std::vector<Setting> t;
    auto add = [&](std::string key, std::string help, std::function<void(CliConfig&, const std::string&)> fn,
                   bool is_switch = false) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      t.push_back({std::move(key), std::move(flag), std::move(help), is_switch, std::move(fn)});
    };
    add("n", "secondary users", [](CliConfig& c, const std::string& v) { c.scenario.n = parse_int("--n", v, 2); });
    add("n_r", "requests per span",
        [](CliConfig& c, const std::string& v) { c.scenario.n_r = parse_int("--n-r", v, 0); });
    add("n_v", "vacant blocks per span",
        [](CliConfig& c, const std::string& v) { c.scenario.n_v = parse_int("--n-v", v, 1); });
    add("mu", "slots per span", [](CliConfig& c, const std::string& v) { c.scenario.mu = parse_int("--mu", v, 1); });
    add("phi", "receivers per transmitter",
        [](CliConfig& c, const std::string& v) { c.scenario.phi = parse_int("--phi", v, 1); });
    add("gamma", "target gossip success proportion", [](CliConfig& c, const std::string& v) {
      const double g = parse_real("--gamma", v);
      if (!(g > 0.0 && g <= 1.0)) throw ConfigError("--gamma: must lie in (0, 1]");
      c.scenario.gamma = g;
    });
    add("policy", "scheduling rule {ffs|fair}", [](CliConfig& c, const std::string& v) {
      c.scenario.policy.scheduling = parse_choice<Scheduling>(
          "--policy", v, {{"ffs", Scheduling::FirstVerifiedFirstServed}, {"fair", Scheduling::FairnessGuarantee}});
    });
    add("aggregation", "consensus aggregation {mean|median}", [](CliConfig& c, const std::string& v) {
      c.scenario.policy.aggregation =
          parse_choice<Aggregation>("--aggregation", v, {{"mean", Aggregation::Mean}, {"median", Aggregation::Median}});
    });
    add("mean_norm", "mean normalisation {count|n}", [](CliConfig& c, const std::string& v) {
      c.scenario.policy.normalization = parse_choice<MeanNormalization>(
          "--mean-norm", v, {{"count", MeanNormalization::ByCount}, {"n", MeanNormalization::ByN}});
    });
    add("exclude_observer", "drop the observer's own timestamp {true|false}", [](CliConfig& c, const std::string& v) {
      c.scenario.policy.exclude_observer = parse_bool("--exclude-observer", v);
    });
    add("etiquette", "etiquette for `sim` {lbt|cbt}", [](CliConfig& c, const std::string& v) {
      c.scenario.etiquette =
          parse_choice<sim::Etiquette>("--etiquette", v, {{"lbt", sim::Etiquette::Lbt}, {"cbt", sim::Etiquette::Cbt}});
    });
    add("gossip", "gossip mode {push|pull|hybrid}", [](CliConfig& c, const std::string& v) {
      c.scenario.gossip_mode = parse_choice<gossip::Mode>(
          "--gossip", v, {{"push", gossip::Mode::Push}, {"pull", gossip::Mode::Pull}, {"hybrid", gossip::Mode::Hybrid}});
    });
    add("runs", "independent runs per point",
        [](CliConfig& c, const std::string& v) { c.scenario.runs = parse_int("--runs", v, 1); });
    add("warmup", "spans discarded before measuring",
        [](CliConfig& c, const std::string& v) { c.scenario.warmup_spans = parse_int("--warmup", v, 0); });
    add("spans", "measured spans per run",
        [](CliConfig& c, const std::string& v) { c.scenario.measure_spans = parse_int("--spans", v, 1); });
    add("seed", "base RNG seed", [](CliConfig& c, const std::string& v) {
      c.scenario.seed = static_cast<std::uint64_t>(parse_int("--seed", v, 0));
    });
    add("threads", "worker threads (0 = all cores)", [](CliConfig& c, const std::string& v) {
      c.scenario.threads = static_cast<unsigned>(parse_int("--threads", v, 0));
    });
    add("values", "comma-separated sweep points for the presets", [](CliConfig& c, const std::string& v) {
      c.values.clear();
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) c.values.push_back(parse_real("--values", trim(item)));
      if (c.values.empty()) throw ConfigError("--values: empty list");
    });
    add("output", "output file (default stdout)", [](CliConfig& c, const std::string& v) {
      if (v.empty()) throw ConfigError("--output: empty path");
      c.output = v;
    });
    add("format", "table format {csv|tsv}", [](CliConfig& c, const std::string& v) {
      c.format = parse_choice<Format>("--format", v, {{"csv", Format::Csv}, {"tsv", Format::Tsv}});
    });
    add(
        "trace", "emit per-slot gossip traces (fig4)",
        [](CliConfig& c, const std::string& v) { c.trace = v.empty() ? true : parse_bool("--trace", v); }, true);
    return t;
  }();
  return table;
}

inline const Setting* find_setting(std::string_view key) {
  for (const auto& s : settings()) {
    if (s.key == key) return &s;
  }
  return nullptr;
}

}  // namespace internal

// Applies a `key = value` file on top of `cfg`. Blank lines and lines
// starting with '#' are ignored; anything else must be a known key.
inline void apply_config_file(CliConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string body = internal::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = internal::trim(std::string_view(body).substr(0, eq));
    const std::string value = internal::trim(std::string_view(body).substr(eq + 1));
    const internal::Setting* s = internal::find_setting(key);
    if (!s) throw ConfigError(where + ": unknown key '" + key + "'");
    try {
      s->apply(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
    cfg.explicit_keys.insert(key);
  }
}

inline CliConfig load_config(const std::string& path) {
  CliConfig cfg;
  apply_config_file(cfg, path);
  return cfg;
}

inline std::string_view command_name(Command c) {
  switch (c) {
    case Command::Analytic: return "analytic";
    case Command::Sim: return "sim";
    case Command::Fig4: return "fig4";
    case Command::Fig5: return "fig5";
    case Command::Fig6: return "fig6";
    case Command::Crossing: return "crossing";
  }
  return "?";
}

// Builds the effective configuration: defaults, then the config file, then
// flags, then CBT_SEED if no seed was given anywhere.
inline CliConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Consensus-before-talk spectrum access: analysis, simulation and presets", "cbt"};
  std::string command;
  app.add_option("command", command, "analytic | sim | fig4 | fig5 | fig6 | crossing")
      ->required()
      ->check(CLI::IsMember({"analytic", "sim", "fig4", "fig5", "fig6", "crossing"}));
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");

  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> options;
  for (const auto& s : internal::settings()) {
    if (s.is_switch) {
      options[s.key] = app.add_flag("--" + s.flag, s.help);
    } else {
      options[s.key] = app.add_option("--" + s.flag, raw[s.key], s.help);
    }
  }
  app.parse(argc, argv);

  CliConfig cfg;
  static const std::map<std::string, Command> commands{{"analytic", Command::Analytic}, {"sim", Command::Sim},
                                                       {"fig4", Command::Fig4},         {"fig5", Command::Fig5},
                                                       {"fig6", Command::Fig6},         {"crossing", Command::Crossing}};
  cfg.command = commands.at(command);
  if (!config_path.empty()) apply_config_file(cfg, config_path);
  for (const auto& s : internal::settings()) {
    if (options[s.key]->count() == 0) continue;
    s.apply(cfg, s.is_switch ? std::string{} : raw[s.key]);
    cfg.explicit_keys.insert(s.key);
  }
  if (!cfg.explicit_keys.contains("seed")) {
    if (const char* env = std::getenv("CBT_SEED"); env && *env) {
      cfg.scenario.seed = static_cast<std::uint64_t>(internal::parse_int("CBT_SEED", env, 0));
    }
  }
  return cfg;
}

namespace internal {

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

inline void write_config_header(csv::Writer& w, const CliConfig& cfg) {
  const auto& s = cfg.scenario;
  w.comment("cbt " + std::string(command_name(cfg.command)));
  w.comment("n", std::to_string(s.n));
  w.comment("n_r", std::to_string(s.n_r));
  w.comment("n_v", std::to_string(s.n_v));
  w.comment("mu", std::to_string(s.mu));
  w.comment("phi", std::to_string(s.phi));
  w.comment("gamma", csv::format_real(s.gamma));
  w.comment("policy", to_string(s.policy.scheduling));
  w.comment("aggregation", to_string(s.policy.aggregation));
  w.comment("mean_norm", to_string(s.policy.normalization));
  w.comment("exclude_observer", yes_no(s.policy.exclude_observer));
  w.comment("etiquette", sim::to_string(s.etiquette));
  const char* modes[] = {"push", "pull", "hybrid"};
  w.comment("gossip", modes[static_cast<int>(s.gossip_mode)]);
  w.comment("runs", std::to_string(s.runs));
  w.comment("warmup", std::to_string(s.warmup_spans));
  w.comment("spans", std::to_string(s.measure_spans));
  w.comment("seed", std::to_string(s.seed));
  if (!cfg.values.empty()) {
    std::string joined;
    for (double v : cfg.values) joined += (joined.empty() ? "" : ",") + csv::format_real(v);
    w.comment("values", joined);
  }
}

inline void set_default(CliConfig& cfg, const std::string& key, auto value, auto& field) {
  if (!cfg.explicit_keys.contains(key)) field = value;
}

inline const std::vector<std::string> sweep_header{"axis_value",   "lbt_norm_sim", "lbt_norm_analytic",
                                                   "cbt_norm_sim", "cbt_norm_analytic", "lbt_divergent",
                                                   "runs",         "seed"};

inline void write_sweep_rows(csv::Writer& w, const std::vector<sim::SweepRow>& rows, const sim::ScenarioConfig& s) {
  using csv::Writer;
  w.row(sweep_header);
  for (const auto& r : rows) {
    const double lbt_sim = r.lbt.divergent ? std::numeric_limits<double>::infinity() : r.lbt.normalized_mean;
    const double cbt_sim = r.cbt.divergent ? std::numeric_limits<double>::infinity() : r.cbt.normalized_mean;
    w.row({Writer::cell(r.value), Writer::cell(lbt_sim), Writer::cell(r.lbt_analytic.normalized()),
           Writer::cell(cbt_sim), Writer::cell(r.cbt_analytic.normalized()), Writer::cell(r.lbt.divergent),
           Writer::cell(s.runs), Writer::cell(s.seed)});
  }
}

inline std::vector<double> integer_range(std::int64_t lo, std::int64_t hi) {
  std::vector<double> v;
  for (std::int64_t i = lo; i <= hi; ++i) v.push_back(static_cast<double>(i));
  return v;
}

inline void run_analytic(csv::Writer& w, const CliConfig& cfg) {
  using csv::Writer;
  const auto& s = cfg.scenario;
  const auto lbt = sim::analytic_lbt(s);
  std::optional<double> root;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  if (s.n_v >= 2) threshold = analytic::lbt_convergence_threshold(s.n_v);
  if (s.n_r >= 1 && s.n_v >= 2 && s.n_r <= s.n_v) root = analytic::lbt_fixed_point({s.n_r, s.n_v, s.mu});
  const bool gossip_defined = s.gamma < 1.0;
  const analytic::CbtParams c{s.n, s.n_r, s.phi, s.gamma, s.mu};
  const double inf = std::numeric_limits<double>::infinity();
  const double delay = gossip_defined ? analytic::gossip_dissemination_delay(c) : inf;
  const double delay_exact =
      gossip_defined ? analytic::gossip_dissemination_delay(c, analytic::DelayForm::ExactInversion) : inf;
  const auto cbt = sim::analytic_cbt(s);
  w.row({"n_r", "lbt_threshold", "lbt_fixed_point", "lbt_latency", "lbt_norm", "lbt_divergent", "gossip_delay",
         "gossip_delay_exact", "cbt_latency", "cbt_norm"});
  w.row({Writer::cell(s.n_r), Writer::cell(threshold), Writer::cell(root.value_or(inf)), Writer::cell(lbt.slots()),
         Writer::cell(lbt.normalized()), Writer::cell(lbt.is_divergent()), Writer::cell(delay),
         Writer::cell(delay_exact), Writer::cell(cbt.slots()), Writer::cell(cbt.normalized())});
}

inline void run_sim(csv::Writer& w, const CliConfig& cfg) {
  using csv::Writer;
  const auto& s = cfg.scenario;
  if (s.n_r < 1) throw ConfigError("--n-r: must be >= 1 for a simulation");
  const auto report = sim::run_scenario(s);
  const auto analytic = s.etiquette == sim::Etiquette::Lbt ? sim::analytic_lbt(s) : sim::analytic_cbt(s);
  w.row({"etiquette", "mean", "norm_sim", "norm_analytic", "divergent", "divergent_runs", "runs", "samples",
         "max_backlog", "seed"});
  w.row({Writer::cell(sim::to_string(s.etiquette)), Writer::cell(report.mean), Writer::cell(report.normalized_mean),
         Writer::cell(analytic.normalized()), Writer::cell(report.divergent), Writer::cell(report.divergent_runs),
         Writer::cell(report.runs_completed), Writer::cell(static_cast<std::int64_t>(report.samples.size())),
         Writer::cell(report.max_backlog), Writer::cell(s.seed)});
}

inline void run_fig4(csv::Writer& w, const CliConfig& cfg, std::ostream* trace) {
  using csv::Writer;
  const auto& s = cfg.scenario;
  std::vector<double> levels = cfg.values;
  if (levels.empty()) levels = {0.5, 0.9, 0.95, 0.98, 0.99, 0.995, 0.996, 0.997, 0.998, 0.999, 0.9995, 0.9999, 1.0};
  for (double g : levels) {
    if (!(g > 0.0 && g <= 1.0)) throw ConfigError("--values: gamma levels must lie in (0, 1]");
  }
  const gossip::GossipConfig g{s.n, s.phi, s.gossip_mode, s.hybrid_switch, s.activation};
  const auto summary =
      gossip::run_dissemination(g, levels, static_cast<std::size_t>(s.runs), s.seed, trace != nullptr, s.threads);
  w.row({"gamma", "holders", "sim_mean", "sim_std", "sim_min", "sim_max", "analytic", "analytic_exact", "runs",
         "seed"});
  for (const auto& lv : summary.levels) {
    double a = std::numeric_limits<double>::infinity();
    double exact = a;
    if (lv.gamma < 1.0) {
      const analytic::CbtParams c{s.n, s.n_r, s.phi, lv.gamma, s.mu};
      a = analytic::gossip_dissemination_delay(c);
      exact = analytic::gossip_dissemination_delay(c, analytic::DelayForm::ExactInversion);
    }
    w.row({Writer::cell(lv.gamma), Writer::cell(lv.holders), Writer::cell(lv.mean), Writer::cell(lv.stddev),
           Writer::cell(static_cast<std::int64_t>(lv.min)), Writer::cell(static_cast<std::int64_t>(lv.max)),
           Writer::cell(a), Writer::cell(exact), Writer::cell(s.runs), Writer::cell(s.seed)});
  }
  if (trace) gossip::write_trace_csv(*trace, summary);
}

inline std::vector<std::int64_t> preset_mus(const CliConfig& cfg) {
  if (cfg.explicit_keys.contains("mu")) return {cfg.scenario.mu};
  return {1000, 5000, 10000};
}

inline void run_fig5(csv::Writer& w, const CliConfig& cfg) {
  const std::vector<double> points = cfg.values.empty() ? integer_range(1, 40) : cfg.values;
  for (std::int64_t mu : preset_mus(cfg)) {
    sim::ScenarioConfig s = cfg.scenario;
    s.mu = mu;
    w.comment("block mu", std::to_string(mu));
    write_sweep_rows(w, sim::sweep(s, sim::SweepAxis::NR, points), s);
  }
}

inline void run_fig6(csv::Writer& w, const CliConfig& cfg) {
  const std::vector<double> points =
      cfg.values.empty() ? std::vector<double>{100, 200, 500, 1000, 2000, 5000, 10000} : cfg.values;
  write_sweep_rows(w, sim::sweep(cfg.scenario, sim::SweepAxis::N, points), cfg.scenario);
}

inline void run_crossing(csv::Writer& w, const CliConfig& cfg) {
  using csv::Writer;
  const auto& s = cfg.scenario;
  if (s.n_v < 2) throw ConfigError("--n-v: must be >= 2 for the crossing analysis");
  if (!(s.gamma < 1.0)) throw ConfigError("--gamma: must be < 1 for the crossing analysis");
  w.row({"mu", "crossing_n_r", "lbt_threshold", "n", "n_v", "phi", "gamma"});
  for (std::int64_t mu : preset_mus(cfg)) {
    const auto cross = analytic::crossing_point({s.n, s.n_v, s.phi, s.gamma, mu, 1, s.n_v});
    w.row({Writer::cell(mu), cross ? Writer::cell(*cross) : std::string("none"),
           Writer::cell(analytic::lbt_convergence_threshold(s.n_v)), Writer::cell(s.n), Writer::cell(s.n_v),
           Writer::cell(s.phi), Writer::cell(s.gamma)});
  }
}

// Writes `content` to `path` via a temporary file so a failed run never
// leaves a partial output behind.
inline void write_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("--output: cannot write '" + path + "'");
    out << content;
    if (!out.flush()) throw ConfigError("--output: cannot write '" + path + "'");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace internal

// Applies preset defaults (anything the user did not set) and validates.
inline void finalize_config(CliConfig& cfg) {
  auto& s = cfg.scenario;
  using internal::set_default;
  switch (cfg.command) {
    case Command::Fig4:
      set_default(cfg, "n", std::int64_t{1000}, s.n);
      set_default(cfg, "phi", std::int64_t{1}, s.phi);
      break;
    case Command::Fig5:
      set_default(cfg, "n", std::int64_t{1000}, s.n);
      set_default(cfg, "n_v", std::int64_t{100}, s.n_v);
      set_default(cfg, "phi", std::int64_t{1}, s.phi);
      set_default(cfg, "gamma", 0.999, s.gamma);
      break;
    case Command::Fig6:
      set_default(cfg, "n_r", std::int64_t{10}, s.n_r);
      set_default(cfg, "mu", std::int64_t{2500}, s.mu);
      set_default(cfg, "n_v", std::int64_t{100}, s.n_v);
      set_default(cfg, "phi", std::int64_t{1}, s.phi);
      set_default(cfg, "gamma", 0.999, s.gamma);
      break;
    default:
      break;
  }
  try {
    s.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

// Exit codes: 0 success, 1 configuration or usage error, 2 runtime error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CliConfig cfg;
  try {
    cfg = parse_args(argc, argv);
    finalize_config(cfg);
  } catch (const CLI::CallForHelp&) {
    CLI::App app{"cbt"};
    out << "usage: cbt {analytic|sim|fig4|fig5|fig6|crossing} [--flag value ...]\n";
    for (const auto& s : internal::settings()) out << "  --" << s.flag << "  " << s.help << '\n';
    out << "  --config  key = value configuration file\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    std::ostringstream body;
    std::ostringstream trace;
    csv::Writer w(body, cfg.format == Format::Tsv ? '\t' : ',');
    internal::write_config_header(w, cfg);
    switch (cfg.command) {
      case Command::Analytic: internal::run_analytic(w, cfg); break;
      case Command::Sim: internal::run_sim(w, cfg); break;
      case Command::Fig4: internal::run_fig4(w, cfg, cfg.trace ? &trace : nullptr); break;
      case Command::Fig5: internal::run_fig5(w, cfg); break;
      case Command::Fig6: internal::run_fig6(w, cfg); break;
      case Command::Crossing: internal::run_crossing(w, cfg); break;
    }
    if (cfg.output) {
      internal::write_atomically(*cfg.output, body.str());
      if (cfg.trace) internal::write_atomically(*cfg.output + ".trace.csv", trace.str());
    } else {
      out << body.str();
      if (cfg.trace) out << '\n' << trace.str();
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace cbt::cli
