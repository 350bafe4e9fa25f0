#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fedstrat/round_log.hpp"
#include "fedstrat/scenario.hpp"
#include "fedstrat/simulation.hpp"
#include "manifest.hpp"
#include "plot.hpp"

namespace fedstrat::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Config problems that map to exit code 2.
struct LoadError {
  std::string message;
};

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError{"cannot open config file " + path.string()};
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw LoadError{path.string() + ": " + e.what()};
  }
}

ScenarioConfig to_scenario(const json& j, const Options& opts) {
  try {
    auto cfg = scenario_from_json(j);
    if (opts.seed_override) cfg.seed = *opts.seed_override;
    if (opts.timing) cfg.record_wall_time = true;
    validate(cfg);
    return cfg;
  } catch (const ConfigError& e) {
    throw LoadError{std::string("invalid config: ") + e.what()};
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void print_summary(std::ostream& os, const std::string& label, const RunSummary& s) {
  os << std::fixed << std::setprecision(2) << label << ": final_accuracy "
     << 100.0 * s.final_accuracy << "%  std_last10 " << 100.0 * s.std_last10
     << "  selection FedAvg " << s.selection_pct[0] << "% / Median " << s.selection_pct[1]
     << "% / Krum " << s.selection_pct[2] << "%  mean_cost " << std::setprecision(3)
     << s.mean_cost << '\n';
  os.unsetf(std::ios::floatfield);
}

// Executes one validated scenario into its run directory.
RunSummary execute(const ScenarioConfig& cfg, const std::string& config_path,
                   const Options& opts) {
  const std::string canonical = to_json(cfg).dump(2) + "\n";
  RunManifest manifest{config_path, opts.out_root / cfg.label, cfg.label,
                       git_blob_hash(canonical)};

  if (auto existing = read_manifest(manifest.output_dir);
      existing && existing->config_hash != manifest.config_hash && !opts.force)
    throw std::runtime_error("refusing to overwrite " + manifest.output_dir.string() +
                             ": it holds results of a different config (hash " +
                             existing->config_hash + "); use --force or another label");

  const auto result = run_scenario(cfg, opts.threads);

  fs::create_directories(manifest.output_dir);
  std::ostringstream csv;
  write_rounds_csv(csv, result.rows);
  write_file(manifest.output_dir / "rounds.csv", csv.str());
  write_file(manifest.output_dir / "summary.json", to_json(result.summary).dump(2) + "\n");
  write_file(manifest.output_dir / "config.json", canonical);
  write_file(manifest.output_dir / "manifest.json", to_json(manifest).dump(2) + "\n");
  return result.summary;
}

template <typename Fn>
int guarded(const Options& opts, Fn&& fn) {
  try {
    return fn();
  } catch (const LoadError& e) {
    *opts.err << "error: " << e.message << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    *opts.err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

json parse_sweep_value(const std::string& v) {
  auto j = json::parse(v, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || j.is_structured()) return v;
  return j;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  return s;
}

}  // namespace

fs::path default_out_root() {
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return "runs";
}

int cmd_run(const fs::path& config_file, const Options& opts) {
  return guarded(opts, [&] {
    const auto cfg = to_scenario(load_json(config_file), opts);
    const auto summary = execute(cfg, config_file.string(), opts);
    print_summary(*opts.out, cfg.label, summary);
    return kExitOk;
  });
}

int cmd_sweep(const fs::path& config_file, const std::string& key,
              const std::vector<std::string>& values, const Options& opts) {
  return guarded(opts, [&] {
    if (values.empty()) throw LoadError{"sweep: no values given"};
    const json base = load_json(config_file);
    const std::string base_label = base.value("label", ScenarioConfig{}.label);

    std::string pointer = "/" + key;
    for (char& c : pointer)
      if (c == '.') c = '/';

    // Validate every variant before running any of them.
    std::vector<ScenarioConfig> variants;
    for (const auto& v : values) {
      json j = base;
      try {
        set_dotted(j, key, parse_sweep_value(v));
        if (!j.at(json::json_pointer(pointer)).is_primitive())
          throw ConfigError(key, "sweep key must name a scalar field");
      } catch (const ConfigError& e) {
        throw LoadError{std::string("invalid sweep key: ") + e.what()};
      }
      j["label"] = sanitize(base_label + "__" + key + "=" + v);
      variants.push_back(to_scenario(j, opts));
    }

    *opts.out << "sweep over " << key << '\n';
    std::vector<RunSummary> summaries;
    for (const auto& cfg : variants) {
      summaries.push_back(execute(cfg, config_file.string(), opts));
      print_summary(*opts.out, cfg.label, summaries.back());
    }

    std::ostringstream table;
    table << "value,label,final_accuracy,std_last10,pct_fedavg,pct_median,pct_krum,mean_cost\n";
    for (std::size_t i = 0; i < variants.size(); ++i) {
      const auto& s = summaries[i];
      table << values[i] << ',' << variants[i].label << ',' << format_double(s.final_accuracy)
            << ',' << format_double(s.std_last10) << ',' << format_double(s.selection_pct[0])
            << ',' << format_double(s.selection_pct[1]) << ','
            << format_double(s.selection_pct[2]) << ',' << format_double(s.mean_cost) << '\n';
    }
    const fs::path sweep_dir = opts.out_root / sanitize(base_label + "__sweep_" + key);
    fs::create_directories(sweep_dir);
    write_file(sweep_dir / "comparison.csv", table.str());

    auto& os = *opts.out;
    os << '\n' << std::left << std::setw(14) << key << std::right << std::setw(10) << "% FedAvg"
       << std::setw(10) << "% Median" << std::setw(10) << "% Krum" << '\n'
       << std::fixed << std::setprecision(1);
    for (std::size_t i = 0; i < variants.size(); ++i)
      os << std::left << std::setw(14) << values[i] << std::right << std::setw(10)
         << summaries[i].selection_pct[0] << std::setw(10) << summaries[i].selection_pct[1]
         << std::setw(10) << summaries[i].selection_pct[2] << '\n';
    os.unsetf(std::ios::floatfield);
    os << "comparison written to " << (sweep_dir / "comparison.csv").string() << '\n';
    return kExitOk;
  });
}

int cmd_plot(const std::vector<fs::path>& run_dirs, const Options& opts) {
  return guarded(opts, [&] {
    if (run_dirs.empty()) throw std::runtime_error("plot: no run directories given");
    std::vector<Series> series;
    std::vector<std::pair<std::string, std::vector<RoundLog>>> runs;
    for (const auto& dir : run_dirs) {
      const fs::path csv = dir / "rounds.csv";
      std::ifstream in(csv);
      if (!in) throw std::runtime_error("cannot read " + csv.string());
      std::vector<RoundLog> rows;
      try {
        rows = read_rounds_csv(in);
      } catch (const std::exception& e) {
        throw std::runtime_error(csv.string() + ": " + e.what());
      }
      fs::path norm = fs::path(dir).lexically_normal();
      if (norm.filename().empty()) norm = norm.parent_path();
      const std::string name = norm.filename().string();
      Series s{name, {}};
      for (const auto& r : rows) s.y.push_back(r.test_accuracy);
      series.push_back(std::move(s));
      runs.emplace_back(name, std::move(rows));
    }

    fs::create_directories(opts.out_root);
    const fs::path acc = opts.out_root / "accuracy.svg";
    write_file(acc, accuracy_svg("Test accuracy per round", series));
    *opts.out << "wrote " << acc.string() << '\n';

    for (const auto& [name, rows] : runs) {
      if (rows.empty() || !rows.front().ucb_scores) continue;  // static run
      const auto s = summarize(rows, CostTable{});
      const fs::path bar = opts.out_root / ("selection_" + sanitize(name) + ".svg");
      write_file(bar, selection_svg("Rule selection: " + name,
                                    {s.selection_pct[0], s.selection_pct[1], s.selection_pct[2]}));
      *opts.out << "wrote " << bar.string() << '\n';
    }
    return kExitOk;
  });
}

}  // namespace fedstrat::cli
