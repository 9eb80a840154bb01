// prosyn command-line front end. Every subcommand is a thin shell over one
// C-API call: flags and the optional --config file are merged into the
// options JSON the library consumes (flags win), and the returned summary
// JSON is printed to stdout. No C++ library headers are used here; the
// binary talks to libprosyn through prosyn.h alone.
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prosyn.h"

using nlohmann::json;

namespace {

// 0 ok, 2 bad options, 3 unreadable/unparseable input, 4 model failure.
int exit_code(prosyn_status status) {
  switch (status) {
    case PROSYN_OK:
      return 0;
    case PROSYN_ERR_CONFIG:
    case PROSYN_ERR_INVALID_ARG:
      return 2;
    case PROSYN_ERR_IO:
    case PROSYN_ERR_PARSE:
      return 3;
    default:
      return 4;
  }
}

using command_fn = prosyn_status (*)(const char*, char**);

// Records flag values into the options JSON only when actually supplied,
// so config-file values survive unless overridden on the command line.
class Binder {
 public:
  Binder(CLI::App* cmd, json* opts) : cmd_(cmd), opts_(opts) {}

  template <typename T>
  CLI::Option* add(const std::string& flag, const std::string& key,
                   const std::string& desc) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = cmd_->add_option(flag, *value, desc);
    appliers_.push_back([this, key, value, opt] {
      if (opt->count() > 0) (*opts_)[json::json_pointer(key)] = *value;
    });
    return opt;
  }

  template <typename T>
  CLI::Option* add_list(const std::string& flag, const std::string& key,
                        const std::string& desc) {
    auto value = std::make_shared<std::vector<T>>();
    CLI::Option* opt = cmd_->add_option(flag, *value, desc);
    appliers_.push_back([this, key, value, opt] {
      if (opt->count() > 0) (*opts_)[json::json_pointer(key)] = *value;
    });
    return opt;
  }

  CLI::Option* add_flag(const std::string& flag, const std::string& key,
                        const std::string& desc, bool stored = true) {
    auto value = std::make_shared<bool>(false);
    CLI::Option* opt = cmd_->add_flag(flag, *value, desc);
    appliers_.push_back([this, key, value, opt, stored] {
      if (opt->count() > 0) (*opts_)[json::json_pointer(key)] = stored;
    });
    return opt;
  }

  void apply() {
    for (auto& apply_one : appliers_) apply_one();
  }

 private:
  CLI::App* cmd_;
  json* opts_;
  std::vector<std::function<void()>> appliers_;
};

struct Command {
  json opts = json::object();
  std::string config_path;
  std::shared_ptr<Binder> binder;
  command_fn fn = nullptr;
  bool needs_seed = false;
};

int run_command(Command& command) {
  if (!command.config_path.empty()) {
    std::ifstream in(command.config_path);
    if (!in) {
      std::cerr << "error: cannot open config file: " << command.config_path
                << "\n";
      return 3;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    json from_file = json::parse(buffer.str(), nullptr, false);
    if (from_file.is_discarded() || !from_file.is_object()) {
      std::cerr << "error: config file is not a JSON object: "
                << command.config_path << "\n";
      return 2;
    }
    command.opts = from_file;
  }
  command.binder->apply();
  if (command.needs_seed && !command.opts.contains("seed")) {
    std::cerr << "error: a seed is required; pass --seed or set \"seed\" in "
                 "the config file\n";
    return 2;
  }
  char* summary = nullptr;
  prosyn_status status = command.fn(command.opts.dump().c_str(), &summary);
  if (status != PROSYN_OK) {
    std::cerr << "error: " << prosyn_last_error() << "\n";
    return exit_code(status);
  }
  if (summary) {
    std::cout << json::parse(summary).dump(2) << "\n";
    prosyn_string_free(summary);
  }
  return 0;
}

Command& make_command(std::vector<std::unique_ptr<Command>>& commands,
                      CLI::App& app, const std::string& name,
                      const std::string& desc, command_fn fn,
                      bool needs_seed = false) {
  commands.push_back(std::make_unique<Command>());
  Command& command = *commands.back();
  command.fn = fn;
  command.needs_seed = needs_seed;
  CLI::App* cmd = app.add_subcommand(name, desc);
  cmd->add_option("--config", command.config_path,
                  "JSON file with the same keys as the flags");
  command.binder = std::make_shared<Binder>(cmd, &command.opts);
  cmd->callback([&command] {
    int code = run_command(command);
    if (code != 0) throw CLI::RuntimeError(code);
  });
  return command;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Synthesizes residential demand, rooftop-PV generation and net-demand "
      "profiles from half-hourly smart-meter data."};
  app.set_version_flag("--version", std::string(prosyn_version()));
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> commands;

  {
    Command& c = make_command(commands, app, "gen-data",
                              "Write a synthetic raw meter CSV",
                              prosyn_cmd_gen_data, true);
    Binder& b = *c.binder;
    b.add<std::string>("--out", "/out", "output CSV path");
    b.add<int>("--customers", "/customers", "number of customers");
    b.add<int>("--days", "/days", "days per customer");
    b.add<std::uint64_t>("--seed", "/seed", "random seed");
    b.add<std::string>("--start-date", "/start_date", "first date");
    b.add_flag("--no-generation", "/with_generation",
               "omit the generation column", false);
  }
  {
    Command& c = make_command(commands, app, "ingest",
                              "Parse a raw meter CSV into a day-profile store",
                              prosyn_cmd_ingest);
    Binder& b = *c.binder;
    b.add<std::string>("--input", "/input", "raw meter CSV");
    b.add<std::string>("--out", "/out_store", "day-profile store to write");
    b.add<std::string>("--col-customer", "/schema/customer_id",
                       "customer id column name");
    b.add<std::string>("--col-timestamp", "/schema/timestamp",
                       "timestamp column name");
    b.add<std::string>("--col-demand", "/schema/demand",
                       "demand column name");
    b.add<std::string>("--col-generation", "/schema/generation",
                       "generation column name (empty: none)");
    b.add_list<std::string>("--feature", "/schema/features",
                            "categorical column to carry through");
    b.add_list<std::string>("--holiday", "/holidays",
                            "date treated as a weekend");
    b.add_flag("--all-weekday", "/all_weekday",
               "classify every date as a weekday");
  }
  {
    Command& c = make_command(commands, app, "cluster",
                              "Fit capacity clusters over a per-customer "
                              "feature",
                              prosyn_cmd_cluster);
    Binder& b = *c.binder;
    b.add<std::string>("--store", "/store", "day-profile store");
    b.add<std::string>("--out", "/out_model", "cluster model JSON to write");
    b.add<std::string>("--method", "/method", "map_dp or kmeans");
    b.add<std::string>("--feature", "/feature",
                       "peak_generation, peak_demand or mean_demand");
    b.add<double>("--concentration", "/concentration",
                  "new-cluster propensity");
    b.add<double>("--prior-mean", "/prior_mean", "prior mean override");
    b.add<double>("--prior-variance", "/prior_variance",
                  "prior variance override");
    b.add<double>("--new-cluster-variance", "/new_cluster_variance",
                  "unseen-cluster variance (0: prior/10)");
    b.add<int>("--k", "/k", "cluster count (kmeans)");
    b.add_list<double>("--init-mean", "/init_means",
                       "initial mean (kmeans, repeatable)");
    b.add<int>("--max-iter", "/max_iter", "sweep limit");
  }
  {
    Command& c = make_command(commands, app, "assign",
                              "Draw a prosumer population from a cluster "
                              "model",
                              prosyn_cmd_assign, true);
    Binder& b = *c.binder;
    b.add<std::string>("--cluster-model", "/cluster_model",
                       "fitted cluster model JSON");
    b.add<std::string>("--out-assignments", "/out_assignments",
                       "assignments CSV to write");
    b.add<std::string>("--out-dirichlet", "/out_dirichlet",
                       "feature model JSON to write");
    b.add<std::uint64_t>("--seed", "/seed", "random seed");
    b.add<std::size_t>("--population", "/population",
                       "number of prosumers to draw");
    b.add<std::string>("--feature-id", "/feature_id", "feature name");
    b.add<std::string>("--id-prefix", "/id_prefix", "prosumer id prefix");
  }
  {
    Command& c = make_command(commands, app, "build-demand",
                              "Count a per-slot transition tensor from a "
                              "store",
                              prosyn_cmd_build_demand);
    Binder& b = *c.binder;
    b.add<std::string>("--store", "/store", "day-profile store");
    b.add<std::string>("--out", "/out_tensor", "tensor file to write");
    b.add<std::string>("--day-type", "/day_type", "weekday or weekend");
    b.add<int>("--n-max", "/n_max", "largest demand state");
  }
  {
    Command& c = make_command(commands, app, "build-solar",
                              "Count a clearness-index transition matrix "
                              "from a store",
                              prosyn_cmd_build_solar);
    Binder& b = *c.binder;
    b.add<std::string>("--store", "/store", "day-profile store");
    b.add<std::string>("--out", "/out_matrix", "matrix file to write");
    b.add<double>("--latitude", "/solar/latitude", "site latitude, degrees");
    b.add<double>("--tilt", "/solar/tilt", "panel tilt from horizontal");
    b.add<double>("--azimuth", "/solar/azimuth",
                  "panel azimuth from north, clockwise");
    b.add<double>("--efficiency", "/solar/efficiency", "module efficiency");
    b.add<double>("--area", "/solar/area", "panel area, m^2");
    b.add<double>("--irradiance", "/solar/irradiance",
                  "extraterrestrial irradiance, W/m^2");
  }
  {
    Command& c = make_command(commands, app, "synth",
                              "Sample prosumer demand/generation/net "
                              "profiles",
                              prosyn_cmd_synth, true);
    Binder& b = *c.binder;
    b.add<std::string>("--tensor", "/tensor", "demand transition tensor");
    b.add<std::string>("--ci-matrix", "/ci_matrix",
                       "clearness matrix (enables generation)");
    b.add<std::string>("--cluster-model", "/cluster_model",
                       "cluster model for PV sizing");
    b.add<std::string>("--assignments", "/assignments",
                       "prosumer feature assignments");
    b.add<std::string>("--out-dir", "/out_dir", "output directory");
    b.add<std::uint64_t>("--seed", "/seed", "random seed");
    b.add<int>("--prosumers", "/prosumers",
               "population when no assignments are given");
    b.add<int>("--days", "/days", "days per prosumer");
    b.add<double>("--bandwidth", "/bandwidth", "demand smoothing bandwidth");
    b.add<double>("--ci-bandwidth", "/ci_bandwidth",
                  "clearness smoothing bandwidth");
    b.add<double>("--reinforcement", "/reinforcement",
                  "urn weight added per sampled transition");
    b.add<double>("--concentration", "/concentration",
                  "fixed row mass (0: observed totals)");
    b.add_flag("--shared-weather", "/shared_weather",
               "one clearness path per day shared by all prosumers");
    b.add_list<double>("--penetration", "/penetrations",
                       "PV penetration level (repeatable)");
    b.add<double>("--latitude", "/solar/latitude", "site latitude, degrees");
    b.add<double>("--tilt", "/solar/tilt", "panel tilt from horizontal");
    b.add<double>("--azimuth", "/solar/azimuth",
                  "panel azimuth from north, clockwise");
    b.add<double>("--efficiency", "/solar/efficiency", "module efficiency");
    b.add<double>("--area", "/solar/area", "default panel area, m^2");
    b.add<double>("--irradiance", "/solar/irradiance",
                  "extraterrestrial irradiance, W/m^2");
    b.add<int>("--day-of-year", "/solar/day_of_year",
               "day of year of the first synthesized day");
    b.add<std::string>("--capacity-feature", "/capacity_feature",
                       "assignment feature used for PV sizing");
    b.add<std::string>("--id-prefix", "/id_prefix", "prosumer id prefix");
  }
  {
    Command& c = make_command(commands, app, "validate",
                              "Score synthesized profiles against a store",
                              prosyn_cmd_validate);
    Binder& b = *c.binder;
    b.add<std::string>("--observed", "/observed_store", "day-profile store");
    b.add<std::string>("--synthetic", "/synthetic",
                       "synthesized profile export");
    b.add<std::string>("--out", "/out_report", "report JSON to write");
    b.add<std::string>("--day-type", "/day_type",
                       "restrict observed days: weekday or weekend");
    b.add_list<int>("--lag", "/lags",
                    "autocorrelation lag in slots (repeatable)");
  }
  {
    Command& c = make_command(commands, app, "report",
                              "Write heatmap and mean-profile CSVs",
                              prosyn_cmd_report);
    Binder& b = *c.binder;
    b.add<std::string>("--out-dir", "/out_dir", "output directory");
    b.add<std::string>("--tensor", "/tensor", "transition tensor");
    b.add<int>("--slot", "/slot", "1-based slot for the heatmap");
    b.add<int>("--state-lo", "/state_lo", "lowest state in the window");
    b.add<int>("--state-hi", "/state_hi", "highest state in the window");
    b.add<std::string>("--store", "/store",
                       "day-profile store for mean profiles");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // help/version text
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();  // command already reported its error
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad command line
  }
  return 0;
}
