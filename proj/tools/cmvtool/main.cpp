#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmv/errors.hpp"
#include "cmv/io.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cmvtool: spectral computations for CMV operators"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out, r, eps, alphabet, model, omega;
  std::vector<std::string> settings;
  int theta_count = 0, depth = 0;
  long window = -1, steps = -1;
  long long seed = -1;

  app.add_option("--config", config_path, "config file (key=value lines or a JSON object)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out, "base directory for run directories");
  app.add_option("--theta-count", theta_count, "number of circle grid points");
  app.add_option("--r", r, "comma-separated radii in (0, 1)");
  app.add_option("--eps", eps, "comma-separated arc half-widths");
  app.add_option("--depth", depth, "trace-map depth n");
  app.add_option("--window", window, "resolvent window half-width (0 = automatic)");
  app.add_option("--alphabet", alphabet, "Sturmian letters a,b (complex like 0.3+0.1i)");
  app.add_option("--omega", omega, "Sturmian frequency in (0, 1)");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--model", model, "free | constant | sturmian | explicit");
  app.add_option("--steps", steps, "walk steps");
  app.add_option("--set", settings, "extra key=value settings (repeatable)");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"coeffs", "write Verblunsky coefficients as CSV"},
      {"spectrum", "trace-map spectrum atlas and Hoelder constants"},
      {"measure", "boundary-value density profiles and arc masses"},
      {"holder", "local Hoelder exponent fits at spectrum points"},
      {"walk", "evolve delta_0 under the extended CMV operator"},
      {"verify", "run the acceptance suite"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    cmv::RunConfig cfg;
    if (!config_path.empty()) cfg = cmv::load_config(config_path, cfg);
    const auto set = [&](const char* key, const std::string& v) { cmv::apply_setting(cfg, key, v); };
    if (!model.empty()) set("model", model);
    if (!out.empty()) set("out", out);
    if (theta_count > 0) set("theta_count", std::to_string(theta_count));
    if (!r.empty()) set("r", r);
    if (!eps.empty()) set("eps", eps);
    if (depth > 0) set("depth", std::to_string(depth));
    if (window >= 0) set("window", std::to_string(window));
    if (!alphabet.empty()) set("alphabet", alphabet);
    if (!omega.empty()) set("omega", omega);
    if (seed >= 0) set("seed", std::to_string(seed));
    if (steps >= 0) set("steps", std::to_string(steps));
    for (const auto& kv : settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw cmv::DomainError("--set expects key=value");
      cmv::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cmv::validate(cfg);

    const auto dir = cmv::make_run_directory(cfg.out, command);
    const std::string resolved = cmv::config_json(cfg);
    {
      std::ofstream os(dir / "config.json");
      os << resolved << '\n';
    }
    std::cout << "run directory: " << dir.string() << '\n' << resolved << '\n';

    const std::map<std::string, std::function<int(const cmv::RunConfig&, const std::filesystem::path&)>>
        dispatch{{"coeffs", cmvtool::cmd_coeffs},     {"spectrum", cmvtool::cmd_spectrum},
                 {"measure", cmvtool::cmd_measure},   {"holder", cmvtool::cmd_holder},
                 {"walk", cmvtool::cmd_walk},         {"verify", cmvtool::cmd_verify}};
    return dispatch.at(command)(cfg, dir);
  } catch (const cmv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
