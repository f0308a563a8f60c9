#include "lk/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Lindblad trajectory engine with completely positive integrating-factor steppers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  bool no_renormalize = false;
  bool force_tableau = false;

  const std::pair<const char*, lk::RunConfig::Mode> modes[] = {
      {"simulate", lk::RunConfig::Mode::Simulate},
      {"converge", lk::RunConfig::Mode::Converge},
      {"kraus-verify", lk::RunConfig::Mode::KrausVerify},
      {"choi-probe", lk::RunConfig::Mode::ChoiProbe},
  };
  for (const auto& [name, mode] : modes) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value run configuration file")->required();
    sub->add_option("--out", out_path, "output file (overrides the config's out key)");
    sub->add_flag("--no-renormalize", no_renormalize, "skip the end-of-step renormalization");
    sub->add_flag("--force-tableau", force_tableau,
                  "run a tableau that fails the complete-positivity check");
    (void)mode;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    lk::RunConfig::Mode mode = lk::RunConfig::Mode::Simulate;
    for (const auto& [name, m] : modes)
      if (app.get_subcommand(name)->parsed()) mode = m;
    lk::RunConfig cfg = lk::load_config(config_path, mode);
    if (!out_path.empty()) cfg.out_path = out_path;
    if (no_renormalize) cfg.renormalize = false;
    if (force_tableau) cfg.force_tableau = true;
    return lk::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
