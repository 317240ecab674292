#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fluctua/cli.hpp"

namespace {

using namespace fluctua;

struct Common {
  std::string config_path;
  std::string preset;
  std::string out;
  std::string grid;
};

void add_common(CLI::App* cmd, Common& c, bool with_grid) {
  cmd->add_option("--config", c.config_path, "JSON run configuration");
  cmd->add_option("--preset", c.preset, "named preset (see `presets list`)");
  cmd->add_option("--out", c.out, "output path (stdout when omitted)");
  if (with_grid) cmd->add_option("--grid", c.grid, "temperature grid start,stop,count");
}

config::RunConfig load(const Common& c) {
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> path;
  if (!c.preset.empty()) preset = c.preset;
  if (!c.config_path.empty()) path = c.config_path;
  config::RunConfig cfg = config::load(preset, path);
  if (!c.grid.empty()) cfg.grid = config::parse_grid(c.grid);
  return cfg;
}

/// Renders into a buffer first so that a failed run leaves no partial file.
template <class Fn>
void emit(const std::string& out_path, Fn&& body) {
  std::ostringstream buffer;
  body(buffer);
  if (out_path.empty()) {
    std::cout << buffer.str();
    return;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) fail(ErrorKind::io, "cannot write '" + out_path + "'");
  file << buffer.str();
  if (!file.flush()) fail(ErrorKind::io, "write to '" + out_path + "' failed");
}

void write_warnings(const std::string& out_path, const std::vector<std::string>& warnings) {
  if (warnings.empty()) return;
  if (out_path.empty()) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return;
  }
  emit(out_path + ".warnings", [&](std::ostream& o) {
    for (const auto& w : warnings) o << w << '\n';
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fluctua: renormalized phi^4 mean-field solver"};
  app.require_subcommand(1);

  Common critical_opts;
  auto* critical = app.add_subcommand("critical", "solve for T*_c, Omega_dc and the Ginzburg width");
  add_common(critical, critical_opts, false);

  Common sweep_opts;
  std::string observable = "chi";
  std::string omega_mode = "critical";
  auto* sweep = app.add_subcommand("sweep", "tabulate an observable over a temperature grid");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--observable", observable, "omega, theta, chi, xi, heat_capacity, psi0, f_T");
  sweep->add_option("--omega-mode", omega_mode, "critical (Omega frozen at Omega_dc) or solved");

  Common film_opts;
  std::vector<double> l0_values;
  auto* film = app.add_subcommand("film", "film critical temperature against reduced thickness");
  add_common(film, film_opts, false);
  film->add_option("--l0", l0_values, "reduced thickness values")->delimiter(',');

  Common para_opts;
  int dim = 3;
  auto* paracond = app.add_subcommand("paracond", "fluctuation conductivity above T*_c");
  add_common(paracond, para_opts, true);
  paracond->add_option("--dim", dim, "dimension 1, 2 or 3");
  std::string para_mode = "solved";
  paracond->add_option("--omega-mode", para_mode, "solved (default) or critical");

  Common oracle_opts;
  std::optional<double> few_mode_u0;
  std::optional<double> aleph_value;
  int aleph_dim = 3;
  auto* oracle = app.add_subcommand("oracle", "run the built-in validation grid");
  add_common(oracle, oracle_opts, false);
  oracle->add_option("--few-mode-u0", few_mode_u0, "sextic coupling of the few-mode check");
  oracle->add_option("--aleph-value", aleph_value, "replace aleph_d in the consistency check");
  oracle->add_option("--aleph-dim", aleph_dim, "dimension whose aleph is replaced");

  auto* presets = app.add_subcommand("presets", "preset management");
  presets->require_subcommand(1);
  auto* presets_list = presets->add_subcommand("list", "list available presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*critical) {
      const auto cfg = load(critical_opts);
      emit(critical_opts.out,
           [&](std::ostream& o) { o << cli::critical_report(cfg).dump(2) << '\n'; });
    } else if (*sweep) {
      const auto cfg = load(sweep_opts);
      const auto mode = cli::parse_omega_mode(omega_mode);
      std::vector<std::string> warnings;
      emit(sweep_opts.out,
           [&](std::ostream& o) { warnings = cli::sweep(cfg, observable, mode, o); });
      write_warnings(sweep_opts.out, warnings);
    } else if (*film) {
      auto cfg = load(film_opts);
      if (!l0_values.empty()) cfg.l0 = l0_values;
      emit(film_opts.out, [&](std::ostream& o) { cli::film(cfg, o); });
    } else if (*paracond) {
      const auto cfg = load(para_opts);
      const auto mode = cli::parse_omega_mode(para_mode);
      emit(para_opts.out, [&](std::ostream& o) { cli::paracond(cfg, dim, o, mode); });
    } else if (*oracle) {
      auto cfg = load(oracle_opts);
      if (few_mode_u0) cfg.oracle.u0 = *few_mode_u0;
      if (aleph_value) {
        cfg.oracle.aleph_value = *aleph_value;
        cfg.oracle.aleph_dim = aleph_dim;
      }
      const auto report = cli::run_oracle(cfg);
      emit(oracle_opts.out, [&](std::ostream& o) { o << report.to_json().dump(2) << '\n'; });
      return report.all_passed() ? 0 : 1;
    } else if (*presets_list) {
      for (const auto& p : config::list_presets())
        std::cout << p.name << '\t' << p.description << '\n';
    }
  } catch (const fluctua::Error& e) {
    std::cerr << cli::error_json(e) << '\n';
    return cli::exit_code(e.kind());
  }
  return 0;
}
