#include <CLI11.hpp>

#include <willflow/commands.hpp>

int main(int argc, char **argv) {
  using namespace willflow;
  CLI::App app{"willflow: Willmore flow and threshold toolkit for surfaces of revolution"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config, out;
  std::uint64_t seed = 0;
  bool quiet = false;
  double dt = 0.0;
  long max_steps = 0;
  auto *o_config = app.add_option("--config", config, "JSON run specification")->required();
  auto *o_out = app.add_option("--out", out, "output directory");
  auto *o_seed = app.add_option("--seed", seed, "random seed");
  app.add_flag("--quiet", quiet, "suppress the stdout summary");
  auto *o_dt = app.add_option("--dt", dt, "initial time step (flow)");
  auto *o_steps = app.add_option("--max-steps", max_steps, "step budget (flow)");
  o_config->check(CLI::ExistingFile);
  for (const char *name : {"thresholds", "flow", "minimize", "analyze", "caps"})
    app.add_subcommand(name, std::string("run the ") + name + " command");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_error;
  }

  RunSpec s;
  try {
    s = load_spec(config);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
  s.command = app.get_subcommands().front()->get_name();
  if (o_out->count())
    s.out_dir = out;
  if (o_seed->count())
    s.seed = seed;
  if (o_dt->count())
    s.flow.dt_init = dt;
  if (o_steps->count()) {
    s.flow.max_steps = max_steps;
    s.budget.polish_steps = max_steps;
  }
  s.quiet = quiet;
  return dispatch(s);
}
