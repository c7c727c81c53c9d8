// Configuration-driven experiment runner.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration or precondition error,
// 3 numerical failure, 4 counterexample certificate violated.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "nlh/workflows.hpp"

namespace {

struct Args {
  std::string config;
  std::string out = "out";
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
};

nlh::ExperimentConfig read_config(const Args& a) {
  std::ifstream in(a.config);
  if (!in) throw nlh::ConfigError("--config", "cannot read " + a.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw nlh::ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  if (a.seed) j["seed"] = *a.seed;
  return nlh::parse_config(j);
}

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("--config", a.config, "experiment configuration (JSON)")->required();
  sub->add_option("--out", a.out, "output directory")->capture_default_str();
  sub->add_option("--threads", a.threads, "worker threads (0 = hardware)")->capture_default_str();
  sub->add_option("--seed", a.seed, "global seed, overrides the config value");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal parabolic Harnack experiments"};
  app.require_subcommand(1);
  Args args;
  const char* names[] = {"run", "verify", "sweep", "counterexample", "axes"};
  const char* help[] = {"solve the scenario and write the solution", "measure the listed inequalities",
                        "cartesian sweep of inequality constants", "log-profile counterexample certificates",
                        "axes-kernel shrinking-ball family"};
  for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(names[i], help[i]), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    const nlh::ExperimentConfig cfg = read_config(args);
    const nlh::WorkflowOptions opts{args.out, args.threads};
    if (cmd == "run") nlh::cmd_run(cfg, opts);
    else if (cmd == "verify") nlh::cmd_verify(cfg, opts);
    else if (cmd == "sweep") nlh::cmd_sweep(cfg, opts);
    else if (cmd == "axes") nlh::cmd_axes(cfg, opts);
    else if (!nlh::cmd_counterexample(cfg, opts)) {
      std::cerr << "certificate violated: lower bound fails beyond tolerance\n";
      return 4;
    }
  } catch (const nlh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlh::NumericalError& e) {
    std::cerr << "numerical error (step " << e.step() << "): " << e.what() << "\n";
    return 3;
  } catch (const nlh::PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const nlh::StructureError& e) {
    std::cerr << "structure error: " << e.what() << "\n";
    return 2;
  } catch (const nlh::SingularityError& e) {
    std::cerr << "singularity: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
