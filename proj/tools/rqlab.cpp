// rqlab: command-line front end for the solvers, customization methods and
// the experiment runner.
//
// Exit codes: 0 ok, 1 unexpected error, 2 bad config/arguments,
// 3 a method failed (partial report written), 4 output I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rqlab/harness.hpp"
#include "rqlab/serialization.hpp"
#include "rqlab/soft_oracle.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitMethod = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rqlab::ConfigError("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_output(const std::string& dir, const std::string& name, const std::string& body) {
  if (dir.empty()) {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << '\n';
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw rqlab::ReportIoError("cannot create " + dir + ": " + ec.message());
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary | std::ios::trunc);
  if (!out) throw rqlab::ReportIoError("cannot write " + dir + "/" + name);
  out << body;
  if (!body.empty() && body.back() != '\n') out << '\n';
}

rqlab::MethodSpec find_method(const rqlab::ExperimentConfig& config, const std::string& name) {
  for (const auto& m : config.methods) {
    if (name.empty() || m.label() == name || m.label().rfind(name + "(", 0) == 0) return m;
  }
  throw rqlab::ConfigError("method '" + name + "' is not listed in the config");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual Q-learning policy customization on discrete MDPs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string format;

  auto* solve = app.add_subcommand("solve", "Soft-optimal Q-table of a serialized MDP");
  std::string mdp_path;
  std::string channel = "basic";
  double alpha = 1.0;
  double omega = 1.0;
  solve->add_option("--mdp", mdp_path, "MDP JSON file")->required()->check(CLI::ExistingFile);
  solve->add_option("--channel", channel, "Reward channel")->check(CLI::IsMember({"basic", "addon", "combined"}));
  solve->add_option("--alpha", alpha, "Entropy temperature")->check(CLI::PositiveNumber);
  solve->add_option("--omega", omega, "Basic-reward weight for the combined channel")->check(CLI::NonNegativeNumber);
  solve->add_option("--out", out_dir, "Output directory (stdout when omitted)");

  auto* customize = app.add_subcommand("customize", "Customized policy of one method from a config");
  std::string method_name;
  customize->add_option("--config", config_path, "Experiment config")->required();
  customize->add_option("--method", method_name, "Method label (default: first listed)");
  customize->add_option("--seed", seed, "Seed for sampling-based methods");
  customize->add_option("--out", out_dir, "Output directory (stdout when omitted)");

  auto* plan_cmd = app.add_subcommand("plan", "One residual MCTS call from a state");
  rqlab::StateId root_state = 0;
  plan_cmd->add_option("--config", config_path, "Experiment config (env, prior, customization)")->required();
  plan_cmd->add_option("--state", root_state, "Root state index")->required();
  plan_cmd->add_option("--seed", seed, "Search seed");
  plan_cmd->add_option("--out", out_dir, "Directory for tree.json");

  auto* run = app.add_subcommand("run", "Full experiment from a config");
  run->add_option("--config", config_path, "Experiment config")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_option("--seed", seed, "Single evaluation seed (overrides the config)");
  run->add_option("--format", format, "Only this report format")->check(CLI::IsMember({"csv", "json"}));

  auto* report = app.add_subcommand("report", "Re-render a stored JSON report");
  std::string in_path;
  report->add_option("--in", in_path, "report.json")->required();
  report->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  report->add_option("--out", out_dir, "Output directory (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*solve) {
      const rqlab::DiscreteMdp mdp = rqlab::mdp_from_json(read_file(mdp_path));
      const auto report_v = rqlab::validate_mdp(mdp);
      if (!report_v.ok()) throw rqlab::ConfigError("invalid MDP:\n" + report_v.to_string());
      const auto selector = channel == "basic"   ? rqlab::RewardSelector::basic()
                            : channel == "addon" ? rqlab::RewardSelector::addon()
                                                 : rqlab::RewardSelector::combined(omega);
      const rqlab::QTable q = rqlab::soft_value_iteration(mdp, selector, rqlab::SoftSolverParams{alpha});
      write_output(out_dir, "q.json", rqlab::table_to_json(q));
      if (!out_dir.empty()) {
        write_output(out_dir, "policy.json", rqlab::policy_to_json(rqlab::boltzmann_policy(q, alpha)));
      }
      return 0;
    }
    if (*customize) {
      const auto config = rqlab::load_config(config_path);
      const auto method = find_method(config, method_name);
      const auto built = rqlab::make_env(config.env);
      const auto prior = rqlab::build_prior(config.prior, *built.mdp);
      const auto policy = rqlab::customize(method, built, prior, config.customization,
                                           seed.value_or(config.evaluation.seeds.front()));
      write_output(out_dir, "policy.json", rqlab::policy_to_json(policy));
      return 0;
    }
    if (*plan_cmd) {
      const auto config = rqlab::load_config(config_path);
      const auto built = rqlab::make_env(config.env);
      if (root_state >= built.mdp->n_states()) throw rqlab::ConfigError("--state out of range");
      const auto prior = rqlab::build_prior(config.prior, *built.mdp);
      rqlab::MctsParams params;
      for (const auto& m : config.methods) {
        if (m.kind == rqlab::MethodSpec::Kind::mcts) params = m.mcts;
      }
      params.omega_prime = config.customization.omega_prime;
      params.alpha_hat = config.customization.alpha_hat;
      rqlab::Rng rng(seed.value_or(config.evaluation.seeds.front()));
      const auto result = rqlab::plan(root_state, *built.mdp, prior, params, rng);
      std::cout << "action " << result.action << "\n";
      if (!out_dir.empty()) write_output(out_dir, "tree.json", result.tree.to_json());
      return 0;
    }
    if (*run) {
      auto config = rqlab::load_config(config_path);
      if (!out_dir.empty()) config.output.directory = out_dir;
      if (seed) config.evaluation.seeds = {*seed};
      if (format == "csv") config.output.json = false;
      if (format == "json") config.output.csv = false;
      const auto table = rqlab::run_experiment(config);
      if (config.output.directory.empty()) {
        std::cout << rqlab::report_csv(table);
      } else {
        rqlab::emit_report(table, config.output.directory, config.output.csv, config.output.json);
      }
      for (const auto& f : table.failures) std::cerr << "method " << f.policy << " failed: " << f.message << '\n';
      return table.failures.empty() ? 0 : kExitMethod;
    }
    if (*report) {
      const auto table = rqlab::report_from_json(read_file(in_path));
      if (format == "json") {
        write_output(out_dir, "report.json", rqlab::report_json(table));
      } else {
        const std::string csv = rqlab::report_csv(table);
        if (out_dir.empty()) {
          std::cout << csv;
        } else {
          rqlab::emit_report(table, out_dir, true, false);
        }
      }
      return 0;
    }
  } catch (const rqlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rqlab::ReportIoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
