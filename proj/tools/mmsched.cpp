/**
 * @file mmsched.cpp
 * @brief Command-line front end: trace generation, SMART training, and
 *        scheduler evaluation / comparison / timing on a shared config.
 */
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmsched/channel.h"
#include "mmsched/harness.h"

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> schedulers;
  std::string out_dir;
  std::string checkpoint;
  std::string resume;
  std::string trace_path;
  bool has_seed = false;
  uint64_t seed = 0;
  bool online_updates = false;
  bool pf_fixed_rates = false;
};

void AddCommonOptions(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config,
                  "Config file path or preset name (preset-4x4, "
                  "preset-8x8-2rb, preset-16x16)");
  cmd->add_option("--seed", args->seed, "Master seed")
      ->trigger_on_parse()
      ->each([args](const std::string&) { args->has_seed = true; });
  cmd->add_option("--out", args->out_dir, "Output directory");
  cmd->add_option("--schedulers", args->schedulers,
                  "Comma-separated scheduler list")
      ->delimiter(',');
  cmd->add_option("--checkpoint", args->checkpoint,
                  "Agent checkpoint to evaluate");
  cmd->add_option("--resume", args->resume,
                  "Training checkpoint to resume from");
  cmd->add_option("--trace", args->trace_path,
                  "Use this trace file instead of generating one");
  cmd->add_flag("--online-updates", args->online_updates,
                "Keep learning during evaluation");
  cmd->add_flag("--pf-fixed-rates", args->pf_fixed_rates,
                "Opt-PF scores subsets with fixed per-user rates");
}

mmsched::ExperimentConfig ResolveConfig(const CLI::App* cmd,
                                        const CommonArgs& args) {
  mmsched::ExperimentConfig config;
  if (!args.config.empty()) {
    if (mmsched::ExperimentConfig::IsPresetName(args.config)) {
      config = mmsched::ExperimentConfig::Preset(args.config);
    } else {
      config = mmsched::LoadConfigFile(args.config);
    }
  }
  if (args.has_seed) {
    config.seed = args.seed;
  }
  if (!args.out_dir.empty()) {
    config.out_dir = args.out_dir;
  }
  if (!args.schedulers.empty()) {
    config.schedulers = args.schedulers;
  }
  if (!args.checkpoint.empty()) {
    config.checkpoint_path = args.checkpoint;
  }
  if (!args.resume.empty()) {
    config.resume_path = args.resume;
  }
  if (!args.trace_path.empty()) {
    config.trace_path = args.trace_path;
  }
  if (args.online_updates) {
    config.online_updates = true;
  }
  if (args.pf_fixed_rates) {
    config.pf_fixed_rates = true;
  }
  // Leftover "--key value" pairs are config overrides.
  std::vector<std::string> extras = cmd->remaining();
  for (size_t i = 0; i < extras.size(); ++i) {
    std::string key = extras[i];
    if (key.rfind("--", 0) != 0) {
      throw CLI::ValidationError("expected --key, got '" + key + "'");
    }
    key = key.substr(2);
    std::string value;
    const size_t eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) {
        throw CLI::ValidationError("missing value for --" + key);
      }
      value = extras[++i];
    }
    mmsched::ApplyOverride(&config, key, value);
  }
  config.Validate();
  return config;
}

void PrintSummary(const mmsched::RunSummary& summary) {
  std::cout << mmsched::FormatSummaryTable(summary);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Massive MIMO user-scheduling simulator"};
  app.require_subcommand(1);

  CommonArgs gen_args, train_args, eval_args, cmp_args, bench_args;
  std::string gen_out = "trace.mmtr";
  std::string gen_csv;

  CLI::App* gen = app.add_subcommand("gen-trace",
                                     "Generate a channel trace file");
  AddCommonOptions(gen, &gen_args);
  gen->add_option("--trace-out", gen_out, "Output trace path");
  gen->add_option("--csv", gen_csv, "Also dump the trace as CSV");
  gen->allow_extras();

  CLI::App* train = app.add_subcommand("train", "Train the SMART scheduler");
  AddCommonOptions(train, &train_args);
  train->allow_extras();

  CLI::App* eval = app.add_subcommand(
      "evaluate", "Score schedulers on the trace tail");
  AddCommonOptions(eval, &eval_args);
  eval->allow_extras();

  CLI::App* cmp = app.add_subcommand(
      "compare", "Evaluate plus an aligned comparison table");
  AddCommonOptions(cmp, &cmp_args);
  cmp->allow_extras();

  CLI::App* bench = app.add_subcommand(
      "bench", "Median per-TTI decision latency per scheduler");
  AddCommonOptions(bench, &bench_args);
  bench->allow_extras();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      mmsched::ExperimentConfig config = ResolveConfig(gen, gen_args);
      config.trace_path.clear();  // always generate here
      const mmsched::ChannelTrace trace = mmsched::BuildTrace(config);
      mmsched::SaveTrace(trace, gen_out);
      std::cout << "wrote " << gen_out << " (" << trace.num_ttis << " TTIs, "
                << trace.num_rbs << " RBs, " << trace.num_bs_antennas << "x"
                << trace.num_users << ")\n";
      if (!gen_csv.empty()) {
        mmsched::SaveTraceCsv(trace, gen_csv);
        std::cout << "wrote " << gen_csv << "\n";
      }
    } else if (train->parsed()) {
      mmsched::ExperimentConfig config = ResolveConfig(train, train_args);
      const mmsched::TrainResult result = mmsched::Train(config);
      if (result.diverged) {
        std::cerr << "training diverged at epoch " << result.diverged_epoch
                  << "\n";
        return 2;
      }
      std::cout << "trained " << result.epoch_rewards.size()
                << " epochs; final reward "
                << (result.epoch_rewards.empty()
                        ? 0.0
                        : result.epoch_rewards.back())
                << ", final JFI " << result.final_jfi << "\n"
                << "checkpoint: " << result.checkpoint_path << "\n"
                << "curve: " << result.curve_path << "\n";
    } else if (eval->parsed()) {
      mmsched::ExperimentConfig config = ResolveConfig(eval, eval_args);
      PrintSummary(mmsched::Evaluate(config));
    } else if (cmp->parsed()) {
      mmsched::ExperimentConfig config = ResolveConfig(cmp, cmp_args);
      mmsched::Compare(config);
    } else if (bench->parsed()) {
      mmsched::ExperimentConfig config = ResolveConfig(bench, bench_args);
      PrintSummary(mmsched::BenchTiming(config));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
