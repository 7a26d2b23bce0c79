/**
 * @file harness.h
 * @brief Experiment orchestration: configuration, presets, training,
 *        evaluation, comparison tables, and timing benchmarks.
 */
#ifndef MMSCHED_HARNESS_H_
#define MMSCHED_HARNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mmsched/channel.h"

namespace mmsched {

struct SmartParams {
  std::vector<int> hidden = {64, 64};
  double actor_lr = 5e-4;
  double critic_lr = 5e-4;
  double alpha_lr = 3e-4;
  double discount = 0.99;
  double tau = 0.005;
  int batch_size = 256;
  uint64_t buffer_capacity = 1000000;
  uint64_t min_fill = 1000;
  bool auto_alpha = true;
  double init_alpha = 0.2;
  double target_entropy = 0.0;  // 0 means -num_dims
  int knn_k = 8;
  int max_candidates = 4096;
  int num_dims = 0;  // 0 picks a default from the user count
  int dim_size = 0;  // 0 derives the per-dimension size from L and D
};

struct TrainParams {
  int epochs = 200;
  int iters_per_epoch = 200;
  int epsilon_decay_epochs = 500;
  int update_every = 1;      // one gradient update per this many env steps
  int checkpoint_every = 0;  // epochs between checkpoints; 0 = final only
};

struct ExperimentConfig {
  // Scenario.
  std::string topology = "clustered";  // clustered | random-static | mobile
  int num_clusters = 4;
  double intra_cluster_corr = 0.9;
  double temporal_corr = 0.9;              // mobile only
  std::string rb_mode = "independent";     // independent | tapped-delay
  int num_taps = 4;

  // Dimensions.
  int bs_antennas = 8;
  int users = 8;
  int rbs = 1;
  int ttis = 1000;
  int max_scheduled = 4;
  double noise_var = kDefaultNoiseVar;

  // Scheduling and reward.
  double beta = 0.5;
  double corr_threshold = 0.5;
  int approx_pf_top_n = 0;  // 0 means max_scheduled
  bool pf_fixed_rates = false;

  std::vector<std::string> schedulers = {"opt-pf", "approx-pf", "rr-ug",
                                         "random"};
  std::string smart_variant = "sa";  // sa | ma

  SmartParams smart;
  TrainParams train;

  uint64_t seed = 1;
  int eval_ttis = 400;
  bool online_updates = false;
  std::string out_dir = "out";
  std::string checkpoint_path;  // required to evaluate smart
  std::string resume_path;      // resume training from this checkpoint
  std::string trace_path;       // load a trace instead of generating one

  // Shipped desk-scale presets: preset-4x4, preset-8x8-2rb, preset-16x16.
  static ExperimentConfig Preset(const std::string& name);
  static bool IsPresetName(const std::string& name);

  void Validate() const;

  // Effective values for the fields whose 0 means "derive".
  int EffectiveTopN() const;
  int EffectiveNumDims() const;
  int EffectiveDimSize() const;
  int EffectiveKnnK() const;
};

// Flat key-value config file: one "key value" or "key = value" pair per
// line, '#' comments. Unknown keys are an error. Values use the same
// spelling as CLI overrides.
ExperimentConfig LoadConfigFile(const std::string& path);
void ApplyOverride(ExperimentConfig* config, const std::string& key,
                   const std::string& value);
void SaveConfigFile(const ExperimentConfig& config, const std::string& path);

// Deterministic trace construction from the config (or trace_path).
ChannelTrace BuildTrace(const ExperimentConfig& config);

struct TrainResult {
  std::vector<double> epoch_rewards;      // mean agent reward per epoch
  std::vector<double> epoch_jfi;          // mean JFI per epoch
  std::vector<double> random_rewards;     // random-baseline mean per epoch
  std::string checkpoint_path;
  std::string curve_path;
  bool diverged = false;
  int diverged_epoch = -1;
  double final_jfi = 0.0;
};

struct SchedulerStats {
  std::string name;
  double se_mean = 0.0;
  double se_min = 0.0;
  double se_max = 0.0;
  double se_std = 0.0;
  double jfi_mean = 0.0;
  double jfi_min = 0.0;
  double jfi_max = 0.0;
  double jfi_std = 0.0;
  double final_jfi = 0.0;
  double reward_mean = 0.0;
  double wall_ms_per_tti = 0.0;
  uint64_t clamp_count = 0;
};

struct RunSummary {
  std::vector<SchedulerStats> rows;

  const SchedulerStats* Find(const std::string& name) const;
};

// Trains SMART on the configured scenario; emits a per-epoch curve CSV and
// checkpoints under out_dir. Divergence aborts the loop and is reported in
// the result, not thrown.
TrainResult Train(const ExperimentConfig& config);

// Scores every selected scheduler on the identical trace tail (fresh
// ledgers, SMART at epsilon = 0), emitting one per-TTI CSV per scheduler
// plus a summary CSV.
RunSummary Evaluate(const ExperimentConfig& config);

// Evaluate plus a machine-readable comparison CSV and an aligned table.
RunSummary Compare(const ExperimentConfig& config);

// Median per-TTI decision latency over at least 100 TTIs, single-threaded,
// excluding trace generation and environment bookkeeping.
RunSummary BenchTiming(const ExperimentConfig& config);

std::string FormatSummaryTable(const RunSummary& summary);
void WriteSummaryCsv(const RunSummary& summary, const std::string& path);

}  // namespace mmsched

#endif  // MMSCHED_HARNESS_H_
