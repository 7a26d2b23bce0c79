/**
 * @file env.h
 * @brief Scheduling MDP over a channel trace: state assembly, reward with
 *        fairness accounting, shared-ledger bookkeeping for multi-RB runs.
 *
 * State layout per RB (length 3L): all users' SU rates, then cumulative
 * delivered totals, then group labels; each block min-max normalized across
 * users (an all-equal block maps to 0.5).
 */
#ifndef MMSCHED_ENV_H_
#define MMSCHED_ENV_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mmsched/channel.h"
#include "mmsched/fairness.h"
#include "mmsched/grouping.h"

namespace mmsched {

struct StepResult {
  std::vector<double> sum_rate;       // per RB, achieved post-ZF sum
  std::vector<double> norm_sum_rate;  // per RB, normalized and clipped
  std::vector<bool> clipped;          // per RB: normalization clip fired
  std::vector<bool> singular;         // per RB: subset was not separable
  double jfi = 0.0;                   // after this TTI's delivery
  std::vector<double> sa_rewards;     // per-RB reward (independent agents)
  double ma_reward = 0.0;             // shared cooperative reward
};

// Min-max normalization across users; all-equal features map to 0.5.
std::vector<double> BuildState(const std::vector<double>& su_rates,
                               const std::vector<double>& ledger_totals,
                               const std::vector<int>& group_labels,
                               int num_groups);

class MimoEnv {
 public:
  // The trace must outlive the env. beta weighs throughput against
  // fairness in the reward; corr_threshold drives the state's group
  // feature; group_seed makes those groupings deterministic per (tti, rb).
  MimoEnv(const ChannelTrace* trace, int max_scheduled, double beta,
          double corr_threshold, uint64_t group_seed);

  int num_users() const { return trace_->num_users; }
  int num_rbs() const { return trace_->num_rbs; }
  int num_ttis() const { return trace_->num_ttis; }
  int max_scheduled() const { return max_scheduled_; }
  double beta() const { return beta_; }
  double noise_var() const { return trace_->noise_var; }
  const ChannelTrace& trace() const { return *trace_; }

  int state_dim() const { return 3 * num_users(); }

  // Cached per (tti, rb); recomputed when the stamp moves.
  const Eigen::MatrixXcd& ChannelFor(int t, int b);
  const std::vector<double>& SuRatesFor(int t, int b);
  const GroupingResult& GroupingFor(int t, int b);

  std::vector<double> StateFor(int t, int b);

  // Applies one TTI: post-ZF rates per RB, a single ledger update from all
  // RBs' decisions, then JFI and the two reward flavors. A non-separable
  // subset contributes zero rate and is flagged, not an error.
  StepResult Step(int t, const std::vector<std::vector<int>>& selected);

  FairnessLedger& ledger() { return ledger_; }
  const FairnessLedger& ledger() const { return ledger_; }
  void ResetLedger();

  // Running counters across Steps, for diagnostics.
  uint64_t clip_events() const { return clip_events_; }
  uint64_t singular_events() const { return singular_events_; }

 private:
  struct RbCache {
    int stamp = -1;
    Eigen::MatrixXcd h;
    std::vector<double> su_rates;
    GroupingResult grouping;
  };
  RbCache& CacheFor(int t, int b);

  const ChannelTrace* trace_;
  int max_scheduled_;
  double beta_;
  double corr_threshold_;
  uint64_t group_seed_;
  FairnessLedger ledger_;
  std::vector<RbCache> cache_;
  uint64_t clip_events_ = 0;
  uint64_t singular_events_ = 0;
};

}  // namespace mmsched

#endif  // MMSCHED_ENV_H_
