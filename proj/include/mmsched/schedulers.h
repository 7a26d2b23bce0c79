/**
 * @file schedulers.h
 * @brief Classical scheduler zoo: exhaustive Opt-MR / Opt-PF oracles,
 *        Approx-PF, round-robin user grouping, and a random baseline.
 */
#ifndef MMSCHED_SCHEDULERS_H_
#define MMSCHED_SCHEDULERS_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmsched/action_codec.h"
#include "mmsched/fairness.h"
#include "mmsched/rng.h"

namespace mmsched {

// Exhaustive enumeration refuses to scan more than this many subsets.
inline constexpr uint64_t kEnumerationLimit = 1000000;

struct ScheduleDecision {
  std::vector<int> selected;  // ascending user indices, 1..N_max of them
  double objective = 0.0;     // the scheduler's own objective, diagnostic
};

// Achieved per-user rates for a candidate subset; all-zero when the subset
// is not ZF-separable.
using SubsetRatesFn =
    std::function<std::vector<double>(const std::vector<int>&)>;

// Post-ZF rates of the selected columns of the full M x L channel.
SubsetRatesFn MakeZfSubsetRatesFn(const Eigen::MatrixXcd& h_full,
                                  double noise_var);

// Fixed per-user rates (user's rate does not degrade with co-scheduling)
// but ZF-infeasible subsets still score zero.
SubsetRatesFn MakeFixedSubsetRatesFn(const Eigen::MatrixXcd& h_full,
                                     const std::vector<double>& fixed_rates,
                                     double noise_var);

// Per-user PF weights w_l = r_l / (user's ledger total across RBs).
std::vector<double> WeightedRates(const std::vector<double>& rates,
                                  const FairnessLedger& ledger);

// Exhaustive max-sum-rate oracle over all subsets of size 1..max_scheduled.
// Ties keep the smaller cardinality, then the lexicographically smallest
// subset. Throws TooLargeError when Sum C(L, i) exceeds kEnumerationLimit.
ScheduleDecision OptMrSchedule(const SubsetRatesFn& rates_fn, int num_users,
                               int max_scheduled);

// Exhaustive proportional-fairness oracle: maximizes the sum of achieved
// rates divided by the users' ledger totals. Same guard and tie-break.
ScheduleDecision OptPfSchedule(const SubsetRatesFn& rates_fn,
                               const std::vector<double>& ledger_totals,
                               int num_users, int max_scheduled);

// Greedy PF approximation: take the top_n users by weighted rate, group
// them by channel correlation, return the largest group (ties: the group
// created first), trimmed to its first max_scheduled members if oversized.
// The objective reports the achieved PF value of the returned subset.
ScheduleDecision ApproxPfSchedule(const Eigen::MatrixXcd& h_full,
                                  const std::vector<double>& su_rates,
                                  const FairnessLedger& ledger, int top_n,
                                  int max_scheduled, double corr_threshold,
                                  double noise_var, Rng& rng);

// Uniform draw over all valid subsets through the action codec.
ScheduleDecision RandomSchedule(const ActionCodec& codec, Rng& rng);

// Round-robin over correlation groups. Groups are rebuilt from the current
// channel whenever a fresh group is needed; a group larger than N_max is
// split into ceil(|G| / N_max) chunks served on consecutive turns. One
// cursor per RB.
class RrUgScheduler {
 public:
  RrUgScheduler(int num_users, int num_rbs, int max_scheduled,
                double corr_threshold, uint64_t seed);

  // h_rb is the current TTI's M x L channel on this RB.
  ScheduleDecision Schedule(int rb, const Eigen::MatrixXcd& h_rb);

  void Reset();

 private:
  struct RbState {
    uint64_t cursor = 0;
    std::deque<std::vector<int>> pending;
  };

  int num_users_;
  int max_scheduled_;
  double corr_threshold_;
  uint64_t seed_;
  std::vector<RbState> rb_states_;
};

}  // namespace mmsched

#endif  // MMSCHED_SCHEDULERS_H_
