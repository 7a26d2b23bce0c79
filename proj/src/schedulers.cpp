#include "mmsched/schedulers.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mmsched/errors.h"
#include "mmsched/grouping.h"
#include "mmsched/phy.h"

namespace mmsched {

namespace {

// Visits every subset of [0, num_users) with 1..max_scheduled elements,
// cardinality ascending, lexicographic within a cardinality. This matches
// the ActionCodec index order, so "first strict improvement wins" yields
// the documented tie-break.
template <typename Visit>
void ForEachSubset(int num_users, int max_scheduled, Visit&& visit) {
  std::vector<int> comb;
  for (int k = 1; k <= max_scheduled; ++k) {
    comb.resize(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
      comb[static_cast<size_t>(i)] = i;
    }
    for (;;) {
      visit(comb);
      int i = k - 1;
      while (i >= 0 && comb[static_cast<size_t>(i)] == num_users - k + i) {
        --i;
      }
      if (i < 0) {
        break;
      }
      ++comb[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
      }
    }
  }
}

void CheckEnumerable(int num_users, int max_scheduled) {
  if (num_users < 1 || max_scheduled < 1 || max_scheduled > num_users) {
    throw std::invalid_argument(
        "schedulers: need 1 <= max_scheduled <= num_users");
  }
  unsigned __int128 total = 0;
  for (int i = 1; i <= max_scheduled; ++i) {
    uint64_t c = 0;
    if (!BinomialChecked(num_users, i, &c)) {
      total = kEnumerationLimit + 1;
      break;
    }
    total += c;
    if (total > kEnumerationLimit) {
      break;
    }
  }
  if (total > kEnumerationLimit) {
    throw TooLargeError(
        "exhaustive scheduling infeasible: subset count exceeds " +
        std::to_string(kEnumerationLimit) +
        "; use approx-pf or smart for this size");
  }
}

}  // namespace

SubsetRatesFn MakeZfSubsetRatesFn(const Eigen::MatrixXcd& h_full,
                                  double noise_var) {
  return [h_full, noise_var](const std::vector<int>& subset) {
    Eigen::MatrixXcd h_sel(h_full.rows(),
                           static_cast<Eigen::Index>(subset.size()));
    for (size_t j = 0; j < subset.size(); ++j) {
      h_sel.col(static_cast<Eigen::Index>(j)) = h_full.col(subset[j]);
    }
    return SubsetRates(h_sel, noise_var);
  };
}

SubsetRatesFn MakeFixedSubsetRatesFn(const Eigen::MatrixXcd& h_full,
                                     const std::vector<double>& fixed_rates,
                                     double noise_var) {
  return [h_full, fixed_rates, noise_var](const std::vector<int>& subset) {
    Eigen::MatrixXcd h_sel(h_full.rows(),
                           static_cast<Eigen::Index>(subset.size()));
    for (size_t j = 0; j < subset.size(); ++j) {
      h_sel.col(static_cast<Eigen::Index>(j)) = h_full.col(subset[j]);
    }
    bool singular = false;
    SubsetRates(h_sel, noise_var, &singular);
    std::vector<double> rates(subset.size(), 0.0);
    if (!singular) {
      for (size_t j = 0; j < subset.size(); ++j) {
        rates[j] = fixed_rates[static_cast<size_t>(subset[j])];
      }
    }
    return rates;
  };
}

std::vector<double> WeightedRates(const std::vector<double>& rates,
                                  const FairnessLedger& ledger) {
  if (static_cast<int>(rates.size()) != ledger.num_users()) {
    throw std::invalid_argument("WeightedRates: rate count != ledger users");
  }
  std::vector<double> w(rates.size());
  for (size_t l = 0; l < rates.size(); ++l) {
    w[l] = rates[l] / ledger.UserTotal(static_cast<int>(l));
  }
  return w;
}

ScheduleDecision OptMrSchedule(const SubsetRatesFn& rates_fn, int num_users,
                               int max_scheduled) {
  CheckEnumerable(num_users, max_scheduled);
  ScheduleDecision best;
  best.objective = -std::numeric_limits<double>::infinity();
  ForEachSubset(num_users, max_scheduled, [&](const std::vector<int>& subset) {
    const std::vector<double> rates = rates_fn(subset);
    const double sum = std::accumulate(rates.begin(), rates.end(), 0.0);
    if (sum > best.objective) {
      best.objective = sum;
      best.selected = subset;
    }
  });
  return best;
}

ScheduleDecision OptPfSchedule(const SubsetRatesFn& rates_fn,
                               const std::vector<double>& ledger_totals,
                               int num_users, int max_scheduled) {
  CheckEnumerable(num_users, max_scheduled);
  if (static_cast<int>(ledger_totals.size()) != num_users) {
    throw std::invalid_argument("OptPfSchedule: ledger total count != L");
  }
  for (const double p : ledger_totals) {
    if (!(p > 0.0)) {
      throw std::invalid_argument("OptPfSchedule: ledger totals must be > 0");
    }
  }
  ScheduleDecision best;
  best.objective = -std::numeric_limits<double>::infinity();
  ForEachSubset(num_users, max_scheduled, [&](const std::vector<int>& subset) {
    const std::vector<double> rates = rates_fn(subset);
    double weighted_sum = 0.0;
    for (size_t j = 0; j < subset.size(); ++j) {
      weighted_sum +=
          rates[j] / ledger_totals[static_cast<size_t>(subset[j])];
    }
    if (weighted_sum > best.objective) {
      best.objective = weighted_sum;
      best.selected = subset;
    }
  });
  return best;
}

ScheduleDecision ApproxPfSchedule(const Eigen::MatrixXcd& h_full,
                                  const std::vector<double>& su_rates,
                                  const FairnessLedger& ledger, int top_n,
                                  int max_scheduled, double corr_threshold,
                                  double noise_var, Rng& rng) {
  const int num_users = static_cast<int>(h_full.cols());
  if (top_n < 1 || top_n > num_users) {
    throw std::invalid_argument("ApproxPfSchedule: top_n must be in [1, L]");
  }
  if (max_scheduled < 1) {
    throw std::invalid_argument("ApproxPfSchedule: max_scheduled must be "
                                ">= 1");
  }
  if (static_cast<int>(su_rates.size()) != num_users) {
    throw std::invalid_argument("ApproxPfSchedule: su_rates size != L");
  }
  const std::vector<double> w = WeightedRates(su_rates, ledger);

  // Top-N by weighted rate, ties toward the smaller user index.
  std::vector<int> order(static_cast<size_t>(num_users));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&w](int a, int b) {
    return w[static_cast<size_t>(a)] > w[static_cast<size_t>(b)];
  });
  std::vector<int> shortlist(order.begin(), order.begin() + top_n);
  std::sort(shortlist.begin(), shortlist.end());

  Eigen::MatrixXcd h_short(h_full.rows(), top_n);
  for (int j = 0; j < top_n; ++j) {
    h_short.col(j) = h_full.col(shortlist[static_cast<size_t>(j)]);
  }
  const GroupingResult grouping = GroupUsers(h_short, corr_threshold, rng);
  const std::vector<std::vector<int>> members = GroupMembers(grouping);

  // Largest group; group labels follow creation order, so the first
  // largest is the earliest created.
  size_t best_group = 0;
  for (size_t g = 1; g < members.size(); ++g) {
    if (members[g].size() > members[best_group].size()) {
      best_group = g;
    }
  }

  ScheduleDecision decision;
  for (const int local : members[best_group]) {
    decision.selected.push_back(shortlist[static_cast<size_t>(local)]);
  }
  std::sort(decision.selected.begin(), decision.selected.end());
  if (static_cast<int>(decision.selected.size()) > max_scheduled) {
    decision.selected.resize(static_cast<size_t>(max_scheduled));
  }

  const std::vector<double> achieved =
      MakeZfSubsetRatesFn(h_full, noise_var)(decision.selected);
  for (size_t j = 0; j < decision.selected.size(); ++j) {
    decision.objective +=
        achieved[j] / ledger.UserTotal(decision.selected[j]);
  }
  return decision;
}

ScheduleDecision RandomSchedule(const ActionCodec& codec, Rng& rng) {
  ScheduleDecision decision;
  const uint64_t action = rng.NextBelow(codec.num_actions());
  decision.selected = codec.Decode(action);
  return decision;
}

RrUgScheduler::RrUgScheduler(int num_users, int num_rbs, int max_scheduled,
                             double corr_threshold, uint64_t seed)
    : num_users_(num_users),
      max_scheduled_(max_scheduled),
      corr_threshold_(corr_threshold),
      seed_(seed),
      rb_states_(static_cast<size_t>(num_rbs)) {
  if (num_users < 1 || num_rbs < 1 || max_scheduled < 1 ||
      max_scheduled > num_users) {
    throw std::invalid_argument("RrUgScheduler: bad dimensions");
  }
}

ScheduleDecision RrUgScheduler::Schedule(int rb,
                                         const Eigen::MatrixXcd& h_rb) {
  if (rb < 0 || rb >= static_cast<int>(rb_states_.size())) {
    throw std::out_of_range("RrUgScheduler::Schedule: rb out of range");
  }
  if (static_cast<int>(h_rb.cols()) != num_users_) {
    throw std::invalid_argument("RrUgScheduler::Schedule: channel has wrong "
                                "user count");
  }
  RbState& state = rb_states_[static_cast<size_t>(rb)];
  if (state.pending.empty()) {
    // A fixed per-RB grouping seed keeps groups stable on static channels,
    // giving the clean round-robin cycle; on mobile channels the groups
    // track the evolving correlations.
    Rng rng(DeriveSeed(seed_, static_cast<uint64_t>(rb) + 1));
    const GroupingResult grouping = GroupUsers(h_rb, corr_threshold_, rng);
    std::vector<std::vector<int>> members = GroupMembers(grouping);
    std::sort(members.begin(), members.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                return a.front() < b.front();
              });
    const std::vector<int>& group =
        members[static_cast<size_t>(state.cursor % members.size())];
    ++state.cursor;
    for (size_t start = 0; start < group.size();
         start += static_cast<size_t>(max_scheduled_)) {
      const size_t stop =
          std::min(group.size(), start + static_cast<size_t>(max_scheduled_));
      state.pending.emplace_back(group.begin() + static_cast<ptrdiff_t>(start),
                                 group.begin() + static_cast<ptrdiff_t>(stop));
    }
  }
  ScheduleDecision decision;
  decision.selected = std::move(state.pending.front());
  state.pending.pop_front();
  return decision;
}

void RrUgScheduler::Reset() {
  for (RbState& state : rb_states_) {
    state.cursor = 0;
    state.pending.clear();
  }
}

}  // namespace mmsched
