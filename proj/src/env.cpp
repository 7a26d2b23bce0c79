#include "mmsched/env.h"

#include <algorithm>
#include <stdexcept>

#include "mmsched/phy.h"
#include "mmsched/rng.h"

namespace mmsched {

namespace {

// Appends one min-max normalized feature block; a flat block becomes 0.5.
void AppendNormalized(const std::vector<double>& feature,
                      std::vector<double>* state) {
  const auto [lo_it, hi_it] =
      std::minmax_element(feature.begin(), feature.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi > lo) {
    for (const double x : feature) {
      state->push_back((x - lo) / (hi - lo));
    }
  } else {
    state->insert(state->end(), feature.size(), 0.5);
  }
}

}  // namespace

std::vector<double> BuildState(const std::vector<double>& su_rates,
                               const std::vector<double>& ledger_totals,
                               const std::vector<int>& group_labels,
                               int num_groups) {
  const size_t num_users = su_rates.size();
  if (ledger_totals.size() != num_users || group_labels.size() != num_users ||
      num_groups < 1) {
    throw std::invalid_argument("BuildState: inconsistent feature sizes");
  }
  std::vector<double> state;
  state.reserve(3 * num_users);
  AppendNormalized(su_rates, &state);
  AppendNormalized(ledger_totals, &state);
  std::vector<double> group_feature(num_users);
  for (size_t l = 0; l < num_users; ++l) {
    group_feature[l] =
        static_cast<double>(group_labels[l] + 1) / num_groups;
  }
  AppendNormalized(group_feature, &state);
  return state;
}

MimoEnv::MimoEnv(const ChannelTrace* trace, int max_scheduled, double beta,
                 double corr_threshold, uint64_t group_seed)
    : trace_(trace),
      max_scheduled_(max_scheduled),
      beta_(beta),
      corr_threshold_(corr_threshold),
      group_seed_(group_seed),
      ledger_(trace->num_users, trace->num_rbs),
      cache_(static_cast<size_t>(trace->num_rbs)) {
  if (max_scheduled < 1 ||
      max_scheduled > std::min(trace->num_bs_antennas, trace->num_users)) {
    throw std::invalid_argument(
        "MimoEnv: need 1 <= max_scheduled <= min(M, L)");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("MimoEnv: beta must be in [0, 1]");
  }
}

MimoEnv::RbCache& MimoEnv::CacheFor(int t, int b) {
  if (t < 0 || t >= num_ttis() || b < 0 || b >= num_rbs()) {
    throw std::out_of_range("MimoEnv: (tti, rb) out of range");
  }
  RbCache& cache = cache_[static_cast<size_t>(b)];
  if (cache.stamp != t) {
    cache.stamp = t;
    cache.h = trace_->Slice(t, b);
    cache.su_rates = SuRates(cache.h, trace_->noise_var);
    Rng rng(DeriveSeed(group_seed_,
                       static_cast<uint64_t>(t) * num_rbs() + b + 1));
    cache.grouping = GroupUsers(cache.h, corr_threshold_, rng);
  }
  return cache;
}

const Eigen::MatrixXcd& MimoEnv::ChannelFor(int t, int b) {
  return CacheFor(t, b).h;
}

const std::vector<double>& MimoEnv::SuRatesFor(int t, int b) {
  return CacheFor(t, b).su_rates;
}

const GroupingResult& MimoEnv::GroupingFor(int t, int b) {
  return CacheFor(t, b).grouping;
}

std::vector<double> MimoEnv::StateFor(int t, int b) {
  const RbCache& cache = CacheFor(t, b);
  return BuildState(cache.su_rates, ledger_.Totals(), cache.grouping.labels,
                    cache.grouping.num_groups);
}

StepResult MimoEnv::Step(int t, const std::vector<std::vector<int>>& selected) {
  if (static_cast<int>(selected.size()) != num_rbs()) {
    throw std::invalid_argument("MimoEnv::Step: need one decision per RB");
  }
  const int num_rb = num_rbs();
  StepResult result;
  result.sum_rate.assign(static_cast<size_t>(num_rb), 0.0);
  result.norm_sum_rate.assign(static_cast<size_t>(num_rb), 0.0);
  result.clipped.assign(static_cast<size_t>(num_rb), false);
  result.singular.assign(static_cast<size_t>(num_rb), false);
  result.sa_rewards.assign(static_cast<size_t>(num_rb), 0.0);

  // Rates for every RB first; the ledger mutates once, afterwards.
  std::vector<std::vector<double>> rates(static_cast<size_t>(num_rb));
  for (int b = 0; b < num_rb; ++b) {
    const std::vector<int>& users = selected[static_cast<size_t>(b)];
    if (users.empty() ||
        static_cast<int>(users.size()) > max_scheduled_) {
      throw std::invalid_argument(
          "MimoEnv::Step: decision cardinality out of range");
    }
    for (size_t j = 0; j < users.size(); ++j) {
      if (users[j] < 0 || users[j] >= num_users() ||
          (j > 0 && users[j] <= users[j - 1])) {
        throw std::invalid_argument(
            "MimoEnv::Step: decision must be ascending unique user indices");
      }
    }
    const RbCache& cache = CacheFor(t, b);
    Eigen::MatrixXcd h_sel(cache.h.rows(),
                           static_cast<Eigen::Index>(users.size()));
    for (size_t j = 0; j < users.size(); ++j) {
      h_sel.col(static_cast<Eigen::Index>(j)) = cache.h.col(users[j]);
    }
    bool singular = false;
    rates[static_cast<size_t>(b)] =
        SubsetRates(h_sel, trace_->noise_var, &singular);
    result.singular[static_cast<size_t>(b)] = singular;
    if (singular) {
      ++singular_events_;
    }
  }

  for (int b = 0; b < num_rb; ++b) {
    const std::vector<int>& users = selected[static_cast<size_t>(b)];
    const std::vector<double>& rb_rates = rates[static_cast<size_t>(b)];
    double sum = 0.0;
    for (size_t j = 0; j < users.size(); ++j) {
      ledger_.Deliver(users[j], b, rb_rates[j]);
      sum += rb_rates[j];
    }
    result.sum_rate[static_cast<size_t>(b)] = sum;
    bool clipped = false;
    result.norm_sum_rate[static_cast<size_t>(b)] =
        NormalizedSumRate(rb_rates, SuRatesFor(t, b), max_scheduled_,
                          /*clip=*/true, &clipped);
    result.clipped[static_cast<size_t>(b)] = clipped;
    if (clipped) {
      ++clip_events_;
    }
  }

  result.jfi = Jfi(ledger_.Totals());
  double norm_mean = 0.0;
  for (int b = 0; b < num_rb; ++b) {
    result.sa_rewards[static_cast<size_t>(b)] =
        beta_ * result.norm_sum_rate[static_cast<size_t>(b)] +
        (1.0 - beta_) * result.jfi;
    norm_mean += result.norm_sum_rate[static_cast<size_t>(b)];
  }
  norm_mean /= static_cast<double>(num_rb);
  result.ma_reward = beta_ * norm_mean + (1.0 - beta_) * result.jfi;
  return result;
}

void MimoEnv::ResetLedger() { ledger_.Reset(); }

}  // namespace mmsched
