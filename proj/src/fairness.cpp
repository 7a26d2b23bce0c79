#include "mmsched/fairness.h"

#include <stdexcept>

namespace mmsched {

double Jfi(const std::vector<double>& totals) {
  if (totals.empty()) {
    throw std::invalid_argument("Jfi: empty input");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double f : totals) {
    if (f < 0.0) {
      throw std::invalid_argument("Jfi: negative total");
    }
    sum += f;
    sum_sq += f * f;
  }
  if (sum_sq == 0.0) {
    throw std::invalid_argument("Jfi: all-zero totals");
  }
  return (sum * sum) / (static_cast<double>(totals.size()) * sum_sq);
}

FairnessLedger::FairnessLedger(int num_users, int num_rbs)
    : num_users_(num_users), num_rbs_(num_rbs) {
  if (num_users < 1 || num_rbs < 1) {
    throw std::invalid_argument("FairnessLedger: dimensions must be >= 1");
  }
  p_.assign(static_cast<size_t>(num_users) * num_rbs, kEpsilon);
}

void FairnessLedger::Deliver(int user, int rb, double rate) {
  if (user < 0 || user >= num_users_ || rb < 0 || rb >= num_rbs_) {
    throw std::out_of_range("FairnessLedger::Deliver: index out of range");
  }
  if (rate < 0.0) {
    throw std::invalid_argument("FairnessLedger::Deliver: negative rate");
  }
  p_[Index(user, rb)] += rate;
}

double FairnessLedger::UserTotal(int user) const {
  if (user < 0 || user >= num_users_) {
    throw std::out_of_range("FairnessLedger::UserTotal: index out of range");
  }
  double sum = 0.0;
  for (int b = 0; b < num_rbs_; ++b) {
    sum += p_[Index(user, b)];
  }
  return sum;
}

std::vector<double> FairnessLedger::Totals() const {
  std::vector<double> totals(static_cast<size_t>(num_users_));
  for (int l = 0; l < num_users_; ++l) {
    totals[static_cast<size_t>(l)] = UserTotal(l);
  }
  return totals;
}

std::vector<double> FairnessLedger::DeliveredTotals() const {
  std::vector<double> totals = Totals();
  const double seed = kEpsilon * num_rbs_;
  for (double& t : totals) {
    t -= seed;
    if (t < 0.0) {
      t = 0.0;
    }
  }
  return totals;
}

void FairnessLedger::Reset() {
  p_.assign(p_.size(), kEpsilon);
}

void FairnessLedger::SetRaw(std::vector<double> p) {
  if (p.size() != p_.size()) {
    throw std::invalid_argument("FairnessLedger::SetRaw: size mismatch");
  }
  p_ = std::move(p);
}

}  // namespace mmsched
