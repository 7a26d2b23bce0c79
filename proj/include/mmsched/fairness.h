/**
 * @file fairness.h
 * @brief Proportional-fairness ledger and Jain's fairness index.
 */
#ifndef MMSCHED_FAIRNESS_H_
#define MMSCHED_FAIRNESS_H_

#include <vector>

namespace mmsched {

// Jain's fairness index (sum f)^2 / (n * sum f^2) over per-user totals.
// Always in [1/n, 1]. Empty, negative, or all-zero input is rejected.
double Jfi(const std::vector<double>& totals);

// Cumulative delivered rate per (user, rb), epsilon-initialized so that
// proportional-fair weights r / p are defined from the first TTI.
class FairnessLedger {
 public:
  static constexpr double kEpsilon = 1e-6;

  FairnessLedger(int num_users, int num_rbs);

  // Adds rate to user's running total on rb.
  void Deliver(int user, int rb, double rate);

  // p summed over RBs for one user, epsilon included.
  double UserTotal(int user) const;

  // Per-user totals across RBs, epsilon included.
  std::vector<double> Totals() const;

  // Delivered rate net of the epsilon seed; the JFI input.
  std::vector<double> DeliveredTotals() const;

  double At(int user, int rb) const { return p_[Index(user, rb)]; }
  int num_users() const { return num_users_; }
  int num_rbs() const { return num_rbs_; }

  void Reset();

  // Raw storage, row per user; used for exact checkpoint round trips.
  const std::vector<double>& raw() const { return p_; }
  void SetRaw(std::vector<double> p);

 private:
  size_t Index(int user, int rb) const {
    return static_cast<size_t>(user) * num_rbs_ + rb;
  }

  int num_users_;
  int num_rbs_;
  std::vector<double> p_;
};

}  // namespace mmsched

#endif  // MMSCHED_FAIRNESS_H_
