/**
 * @file grouping.h
 * @brief Correlation-based user grouping.
 */
#ifndef MMSCHED_GROUPING_H_
#define MMSCHED_GROUPING_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace mmsched {

class Rng;

// Pairwise channel-direction correlation |h_i^H h_j| / (||h_i|| ||h_j||),
// clamped to [0, 1]. Zero-norm users get 0 off-diagonal and 1 on the
// diagonal. Input is M x L, one column per user.
Eigen::MatrixXd CorrelationMatrix(const Eigen::MatrixXcd& h_full);

struct GroupingResult {
  std::vector<int> labels;  // labels[l] in [0, num_groups)
  int num_groups = 0;
};

// Greedy low-correlation grouping. Repeats until every user is assigned:
// draw one random ungrouped seed user, then absorb remaining ungrouped
// users in ascending index order whose correlation with every current
// member stays below corr_threshold. Group labels are contiguous and
// ordered by creation.
GroupingResult GroupUsers(const Eigen::MatrixXd& corr, double corr_threshold,
                          Rng& rng);

// Convenience overload that builds the correlation matrix first.
GroupingResult GroupUsers(const Eigen::MatrixXcd& h_full,
                          double corr_threshold, Rng& rng);

// Members of each group, ascending user index inside each group.
std::vector<std::vector<int>> GroupMembers(const GroupingResult& grouping);

}  // namespace mmsched

#endif  // MMSCHED_GROUPING_H_
