#include "mmsched/grouping.h"

#include <algorithm>
#include <stdexcept>

#include "mmsched/rng.h"

namespace mmsched {

Eigen::MatrixXd CorrelationMatrix(const Eigen::MatrixXcd& h_full) {
  const Eigen::Index num_users = h_full.cols();
  Eigen::VectorXd norms(num_users);
  for (Eigen::Index l = 0; l < num_users; ++l) {
    norms(l) = h_full.col(l).norm();
  }
  Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(num_users, num_users);
  for (Eigen::Index i = 0; i < num_users; ++i) {
    corr(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < num_users; ++j) {
      double c = 0.0;
      if (norms(i) > 0.0 && norms(j) > 0.0) {
        c = std::abs(h_full.col(i).dot(h_full.col(j))) / (norms(i) * norms(j));
        c = std::clamp(c, 0.0, 1.0);
      }
      corr(i, j) = c;
      corr(j, i) = c;
    }
  }
  return corr;
}

GroupingResult GroupUsers(const Eigen::MatrixXd& corr, double corr_threshold,
                          Rng& rng) {
  if (corr.rows() != corr.cols() || corr.rows() < 1) {
    throw std::invalid_argument("GroupUsers: correlation matrix must be "
                                "square and non-empty");
  }
  if (!(corr_threshold > 0.0 && corr_threshold <= 1.0)) {
    throw std::invalid_argument("GroupUsers: corr_threshold must be in "
                                "(0, 1]");
  }
  const int num_users = static_cast<int>(corr.rows());
  GroupingResult result;
  result.labels.assign(num_users, -1);

  std::vector<int> ungrouped(num_users);
  for (int l = 0; l < num_users; ++l) {
    ungrouped[l] = l;
  }

  int label = 0;
  std::vector<int> members;
  while (!ungrouped.empty()) {
    const size_t pick = rng.NextBelow(ungrouped.size());
    const int seed_user = ungrouped[pick];
    members.clear();
    members.push_back(seed_user);
    result.labels[seed_user] = label;
    ungrouped.erase(ungrouped.begin() + static_cast<ptrdiff_t>(pick));

    // Ascending index scan; a user joins only when below threshold with
    // every member already in the group.
    for (auto it = ungrouped.begin(); it != ungrouped.end();) {
      const int candidate = *it;
      bool compatible = true;
      for (const int member : members) {
        if (corr(candidate, member) >= corr_threshold) {
          compatible = false;
          break;
        }
      }
      if (compatible) {
        members.push_back(candidate);
        result.labels[candidate] = label;
        it = ungrouped.erase(it);
      } else {
        ++it;
      }
    }
    ++label;
  }
  result.num_groups = label;
  return result;
}

GroupingResult GroupUsers(const Eigen::MatrixXcd& h_full,
                          double corr_threshold, Rng& rng) {
  return GroupUsers(CorrelationMatrix(h_full), corr_threshold, rng);
}

std::vector<std::vector<int>> GroupMembers(const GroupingResult& grouping) {
  std::vector<std::vector<int>> members(
      static_cast<size_t>(grouping.num_groups));
  for (int l = 0; l < static_cast<int>(grouping.labels.size()); ++l) {
    members[static_cast<size_t>(grouping.labels[l])].push_back(l);
  }
  return members;
}

}  // namespace mmsched
