#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include <doctest.h>

#include "mmsched/channel.h"
#include "mmsched/grouping.h"
#include "mmsched/rng.h"

using namespace mmsched;

namespace {

// Correlation matrix with fixed off-diagonal entries, used to drive the
// grouping logic without constructing channels.
Eigen::MatrixXd FixedCorr(int n, double value) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, value);
  c.diagonal().setOnes();
  return c;
}

}  // namespace

TEST_CASE("orthogonal, identical, and 45-degree pairs") {
  Eigen::MatrixXcd h(2, 3);
  h << 1.0, 0.0, 1.0 / std::sqrt(2.0),
       0.0, 1.0, 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXd c = CorrelationMatrix(h);
  CHECK(c(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c(0, 2) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(c(1, 2) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(c(0, 0) == doctest::Approx(1.0));

  Eigen::MatrixXcd dup(2, 2);
  dup.col(0) << 1.0, 2.0;
  dup.col(1) << 1.0, 2.0;
  CHECK(CorrelationMatrix(dup)(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("correlation is symmetric, bounded, and scale invariant") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd h(4, 5);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 5; ++j) {
        h(i, j) = rng.NextComplexGaussian();
      }
    }
    const Eigen::MatrixXd c = CorrelationMatrix(h);
    for (int i = 0; i < 5; ++i) {
      CHECK(c(i, i) == doctest::Approx(1.0).epsilon(1e-12));
      for (int j = 0; j < 5; ++j) {
        CHECK(c(i, j) == doctest::Approx(c(j, i)).epsilon(1e-12));
        CHECK(c(i, j) >= 0.0);
        CHECK(c(i, j) <= 1.0);
      }
    }
    Eigen::MatrixXcd scaled = h;
    scaled.col(2) *= std::complex<double>(-3.0, 4.0);
    const Eigen::MatrixXd c2 = CorrelationMatrix(scaled);
    CHECK((c - c2).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("zero column gets the documented convention") {
  Eigen::MatrixXcd h(2, 2);
  h.setZero();
  h(0, 0) = 1.0;
  const Eigen::MatrixXd c = CorrelationMatrix(h);
  CHECK(c(0, 1) == 0.0);
  CHECK(c(1, 1) == 1.0);
}

TEST_CASE("all-low correlation collapses to one group") {
  Rng rng(1);
  const GroupingResult g = GroupUsers(FixedCorr(6, 0.1), 0.5, rng);
  CHECK(g.num_groups == 1);
  for (const int label : g.labels) {
    CHECK(label == 0);
  }
}

TEST_CASE("all-high correlation gives singletons") {
  Rng rng(1);
  const GroupingResult g = GroupUsers(FixedCorr(5, 1.0), 0.5, rng);
  CHECK(g.num_groups == 5);
  std::set<int> labels(g.labels.begin(), g.labels.end());
  CHECK(labels.size() == 5);
}

TEST_CASE("two correlated pairs split across groups") {
  // c01 = c23 = 0.9, everything else 0.1. Whichever user seeds a group,
  // its correlated partner is blocked and one member of the other pair
  // joins, so each group holds one user per pair: {0,2},{1,3} or
  // {0,3},{1,2} depending on the seeding order.
  Eigen::MatrixXd c = FixedCorr(4, 0.1);
  c(0, 1) = c(1, 0) = 0.9;
  c(2, 3) = c(3, 2) = 0.9;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    Rng rng(seed);
    const GroupingResult g = GroupUsers(c, 0.5, rng);
    CHECK(g.num_groups == 2);
    CHECK(g.labels[0] != g.labels[1]);
    CHECK(g.labels[2] != g.labels[3]);
  }
}

TEST_CASE("groups never contain a pair at or above the threshold") {
  Rng channel_rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXcd h(8, 10);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 10; ++j) {
        h(i, j) = channel_rng.NextComplexGaussian();
      }
    }
    const Eigen::MatrixXd c = CorrelationMatrix(h);
    Rng rng(static_cast<uint64_t>(trial));
    const GroupingResult g = GroupUsers(c, 0.5, rng);

    // Partition: every user labeled, labels contiguous from 0.
    REQUIRE(g.labels.size() == 10);
    std::set<int> seen(g.labels.begin(), g.labels.end());
    CHECK(static_cast<int>(seen.size()) == g.num_groups);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == g.num_groups - 1);

    for (int i = 0; i < 10; ++i) {
      for (int j = i + 1; j < 10; ++j) {
        if (g.labels[i] == g.labels[j]) {
          CHECK(c(i, j) < 0.5);
        }
      }
    }
  }
}

TEST_CASE("grouping is deterministic for a fixed seed") {
  Eigen::MatrixXd c = FixedCorr(7, 0.4);
  c(1, 4) = c(4, 1) = 0.8;
  c(2, 6) = c(6, 2) = 0.9;
  Rng a(123), b(123);
  const GroupingResult ga = GroupUsers(c, 0.6, a);
  const GroupingResult gb = GroupUsers(c, 0.6, b);
  CHECK(ga.labels == gb.labels);
  CHECK(ga.num_groups == gb.num_groups);
}

TEST_CASE("threshold validation") {
  Rng rng(1);
  CHECK_THROWS_AS(GroupUsers(FixedCorr(3, 0.1), 0.0, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(GroupUsers(FixedCorr(3, 0.1), 1.5, rng),
                  std::invalid_argument);
}

TEST_CASE("GroupMembers lists ascending members per group") {
  GroupingResult g;
  g.labels = {1, 0, 1, 0, 2};
  g.num_groups = 3;
  const std::vector<std::vector<int>> members = GroupMembers(g);
  REQUIRE(members.size() == 3);
  CHECK(members[0] == std::vector<int>{1, 3});
  CHECK(members[1] == std::vector<int>{0, 2});
  CHECK(members[2] == std::vector<int>{4});
}

TEST_CASE("clustered channels group roughly by cluster") {
  const ChannelTrace trace = GenClustered(16, 8, 1, 1, 4, 0.95, 11);
  Rng rng(5);
  const GroupingResult g = GroupUsers(trace.Slice(0, 0), 0.5, rng);
  // Users i and i+4 share a cluster (round-robin assignment) and are too
  // correlated to share a group at c_th = 0.5 for most draws.
  int separated = 0;
  for (int i = 0; i < 4; ++i) {
    separated += g.labels[i] != g.labels[i + 4];
  }
  CHECK(separated >= 3);
}
