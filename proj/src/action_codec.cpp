#include "mmsched/action_codec.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mmsched {

bool BinomialChecked(int n, int k, uint64_t* out) {
  if (k < 0 || k > n) {
    *out = 0;
    return true;
  }
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact: it equals C(n - k + i, i), and the
    // sequence is nondecreasing in i, so overflow never self-corrects.
    result = result * static_cast<unsigned>(n - k + i) /
             static_cast<unsigned>(i);
    if (result > std::numeric_limits<uint64_t>::max()) {
      return false;
    }
  }
  *out = static_cast<uint64_t>(result);
  return true;
}

uint64_t Binomial(int n, int k) {
  uint64_t out = 0;
  if (!BinomialChecked(n, k, &out)) {
    throw std::overflow_error("Binomial(" + std::to_string(n) + ", " +
                              std::to_string(k) + ") exceeds uint64");
  }
  return out;
}

ActionCodec::ActionCodec(int num_users, int max_scheduled)
    : num_users_(num_users), max_scheduled_(max_scheduled) {
  if (num_users < 1 || max_scheduled < 1 || max_scheduled > num_users) {
    throw std::invalid_argument(
        "ActionCodec: need 1 <= max_scheduled <= num_users");
  }
  card_base_.resize(static_cast<size_t>(max_scheduled) + 2, 0);
  unsigned __int128 total = 0;
  for (int i = 1; i <= max_scheduled; ++i) {
    card_base_[static_cast<size_t>(i)] = static_cast<uint64_t>(total);
    uint64_t count = 0;
    if (!BinomialChecked(num_users, i, &count)) {
      throw std::invalid_argument(
          "ActionCodec: action count exceeds 64-bit range for L=" +
          std::to_string(num_users) + ", N_max=" + std::to_string(i));
    }
    total += count;
    if (total > std::numeric_limits<uint64_t>::max()) {
      throw std::invalid_argument(
          "ActionCodec: action count exceeds 64-bit range for L=" +
          std::to_string(num_users) + ", N_max=" + std::to_string(i));
    }
  }
  num_actions_ = static_cast<uint64_t>(total);
  card_base_[static_cast<size_t>(max_scheduled) + 1] = num_actions_;
}

uint64_t ActionCodec::Encode(const std::vector<int>& subset) const {
  if (subset.empty() || static_cast<int>(subset.size()) > max_scheduled_) {
    throw std::invalid_argument("ActionCodec::Encode: subset size must be in "
                                "[1, max_scheduled]");
  }
  std::vector<int> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  const int k = static_cast<int>(sorted.size());
  for (int j = 0; j < k; ++j) {
    if (sorted[static_cast<size_t>(j)] < 0 ||
        sorted[static_cast<size_t>(j)] >= num_users_) {
      throw std::invalid_argument("ActionCodec::Encode: user out of range");
    }
    if (j > 0 && sorted[static_cast<size_t>(j)] ==
                     sorted[static_cast<size_t>(j - 1)]) {
      throw std::invalid_argument("ActionCodec::Encode: duplicate user");
    }
  }

  // Lexicographic rank within the cardinality-k block: count the subsets
  // sharing each prefix but taking a smaller value at that position.
  unsigned __int128 rank = 0;
  int prev = -1;
  for (int j = 0; j < k; ++j) {
    for (int v = prev + 1; v < sorted[static_cast<size_t>(j)]; ++v) {
      rank += Binomial(num_users_ - 1 - v, k - 1 - j);
    }
    prev = sorted[static_cast<size_t>(j)];
  }
  return card_base_[static_cast<size_t>(k)] + static_cast<uint64_t>(rank);
}

std::vector<int> ActionCodec::Decode(uint64_t action) const {
  if (action >= num_actions_) {
    throw std::out_of_range("ActionCodec::Decode: index out of range");
  }
  int k = 1;
  while (action >= card_base_[static_cast<size_t>(k) + 1]) {
    ++k;
  }
  uint64_t rank = action - card_base_[static_cast<size_t>(k)];

  std::vector<int> subset(static_cast<size_t>(k));
  int v = 0;
  for (int j = 0; j < k; ++j) {
    for (;; ++v) {
      const uint64_t with_v = Binomial(num_users_ - 1 - v, k - 1 - j);
      if (rank < with_v) {
        break;
      }
      rank -= with_v;
    }
    subset[static_cast<size_t>(j)] = v;
    ++v;
  }
  return subset;
}

DimensionCodec::DimensionCodec(uint64_t num_actions,
                               std::vector<int> dim_sizes)
    : num_actions_(num_actions), dim_sizes_(std::move(dim_sizes)) {
  if (num_actions_ < 1) {
    throw std::invalid_argument("DimensionCodec: num_actions must be >= 1");
  }
  if (dim_sizes_.empty()) {
    throw std::invalid_argument("DimensionCodec: need at least 1 dimension");
  }
  unsigned __int128 capacity = 1;
  const unsigned __int128 limit =
      static_cast<unsigned __int128>(std::numeric_limits<uint64_t>::max()) + 1;
  for (const int size : dim_sizes_) {
    if (size < 1) {
      throw std::invalid_argument("DimensionCodec: dimension sizes must be "
                                  ">= 1");
    }
    capacity *= static_cast<unsigned>(size);
    if (capacity > limit) {
      throw std::invalid_argument("DimensionCodec: radix overflow, capacity "
                                  "exceeds 2^64");
    }
  }
  if (capacity < num_actions_) {
    throw std::invalid_argument(
        "DimensionCodec: dimensions cover fewer indices than num_actions");
  }
}

std::vector<int> DimensionCodec::Split(uint64_t action) const {
  if (action >= num_actions_) {
    throw std::out_of_range("DimensionCodec::Split: index out of range");
  }
  std::vector<int> sub(dim_sizes_.size());
  for (size_t d = 0; d < dim_sizes_.size(); ++d) {
    const uint64_t size = static_cast<uint64_t>(dim_sizes_[d]);
    sub[d] = static_cast<int>(action % size);
    action /= size;
  }
  return sub;
}

uint64_t DimensionCodec::Join(const std::vector<int>& sub_indices,
                              bool* clamped) const {
  if (sub_indices.size() != dim_sizes_.size()) {
    throw std::invalid_argument("DimensionCodec::Join: wrong tuple length");
  }
  if (clamped != nullptr) {
    *clamped = false;
  }
  unsigned __int128 action = 0;
  unsigned __int128 radix = 1;
  for (size_t d = 0; d < dim_sizes_.size(); ++d) {
    if (sub_indices[d] < 0 || sub_indices[d] >= dim_sizes_[d]) {
      throw std::out_of_range("DimensionCodec::Join: sub-index out of range");
    }
    action += radix * static_cast<unsigned>(sub_indices[d]);
    radix *= static_cast<unsigned>(dim_sizes_[d]);
  }
  if (action >= num_actions_) {
    if (clamped != nullptr) {
      *clamped = true;
    }
    return num_actions_ - 1;
  }
  return static_cast<uint64_t>(action);
}

std::vector<int> UniformDimSizes(uint64_t num_actions, int num_dims) {
  if (num_dims < 1) {
    throw std::invalid_argument("UniformDimSizes: num_dims must be >= 1");
  }
  if (num_actions < 1) {
    throw std::invalid_argument("UniformDimSizes: num_actions must be >= 1");
  }
  // Smallest s with s^D >= A, found by integer search from the float guess.
  int size = std::max<int>(
      1, static_cast<int>(std::floor(std::pow(
             static_cast<double>(num_actions), 1.0 / num_dims))) -
             1);
  auto covers = [&](int s) {
    unsigned __int128 cap = 1;
    for (int d = 0; d < num_dims; ++d) {
      cap *= static_cast<unsigned>(s);
      if (cap >= num_actions) {
        return true;
      }
    }
    return cap >= num_actions;
  };
  while (!covers(size)) {
    ++size;
  }
  return std::vector<int>(static_cast<size_t>(num_dims), size);
}

}  // namespace mmsched
