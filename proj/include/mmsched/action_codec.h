/**
 * @file action_codec.h
 * @brief Bijection between flat action indices and scheduled user subsets,
 *        plus the mixed-radix dimension factorization used by the agent.
 *
 * Index order: all 1-user subsets first, then 2-user subsets, and so on up
 * to N_max users; subsets of equal size are ordered lexicographically.
 * Ranking is combinatorial (O(L * N_max) arithmetic), no tables, so the
 * codec works unchanged at A ~ 7e14.
 */
#ifndef MMSCHED_ACTION_CODEC_H_
#define MMSCHED_ACTION_CODEC_H_

#include <cstdint>
#include <vector>

namespace mmsched {

// C(n, k). Throws std::overflow_error when the value exceeds uint64.
uint64_t Binomial(int n, int k);

// C(n, k) into *out; false (instead of throwing) on uint64 overflow.
bool BinomialChecked(int n, int k, uint64_t* out);

class ActionCodec {
 public:
  // Throws std::invalid_argument when the action count Sum C(L, i) does not
  // fit in 64 bits (e.g. L=128, N_max=16).
  ActionCodec(int num_users, int max_scheduled);

  uint64_t num_actions() const { return num_actions_; }
  int num_users() const { return num_users_; }
  int max_scheduled() const { return max_scheduled_; }

  // Subset (any order, unique indices, 1..N_max of them) -> flat index.
  uint64_t Encode(const std::vector<int>& subset) const;

  // Flat index -> subset in ascending user order.
  std::vector<int> Decode(uint64_t action) const;

 private:
  int num_users_;
  int max_scheduled_;
  uint64_t num_actions_;
  // card_base_[i] = first flat index of the cardinality-i block, i in
  // [1, N_max]; card_base_[N_max + 1] = A.
  std::vector<uint64_t> card_base_;
};

// Mixed-radix factorization of the flat index into D sub-indices,
// least-significant dimension first. The factorized space may overcover A;
// joined indices >= A clamp to A - 1 and report it.
class DimensionCodec {
 public:
  // Throws std::invalid_argument if the sizes cover fewer than num_actions
  // indices or more than 2^64 (radix overflow).
  DimensionCodec(uint64_t num_actions, std::vector<int> dim_sizes);

  int num_dims() const { return static_cast<int>(dim_sizes_.size()); }
  const std::vector<int>& dim_sizes() const { return dim_sizes_; }
  uint64_t num_actions() const { return num_actions_; }

  std::vector<int> Split(uint64_t action) const;

  // *clamped (when non-null) reports whether the joined index was >= A.
  uint64_t Join(const std::vector<int>& sub_indices,
                bool* clamped = nullptr) const;

 private:
  uint64_t num_actions_;
  std::vector<int> dim_sizes_;
};

// Smallest uniform per-dimension size s with s^num_dims >= num_actions.
std::vector<int> UniformDimSizes(uint64_t num_actions, int num_dims);

}  // namespace mmsched

#endif  // MMSCHED_ACTION_CODEC_H_
