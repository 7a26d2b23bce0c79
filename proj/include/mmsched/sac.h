/**
 * @file sac.h
 * @brief Soft actor-critic over a huge discrete action space: tanh-squashed
 *        Gaussian actor, twin critics with Polyak targets, automatic
 *        entropy temperature, and the proto-action -> per-dimension KNN ->
 *        critic-argmax selection pipeline.
 */
#ifndef MMSCHED_SAC_H_
#define MMSCHED_SAC_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mmsched/action_codec.h"
#include "mmsched/mlp.h"
#include "mmsched/rng.h"

namespace mmsched {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

struct SacConfig {
  int state_dim = 0;
  int action_dim = 0;  // D, the number of factorized dimensions
  std::vector<int> hidden = {256, 256};
  double actor_lr = 5e-4;
  double critic_lr = 5e-4;
  double alpha_lr = 3e-4;
  double discount = 0.99;
  double tau = 0.005;
  int batch_size = 256;
  size_t buffer_capacity = 1000000;
  size_t min_fill = 1000;
  bool auto_alpha = true;
  double init_alpha = 0.2;
  double target_entropy = 0.0;  // 0 means use -action_dim
  int knn_k = 8;
  int max_candidates = 4096;
};

struct Transition {
  std::vector<double> state;
  std::vector<double> action;  // executed action embedded as cell centers
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;
};

class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity);

  void Add(Transition transition);
  size_t size() const { return store_.size(); }
  size_t capacity() const { return capacity_; }
  const Transition& At(size_t i) const { return store_[i]; }

  // Uniform with replacement.
  std::vector<const Transition*> Sample(size_t count, Rng& rng) const;

  void Save(std::ostream& out) const;
  void Load(std::istream& in);

 private:
  size_t capacity_;
  size_t next_ = 0;
  std::vector<Transition> store_;
};

// Center of cell `index` on the dim_size-point uniform grid over [-1, 1].
double CellCenter(int index, int dim_size);

// Indices of the k grid points nearest x, sorted by distance, equal
// distances resolved toward the lower index.
std::vector<int> KnnCandidates(double x, int dim_size, int k);

// Linear 1 -> 0 over decay_epochs, 0 afterwards.
double EpsilonSchedule(int epoch, int decay_epochs);

struct ActionChoice {
  uint64_t action = 0;
  std::vector<int> sub_indices;
  std::vector<double> embedding;
  bool explored = false;    // came from the epsilon branch
  int num_candidates = 0;   // joint candidates the critics scored
  int clamp_count = 0;      // joins that landed >= A and were clamped
};

struct UpdateDiagnostics {
  bool skipped = false;   // buffer below min fill
  bool diverged = false;  // non-finite loss, caller should abort
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double alpha_loss = 0.0;
  double alpha = 0.0;
  double mean_log_prob = 0.0;
};

class SacAgent {
 public:
  SacAgent(const SacConfig& config, DimensionCodec codec, uint64_t seed);

  // Actor head outputs, log-std already clamped to [kLogStdMin, kLogStdMax].
  struct PolicyParams {
    std::vector<double> mu;
    std::vector<double> log_std;
    std::vector<bool> clamped;  // per-dim: log-std hit the clamp
  };
  PolicyParams ActorForward(const std::vector<double>& state,
                            Mlp::Workspace* ws = nullptr) const;

  struct PolicySample {
    std::vector<double> action;  // tanh(mu + sigma * xi), in (-1, 1)^D
    double log_prob = 0.0;
  };
  // xi is the standard-normal draw, one entry per action dimension.
  PolicySample SampleWithNoise(const PolicyParams& params,
                               const std::vector<double>& xi) const;
  PolicySample Sample(const std::vector<double>& state);

  // Full pipeline: epsilon gate, proto action, per-dimension KNN, capped
  // candidate join, twin-critic argmax. With deterministic set the proto
  // action is tanh(mu) instead of a sample.
  ActionChoice SelectAction(const std::vector<double>& state, double epsilon,
                            bool deterministic = false);

  double CriticValue(const Mlp& critic, const std::vector<double>& state,
                     const std::vector<double>& action) const;

  void AddTransition(Transition transition);
  UpdateDiagnostics Update();

  // Loss seams with injected noise, used by Update and by the
  // finite-difference gradient checks. Gradient buffers may be null.
  double CriticLoss(const std::vector<const Transition*>& batch,
                    const std::vector<std::vector<double>>& next_noise,
                    std::vector<double>* grads1,
                    std::vector<double>* grads2) const;
  double ActorLoss(const std::vector<const Transition*>& batch,
                   const std::vector<std::vector<double>>& noise,
                   std::vector<double>* actor_grads,
                   double* mean_log_prob) const;
  double AlphaLoss(double mean_log_prob) const;
  double AlphaGrad(double mean_log_prob) const;

  void PolyakStep();

  const SacConfig& config() const { return config_; }
  const DimensionCodec& codec() const { return codec_; }
  double alpha() const;
  double log_alpha() const { return log_alpha_; }
  void set_log_alpha(double v) { log_alpha_ = v; }
  double target_entropy() const { return target_entropy_; }
  uint64_t update_count() const { return update_count_; }

  Mlp& actor() { return actor_; }
  Mlp& critic1() { return critic1_; }
  Mlp& critic2() { return critic2_; }
  Mlp& target1() { return target1_; }
  Mlp& target2() { return target2_; }
  ReplayBuffer& buffer() { return buffer_; }
  Rng& rng() { return rng_; }

  // Versioned binary checkpoint: all tensors, optimizer states, alpha, RNG
  // state, counters, optionally the replay buffer. Load validates that the
  // architecture matches this agent's config.
  void Save(std::ostream& out, bool include_buffer) const;
  void Load(std::istream& in);

 private:
  std::vector<double> EmbedAction(uint64_t action) const;

  SacConfig config_;
  DimensionCodec codec_;
  double target_entropy_;
  Rng rng_;
  Mlp actor_;
  Mlp critic1_;
  Mlp critic2_;
  Mlp target1_;
  Mlp target2_;
  double log_alpha_;
  AdamOptimizer actor_opt_;
  AdamOptimizer critic1_opt_;
  AdamOptimizer critic2_opt_;
  AdamOptimizer alpha_opt_;
  ReplayBuffer buffer_;
  uint64_t update_count_ = 0;
  bool warned_min_fill_ = false;
};

}  // namespace mmsched

#endif  // MMSCHED_SAC_H_
