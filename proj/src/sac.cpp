#include "mmsched/sac.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace mmsched {

namespace {

constexpr char kCheckpointMagic[4] = {'M', 'M', 'C', 'K'};
constexpr uint16_t kCheckpointVersion = 1;
constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2*pi)

double Softplus(double x) {
  if (x > 30.0) {
    return x;
  }
  if (x < -30.0) {
    return std::exp(x);
  }
  return std::log1p(std::exp(x));
}

template <typename T>
void WriteRaw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void ReadRaw(std::istream& in, T* value) {
  in.read(reinterpret_cast<char*>(value), sizeof(T));
  if (!in) {
    throw std::runtime_error("checkpoint: truncated stream");
  }
}

void WriteVec(std::ostream& out, const std::vector<double>& v) {
  const uint64_t n = v.size();
  WriteRaw(out, n);
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
}

void ReadVec(std::istream& in, std::vector<double>* v) {
  uint64_t n = 0;
  ReadRaw(in, &n);
  if (n != v->size()) {
    throw std::runtime_error("checkpoint: tensor size mismatch");
  }
  in.read(reinterpret_cast<char*>(v->data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) {
    throw std::runtime_error("checkpoint: truncated tensor");
  }
}

}  // namespace

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  if (capacity < 1) {
    throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
  }
}

void ReplayBuffer::Add(Transition transition) {
  if (store_.size() < capacity_) {
    store_.push_back(std::move(transition));
  } else {
    store_[next_] = std::move(transition);
    next_ = (next_ + 1) % capacity_;
  }
}

std::vector<const Transition*> ReplayBuffer::Sample(size_t count,
                                                    Rng& rng) const {
  if (store_.empty()) {
    throw std::logic_error("ReplayBuffer::Sample: buffer is empty");
  }
  std::vector<const Transition*> batch(count);
  for (size_t i = 0; i < count; ++i) {
    batch[i] = &store_[rng.NextBelow(store_.size())];
  }
  return batch;
}

void ReplayBuffer::Save(std::ostream& out) const {
  WriteRaw(out, static_cast<uint64_t>(capacity_));
  WriteRaw(out, static_cast<uint64_t>(next_));
  WriteRaw(out, static_cast<uint64_t>(store_.size()));
  for (const Transition& t : store_) {
    WriteVec(out, t.state);
    WriteVec(out, t.action);
    WriteRaw(out, t.reward);
    WriteVec(out, t.next_state);
    WriteRaw(out, static_cast<uint8_t>(t.done ? 1 : 0));
  }
}

namespace {

void ReadSizedVec(std::istream& in, std::vector<double>* v) {
  uint64_t n = 0;
  ReadRaw(in, &n);
  v->resize(n);
  in.read(reinterpret_cast<char*>(v->data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) {
    throw std::runtime_error("checkpoint: truncated buffer entry");
  }
}

}  // namespace

void ReplayBuffer::Load(std::istream& in) {
  uint64_t capacity = 0;
  uint64_t next = 0;
  uint64_t count = 0;
  ReadRaw(in, &capacity);
  ReadRaw(in, &next);
  ReadRaw(in, &count);
  if (capacity != capacity_ || count > capacity || next >= capacity) {
    throw std::runtime_error("ReplayBuffer::Load: header mismatch");
  }
  store_.clear();
  store_.reserve(count);
  next_ = next;
  for (uint64_t i = 0; i < count; ++i) {
    Transition t;
    ReadSizedVec(in, &t.state);
    ReadSizedVec(in, &t.action);
    ReadRaw(in, &t.reward);
    ReadSizedVec(in, &t.next_state);
    uint8_t done = 0;
    ReadRaw(in, &done);
    t.done = done != 0;
    store_.push_back(std::move(t));
  }
}

double CellCenter(int index, int dim_size) {
  return -1.0 + 2.0 * (index + 0.5) / dim_size;
}

std::vector<int> KnnCandidates(double x, int dim_size, int k) {
  if (k < 1 || k > dim_size) {
    throw std::invalid_argument("KnnCandidates: need 1 <= k <= dim_size");
  }
  std::vector<int> order(static_cast<size_t>(dim_size));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [x, dim_size](int a, int b) {
    const double da = std::abs(x - CellCenter(a, dim_size));
    const double db = std::abs(x - CellCenter(b, dim_size));
    if (da != db) {
      return da < db;
    }
    return a < b;
  });
  order.resize(static_cast<size_t>(k));
  return order;
}

double EpsilonSchedule(int epoch, int decay_epochs) {
  if (epoch < 0 || decay_epochs < 1) {
    throw std::invalid_argument("EpsilonSchedule: bad arguments");
  }
  if (epoch >= decay_epochs) {
    return 0.0;
  }
  return 1.0 - static_cast<double>(epoch) / decay_epochs;
}

SacAgent::SacAgent(const SacConfig& config, DimensionCodec codec,
                   uint64_t seed)
    : config_(config),
      codec_(std::move(codec)),
      target_entropy_(config.target_entropy != 0.0
                          ? config.target_entropy
                          : -static_cast<double>(config.action_dim)),
      rng_(seed),
      actor_([&] {
        std::vector<int> w{config.state_dim};
        w.insert(w.end(), config.hidden.begin(), config.hidden.end());
        w.push_back(2 * config.action_dim);
        return w;
      }(), rng_),
      critic1_([&] {
        std::vector<int> w{config.state_dim + config.action_dim};
        w.insert(w.end(), config.hidden.begin(), config.hidden.end());
        w.push_back(1);
        return w;
      }(), rng_),
      critic2_(critic1_.widths(), rng_),
      target1_(critic1_.widths(), rng_),
      target2_(critic1_.widths(), rng_),
      log_alpha_(std::log(config.init_alpha)),
      actor_opt_(actor_.num_params(), config.actor_lr),
      critic1_opt_(critic1_.num_params(), config.critic_lr),
      critic2_opt_(critic2_.num_params(), config.critic_lr),
      alpha_opt_(1, config.alpha_lr),
      buffer_(config.buffer_capacity) {
  if (config_.state_dim < 1 || config_.action_dim < 1) {
    throw std::invalid_argument("SacAgent: state and action dims must be "
                                ">= 1");
  }
  if (config_.action_dim != codec_.num_dims()) {
    throw std::invalid_argument("SacAgent: action_dim != codec dimensions");
  }
  if (config_.hidden.empty()) {
    throw std::invalid_argument("SacAgent: need at least one hidden layer");
  }
  for (const int size : codec_.dim_sizes()) {
    if (config_.knn_k > size) {
      throw std::invalid_argument("SacAgent: knn_k exceeds a dimension size");
    }
  }
  if (config_.knn_k < 1 || config_.max_candidates < 1 ||
      config_.batch_size < 1) {
    throw std::invalid_argument("SacAgent: bad knn_k/max_candidates/batch");
  }
  if (!(config_.init_alpha > 0.0)) {
    throw std::invalid_argument("SacAgent: init_alpha must be > 0");
  }
  target1_.params() = critic1_.params();
  target2_.params() = critic2_.params();
}

SacAgent::PolicyParams SacAgent::ActorForward(const std::vector<double>& state,
                                              Mlp::Workspace* ws) const {
  Mlp::Workspace local;
  Mlp::Workspace* use = ws != nullptr ? ws : &local;
  const std::vector<double>& out = actor_.Forward(state, use);
  const int d = config_.action_dim;
  PolicyParams p;
  p.mu.assign(out.begin(), out.begin() + d);
  p.log_std.resize(static_cast<size_t>(d));
  p.clamped.resize(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double raw = out[static_cast<size_t>(d + i)];
    const double clamped = std::clamp(raw, kLogStdMin, kLogStdMax);
    p.log_std[static_cast<size_t>(i)] = clamped;
    p.clamped[static_cast<size_t>(i)] = raw != clamped;
  }
  return p;
}

SacAgent::PolicySample SacAgent::SampleWithNoise(
    const PolicyParams& params, const std::vector<double>& xi) const {
  const int d = config_.action_dim;
  if (static_cast<int>(xi.size()) != d) {
    throw std::invalid_argument("SampleWithNoise: noise size mismatch");
  }
  PolicySample sample;
  sample.action.resize(static_cast<size_t>(d));
  double log_prob = 0.0;
  for (int i = 0; i < d; ++i) {
    const double log_std = params.log_std[static_cast<size_t>(i)];
    const double sigma = std::exp(log_std);
    const double u = params.mu[static_cast<size_t>(i)] +
                     sigma * xi[static_cast<size_t>(i)];
    const double a = std::tanh(u);
    sample.action[static_cast<size_t>(i)] = a;
    // Gaussian density at the sample, then the tanh change of variables
    // via the stable identity log(1 - tanh(u)^2) =
    // 2 (log 2 - u - softplus(-2u)).
    log_prob += -0.5 * xi[static_cast<size_t>(i)] * xi[static_cast<size_t>(i)] -
                log_std - kHalfLog2Pi;
    log_prob -= 2.0 * (std::numbers::ln2 - u - Softplus(-2.0 * u));
  }
  sample.log_prob = log_prob;
  return sample;
}

SacAgent::PolicySample SacAgent::Sample(const std::vector<double>& state) {
  const PolicyParams params = ActorForward(state);
  std::vector<double> xi(static_cast<size_t>(config_.action_dim));
  for (double& x : xi) {
    x = rng_.NextGaussian();
  }
  return SampleWithNoise(params, xi);
}

double SacAgent::CriticValue(const Mlp& critic,
                             const std::vector<double>& state,
                             const std::vector<double>& action) const {
  std::vector<double> input;
  input.reserve(state.size() + action.size());
  input.insert(input.end(), state.begin(), state.end());
  input.insert(input.end(), action.begin(), action.end());
  return critic.Forward(input)[0];
}

std::vector<double> SacAgent::EmbedAction(uint64_t action) const {
  const std::vector<int> sub = codec_.Split(action);
  std::vector<double> embedding(sub.size());
  for (size_t d = 0; d < sub.size(); ++d) {
    embedding[d] = CellCenter(sub[d], codec_.dim_sizes()[d]);
  }
  return embedding;
}

ActionChoice SacAgent::SelectAction(const std::vector<double>& state,
                                    double epsilon, bool deterministic) {
  ActionChoice choice;
  if (epsilon > 0.0 && rng_.NextUnit() < epsilon) {
    choice.explored = true;
    choice.action = rng_.NextBelow(codec_.num_actions());
    choice.sub_indices = codec_.Split(choice.action);
    choice.embedding = EmbedAction(choice.action);
    return choice;
  }

  const PolicyParams params = ActorForward(state);
  const int d = config_.action_dim;
  std::vector<double> proto(static_cast<size_t>(d));
  if (deterministic) {
    for (int i = 0; i < d; ++i) {
      proto[static_cast<size_t>(i)] = std::tanh(params.mu[static_cast<size_t>(i)]);
    }
  } else {
    std::vector<double> xi(static_cast<size_t>(d));
    for (double& x : xi) {
      x = rng_.NextGaussian();
    }
    proto = SampleWithNoise(params, xi).action;
  }

  const int k = config_.knn_k;
  std::vector<std::vector<int>> per_dim(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    per_dim[static_cast<size_t>(i)] =
        KnnCandidates(proto[static_cast<size_t>(i)],
                      codec_.dim_sizes()[static_cast<size_t>(i)], k);
  }

  // Candidate joins in increasing total distance rank, capped. Shell r
  // holds the tuples whose per-dimension ranks sum to r, so trimming at
  // the cap drops the farthest combinations first.
  double best_q = -std::numeric_limits<double>::infinity();
  uint64_t best_action = 0;
  bool found = false;
  std::vector<int> ranks(static_cast<size_t>(d), 0);
  std::vector<int> sub(static_cast<size_t>(d), 0);

  // The state occupies the same input prefix for every candidate, so its
  // first-layer contribution is computed once; each candidate only pays
  // for its own D action columns. Keeps per-candidate cost flat in L.
  const std::vector<double> base1 = critic1_.FirstPreactPrefix(state);
  const std::vector<double> base2 = critic2_.FirstPreactPrefix(state);
  const int state_dim = static_cast<int>(state.size());
  Mlp::Workspace ws;
  std::vector<double> preact;

  const auto score_tuple = [&]() {
    for (int i = 0; i < d; ++i) {
      sub[static_cast<size_t>(i)] =
          per_dim[static_cast<size_t>(i)][static_cast<size_t>(
              ranks[static_cast<size_t>(i)])];
    }
    bool clamped = false;
    const uint64_t action = codec_.Join(sub, &clamped);
    if (clamped) {
      ++choice.clamp_count;
    }
    const std::vector<double> embedding = EmbedAction(action);
    preact = base1;
    critic1_.AddToFirstPreact(preact, embedding, state_dim);
    const double q1 = critic1_.ForwardFromFirstPreact(preact, &ws)[0];
    preact = base2;
    critic2_.AddToFirstPreact(preact, embedding, state_dim);
    const double q2 = critic2_.ForwardFromFirstPreact(preact, &ws)[0];
    const double q = std::min(q1, q2);
    ++choice.num_candidates;
    if (!found || q > best_q || (q == best_q && action < best_action)) {
      found = true;
      best_q = q;
      best_action = action;
    }
  };

  const int max_rank_sum = d * (k - 1);
  for (int total = 0;
       total <= max_rank_sum && choice.num_candidates < config_.max_candidates;
       ++total) {
    // Depth-first over dimensions, ranks summing exactly to `total`.
    const std::function<bool(int, int)> descend = [&](int dim,
                                                      int remaining) -> bool {
      if (dim == d - 1) {
        if (remaining <= k - 1) {
          ranks[static_cast<size_t>(dim)] = remaining;
          score_tuple();
          if (choice.num_candidates >= config_.max_candidates) {
            return false;
          }
        }
        return true;
      }
      const int tail_max = (d - 1 - dim) * (k - 1);
      const int lo = std::max(0, remaining - tail_max);
      const int hi = std::min(k - 1, remaining);
      for (int r = lo; r <= hi; ++r) {
        ranks[static_cast<size_t>(dim)] = r;
        if (!descend(dim + 1, remaining - r)) {
          return false;
        }
      }
      return true;
    };
    descend(0, total);
  }

  choice.action = best_action;
  choice.sub_indices = codec_.Split(best_action);
  choice.embedding = EmbedAction(best_action);
  return choice;
}

void SacAgent::AddTransition(Transition transition) {
  if (static_cast<int>(transition.state.size()) != config_.state_dim ||
      static_cast<int>(transition.next_state.size()) != config_.state_dim ||
      static_cast<int>(transition.action.size()) != config_.action_dim) {
    throw std::invalid_argument("AddTransition: shape mismatch");
  }
  buffer_.Add(std::move(transition));
}

double SacAgent::CriticLoss(const std::vector<const Transition*>& batch,
                            const std::vector<std::vector<double>>& next_noise,
                            std::vector<double>* grads1,
                            std::vector<double>* grads2) const {
  if (batch.empty() || next_noise.size() != batch.size()) {
    throw std::invalid_argument("CriticLoss: batch/noise size mismatch");
  }
  if (grads1 != nullptr) {
    grads1->assign(critic1_.num_params(), 0.0);
  }
  if (grads2 != nullptr) {
    grads2->assign(critic2_.num_params(), 0.0);
  }
  const double alpha_value = std::exp(log_alpha_);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  Mlp::Workspace ws1;
  Mlp::Workspace ws2;
  std::vector<double> input;
  for (size_t i = 0; i < batch.size(); ++i) {
    const Transition& t = *batch[i];
    double y = t.reward;
    if (!t.done) {
      const PolicyParams p = ActorForward(t.next_state);
      const PolicySample s = SampleWithNoise(p, next_noise[i]);
      const double q1 = CriticValue(target1_, t.next_state, s.action);
      const double q2 = CriticValue(target2_, t.next_state, s.action);
      y += config_.discount *
           (std::min(q1, q2) - alpha_value * s.log_prob);
    }
    input.clear();
    input.insert(input.end(), t.state.begin(), t.state.end());
    input.insert(input.end(), t.action.begin(), t.action.end());
    const double q1 = critic1_.Forward(input, &ws1)[0];
    const double q2 = critic2_.Forward(input, &ws2)[0];
    loss += ((q1 - y) * (q1 - y) + (q2 - y) * (q2 - y)) * inv_batch;
    if (grads1 != nullptr) {
      critic1_.Backward(ws1, {2.0 * (q1 - y) * inv_batch}, grads1);
    }
    if (grads2 != nullptr) {
      critic2_.Backward(ws2, {2.0 * (q2 - y) * inv_batch}, grads2);
    }
  }
  return loss;
}

double SacAgent::ActorLoss(const std::vector<const Transition*>& batch,
                           const std::vector<std::vector<double>>& noise,
                           std::vector<double>* actor_grads,
                           double* mean_log_prob) const {
  if (batch.empty() || noise.size() != batch.size()) {
    throw std::invalid_argument("ActorLoss: batch/noise size mismatch");
  }
  if (actor_grads != nullptr) {
    actor_grads->assign(actor_.num_params(), 0.0);
  }
  const double alpha_value = std::exp(log_alpha_);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  const int d = config_.action_dim;
  double loss = 0.0;
  double log_prob_sum = 0.0;
  Mlp::Workspace actor_ws;
  Mlp::Workspace critic_ws;
  std::vector<double> input;
  std::vector<double> upstream(static_cast<size_t>(2 * d));
  // Critic parameter gradients from these backward passes are discarded;
  // only the input gradient (dq/da) feeds the actor update.
  std::vector<double> critic_scratch(critic1_.num_params(), 0.0);
  for (size_t i = 0; i < batch.size(); ++i) {
    const Transition& t = *batch[i];
    const PolicyParams p = ActorForward(t.state, &actor_ws);
    const PolicySample s = SampleWithNoise(p, noise[i]);
    input.clear();
    input.insert(input.end(), t.state.begin(), t.state.end());
    input.insert(input.end(), s.action.begin(), s.action.end());
    const Mlp& chosen =
        critic1_.Forward(input)[0] <= critic2_.Forward(input)[0] ? critic1_
                                                                 : critic2_;
    const double q = chosen.Forward(input, &critic_ws)[0];
    loss += (alpha_value * s.log_prob - q) * inv_batch;
    log_prob_sum += s.log_prob;
    if (actor_grads == nullptr) {
      continue;
    }
    const std::vector<double> in_grad =
        chosen.Backward(critic_ws, {1.0}, &critic_scratch);
    for (int j = 0; j < d; ++j) {
      const double a = s.action[static_cast<size_t>(j)];
      const double sigma = std::exp(p.log_std[static_cast<size_t>(j)]);
      const double xi = noise[i][static_cast<size_t>(j)];
      const double dq_da = in_grad[t.state.size() + static_cast<size_t>(j)];
      const double d_tanh = 1.0 - a * a;
      // d(loss_i)/d(mu_j): the entropy term contributes alpha * 2a through
      // the tanh correction; the value term -q contributes -dq/da * dtanh.
      upstream[static_cast<size_t>(j)] =
          (alpha_value * 2.0 * a - dq_da * d_tanh) * inv_batch;
      double g_ls = (alpha_value * (-1.0 + 2.0 * a * sigma * xi) -
                     dq_da * d_tanh * sigma * xi) *
                    inv_batch;
      if (p.clamped[static_cast<size_t>(j)]) {
        g_ls = 0.0;
      }
      upstream[static_cast<size_t>(d + j)] = g_ls;
    }
    actor_.Backward(actor_ws, upstream, actor_grads);
  }
  if (mean_log_prob != nullptr) {
    *mean_log_prob = log_prob_sum * inv_batch;
  }
  return loss;
}

double SacAgent::AlphaLoss(double mean_log_prob) const {
  return -log_alpha_ * (mean_log_prob + target_entropy_);
}

double SacAgent::AlphaGrad(double mean_log_prob) const {
  return -(mean_log_prob + target_entropy_);
}

void SacAgent::PolyakStep() {
  const double tau = config_.tau;
  for (size_t i = 0; i < target1_.params().size(); ++i) {
    target1_.params()[i] =
        (1.0 - tau) * target1_.params()[i] + tau * critic1_.params()[i];
    target2_.params()[i] =
        (1.0 - tau) * target2_.params()[i] + tau * critic2_.params()[i];
  }
}

double SacAgent::alpha() const { return std::exp(log_alpha_); }

UpdateDiagnostics SacAgent::Update() {
  UpdateDiagnostics diag;
  diag.alpha = alpha();
  const size_t need =
      std::max(static_cast<size_t>(config_.batch_size), config_.min_fill);
  if (buffer_.size() < need) {
    if (!warned_min_fill_) {
      std::cerr << "sac: skipping updates until the replay buffer holds "
                << need << " transitions\n";
      warned_min_fill_ = true;
    }
    diag.skipped = true;
    return diag;
  }
  const std::vector<const Transition*> batch =
      buffer_.Sample(static_cast<size_t>(config_.batch_size), rng_);
  std::vector<std::vector<double>> next_noise(batch.size());
  std::vector<std::vector<double>> actor_noise(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) {
    next_noise[i].resize(static_cast<size_t>(config_.action_dim));
    actor_noise[i].resize(static_cast<size_t>(config_.action_dim));
    for (int j = 0; j < config_.action_dim; ++j) {
      next_noise[i][static_cast<size_t>(j)] = rng_.NextGaussian();
      actor_noise[i][static_cast<size_t>(j)] = rng_.NextGaussian();
    }
  }

  std::vector<double> grads1;
  std::vector<double> grads2;
  diag.critic_loss = CriticLoss(batch, next_noise, &grads1, &grads2);
  critic1_opt_.Step(critic1_.params(), grads1);
  critic2_opt_.Step(critic2_.params(), grads2);

  std::vector<double> actor_grads;
  diag.actor_loss =
      ActorLoss(batch, actor_noise, &actor_grads, &diag.mean_log_prob);
  actor_opt_.Step(actor_.params(), actor_grads);

  if (config_.auto_alpha) {
    diag.alpha_loss = AlphaLoss(diag.mean_log_prob);
    std::vector<double> la{log_alpha_};
    const std::vector<double> lg{AlphaGrad(diag.mean_log_prob)};
    alpha_opt_.Step(la, lg);
    log_alpha_ = la[0];
  }
  diag.alpha = alpha();

  PolyakStep();
  ++update_count_;
  diag.diverged = !std::isfinite(diag.critic_loss) ||
                  !std::isfinite(diag.actor_loss) ||
                  !std::isfinite(log_alpha_);
  return diag;
}

void SacAgent::Save(std::ostream& out, bool include_buffer) const {
  out.write(kCheckpointMagic, 4);
  WriteRaw(out, kCheckpointVersion);
  WriteRaw(out, static_cast<uint32_t>(config_.state_dim));
  WriteRaw(out, static_cast<uint32_t>(config_.action_dim));
  WriteRaw(out, static_cast<uint32_t>(config_.hidden.size()));
  for (const int h : config_.hidden) {
    WriteRaw(out, static_cast<uint32_t>(h));
  }
  WriteRaw(out, static_cast<uint32_t>(codec_.num_dims()));
  for (const int s : codec_.dim_sizes()) {
    WriteRaw(out, static_cast<uint32_t>(s));
  }
  WriteRaw(out, codec_.num_actions());
  WriteRaw(out, static_cast<uint32_t>(config_.knn_k));
  WriteRaw(out, log_alpha_);
  WriteRaw(out, update_count_);
  WriteRaw(out, static_cast<uint8_t>(warned_min_fill_ ? 1 : 0));
  const Rng::State rng_state = rng_.GetState();
  for (const uint64_t word : rng_state.s) {
    WriteRaw(out, word);
  }
  WriteRaw(out, static_cast<uint8_t>(rng_state.has_cached ? 1 : 0));
  WriteRaw(out, rng_state.cached);
  WriteVec(out, actor_.params());
  WriteVec(out, critic1_.params());
  WriteVec(out, critic2_.params());
  WriteVec(out, target1_.params());
  WriteVec(out, target2_.params());
  actor_opt_.Save(out);
  critic1_opt_.Save(out);
  critic2_opt_.Save(out);
  alpha_opt_.Save(out);
  WriteRaw(out, static_cast<uint8_t>(include_buffer ? 1 : 0));
  if (include_buffer) {
    buffer_.Save(out);
  }
  if (!out) {
    throw std::runtime_error("SacAgent::Save: write failed");
  }
}

void SacAgent::Load(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw std::runtime_error("SacAgent::Load: bad checkpoint magic");
  }
  uint16_t version = 0;
  ReadRaw(in, &version);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("SacAgent::Load: unsupported version " +
                             std::to_string(version));
  }
  uint32_t state_dim = 0;
  uint32_t action_dim = 0;
  uint32_t hidden_count = 0;
  ReadRaw(in, &state_dim);
  ReadRaw(in, &action_dim);
  ReadRaw(in, &hidden_count);
  if (state_dim != static_cast<uint32_t>(config_.state_dim) ||
      action_dim != static_cast<uint32_t>(config_.action_dim) ||
      hidden_count != config_.hidden.size()) {
    throw std::runtime_error("SacAgent::Load: architecture mismatch");
  }
  for (const int h : config_.hidden) {
    uint32_t stored = 0;
    ReadRaw(in, &stored);
    if (stored != static_cast<uint32_t>(h)) {
      throw std::runtime_error("SacAgent::Load: hidden width mismatch");
    }
  }
  uint32_t num_dims = 0;
  ReadRaw(in, &num_dims);
  if (num_dims != static_cast<uint32_t>(codec_.num_dims())) {
    throw std::runtime_error("SacAgent::Load: codec dimension mismatch");
  }
  for (const int s : codec_.dim_sizes()) {
    uint32_t stored = 0;
    ReadRaw(in, &stored);
    if (stored != static_cast<uint32_t>(s)) {
      throw std::runtime_error("SacAgent::Load: codec size mismatch");
    }
  }
  uint64_t num_actions = 0;
  ReadRaw(in, &num_actions);
  if (num_actions != codec_.num_actions()) {
    throw std::runtime_error("SacAgent::Load: action count mismatch");
  }
  uint32_t knn_k = 0;
  ReadRaw(in, &knn_k);
  if (knn_k != static_cast<uint32_t>(config_.knn_k)) {
    throw std::runtime_error("SacAgent::Load: knn_k mismatch");
  }
  ReadRaw(in, &log_alpha_);
  ReadRaw(in, &update_count_);
  uint8_t warned = 0;
  ReadRaw(in, &warned);
  warned_min_fill_ = warned != 0;
  Rng::State rng_state;
  for (uint64_t& word : rng_state.s) {
    ReadRaw(in, &word);
  }
  uint8_t has_cached = 0;
  ReadRaw(in, &has_cached);
  rng_state.has_cached = has_cached != 0;
  ReadRaw(in, &rng_state.cached);
  rng_.SetState(rng_state);
  ReadVec(in, &actor_.params());
  ReadVec(in, &critic1_.params());
  ReadVec(in, &critic2_.params());
  ReadVec(in, &target1_.params());
  ReadVec(in, &target2_.params());
  actor_opt_.Load(in);
  critic1_opt_.Load(in);
  critic2_opt_.Load(in);
  alpha_opt_.Load(in);
  uint8_t has_buffer = 0;
  ReadRaw(in, &has_buffer);
  if (has_buffer != 0) {
    buffer_.Load(in);
  }
}

}  // namespace mmsched
