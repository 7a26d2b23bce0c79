#include "mmsched/mlp.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "mmsched/rng.h"

namespace mmsched {

Mlp::Mlp(std::vector<int> widths, Rng& rng) : widths_(std::move(widths)) {
  if (widths_.size() < 2) {
    throw std::invalid_argument("Mlp: need at least input and output widths");
  }
  size_t total = 0;
  for (size_t j = 0; j + 1 < widths_.size(); ++j) {
    if (widths_[j] < 1 || widths_[j + 1] < 1) {
      throw std::invalid_argument("Mlp: widths must be >= 1");
    }
    total += static_cast<size_t>(widths_[j + 1]) * widths_[j] +
             static_cast<size_t>(widths_[j + 1]);
  }
  params_.resize(total);
  size_t at = 0;
  for (size_t j = 0; j + 1 < widths_.size(); ++j) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths_[j]));
    const size_t count = static_cast<size_t>(widths_[j + 1]) * widths_[j] +
                         static_cast<size_t>(widths_[j + 1]);
    for (size_t i = 0; i < count; ++i) {
      params_[at++] = bound * (2.0 * rng.NextUnit() - 1.0);
    }
  }
}

size_t Mlp::LayerOffset(int layer) const {
  size_t at = 0;
  for (int j = 0; j < layer; ++j) {
    at += static_cast<size_t>(widths_[static_cast<size_t>(j) + 1]) *
              widths_[static_cast<size_t>(j)] +
          static_cast<size_t>(widths_[static_cast<size_t>(j) + 1]);
  }
  return at;
}

void Mlp::RunLayers(int first_layer, Workspace* ws) const {
  const int num_layers = static_cast<int>(widths_.size()) - 1;
  size_t at = LayerOffset(first_layer);
  for (int j = first_layer; j < num_layers; ++j) {
    const int in = widths_[static_cast<size_t>(j)];
    const int out = widths_[static_cast<size_t>(j) + 1];
    const double* w = params_.data() + at;
    const double* b = w + static_cast<size_t>(out) * in;
    const std::vector<double>& a_in = ws->acts[static_cast<size_t>(j)];
    std::vector<double>& a_out = ws->acts[static_cast<size_t>(j) + 1];
    a_out.assign(static_cast<size_t>(out), 0.0);
    for (int o = 0; o < out; ++o) {
      double z = b[o];
      const double* row = w + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) {
        z += row[i] * a_in[static_cast<size_t>(i)];
      }
      a_out[static_cast<size_t>(o)] =
          (j + 1 < num_layers && z < 0.0) ? 0.0 : z;
    }
    at += static_cast<size_t>(out) * in + static_cast<size_t>(out);
  }
}

const std::vector<double>& Mlp::Forward(const std::vector<double>& x,
                                        Workspace* ws) const {
  if (static_cast<int>(x.size()) != widths_.front()) {
    throw std::invalid_argument("Mlp::Forward: input size mismatch");
  }
  const int num_layers = static_cast<int>(widths_.size()) - 1;
  ws->acts.resize(static_cast<size_t>(num_layers) + 1);
  ws->acts[0] = x;
  RunLayers(0, ws);
  return ws->acts.back();
}

std::vector<double> Mlp::FirstPreactPrefix(
    const std::vector<double>& x_prefix) const {
  const int in = widths_.front();
  const int out = widths_[1];
  if (static_cast<int>(x_prefix.size()) > in) {
    throw std::invalid_argument("Mlp::FirstPreactPrefix: prefix too long");
  }
  const double* w = params_.data();
  const double* b = w + static_cast<size_t>(out) * in;
  std::vector<double> preact(static_cast<size_t>(out));
  for (int o = 0; o < out; ++o) {
    double z = b[o];
    const double* row = w + static_cast<size_t>(o) * in;
    for (size_t i = 0; i < x_prefix.size(); ++i) {
      z += row[i] * x_prefix[i];
    }
    preact[static_cast<size_t>(o)] = z;
  }
  return preact;
}

void Mlp::AddToFirstPreact(std::vector<double>& preact,
                           const std::vector<double>& x_suffix,
                           int col_offset) const {
  const int in = widths_.front();
  const int out = widths_[1];
  if (static_cast<int>(preact.size()) != out || col_offset < 0 ||
      col_offset + static_cast<int>(x_suffix.size()) > in) {
    throw std::invalid_argument("Mlp::AddToFirstPreact: shape mismatch");
  }
  const double* w = params_.data();
  for (int o = 0; o < out; ++o) {
    double z = preact[static_cast<size_t>(o)];
    const double* row =
        w + static_cast<size_t>(o) * in + static_cast<size_t>(col_offset);
    for (size_t i = 0; i < x_suffix.size(); ++i) {
      z += row[i] * x_suffix[i];
    }
    preact[static_cast<size_t>(o)] = z;
  }
}

const std::vector<double>& Mlp::ForwardFromFirstPreact(
    const std::vector<double>& preact, Workspace* ws) const {
  const int num_layers = static_cast<int>(widths_.size()) - 1;
  if (static_cast<int>(preact.size()) != widths_[1]) {
    throw std::invalid_argument(
        "Mlp::ForwardFromFirstPreact: pre-activation size mismatch");
  }
  ws->acts.resize(static_cast<size_t>(num_layers) + 1);
  ws->acts[0].clear();
  std::vector<double>& a1 = ws->acts[1];
  a1 = preact;
  if (num_layers > 1) {
    for (double& z : a1) {
      if (z < 0.0) {
        z = 0.0;
      }
    }
  }
  RunLayers(1, ws);
  return ws->acts.back();
}

std::vector<double> Mlp::Forward(const std::vector<double>& x) const {
  Workspace ws;
  return Forward(x, &ws);
}

std::vector<double> Mlp::Backward(const Workspace& ws,
                                  const std::vector<double>& out_grad,
                                  std::vector<double>* param_grads) const {
  if (param_grads->size() != params_.size()) {
    throw std::invalid_argument("Mlp::Backward: gradient buffer size "
                                "mismatch");
  }
  const int num_layers = static_cast<int>(widths_.size()) - 1;
  if (static_cast<int>(out_grad.size()) != widths_.back() ||
      ws.acts.size() != static_cast<size_t>(num_layers) + 1) {
    throw std::invalid_argument("Mlp::Backward: shape mismatch");
  }
  std::vector<double> delta = out_grad;
  std::vector<double> delta_prev;
  for (int j = num_layers - 1; j >= 0; --j) {
    const int in = widths_[static_cast<size_t>(j)];
    const int out = widths_[static_cast<size_t>(j) + 1];
    const size_t at = LayerOffset(j);
    const double* w = params_.data() + at;
    double* gw = param_grads->data() + at;
    double* gb = gw + static_cast<size_t>(out) * in;
    const std::vector<double>& a_in = ws.acts[static_cast<size_t>(j)];
    const std::vector<double>& a_out = ws.acts[static_cast<size_t>(j) + 1];

    // delta currently holds d(loss)/d(a_out); hidden layers gate it by the
    // rectifier mask (a_out > 0).
    if (j + 1 < num_layers) {
      for (int o = 0; o < out; ++o) {
        if (a_out[static_cast<size_t>(o)] <= 0.0) {
          delta[static_cast<size_t>(o)] = 0.0;
        }
      }
    }
    delta_prev.assign(static_cast<size_t>(in), 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[static_cast<size_t>(o)];
      if (d == 0.0) {
        continue;
      }
      const double* row = w + static_cast<size_t>(o) * in;
      double* grow = gw + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) {
        grow[i] += d * a_in[static_cast<size_t>(i)];
        delta_prev[static_cast<size_t>(i)] += d * row[i];
      }
      gb[o] += d;
    }
    delta.swap(delta_prev);
  }
  return delta;
}

AdamOptimizer::AdamOptimizer(size_t num_params, double lr, double beta1,
                             double beta2, double eps)
    : lr_(lr),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps),
      m_(num_params, 0.0),
      v_(num_params, 0.0) {}

void AdamOptimizer::Step(std::vector<double>& params,
                         const std::vector<double>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw std::invalid_argument("AdamOptimizer::Step: size mismatch");
  }
  ++step_count_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_count_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_count_));
  for (size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i] * grads[i];
    const double m_hat = m_[i] / bc1;
    const double v_hat = v_[i] / bc2;
    params[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
  }
}

void AdamOptimizer::Save(std::ostream& out) const {
  const uint64_t n = m_.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&step_count_), sizeof(step_count_));
  out.write(reinterpret_cast<const char*>(m_.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  out.write(reinterpret_cast<const char*>(v_.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
}

void AdamOptimizer::Load(std::istream& in) {
  uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in || n != m_.size()) {
    throw std::runtime_error("AdamOptimizer::Load: state size mismatch");
  }
  in.read(reinterpret_cast<char*>(&step_count_), sizeof(step_count_));
  in.read(reinterpret_cast<char*>(m_.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  in.read(reinterpret_cast<char*>(v_.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) {
    throw std::runtime_error("AdamOptimizer::Load: truncated state");
  }
}

}  // namespace mmsched
