/**
 * @file mlp.h
 * @brief Minimal dense network with hand-written backprop, plus Adam.
 *
 * Rectifier on hidden layers, linear output. Parameters live in one flat
 * vector (per layer: row-major weights, then biases) so optimizers and
 * checkpoints treat a network as a single tensor.
 */
#ifndef MMSCHED_MLP_H_
#define MMSCHED_MLP_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mmsched {

class Rng;

class Mlp {
 public:
  // widths = {input, hidden..., output}. Weights and biases start uniform
  // in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  Mlp(std::vector<int> widths, Rng& rng);

  int input_size() const { return widths_.front(); }
  int output_size() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }
  size_t num_params() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Post-activation values of every layer, kept for the backward pass.
  // acts[0] is the input, acts.back() the output.
  struct Workspace {
    std::vector<std::vector<double>> acts;
  };

  std::vector<double> Forward(const std::vector<double>& x) const;
  const std::vector<double>& Forward(const std::vector<double>& x,
                                     Workspace* ws) const;

  // Split first-layer evaluation for scoring many inputs that share a long
  // prefix: the prefix pre-activation is computed once, each candidate adds
  // its few suffix columns and finishes the pass. Column order matches
  // Forward exactly, so the results are bit-identical. The workspace from
  // ForwardFromFirstPreact records no input and must not feed Backward.
  std::vector<double> FirstPreactPrefix(
      const std::vector<double>& x_prefix) const;
  void AddToFirstPreact(std::vector<double>& preact,
                        const std::vector<double>& x_suffix,
                        int col_offset) const;
  const std::vector<double>& ForwardFromFirstPreact(
      const std::vector<double>& preact, Workspace* ws) const;

  // Backpropagates d(loss)/d(output) through the pass recorded in ws.
  // Adds parameter gradients into *param_grads (size num_params) and
  // returns d(loss)/d(input).
  std::vector<double> Backward(const Workspace& ws,
                               const std::vector<double>& out_grad,
                               std::vector<double>* param_grads) const;

 private:
  size_t LayerOffset(int layer) const;
  void RunLayers(int first_layer, Workspace* ws) const;

  std::vector<int> widths_;
  std::vector<double> params_;
};

// Adam with bias correction; one instance per parameter tensor.
class AdamOptimizer {
 public:
  AdamOptimizer(size_t num_params, double lr, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8);

  void Step(std::vector<double>& params, const std::vector<double>& grads);

  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }

  void Save(std::ostream& out) const;
  void Load(std::istream& in);

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  uint64_t step_count_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace mmsched

#endif  // MMSCHED_MLP_H_
