#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "normnet/rng.hpp"

namespace normnet {

struct AdamConfig {
  double step = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct EarlyStopConfig {
  double validation_fraction = 0.1;  // held out inside train()
  int patience = 10;                 // epochs without validation improvement
};

struct NetworkConfig {
  std::vector<int> hidden_layers{100, 10};
  double q = 0.1;      // descriptor granularity; only used by descriptor mode
  double reg_c = 0.1;  // L2 coefficient on weights (biases excluded)
  int max_epochs = 200;
  AdamConfig adam;
  EarlyStopConfig early_stop;
  int batch_size = 128;
  std::uint64_t seed = 0;
};

void validate(const NetworkConfig& cfg);

// Feedforward ReLU classifier with a two-unit softmax head. Inputs are
// standardized per dimension with statistics fitted on the training split;
// the stored decision threshold applies to the class-1 probability.
struct Network {
  NetworkConfig config;
  int input_dim = 0;
  std::vector<Eigen::MatrixXd> weights;  // layer l maps in->out, shape (out, in)
  std::vector<Eigen::VectorXd> biases;
  Eigen::VectorXd norm_mean;
  Eigen::VectorXd norm_sd;
  double threshold = 0.5;
};

// He initialization (variance 2/fan_in), zero biases; deterministic in seed.
Network init_network(const NetworkConfig& cfg, int input_dim);

// Class-1 probability for one input (p0 = 1 - p1).
double forward(const Network& net, std::span<const double> input);

// Class-1 probabilities for a batch; samples are columns of X.
Eigen::VectorXd forward_batch(const Network& net, const Eigen::MatrixXd& X);

struct Gradients {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
};

// Mean cross-entropy over the batch plus the per-sample L2 penalty
// (reg_c / (2 * batch)) * sum ||W||^2 (biases excluded). When grad is
// non-null it receives the exact gradient of that objective. X columns must
// already be normalized.
double loss_and_gradient(const Network& net, const Eigen::MatrixXd& X,
                         std::span<const int> y, Gradients* grad);

struct TrainReport {
  int epochs_run = 0;
  std::vector<double> train_loss;  // epoch means of minibatch objectives
  std::vector<double> val_loss;    // held-out cross-entropy per epoch
  double wall_time_seconds = 0.0;
};

// ADAM over shuffled minibatches with early stopping on held-out log-loss;
// returns the parameters of the best validation epoch. X columns are raw
// (unnormalized) feature vectors; the normalizer is fitted here on the
// training part of the split. Labels must contain both classes (>= 2 each).
std::pair<Network, TrainReport> train(const NetworkConfig& cfg,
                                      const Eigen::MatrixXd& X,
                                      std::span<const int> y);

// 1 iff p1 >= net.threshold.
int classify(const Network& net, double p1);

}  // namespace normnet
