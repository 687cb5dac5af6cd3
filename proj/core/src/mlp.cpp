#include "normnet/mlp.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <numeric>

#include "normnet/errors.hpp"

namespace normnet {

void validate(const NetworkConfig& cfg) {
  if (cfg.hidden_layers.empty()) {
    throw InvalidParameterError("network: hidden_layers must be non-empty");
  }
  for (int h : cfg.hidden_layers) {
    if (h < 1) throw InvalidParameterError("network: hidden layer sizes must be >= 1");
  }
  if (cfg.max_epochs < 1) throw InvalidParameterError("network: max_epochs must be >= 1");
  if (!(cfg.q > 0.0 && cfg.q <= 1.0)) {
    throw InvalidParameterError("network: q must lie in (0,1]");
  }
  if (cfg.reg_c < 0.0) throw InvalidParameterError("network: reg_c must be >= 0");
  if (cfg.batch_size < 1) throw InvalidParameterError("network: batch_size must be >= 1");
  if (!(cfg.early_stop.validation_fraction > 0.0 &&
        cfg.early_stop.validation_fraction < 0.5)) {
    throw InvalidParameterError("network: validation_fraction must lie in (0, 0.5)");
  }
  if (cfg.early_stop.patience < 1) {
    throw InvalidParameterError("network: patience must be >= 1");
  }
  if (!(cfg.adam.step > 0.0)) throw InvalidParameterError("network: adam step must be > 0");
}

Network init_network(const NetworkConfig& cfg, int input_dim) {
  validate(cfg);
  if (input_dim < 1) throw InvalidParameterError("network: input_dim must be >= 1");
  Network net;
  net.config = cfg;
  net.input_dim = input_dim;

  std::vector<int> dims;
  dims.push_back(input_dim);
  dims.insert(dims.end(), cfg.hidden_layers.begin(), cfg.hidden_layers.end());
  dims.push_back(2);

  // substream namespace 0x49.. is reserved for initialization so the
  // training loop's shuffles (low indices) never share a child stream
  RandomStream rng(cfg.seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    RandomStream layer_rng = rng.substream(0x49000000ull + l);
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    Eigen::MatrixXd w(fan_out, fan_in);
    const double sdev = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        w(r, c) = sdev * layer_rng.normal();
      }
    }
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(Eigen::VectorXd::Zero(fan_out));
  }
  net.norm_mean = Eigen::VectorXd::Zero(input_dim);
  net.norm_sd = Eigen::VectorXd::Ones(input_dim);
  return net;
}

namespace {

// Column-wise softmax of a 2xB logit matrix, shift-invariant form.
Eigen::MatrixXd softmax2(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p(2, logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double m = std::max(logits(0, c), logits(1, c));
    const double e0 = std::exp(logits(0, c) - m);
    const double e1 = std::exp(logits(1, c) - m);
    const double z = e0 + e1;
    p(0, c) = e0 / z;
    p(1, c) = e1 / z;
  }
  return p;
}

Eigen::MatrixXd normalize_columns(const Network& net, const Eigen::MatrixXd& X) {
  if (X.rows() != net.input_dim) {
    throw DimensionMismatchError("network: input dimension mismatch");
  }
  return ((X.colwise() - net.norm_mean).array().colwise() / net.norm_sd.array())
      .matrix();
}

// Forward pass on normalized inputs, keeping activations for backprop.
Eigen::MatrixXd forward_normalized(const Network& net, const Eigen::MatrixXd& Xn,
                                   std::vector<Eigen::MatrixXd>* activations) {
  Eigen::MatrixXd h = Xn;
  if (activations) activations->push_back(h);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Eigen::MatrixXd z =
        (net.weights[l] * h).colwise() + net.biases[l];
    if (l + 1 < net.weights.size()) {
      h = z.cwiseMax(0.0);
      if (activations) activations->push_back(h);
    } else {
      h = std::move(z);
    }
  }
  return h;  // logits, 2xB
}

}  // namespace

Eigen::VectorXd forward_batch(const Network& net, const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd logits = forward_normalized(net, normalize_columns(net, X), nullptr);
  const Eigen::MatrixXd p = softmax2(logits);
  return p.row(1).transpose();
}

double forward(const Network& net, std::span<const double> input) {
  if (static_cast<int>(input.size()) != net.input_dim) {
    throw DimensionMismatchError("network: input dimension mismatch");
  }
  Eigen::MatrixXd x(net.input_dim, 1);
  for (int i = 0; i < net.input_dim; ++i) x(i, 0) = input[static_cast<std::size_t>(i)];
  return forward_batch(net, x)(0);
}

double loss_and_gradient(const Network& net, const Eigen::MatrixXd& X,
                         std::span<const int> y, Gradients* grad) {
  if (X.cols() == 0) throw EmptyDatasetError("loss_and_gradient: empty batch");
  if (static_cast<std::size_t>(X.cols()) != y.size()) {
    throw LengthMismatchError("loss_and_gradient: labels/batch size mismatch");
  }
  if (X.rows() != net.input_dim) {
    throw DimensionMismatchError("loss_and_gradient: input dimension mismatch");
  }
  const auto batch = static_cast<double>(X.cols());

  std::vector<Eigen::MatrixXd> acts;
  const Eigen::MatrixXd logits = forward_normalized(net, X, &acts);
  const Eigen::MatrixXd p = softmax2(logits);

  double ce = 0.0;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const int label = y[static_cast<std::size_t>(c)];
    ce -= std::log(std::max(p(label, c), 1e-300));
  }
  ce /= batch;

  double penalty = 0.0;
  for (const auto& w : net.weights) penalty += w.squaredNorm();
  const double reg = net.config.reg_c / batch;
  const double loss = ce + 0.5 * reg * penalty;
  if (!grad) return loss;

  grad->w.assign(net.weights.size(), Eigen::MatrixXd());
  grad->b.assign(net.biases.size(), Eigen::VectorXd());

  // dL/dlogits = (softmax - onehot)/B, then standard backprop through ReLU.
  Eigen::MatrixXd delta = p;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    delta(y[static_cast<std::size_t>(c)], c) -= 1.0;
  }
  delta /= batch;

  for (std::size_t l = net.weights.size(); l-- > 0;) {
    grad->w[l] = delta * acts[l].transpose() + reg * net.weights[l];
    grad->b[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = net.weights[l].transpose() * delta;
      delta = back.cwiseProduct(
          (acts[l].array() > 0.0).cast<double>().matrix());
    }
  }
  return loss;
}

std::pair<Network, TrainReport> train(const NetworkConfig& cfg,
                                      const Eigen::MatrixXd& X,
                                      std::span<const int> y) {
  validate(cfg);
  const auto n = static_cast<std::size_t>(X.cols());
  if (n == 0) throw EmptyDatasetError("train: empty dataset");
  if (y.size() != n) throw LengthMismatchError("train: labels/data size mismatch");
  std::size_t n_pos = 0;
  for (int label : y) {
    if (label != 0 && label != 1) throw InvalidParameterError("train: labels must be 0/1");
    n_pos += static_cast<std::size_t>(label);
  }
  if (n_pos < 2 || n - n_pos < 2) {
    throw SingleClassError("train: need at least 2 examples of each class");
  }

  const auto start = std::chrono::steady_clock::now();
  RandomStream rng(cfg.seed);

  // Stratified validation split so tiny datasets keep both classes in train.
  std::vector<std::size_t> pos_idx, neg_idx;
  for (std::size_t i = 0; i < n; ++i) {
    (y[i] == 1 ? pos_idx : neg_idx).push_back(i);
  }
  auto shuffle_indices = [](std::vector<std::size_t>& v, RandomStream s) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(s.next_u64() % i);
      std::swap(v[i - 1], v[j]);
    }
  };
  shuffle_indices(pos_idx, rng.substream(1));
  shuffle_indices(neg_idx, rng.substream(2));
  const double vf = cfg.early_stop.validation_fraction;
  const auto val_pos = std::min(pos_idx.size() - 1,
                                static_cast<std::size_t>(std::lround(vf * static_cast<double>(pos_idx.size()))));
  const auto val_neg = std::min(neg_idx.size() - 1,
                                static_cast<std::size_t>(std::lround(vf * static_cast<double>(neg_idx.size()))));
  std::vector<std::size_t> val_idx(pos_idx.begin(), pos_idx.begin() + static_cast<std::ptrdiff_t>(val_pos));
  val_idx.insert(val_idx.end(), neg_idx.begin(), neg_idx.begin() + static_cast<std::ptrdiff_t>(val_neg));
  std::vector<std::size_t> train_idx(pos_idx.begin() + static_cast<std::ptrdiff_t>(val_pos), pos_idx.end());
  train_idx.insert(train_idx.end(), neg_idx.begin() + static_cast<std::ptrdiff_t>(val_neg), neg_idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  Network net = init_network(cfg, static_cast<int>(X.rows()));

  // Input normalizer from the training split; constant columns keep sd 1.
  const auto tn = train_idx.size();
  Eigen::MatrixXd Xt(X.rows(), static_cast<Eigen::Index>(tn));
  std::vector<int> yt(tn);
  for (std::size_t k = 0; k < tn; ++k) {
    Xt.col(static_cast<Eigen::Index>(k)) = X.col(static_cast<Eigen::Index>(train_idx[k]));
    yt[k] = y[train_idx[k]];
  }
  net.norm_mean = Xt.rowwise().mean();
  Eigen::MatrixXd centered = Xt.colwise() - net.norm_mean;
  net.norm_sd = (centered.array().square().rowwise().sum() /
                 std::max<double>(1.0, static_cast<double>(tn) - 1.0))
                    .sqrt()
                    .matrix();
  for (Eigen::Index i = 0; i < net.norm_sd.size(); ++i) {
    if (!(net.norm_sd(i) > 0.0)) net.norm_sd(i) = 1.0;
  }
  Eigen::MatrixXd Xtn =
      (centered.array().colwise() / net.norm_sd.array()).matrix();

  Eigen::MatrixXd Xvn;
  std::vector<int> yv(val_idx.size());
  Xvn.resize(X.rows(), static_cast<Eigen::Index>(val_idx.size()));
  for (std::size_t k = 0; k < val_idx.size(); ++k) {
    Xvn.col(static_cast<Eigen::Index>(k)) =
        ((X.col(static_cast<Eigen::Index>(val_idx[k])) - net.norm_mean).array() /
         net.norm_sd.array())
            .matrix();
    yv[k] = y[val_idx[k]];
  }

  // ADAM state.
  Gradients m, v;
  m.w.reserve(net.weights.size());
  v.w.reserve(net.weights.size());
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    m.w.emplace_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    v.w.emplace_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    m.b.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    v.b.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  long step = 0;

  auto validation_ce = [&]() {
    if (yv.empty()) return 0.0;
    const Eigen::MatrixXd logits = forward_normalized(net, Xvn, nullptr);
    const Eigen::MatrixXd p = softmax2(logits);
    double ce = 0.0;
    for (Eigen::Index c = 0; c < Xvn.cols(); ++c) {
      ce -= std::log(std::max(p(yv[static_cast<std::size_t>(c)], c), 1e-300));
    }
    return ce / static_cast<double>(Xvn.cols());
  };

  TrainReport report;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<Eigen::MatrixXd> best_w = net.weights;
  std::vector<Eigen::VectorXd> best_b = net.biases;
  int since_best = 0;

  std::vector<std::size_t> order(tn);
  std::iota(order.begin(), order.end(), 0);
  Gradients grad;
  const AdamConfig& ad = cfg.adam;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle_indices(order, rng.substream(1000 + static_cast<std::uint64_t>(epoch)));
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < tn; begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(tn, begin + static_cast<std::size_t>(cfg.batch_size));
      const auto bsz = static_cast<Eigen::Index>(end - begin);
      Eigen::MatrixXd xb(X.rows(), bsz);
      std::vector<int> yb(static_cast<std::size_t>(bsz));
      for (Eigen::Index k = 0; k < bsz; ++k) {
        const std::size_t src = order[begin + static_cast<std::size_t>(k)];
        xb.col(k) = Xtn.col(static_cast<Eigen::Index>(src));
        yb[static_cast<std::size_t>(k)] = yt[src];
      }
      epoch_loss += loss_and_gradient(net, xb, yb, &grad);
      ++batches;
      ++step;
      const double bc1 = 1.0 - std::pow(ad.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(ad.beta2, static_cast<double>(step));
      for (std::size_t l = 0; l < net.weights.size(); ++l) {
        m.w[l] = ad.beta1 * m.w[l] + (1.0 - ad.beta1) * grad.w[l];
        v.w[l] = ad.beta2 * v.w[l] + (1.0 - ad.beta2) * grad.w[l].cwiseProduct(grad.w[l]);
        net.weights[l].array() -=
            ad.step * (m.w[l].array() / bc1) /
            ((v.w[l].array() / bc2).sqrt() + ad.eps);
        m.b[l] = ad.beta1 * m.b[l] + (1.0 - ad.beta1) * grad.b[l];
        v.b[l] = ad.beta2 * v.b[l] + (1.0 - ad.beta2) * grad.b[l].cwiseProduct(grad.b[l]);
        net.biases[l].array() -=
            ad.step * (m.b[l].array() / bc1) /
            ((v.b[l].array() / bc2).sqrt() + ad.eps);
      }
    }
    report.train_loss.push_back(epoch_loss / static_cast<double>(batches));
    const double val = validation_ce();
    report.val_loss.push_back(val);
    report.epochs_run = epoch;
    if (val < best_val) {
      best_val = val;
      best_w = net.weights;
      best_b = net.biases;
      since_best = 0;
    } else {
      ++since_best;
      if (since_best >= cfg.early_stop.patience) break;
    }
  }

  net.weights = std::move(best_w);
  net.biases = std::move(best_b);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(net), std::move(report)};
}

int classify(const Network& net, double p1) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) {
    throw InvalidProbabilityError("classify: p1 must lie in [0,1]");
  }
  return p1 >= net.threshold ? 1 : 0;
}

}  // namespace normnet
