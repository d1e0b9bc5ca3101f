#pragma once

// Wind-speed correction network: a 3-100-1 feed-forward net with a ReLU
// hidden layer and a linear output, trained by full-batch gradient descent.
// Everything is deterministic for a fixed seed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace airsea {

inline constexpr int kMlpInputs = 3;
inline constexpr int kMlpHidden = 100;

// Inputs to the correction net, in stored order.
struct FeatureVector {
  double sar_wind = 0.0;   // SAR-retrieved 10 m wind [m/s]
  double stability = 0.0;  // stability class code (0, 1, 2) fed as a real
  double precip = 0.0;     // precipitation rate [mm/hr]
};

double relu(double x);

// Model weights plus the input normalization learned from the training
// split. Weight rows are laid out row-major: w1[i * kMlpInputs + j] connects
// input j to hidden unit i.
struct MlpModel {
  std::vector<double> w1;         // kMlpHidden x kMlpInputs
  std::vector<double> b1;         // kMlpHidden
  std::vector<double> w2;         // kMlpHidden
  double b2 = 0.0;
  std::vector<double> norm_mean;  // per-input z-score offsets
  std::vector<double> norm_std;   // per-input z-score scales, all > 0
  std::uint64_t seed = 0;

  // Throws std::domain_error on any dimension or scale violation.
  void validate() const;
};

struct TrainConfig {
  int epochs = 1500;
  double learning_rate = 0.005;
  double train_fraction = 0.6;
  std::uint64_t seed = 0;
  int hidden = kMlpHidden;  // kept for config symmetry; must equal kMlpHidden
};

// Deterministic Glorot-uniform initialization: weights drawn from
// U(-sqrt(6/(fan_in+fan_out)), +...), biases zero, normalization identity.
MlpModel init_model(std::uint64_t seed);

// Normalized forward pass: y = w2 . relu(w1 (x-mean)/std + b1) + b2.
double forward(const MlpModel& m, const FeatureVector& x);

struct MlpGradients {
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;
};

// Mean squared error over the batch together with exact gradients for every
// weight and bias. The ReLU subgradient at exactly zero is zero. An empty
// batch or mismatched lengths throw std::domain_error.
std::pair<double, MlpGradients> loss_and_gradient(
    const MlpModel& m, const std::vector<FeatureVector>& x,
    const std::vector<double>& y);

// Seed-shuffled split: the first floor(fraction * n) indices of the shuffled
// permutation train, the rest test.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double fraction, std::uint64_t seed);

struct TrainResult {
  MlpModel model;
  std::vector<double> history;  // per-epoch training MSE, length == epochs
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

// Full training run: split, normalize from the training split only, then
// full-batch gradient descent. Needs at least 10 samples. Throws
// TrainingError naming the epoch if the loss leaves the finite range.
TrainResult train(const std::vector<FeatureVector>& x,
                  const std::vector<double>& y, const TrainConfig& cfg);

// Plain-text serialization with 17 significant digits per value, so that
// load_model(save_model(m)) reproduces m bit for bit. Truncated or malformed
// files throw ParseError naming the line and field; no partial model is
// ever returned.
void save_model(const MlpModel& m, const std::string& path);
MlpModel load_model(const std::string& path);

}  // namespace airsea
