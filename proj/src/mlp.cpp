#include "airsea/mlp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "airsea/errors.hpp"

namespace airsea {

namespace {

// 53-bit uniform in [0, 1). Built directly from raw engine output so the
// stream does not depend on the standard library's distribution internals.
double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double uniform_in(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

void fisher_yates(std::vector<std::size_t>& v, std::mt19937_64& gen) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(gen() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

double relu(double x) { return std::max(x, 0.0); }

void MlpModel::validate() const {
  const auto fail = [](const char* field) {
    throw std::domain_error(std::string("MlpModel: bad ") + field);
  };
  if (w1.size() != static_cast<std::size_t>(kMlpHidden * kMlpInputs)) fail("w1");
  if (b1.size() != static_cast<std::size_t>(kMlpHidden)) fail("b1");
  if (w2.size() != static_cast<std::size_t>(kMlpHidden)) fail("w2");
  if (norm_mean.size() != static_cast<std::size_t>(kMlpInputs)) fail("norm_mean");
  if (norm_std.size() != static_cast<std::size_t>(kMlpInputs)) fail("norm_std");
  for (double s : norm_std)
    if (!(s > 0.0) || !std::isfinite(s)) fail("norm_std");
  const auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  if (!finite(w1) || !finite(b1) || !finite(w2) || !finite(norm_mean) ||
      !std::isfinite(b2))
    fail("weights (non-finite)");
}

MlpModel init_model(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  MlpModel m;
  m.seed = seed;
  const double bound1 = std::sqrt(6.0 / (kMlpInputs + kMlpHidden));
  const double bound2 = std::sqrt(6.0 / (kMlpHidden + 1));
  m.w1.resize(static_cast<std::size_t>(kMlpHidden) * kMlpInputs);
  for (double& w : m.w1) w = uniform_in(gen, -bound1, bound1);
  m.w2.resize(kMlpHidden);
  for (double& w : m.w2) w = uniform_in(gen, -bound2, bound2);
  m.b1.assign(kMlpHidden, 0.0);
  m.b2 = 0.0;
  m.norm_mean.assign(kMlpInputs, 0.0);
  m.norm_std.assign(kMlpInputs, 1.0);
  return m;
}

namespace {

void normalize(const MlpModel& m, const FeatureVector& x, double out[kMlpInputs]) {
  const double raw[kMlpInputs] = {x.sar_wind, x.stability, x.precip};
  for (int j = 0; j < kMlpInputs; ++j)
    out[j] = (raw[j] - m.norm_mean[j]) / m.norm_std[j];
}

// Shared by forward() and the gradient pass; fills hidden activations.
double forward_into(const MlpModel& m, const FeatureVector& x, double* hidden) {
  double xn[kMlpInputs];
  normalize(m, x, xn);
  double y = m.b2;
  for (int i = 0; i < kMlpHidden; ++i) {
    double pre = m.b1[i];
    const double* row = &m.w1[static_cast<std::size_t>(i) * kMlpInputs];
    for (int j = 0; j < kMlpInputs; ++j) pre += row[j] * xn[j];
    const double h = relu(pre);
    hidden[i] = h;
    y += m.w2[i] * h;
  }
  return y;
}

}  // namespace

double forward(const MlpModel& m, const FeatureVector& x) {
  m.validate();
  double hidden[kMlpHidden];
  return forward_into(m, x, hidden);
}

std::pair<double, MlpGradients> loss_and_gradient(
    const MlpModel& m, const std::vector<FeatureVector>& x,
    const std::vector<double>& y) {
  m.validate();
  if (x.empty()) throw std::domain_error("loss_and_gradient: empty batch");
  if (x.size() != y.size())
    throw std::domain_error("loss_and_gradient: feature/target length mismatch");

  MlpGradients g;
  g.w1.assign(m.w1.size(), 0.0);
  g.b1.assign(m.b1.size(), 0.0);
  g.w2.assign(m.w2.size(), 0.0);
  g.b2 = 0.0;

  const double inv_n = 1.0 / static_cast<double>(x.size());
  double mse = 0.0;
  double hidden[kMlpHidden];
  double xn[kMlpInputs];
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double yhat = forward_into(m, x[k], hidden);
    normalize(m, x[k], xn);
    const double r = yhat - y[k];
    mse += r * r * inv_n;

    // d(mse)/d(yhat) for this sample
    const double gy = 2.0 * r * inv_n;
    g.b2 += gy;
    for (int i = 0; i < kMlpHidden; ++i) {
      g.w2[i] += gy * hidden[i];
      if (hidden[i] > 0.0) {  // ReLU passes gradient only where active
        const double gpre = gy * m.w2[i];
        g.b1[i] += gpre;
        double* grow = &g.w1[static_cast<std::size_t>(i) * kMlpInputs];
        for (int j = 0; j < kMlpInputs; ++j) grow[j] += gpre * xn[j];
      }
    }
  }
  return {mse, std::move(g)};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || !(fraction < 1.0))
    throw std::domain_error("split_indices: fraction must lie in (0, 1)");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 gen(seed);
  fisher_yates(perm, gen);
  const auto n_train =
      static_cast<std::size_t>(static_cast<double>(n) * fraction);
  std::vector<std::size_t> train(perm.begin(), perm.begin() + n_train);
  std::vector<std::size_t> test(perm.begin() + n_train, perm.end());
  return {std::move(train), std::move(test)};
}

TrainResult train(const std::vector<FeatureVector>& x,
                  const std::vector<double>& y, const TrainConfig& cfg) {
  if (x.size() != y.size())
    throw std::domain_error("train: feature/target length mismatch");
  if (x.size() < 10)
    throw std::domain_error("train: need at least 10 samples");
  if (cfg.hidden != kMlpHidden)
    throw std::domain_error("train: hidden layer width must be 100");
  if (cfg.epochs <= 0 || !(cfg.learning_rate > 0.0))
    throw std::domain_error("train: epochs and learning rate must be positive");

  TrainResult result;
  auto [train_idx, test_idx] = split_indices(x.size(), cfg.train_fraction, cfg.seed);
  result.train_indices = std::move(train_idx);
  result.test_indices = std::move(test_idx);

  std::vector<FeatureVector> xt;
  std::vector<double> yt;
  xt.reserve(result.train_indices.size());
  yt.reserve(result.train_indices.size());
  for (std::size_t i : result.train_indices) {
    xt.push_back(x[i]);
    yt.push_back(y[i]);
  }

  MlpModel m = init_model(cfg.seed);

  // z-score parameters come from the training split alone; a feature that is
  // constant there keeps unit scale instead of dividing by zero.
  const double inv_n = 1.0 / static_cast<double>(xt.size());
  for (int j = 0; j < kMlpInputs; ++j) {
    double mean = 0.0;
    for (const FeatureVector& f : xt) {
      const double raw[kMlpInputs] = {f.sar_wind, f.stability, f.precip};
      mean += raw[j];
    }
    mean *= inv_n;
    double var = 0.0;
    for (const FeatureVector& f : xt) {
      const double raw[kMlpInputs] = {f.sar_wind, f.stability, f.precip};
      var += (raw[j] - mean) * (raw[j] - mean);
    }
    var *= inv_n;
    m.norm_mean[j] = mean;
    m.norm_std[j] = var > 0.0 ? std::sqrt(var) : 1.0;
  }

  result.history.reserve(cfg.epochs);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    auto [mse, g] = loss_and_gradient(m, xt, yt);
    if (!std::isfinite(mse))
      throw TrainingError(epoch, "training loss is no longer finite");
    result.history.push_back(mse);
    const double lr = cfg.learning_rate;
    for (std::size_t i = 0; i < m.w1.size(); ++i) m.w1[i] -= lr * g.w1[i];
    for (std::size_t i = 0; i < m.b1.size(); ++i) m.b1[i] -= lr * g.b1[i];
    for (std::size_t i = 0; i < m.w2.size(); ++i) m.w2[i] -= lr * g.w2[i];
    m.b2 -= lr * g.b2;
  }

  result.model = std::move(m);
  return result;
}

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

class ModelReader {
 public:
  ModelReader(const std::string& path, std::istream& in)
      : path_(path), in_(in) {}

  // Next whitespace-separated token; tracks the current line for errors.
  std::string token(const char* field) {
    std::string t;
    while (true) {
      const int ch = in_.get();
      if (ch == EOF) {
        if (t.empty())
          throw ParseError(path_, line_, field, "unexpected end of file");
        return t;
      }
      if (ch == '\n') {
        if (!t.empty()) {
          in_.unget();
          return t;
        }
        ++line_;
        continue;
      }
      if (ch == ' ' || ch == '\t' || ch == '\r') {
        if (!t.empty()) return t;
        continue;
      }
      t.push_back(static_cast<char>(ch));
    }
  }

  void expect(const char* keyword) {
    const std::string t = token(keyword);
    if (t != keyword)
      throw ParseError(path_, line_, keyword,
                       "expected '" + std::string(keyword) + "', got '" + t + "'");
  }

  double number(const char* field) {
    const std::string t = token(field);
    double v = 0.0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw ParseError(path_, line_, field, "not a number: '" + t + "'");
    return v;
  }

  std::uint64_t unsigned_int(const char* field) {
    const std::string t = token(field);
    std::uint64_t v = 0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw ParseError(path_, line_, field, "not an unsigned integer: '" + t + "'");
    return v;
  }

  void expect_eof() {
    while (true) {
      const int ch = in_.get();
      if (ch == EOF) return;
      if (ch == '\n') {
        ++line_;
        continue;
      }
      if (ch == ' ' || ch == '\t' || ch == '\r') continue;
      throw ParseError(path_, line_, "", "trailing content after 'end'");
    }
  }

  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::istream& in_;
  std::size_t line_ = 1;
};

}  // namespace

void save_model(const MlpModel& m, const std::string& path) {
  m.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("save_model: cannot open '" + path + "' for writing");

  out << "airsea_mlp 1\n";
  out << "inputs " << kMlpInputs << "\n";
  out << "hidden " << kMlpHidden << "\n";
  out << "seed " << m.seed << "\n";
  out << "norm_mean";
  for (double v : m.norm_mean) out << ' ' << fmt17(v);
  out << "\nnorm_std";
  for (double v : m.norm_std) out << ' ' << fmt17(v);
  out << "\nw1\n";
  for (int i = 0; i < kMlpHidden; ++i) {
    for (int j = 0; j < kMlpInputs; ++j) {
      if (j) out << ' ';
      out << fmt17(m.w1[static_cast<std::size_t>(i) * kMlpInputs + j]);
    }
    out << '\n';
  }
  out << "b1\n";
  for (int i = 0; i < kMlpHidden; ++i)
    out << fmt17(m.b1[i]) << ((i + 1) % 10 == 0 ? '\n' : ' ');
  out << "w2\n";
  for (int i = 0; i < kMlpHidden; ++i)
    out << fmt17(m.w2[i]) << ((i + 1) % 10 == 0 ? '\n' : ' ');
  out << "b2 " << fmt17(m.b2) << "\n";
  out << "end\n";
  if (!out)
    throw std::runtime_error("save_model: write to '" + path + "' failed");
}

MlpModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "", "cannot open file");
  ModelReader r(path, in);

  r.expect("airsea_mlp");
  const std::uint64_t version = r.unsigned_int("version");
  if (version != 1)
    throw ParseError(path, r.line(), "version", "unsupported model version");

  r.expect("inputs");
  const std::uint64_t inputs = r.unsigned_int("inputs");
  if (inputs != kMlpInputs)
    throw ParseError(path, r.line(), "inputs", "input layer width must be 3");

  r.expect("hidden");
  const std::uint64_t hidden = r.unsigned_int("hidden");
  if (hidden != kMlpHidden)
    throw ParseError(path, r.line(), "hidden", "hidden layer width must be 100");

  MlpModel m;
  r.expect("seed");
  m.seed = r.unsigned_int("seed");

  r.expect("norm_mean");
  m.norm_mean.resize(kMlpInputs);
  for (double& v : m.norm_mean) v = r.number("norm_mean");
  r.expect("norm_std");
  m.norm_std.resize(kMlpInputs);
  for (double& v : m.norm_std) {
    v = r.number("norm_std");
    if (!(v > 0.0))
      throw ParseError(path, r.line(), "norm_std", "scales must be positive");
  }

  r.expect("w1");
  m.w1.resize(static_cast<std::size_t>(kMlpHidden) * kMlpInputs);
  for (double& v : m.w1) v = r.number("w1");
  r.expect("b1");
  m.b1.resize(kMlpHidden);
  for (double& v : m.b1) v = r.number("b1");
  r.expect("w2");
  m.w2.resize(kMlpHidden);
  for (double& v : m.w2) v = r.number("w2");
  r.expect("b2");
  m.b2 = r.number("b2");
  r.expect("end");
  r.expect_eof();

  m.validate();
  return m;
}

}  // namespace airsea
