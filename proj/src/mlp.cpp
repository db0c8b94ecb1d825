#include <algorithm>
#include <cmath>
#include <numeric>

#include "etr/classifier.hpp"
#include "etr/errors.hpp"
#include "etr/random.hpp"

namespace etr {

namespace {

struct Forward {
  std::vector<double> z;  // hidden pre-activations
  double out = 0.0;       // output margin
};

Forward forward(const MlpModel& m, std::span<const double> x) {
  Forward f;
  f.z.resize(m.hidden);
  f.out = m.b2;
  for (std::size_t j = 0; j < m.hidden; ++j) {
    double z = m.b1[j];
    const double* row = &m.w1[j * m.n_inputs];
    for (std::size_t k : m.input_order) z += row[k] * x[k];
    f.z[j] = z;
    f.out += m.w2[j] * std::max(z, 0.0);
  }
  return f;
}

double margin_loss(double z, double y) {
  return std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y * z;
}

double mean_loss(const MlpModel& m, const std::vector<std::vector<double>>& x,
                 const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += margin_loss(forward(m, x[i]).out, y[i]);
  }
  return sum / static_cast<double>(x.size());
}

}  // namespace

MlpModel MlpModel::zeros(const std::vector<std::string>& feature_names,
                         std::size_t hidden) {
  MlpModel m;
  m.n_inputs = feature_names.size();
  m.hidden = hidden;
  m.w1.assign(hidden * m.n_inputs, 0.0);
  m.b1.assign(hidden, 0.0);
  m.w2.assign(hidden, 0.0);
  m.input_order.resize(m.n_inputs);
  std::iota(m.input_order.begin(), m.input_order.end(), 0);
  std::stable_sort(m.input_order.begin(), m.input_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return feature_names[a] < feature_names[b];
                   });
  return m;
}

double MlpModel::probability(std::span<const double> x) const {
  return sigmoid(forward(*this, x).out);
}

std::size_t MlpModel::parameter_count() const {
  return w1.size() + b1.size() + w2.size() + 1;
}

std::vector<double> MlpModel::parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  flat.insert(flat.end(), w1.begin(), w1.end());
  flat.insert(flat.end(), b1.begin(), b1.end());
  flat.insert(flat.end(), w2.begin(), w2.end());
  flat.push_back(b2);
  return flat;
}

void MlpModel::set_parameters(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw ValidationError("parameter vector has the wrong length");
  }
  auto it = flat.begin();
  std::copy_n(it, w1.size(), w1.begin());
  it += static_cast<std::ptrdiff_t>(w1.size());
  std::copy_n(it, b1.size(), b1.begin());
  it += static_cast<std::ptrdiff_t>(b1.size());
  std::copy_n(it, w2.size(), w2.begin());
  it += static_cast<std::ptrdiff_t>(w2.size());
  b2 = *it;
}

double mlp_loss_and_gradient(const MlpModel& m,
                             const std::vector<std::vector<double>>& x,
                             const std::vector<double>& y,
                             std::vector<double>* gradient) {
  const std::size_t n = m.n_inputs;
  const std::size_t off_b1 = m.w1.size();
  const std::size_t off_w2 = off_b1 + m.hidden;
  const std::size_t off_b2 = off_w2 + m.hidden;
  std::vector<double> grad(m.parameter_count(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Forward f = forward(m, x[i]);
    loss += margin_loss(f.out, y[i]);
    const double d = sigmoid(f.out) - y[i];
    grad[off_b2] += d;
    for (std::size_t j = 0; j < m.hidden; ++j) {
      if (f.z[j] <= 0.0) continue;
      grad[off_w2 + j] += d * f.z[j];
      const double dz = d * m.w2[j];
      grad[off_b1 + j] += dz;
      for (std::size_t k = 0; k < n; ++k) grad[j * n + k] += dz * x[i][k];
    }
  }
  const double scale = 1.0 / static_cast<double>(x.size());
  for (double& v : grad) v *= scale;
  if (gradient != nullptr) *gradient = std::move(grad);
  return loss * scale;
}

MlpModel train_mlp(const std::vector<std::vector<double>>& x,
                   const std::vector<double>& y,
                   const std::vector<std::string>& feature_names,
                   const MlpParams& params, std::uint64_t seed,
                   std::vector<double>* loss_trace) {
  const auto hidden = static_cast<std::size_t>(params.hidden);
  MlpModel m = MlpModel::zeros(feature_names, hidden);
  const std::size_t n = m.n_inputs;

  // He-uniform input weights. Each input column draws from a stream keyed by
  // its feature name, so a permuted manifest gets the same weights.
  const double in_limit = std::sqrt(6.0 / static_cast<double>(std::max<std::size_t>(n, 1)));
  for (std::size_t k = 0; k < n; ++k) {
    Rng rng(seed ^ fnv1a(feature_names[k]));
    for (std::size_t j = 0; j < hidden; ++j) {
      m.w1[j * n + k] = rng.uniform(-in_limit, in_limit);
    }
  }
  const double out_limit = std::sqrt(6.0 / static_cast<double>(hidden + 1));
  Rng out_rng(seed ^ fnv1a("mlp/output"));
  for (std::size_t j = 0; j < hidden; ++j) {
    m.w2[j] = out_rng.uniform(-out_limit, out_limit);
  }
  // Small positive hidden bias keeps units alive on [0,1] inputs.
  std::fill(m.b1.begin(), m.b1.end(), 0.01);

  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  std::vector<double> theta = m.parameters();
  std::vector<double> mom(theta.size(), 0.0);
  std::vector<double> vel(theta.size(), 0.0);
  std::uint64_t t = 0;

  Rng order_rng(seed ^ fnv1a("mlp/batches"));
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(params.batch);
  if (loss_trace != nullptr) loss_trace->assign(1, mean_loss(m, x, y));

  std::vector<std::vector<double>> bx;
  std::vector<double> by;
  std::vector<double> grad;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    order_rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      bx.clear();
      by.clear();
      for (std::size_t i = start; i < end; ++i) {
        bx.push_back(x[order[i]]);
        by.push_back(y[order[i]]);
      }
      mlp_loss_and_gradient(m, bx, by, &grad);
      ++t;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
      for (std::size_t p = 0; p < theta.size(); ++p) {
        mom[p] = kBeta1 * mom[p] + (1.0 - kBeta1) * grad[p];
        vel[p] = kBeta2 * vel[p] + (1.0 - kBeta2) * grad[p] * grad[p];
        theta[p] -= params.step * (mom[p] / c1) / (std::sqrt(vel[p] / c2) + kEps);
      }
      m.set_parameters(theta);
    }
    if (loss_trace != nullptr) loss_trace->push_back(mean_loss(m, x, y));
  }
  return m;
}

}  // namespace etr
