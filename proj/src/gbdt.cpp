#include <algorithm>
#include <cmath>
#include <numeric>

#include "etr/classifier.hpp"
#include "etr/errors.hpp"

namespace etr {

namespace {

// log(1 + exp(-|z|)) + max(z, 0) - y z, the log-loss of sigmoid(z).
double margin_loss(double z, double y) {
  return std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y * z;
}

double mean_margin_loss(const std::vector<double>& margins,
                        const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) sum += margin_loss(margins[i], y[i]);
  return sum / static_cast<double>(y.size());
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& x,
              const std::vector<double>& g, const std::vector<double>& h,
              const std::vector<std::size_t>& feature_order,
              const GbdtParams& params)
      : x_(x), g_(g), h_(h), feature_order_(feature_order), params_(params) {}

  RegressionTree build(const std::vector<std::size_t>& rows) {
    RegressionTree tree;
    grow(tree, rows, 0);
    return tree;
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
  };

  double score(double g, double h) const {
    return g * g / (h + params_.reg_lambda);
  }

  // `rows` is kept in ascending order so results do not depend on how the
  // parent sorted them.
  int grow(RegressionTree& tree, const std::vector<std::size_t>& rows,
           int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double g_sum = 0.0;
    double h_sum = 0.0;
    for (std::size_t r : rows) {
      g_sum += g_[r];
      h_sum += h_[r];
    }
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    Split best;
    if (depth < params_.max_depth && rows.size() >= 2 * min_leaf) {
      best = find_split(rows, g_sum, h_sum, min_leaf);
    }
    if (best.feature < 0) {
      tree.nodes[id].value = -g_sum / (h_sum + params_.reg_lambda);
      return id;
    }
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) {
      (x_[r][best.feature] < best.threshold ? left : right).push_back(r);
    }
    const int l = grow(tree, left, depth + 1);
    const int rgt = grow(tree, right, depth + 1);
    TreeNode& node = tree.nodes[id];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = rgt;
    return id;
  }

  Split find_split(const std::vector<std::size_t>& rows, double g_sum,
                   double h_sum, std::size_t min_leaf) const {
    Split best;
    const double parent = score(g_sum, h_sum);
    std::vector<std::size_t> sorted(rows);
    for (std::size_t f : feature_order_) {
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::size_t a, std::size_t b) {
                         return x_[a][f] < x_[b][f];
                       });
      double gl = 0.0;
      double hl = 0.0;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        gl += g_[sorted[k]];
        hl += h_[sorted[k]];
        const double lo = x_[sorted[k]][f];
        const double hi = x_[sorted[k + 1]][f];
        if (!(lo < hi)) continue;
        if (k + 1 < min_leaf || sorted.size() - k - 1 < min_leaf) continue;
        const double gain =
            score(gl, hl) + score(g_sum - gl, h_sum - hl) - parent;
        if (gain > best.gain && gain > 1e-12) {
          double thr = lo + (hi - lo) / 2.0;
          if (!(lo < thr)) thr = hi;
          best = {static_cast<int>(f), thr, gain};
        }
      }
      std::sort(sorted.begin(), sorted.end());
    }
    return best;
  }

  const std::vector<std::vector<double>>& x_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  const std::vector<std::size_t>& feature_order_;
  const GbdtParams& params_;
};

}  // namespace

double RegressionTree::evaluate(std::span<const double> x) const {
  if (nodes.empty()) return 0.0;
  int n = 0;
  while (nodes[n].feature >= 0) {
    n = x[nodes[n].feature] < nodes[n].threshold ? nodes[n].left : nodes[n].right;
  }
  return nodes[n].value;
}

double GbdtModel::margin(std::span<const double> x) const {
  double z = base_score;
  for (const auto& t : trees) z += t.evaluate(x);
  return z;
}

GbdtModel train_gbdt(const std::vector<std::vector<double>>& x,
                     const std::vector<double>& y,
                     const std::vector<std::string>& feature_names,
                     const GbdtParams& params,
                     std::vector<double>* loss_trace) {
  const std::size_t n = y.size();
  GbdtModel model;
  model.learning_rate = params.learning_rate;
  model.n_trees = params.n_trees;
  const double pos = std::accumulate(y.begin(), y.end(), 0.0);
  const double prior = pos / static_cast<double>(n);
  model.base_score = std::log(prior / (1.0 - prior));

  // Ties between equally good splits go to the feature whose name sorts
  // first, which keeps the ensemble stable under column permutation.
  std::vector<std::size_t> feature_order(feature_names.size());
  std::iota(feature_order.begin(), feature_order.end(), 0);
  std::stable_sort(feature_order.begin(), feature_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return feature_names[a] < feature_names[b];
                   });

  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::vector<double> margins(n, model.base_score);
  double loss = mean_margin_loss(margins, y);
  if (loss_trace != nullptr) loss_trace->assign(1, loss);

  std::vector<double> g(n);
  std::vector<double> h(n);
  std::vector<double> out(n);
  std::vector<double> trial(n);
  for (int round = 0; round < params.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margins[i]);
      g[i] = p - y[i];
      h[i] = p * (1.0 - p);
    }
    TreeBuilder builder(x, g, h, feature_order, params);
    RegressionTree tree = builder.build(all_rows);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = tree.evaluate(x[i]);
      any = any || out[i] != 0.0;
    }
    if (!any) break;

    // Backtrack the shrinkage until the training loss does not go up.
    double eta = params.learning_rate;
    double trial_loss = 0.0;
    for (int attempt = 0; attempt < 30; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = margins[i] + eta * out[i];
      trial_loss = mean_margin_loss(trial, y);
      if (trial_loss <= loss) break;
      eta /= 2.0;
    }
    if (trial_loss > loss) break;
    for (auto& node : tree.nodes) {
      if (node.feature < 0) node.value *= eta;
    }
    // Recompute margins from the stored tree so training and prediction
    // agree bit for bit.
    for (std::size_t i = 0; i < n; ++i) margins[i] += tree.evaluate(x[i]);
    loss = mean_margin_loss(margins, y);
    if (loss_trace != nullptr) loss_trace->push_back(loss);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace etr
