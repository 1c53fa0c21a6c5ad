#include "topicmerge/models.hpp"

#include <algorithm>
#include <cmath>

namespace topicmerge {

namespace {
constexpr double kEulerGamma = 0.5772156649015328606;

void check_matrix(const Matrix& x, const char* who) {
  if (x.empty()) throw Error(std::string(who) + ": empty matrix");
  size_t d = x[0].size();
  if (d == 0) throw Error(std::string(who) + ": rows have no features");
  for (const auto& row : x) {
    if (row.size() != d) throw Error(std::string(who) + ": ragged matrix");
    for (double v : row)
      if (std::isnan(v)) throw Error(std::string(who) + ": NaN in input");
  }
}
}  // namespace

double average_path_length(int64_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  double h = std::log(static_cast<double>(n - 1)) + kEulerGamma;
  return 2.0 * h - 2.0 * static_cast<double>(n - 1) / static_cast<double>(n);
}

namespace {

struct TreeBuilder {
  const Matrix& x;
  const std::vector<size_t>& sample;  // row indices into x
  IsoTree& tree;
  Rng& rng;
  int height_cap;

  // Builds the subtree over sample[lo, hi) at the given depth; returns node index.
  int32_t build(size_t lo, size_t hi, int depth, std::vector<size_t>& work) {
    int32_t idx = static_cast<int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[idx].size = static_cast<int32_t>(hi - lo);
    if (hi - lo <= 1 || depth >= height_cap) return idx;

    size_t d = x[0].size();
    std::vector<int32_t> candidates;
    candidates.reserve(d);
    for (size_t f = 0; f < d; ++f) {
      double mn = x[work[lo]][f], mx = mn;
      for (size_t i = lo + 1; i < hi; ++i) {
        double v = x[work[i]][f];
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      if (mx > mn) candidates.push_back(static_cast<int32_t>(f));
    }
    if (candidates.empty()) return idx;  // all remaining rows identical

    int32_t f = candidates[rng.below(candidates.size())];
    double mn = x[work[lo]][static_cast<size_t>(f)], mx = mn;
    for (size_t i = lo + 1; i < hi; ++i) {
      double v = x[work[i]][static_cast<size_t>(f)];
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    // Split drawn from (min, max]; both children are always non-empty.
    double split = mn + rng.uniform_pos() * (mx - mn);
    auto mid_it = std::partition(work.begin() + static_cast<ptrdiff_t>(lo),
                                 work.begin() + static_cast<ptrdiff_t>(hi),
                                 [&](size_t r) { return x[r][static_cast<size_t>(f)] < split; });
    size_t mid = static_cast<size_t>(mid_it - work.begin());

    tree.nodes[idx].feature = f;
    tree.nodes[idx].threshold = split;
    int32_t left = build(lo, mid, depth + 1, work);
    tree.nodes[idx].left = left;
    int32_t right = build(mid, hi, depth + 1, work);
    tree.nodes[idx].right = right;
    return idx;
  }
};

double tree_path_length(const IsoTree& t, const std::vector<double>& row) {
  int32_t cur = 0;
  int depth = 0;
  while (true) {
    const IsoNode& n = t.nodes[static_cast<size_t>(cur)];
    if (n.feature < 0)
      return static_cast<double>(depth) + average_path_length(n.size);
    cur = row[static_cast<size_t>(n.feature)] < n.threshold ? n.left : n.right;
    ++depth;
  }
}

}  // namespace

double IsolationForestModel::mean_path(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_features)
    throw Error("isolation forest: feature dimension mismatch");
  double sum = 0.0;
  for (const auto& t : trees) sum += tree_path_length(t, x);
  return sum / static_cast<double>(trees.size());
}

double IsolationForestModel::score(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_features)
    throw Error("isolation forest: feature dimension mismatch");
  if (degenerate) return 0.5;
  double c = average_path_length(psi);
  if (c <= 0.0) return 0.5;
  return std::exp2(-mean_path(x) / c);
}

IsolationForestModel iforest_fit(const Matrix& x, const IsolationForestConfig& cfg,
                                 uint64_t seed) {
  check_matrix(x, "iforest_fit");
  if (x.size() < 2) throw Error("iforest_fit: need at least 2 rows");
  if (cfg.n_trees < 1) throw Error("iforest_fit: n_trees must be positive");
  if (!(cfg.contamination > 0.0 && cfg.contamination < 1.0))
    throw Error("iforest_fit: contamination must be in (0, 1)");

  IsolationForestModel m;
  m.n_features = static_cast<int>(x[0].size());
  m.n_trees = cfg.n_trees;
  m.contamination = cfg.contamination;
  m.psi = static_cast<int>(std::min<size_t>(static_cast<size_t>(cfg.subsample), x.size()));
  int height_cap = static_cast<int>(
      std::ceil(std::log2(static_cast<double>(std::max(2, m.psi)))));

  Rng master(seed);
  std::vector<uint64_t> tree_seeds(static_cast<size_t>(cfg.n_trees));
  for (auto& s : tree_seeds) s = master.next_u64();

  std::vector<size_t> all(x.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;

  m.trees.resize(static_cast<size_t>(cfg.n_trees));
  for (size_t t = 0; t < m.trees.size(); ++t) {
    Rng rng(tree_seeds[t]);
    std::vector<size_t> rows = all;
    rng.shuffle(rows);
    rows.resize(static_cast<size_t>(m.psi));
    TreeBuilder builder{x, rows, m.trees[t], rng, height_cap};
    std::vector<size_t> work = rows;
    builder.build(0, work.size(), 0, work);
  }

  std::vector<double> scores(x.size());
  for (size_t i = 0; i < x.size(); ++i) scores[i] = m.score(x[i]);
  double mn = scores[0], mx = scores[0];
  for (double s : scores) {
    mn = std::min(mn, s);
    mx = std::max(mx, s);
  }
  m.degenerate = (mx - mn) < 1e-12;
  if (m.degenerate) {
    m.threshold = 0.5;  // every row scores 0.5, so the strict filter keeps none
    return m;
  }

  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  int64_t n = static_cast<int64_t>(sorted.size());
  int64_t k = std::llround((1.0 - cfg.contamination) * static_cast<double>(n));
  k = std::clamp<int64_t>(k, 1, n);
  m.threshold = sorted[static_cast<size_t>(k - 1)];
  return m;
}

std::vector<size_t> iforest_filter(const IsolationForestModel& m, const Matrix& x) {
  std::vector<size_t> kept;
  for (size_t i = 0; i < x.size(); ++i)
    if (m.score(x[i]) > m.threshold) kept.push_back(i);
  return kept;
}

// ---------------------------------------------------------------------------

void Standardizer::fit(const Matrix& x) {
  check_matrix(x, "Standardizer::fit");
  size_t d = x[0].size(), n = x.size();
  mean.assign(d, 0.0);
  stddev.assign(d, 0.0);
  for (const auto& row : x)
    for (size_t j = 0; j < d; ++j) mean[j] += row[j];
  for (size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
  for (const auto& row : x)
    for (size_t j = 0; j < d; ++j) {
      double dv = row[j] - mean[j];
      stddev[j] += dv * dv;
    }
  for (size_t j = 0; j < d; ++j) {
    stddev[j] = std::sqrt(stddev[j] / static_cast<double>(n));
    if (stddev[j] < 1e-12) stddev[j] = 1.0;  // constant features pass through
  }
}

std::vector<double> Standardizer::transform(const std::vector<double>& row) const {
  if (row.size() != mean.size()) throw Error("Standardizer: dimension mismatch");
  std::vector<double> out(row.size());
  for (size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / stddev[j];
  return out;
}

Matrix Standardizer::transform(const Matrix& x) const {
  Matrix out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(transform(row));
  return out;
}

double linear_loss_grad(LinearKind kind, const Matrix& xs, const std::vector<int>& y,
                        const std::vector<double>& cw, double c,
                        const std::vector<double>& w, double b,
                        std::vector<double>& grad_w, double& grad_b) {
  size_t n = xs.size(), d = w.size();
  grad_w.assign(d, 0.0);
  grad_b = 0.0;
  double loss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double z = b;
    for (size_t j = 0; j < d; ++j) z += w[j] * xs[i][j];
    double cwi = cw[static_cast<size_t>(y[i])];
    double dz;
    if (kind == LinearKind::logistic) {
      // log-loss, numerically stable: max(z,0) - y z + log(1 + e^{-|z|})
      loss += cwi * (std::max(z, 0.0) - static_cast<double>(y[i]) * z +
                     std::log1p(std::exp(-std::abs(z))));
      double sigma = 1.0 / (1.0 + std::exp(-z));
      dz = cwi * (sigma - static_cast<double>(y[i]));
    } else {
      double s = y[i] == 1 ? 1.0 : -1.0;
      double margin = 1.0 - s * z;
      loss += cwi * std::max(0.0, margin);
      dz = margin > 0.0 ? cwi * -s : 0.0;
    }
    if (dz != 0.0) {
      for (size_t j = 0; j < d; ++j) grad_w[j] += dz * xs[i][j];
      grad_b += dz;
    }
  }
  double reg = 0.0;
  for (size_t j = 0; j < d; ++j) {
    reg += w[j] * w[j];
    grad_w[j] += w[j] / c;
  }
  loss += reg / (2.0 * c);
  return loss;
}

LinearModel linear_fit(const Matrix& x, const std::vector<int>& y, LinearKind kind,
                       const LinearFitConfig& cfg, uint64_t seed) {
  (void)seed;  // fits are deterministic from zero initialization
  check_matrix(x, "linear_fit");
  if (y.size() != x.size()) throw Error("linear_fit: label count mismatch");
  if (cfg.c <= 0.0) throw Error("linear_fit: c must be positive");
  int64_t n0 = 0, n1 = 0;
  for (int label : y) {
    if (label == 0) ++n0;
    else if (label == 1) ++n1;
    else throw Error("linear_fit: labels must be 0 or 1");
  }
  if (n0 == 0 || n1 == 0) throw Error("linear_fit: need both classes present");

  LinearModel m;
  m.kind = kind;
  m.c = cfg.c;
  m.standardizer.fit(x);
  Matrix xs = m.standardizer.transform(x);

  std::vector<double> cw(2);
  if (cfg.class_weights.empty()) {
    double n = static_cast<double>(y.size());
    cw[0] = n / (2.0 * static_cast<double>(n0));
    cw[1] = n / (2.0 * static_cast<double>(n1));
  } else if (cfg.class_weights.size() == 2) {
    cw[0] = cfg.class_weights[0];
    cw[1] = cfg.class_weights[1];
  } else {
    throw Error("linear_fit: class_weights must have 2 entries");
  }

  size_t d = xs[0].size();
  std::vector<double> w(d, 0.0), gw, trial_w(d), trial_gw;
  double b = 0.0, gb = 0.0, trial_gb = 0.0;
  double loss = linear_loss_grad(kind, xs, y, cw, cfg.c, w, b, gw, gb);
  double step = 1.0 / static_cast<double>(y.size());

  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    double gnorm2 = gb * gb;
    for (size_t j = 0; j < d; ++j) gnorm2 += gw[j] * gw[j];
    if (gnorm2 < 1e-18) break;

    step *= 2.0;  // optimistic growth, backtracked below
    double new_loss = 0.0, trial_b = 0.0;
    bool accepted = false;
    while (step > 1e-18) {
      for (size_t j = 0; j < d; ++j) trial_w[j] = w[j] - step * gw[j];
      trial_b = b - step * gb;
      new_loss = linear_loss_grad(kind, xs, y, cw, cfg.c, trial_w, trial_b, trial_gw,
                                  trial_gb);
      if (new_loss <= loss - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    std::swap(w, trial_w);
    std::swap(gw, trial_gw);
    b = trial_b;
    gb = trial_gb;
    double improvement = loss - new_loss;
    loss = new_loss;
    if (improvement < cfg.tol) break;
  }

  m.weights = std::move(w);
  m.bias = b;
  return m;
}

double LinearModel::decision(const std::vector<double>& raw_row) const {
  std::vector<double> z = standardizer.transform(raw_row);
  double s = bias;
  for (size_t j = 0; j < z.size(); ++j) s += weights[j] * z[j];
  return s;
}

double LinearModel::score(const std::vector<double>& raw_row) const {
  double z = decision(raw_row);
  if (kind == LinearKind::logistic) return 1.0 / (1.0 + std::exp(-z));
  return z;
}

int LinearModel::label(const std::vector<double>& raw_row) const {
  if (kind == LinearKind::logistic) return score(raw_row) >= 0.5 ? 1 : 0;
  return decision(raw_row) > 0.0 ? 1 : 0;
}

Prf prf(const std::vector<int>& predicted, const std::vector<int>& actual) {
  if (predicted.size() != actual.size()) throw Error("prf: size mismatch");
  Prf out;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == 1 && actual[i] == 1) ++out.tp;
    else if (predicted[i] == 1 && actual[i] == 0) ++out.fp;
    else if (predicted[i] == 0 && actual[i] == 1) ++out.fn;
    else ++out.tn;
  }
  if (out.tp + out.fp > 0)
    out.precision = static_cast<double>(out.tp) / static_cast<double>(out.tp + out.fp);
  if (out.tp + out.fn > 0)
    out.recall = static_cast<double>(out.tp) / static_cast<double>(out.tp + out.fn);
  if (out.precision + out.recall > 0.0)
    out.f_score = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

std::vector<int> rfe_rank(const Matrix& x, const std::vector<int>& y,
                          const LinearFitConfig& cfg, uint64_t seed) {
  check_matrix(x, "rfe_rank");
  size_t d = x[0].size();
  std::vector<size_t> remaining(d);
  for (size_t j = 0; j < d; ++j) remaining[j] = j;
  std::vector<int> rank(d, 0);
  int next_rank = static_cast<int>(d);

  while (remaining.size() > 1) {
    Matrix sub(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
      sub[i].resize(remaining.size());
      for (size_t j = 0; j < remaining.size(); ++j) sub[i][j] = x[i][remaining[j]];
    }
    LinearModel m = linear_fit(sub, y, LinearKind::logistic, cfg, seed);
    size_t drop = 0;
    double best = std::abs(m.weights[0]);
    for (size_t j = 1; j < remaining.size(); ++j) {
      double a = std::abs(m.weights[j]);
      if (a < best) {
        best = a;
        drop = j;
      }
    }
    rank[remaining[drop]] = next_rank--;
    remaining.erase(remaining.begin() + static_cast<ptrdiff_t>(drop));
  }
  rank[remaining[0]] = 1;
  return rank;
}

}  // namespace topicmerge
