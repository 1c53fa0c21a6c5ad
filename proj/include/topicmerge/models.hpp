#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "topicmerge/util.hpp"

namespace topicmerge {

using Matrix = std::vector<std::vector<double>>;

// ---------------------------------------------------------------------------
// Isolation forest.
// ---------------------------------------------------------------------------

// Expected path length of an unsuccessful BST search over n points:
// c(n) = 2 H(n-1) - 2 (n-1)/n with H(i) = ln(i) + Euler's gamma;
// c(2) = 1, c(n <= 1) = 0.
double average_path_length(int64_t n);

struct IsoNode {
  int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int32_t left = -1;
  int32_t right = -1;
  int32_t size = 0;  // rows that reached this node during fitting
};

struct IsoTree {
  std::vector<IsoNode> nodes;  // node 0 is the root
};

struct IsolationForestConfig {
  int n_trees = 100;
  int subsample = 256;
  double contamination = 0.2;
};

struct IsolationForestModel {
  int n_features = 0;
  int psi = 0;  // effective subsample size
  int n_trees = 0;
  double contamination = 0.2;
  double threshold = 0.0;  // on anomaly scores; filter keeps score > threshold
  bool degenerate = false;  // all training rows identical
  std::vector<IsoTree> trees;

  double mean_path(const std::vector<double>& x) const;
  // s(x) = 2^(-E[h(x)] / c(psi)); rows identical to a degenerate fit score 0.5.
  double score(const std::vector<double>& x) const;
};

// Fits on X (rows >= 2, no NaN). The filter threshold is the
// (1 - contamination) quantile of the training scores. With all rows
// identical the model is flagged degenerate instead of failing.
IsolationForestModel iforest_fit(const Matrix& x, const IsolationForestConfig& cfg,
                                 uint64_t seed);

// Indices of rows whose score strictly exceeds the threshold.
std::vector<size_t> iforest_filter(const IsolationForestModel& m, const Matrix& x);

// ---------------------------------------------------------------------------
// Linear models (full-batch gradient descent with backtracking line search).
// ---------------------------------------------------------------------------

struct Standardizer {
  std::vector<double> mean, stddev;

  void fit(const Matrix& x);
  std::vector<double> transform(const std::vector<double>& row) const;
  Matrix transform(const Matrix& x) const;
};

enum class LinearKind { logistic, hinge };

struct LinearFitConfig {
  double c = 1.0;  // inverse regularization strength
  // Class weights for labels 0/1; empty means balanced n/(2 n_c).
  std::vector<double> class_weights;
  double tol = 1e-6;
  int max_iter = 10000;
};

struct LinearModel {
  LinearKind kind = LinearKind::logistic;
  Standardizer standardizer;
  std::vector<double> weights;  // on standardized features
  double bias = 0.0;
  double c = 1.0;

  // logistic: score is the positive-class probability, label = score >= 0.5.
  // hinge: score is the margin, label = margin > 0.
  double decision(const std::vector<double>& raw_row) const;
  double score(const std::vector<double>& raw_row) const;
  int label(const std::vector<double>& raw_row) const;
};

// Objective: sum_i cw[y_i] * loss_i + ||w||^2 / (2 c), bias unregularized.
// Deterministic: weights start at zero; seed is reserved for interface
// stability and does not affect the fit.
LinearModel linear_fit(const Matrix& x, const std::vector<int>& y, LinearKind kind,
                       const LinearFitConfig& cfg, uint64_t seed);

// Loss and gradient at an arbitrary point, on already-standardized data
// (exposed for gradient checking).
double linear_loss_grad(LinearKind kind, const Matrix& xs, const std::vector<int>& y,
                        const std::vector<double>& cw, double c,
                        const std::vector<double>& w, double b,
                        std::vector<double>& grad_w, double& grad_b);

// ---------------------------------------------------------------------------
// Metrics.
// ---------------------------------------------------------------------------

struct Prf {
  double precision = 0.0, recall = 0.0, f_score = 0.0;
  int64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

Prf prf(const std::vector<int>& predicted, const std::vector<int>& actual);

// ---------------------------------------------------------------------------
// Recursive feature elimination.
// ---------------------------------------------------------------------------

// Repeatedly fits a logistic model and removes the feature with the smallest
// absolute standardized weight (ties: smallest original index). Returns
// rank[j] for each original feature; the survivor has rank 1.
std::vector<int> rfe_rank(const Matrix& x, const std::vector<int>& y,
                          const LinearFitConfig& cfg, uint64_t seed);

}  // namespace topicmerge
