// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <string>
#include <vector>

#include "sfcm/errors.hpp"
#include "sfcm/rng.hpp"

namespace sfcm::eval {

// Absolute fraction error: mean over i of |(pred_i - calc_i) / calc_i|.
// Unitless and scale-invariant.
inline double afe(const std::vector<double>& pred,
                  const std::vector<double>& calc) {
  if (pred.size() != calc.size() || pred.empty())
    throw DimensionMismatch("afe needs equal, non-empty prediction lists");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (std::abs(calc[i]) < 1e-12)
      throw NearZeroReference("calculated value at index " + std::to_string(i));
    sum += std::abs((pred[i] - calc[i]) / calc[i]);
  }
  return sum / static_cast<double>(pred.size());
}

// AFE of the baseline that always predicts the training-set mean.
inline double mean_predictor(const std::vector<double>& train_targets,
                             const std::vector<double>& test_targets) {
  if (train_targets.empty() || test_targets.empty())
    throw DimensionMismatch("mean_predictor needs non-empty target lists");
  const double mean =
      std::accumulate(train_targets.begin(), train_targets.end(), 0.0) /
      static_cast<double>(train_targets.size());
  return afe(std::vector<double>(test_targets.size(), mean), test_targets);
}

// N% recall: the fraction of the true top-N% set (lowest scores = most
// stable) recovered by the predicted top-N% set. Ties keep input order.
inline double recall_at(const std::vector<double>& pred_scores,
                        const std::vector<double>& true_scores, double pct,
                        bool lowest_is_best = true) {
  if (pred_scores.size() != true_scores.size() || pred_scores.empty())
    throw DimensionMismatch("recall_at needs equal, non-empty score lists");
  if (!(pct > 0.0 && pct < 100.0))
    throw std::invalid_argument("recall_at: pct must be in (0, 100)");
  const std::size_t n = pred_scores.size();
  const auto top_n = static_cast<std::size_t>(
      std::ceil(pct / 100.0 * static_cast<double>(n)));

  const auto top_set = [&](const std::vector<double>& scores) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return lowest_is_best ? scores[a] < scores[b]
                                             : scores[a] > scores[b];
                     });
    order.resize(top_n);
    std::sort(order.begin(), order.end());
    return order;
  };
  const auto top_pred = top_set(pred_scores);
  const auto top_true = top_set(true_scores);
  std::vector<std::size_t> hit;
  std::set_intersection(top_pred.begin(), top_pred.end(), top_true.begin(),
                        top_true.end(), std::back_inserter(hit));
  return static_cast<double>(hit.size()) / static_cast<double>(top_n);
}

// Fold assignment: structure index -> fold in [0, K).
struct FoldSplit {
  int folds = 0;
  std::vector<int> assignment;

  std::vector<std::size_t> test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] == fold) out.push_back(i);
    return out;
  }
  std::vector<std::size_t> train_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] != fold) out.push_back(i);
    return out;
  }
};

// Seeded shuffle followed by round-robin assignment; fold sizes differ by
// at most one.
inline FoldSplit kfold(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 2) throw TooFewSamples("kfold needs K >= 2");
  if (n < static_cast<std::size_t>(folds))
    throw TooFewSamples("kfold needs n >= K, got n = " + std::to_string(n) +
                        ", K = " + std::to_string(folds));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  FoldSplit split;
  split.folds = folds;
  split.assignment.assign(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos)
    split.assignment[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(folds));
  return split;
}

}  // namespace sfcm::eval
