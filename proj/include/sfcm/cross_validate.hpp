// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sfcm/errors.hpp"
#include "sfcm/eval.hpp"
#include "sfcm/lsi.hpp"
#include "sfcm/mlp.hpp"
#include "sfcm/morton.hpp"
#include "sfcm/structure.hpp"

namespace sfcm::eval {

struct TaskStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation across folds
};

inline TaskStats fold_stats(const std::vector<double>& values) {
  TaskStats s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

// One (calculated, predicted) pair from a test fold, for distribution
// plots.
struct PredictionRecord {
  std::string id;
  int task = 0;
  double calculated = 0.0;
  double predicted = 0.0;
};

struct MetricReport {
  int folds = 0;
  int k_used = 0;  // from the last fold (informational)
  std::array<TaskStats, mlp::kTasks> train_afe{};
  std::array<TaskStats, mlp::kTasks> test_afe{};
  std::array<TaskStats, mlp::kTasks> baseline_afe{};  // mean predictor
  TaskStats recall;  // model ranking of single-point energies
  double recall_best = 0.0;
  TaskStats lattice_recall;  // lattice truth as an ersatz ranking
  double lattice_recall_best = 0.0;
  std::array<std::vector<double>, mlp::kTasks> per_fold_test_afe{};
  std::vector<PredictionRecord> predictions;
};

struct CvSettings {
  int folds = 10;
  std::uint64_t seed = 0;
  double recall_pct = 15.0;
};

// 10-fold protocol: per fold, fit LSI on the training vectors, project
// the test fold through the fitted model, train the multi-task MLP on the
// training features, and score AFE per task plus the N% recall of
// single-point energies on the test fold. The mean-predictor baseline and
// the lattice-energy ersatz ranking are reported alongside. Fully
// deterministic for a given seed.
inline MetricReport cross_validate(const std::vector<SparseVector>& vectors,
                                   const std::vector<std::string>& ids,
                                   const std::vector<EnergyRecord>& targets,
                                   const lsi::FitOptions& lsi_options,
                                   const mlp::Config& mlp_config,
                                   const CvSettings& cv) {
  if (vectors.size() != ids.size())
    throw DimensionMismatch("one id per sparse vector required");
  std::vector<const EnergyRecord*> rows(ids.size(), nullptr);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (const auto& t : targets)
      if (t.id == ids[i]) {
        rows[i] = &t;
        break;
      }
    if (rows[i] == nullptr)
      throw MissingTargets("no energy row for id '" + ids[i] + "'");
  }

  const FoldSplit split =
      kfold(vectors.size(), cv.folds, sub_seed(cv.seed, "fold"));

  MetricReport report;
  report.folds = cv.folds;
  std::array<std::vector<double>, mlp::kTasks> train_afe, test_afe, base_afe;
  std::vector<double> recalls, lattice_recalls;

  for (int fold = 0; fold < cv.folds; ++fold) {
    const auto train_idx = split.train_indices(fold);
    const auto test_idx = split.test_indices(fold);

    std::vector<SparseVector> train_vecs;
    train_vecs.reserve(train_idx.size());
    for (const auto i : train_idx) train_vecs.push_back(vectors[i]);
    const lsi::FitResult fit = lsi::fit_lsi(train_vecs, lsi_options);
    const auto k = static_cast<std::size_t>(fit.model.svd.k);
    report.k_used = fit.model.svd.k;

    Matrix x_train(train_idx.size(), k), y_train(train_idx.size(), mlp::kTasks);
    for (std::size_t i = 0; i < train_idx.size(); ++i) {
      for (std::size_t j = 0; j < k; ++j) x_train(i, j) = fit.train_features(j, i);
      const auto v = rows[train_idx[i]]->values();
      for (std::size_t t = 0; t < mlp::kTasks; ++t) y_train(i, t) = v[t];
    }
    Matrix x_test(test_idx.size(), k), y_test(test_idx.size(), mlp::kTasks);
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
      const auto projected = fit.model.project(vectors[test_idx[i]]);
      for (std::size_t j = 0; j < k; ++j) x_test(i, j) = projected[j];
      const auto v = rows[test_idx[i]]->values();
      for (std::size_t t = 0; t < mlp::kTasks; ++t) y_test(i, t) = v[t];
    }

    mlp::Config cfg = mlp_config;
    cfg.seed = sub_seed(cv.seed, "mlp", static_cast<std::uint64_t>(fold));
    cfg.batch_size = std::min<int>(cfg.batch_size, static_cast<int>(train_idx.size()));
    const auto [model, train_report] =
        mlp::train(mlp::init(cfg, static_cast<int>(k)), x_train, y_train, cfg);

    const Matrix pred_train = mlp::predict_all(model, x_train);
    const Matrix pred_test = mlp::predict_all(model, x_test);

    for (std::size_t t = 0; t < mlp::kTasks; ++t) {
      std::vector<double> pt(train_idx.size()), ct(train_idx.size());
      for (std::size_t i = 0; i < train_idx.size(); ++i) {
        pt[i] = pred_train(i, t);
        ct[i] = y_train(i, t);
      }
      std::vector<double> pe(test_idx.size()), ce(test_idx.size());
      for (std::size_t i = 0; i < test_idx.size(); ++i) {
        pe[i] = pred_test(i, t);
        ce[i] = y_test(i, t);
      }
      train_afe[t].push_back(afe(pt, ct));
      test_afe[t].push_back(afe(pe, ce));
      base_afe[t].push_back(mean_predictor(ct, ce));
    }

    // recall of the most stable test-fold structures by single-point energy
    std::vector<double> sp_pred(test_idx.size()), sp_true(test_idx.size()),
        lattice_true(test_idx.size());
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
      sp_pred[i] = pred_test(i, 0);
      sp_true[i] = y_test(i, 0);
      lattice_true[i] = y_test(i, 2);
    }
    recalls.push_back(recall_at(sp_pred, sp_true, cv.recall_pct));
    lattice_recalls.push_back(recall_at(lattice_true, sp_true, cv.recall_pct));

    for (std::size_t i = 0; i < test_idx.size(); ++i)
      for (int t = 0; t < mlp::kTasks; ++t)
        report.predictions.push_back({ids[test_idx[i]], t,
                                      y_test(i, static_cast<std::size_t>(t)),
                                      pred_test(i, static_cast<std::size_t>(t))});
  }

  for (std::size_t t = 0; t < mlp::kTasks; ++t) {
    report.train_afe[t] = fold_stats(train_afe[t]);
    report.test_afe[t] = fold_stats(test_afe[t]);
    report.baseline_afe[t] = fold_stats(base_afe[t]);
    report.per_fold_test_afe[t] = test_afe[t];
  }
  report.recall = fold_stats(recalls);
  report.recall_best = *std::max_element(recalls.begin(), recalls.end());
  report.lattice_recall = fold_stats(lattice_recalls);
  report.lattice_recall_best =
      *std::max_element(lattice_recalls.begin(), lattice_recalls.end());
  return report;
}

}  // namespace sfcm::eval
