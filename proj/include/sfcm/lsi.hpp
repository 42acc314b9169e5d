// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sfcm/errors.hpp"
#include "sfcm/matrix.hpp"
#include "sfcm/morton.hpp"
#include "sfcm/rng.hpp"

namespace sfcm::lsi {

// Term-document counts matrix in compressed sparse column form. Rows are
// the occupied Morton indices across the dataset (the term dictionary, in
// ascending index order); columns are structures. All kernels touch only
// the stored entries, never a dense 2^(4*bits) axis.
struct CountsMatrix {
  std::size_t m = 0, n = 0;
  std::vector<std::uint32_t> term_index;  // row -> Morton index, ascending
  std::vector<std::size_t> col_ptr;       // size n + 1
  std::vector<std::uint32_t> row_idx;     // size nnz
  std::vector<double> values;             // size nnz

  std::size_t nnz() const { return values.size(); }

  // row of a Morton index in the dictionary, or -1 if unseen
  std::int64_t row_of(std::uint32_t morton_index) const {
    const auto it =
        std::lower_bound(term_index.begin(), term_index.end(), morton_index);
    if (it == term_index.end() || *it != morton_index) return -1;
    return it - term_index.begin();
  }

  // y = A x, y of size m, x of size n
  void multiply(const double* x, double* y) const {
    std::fill(y, y + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double xj = x[j];
      if (xj == 0.0) continue;
      for (std::size_t p = col_ptr[j]; p < col_ptr[j + 1]; ++p)
        y[row_idx[p]] += values[p] * xj;
    }
  }

  // y = A^T x, y of size n, x of size m
  void multiply_transpose(const double* x, double* y) const {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = col_ptr[j]; p < col_ptr[j + 1]; ++p)
        acc += values[p] * x[row_idx[p]];
      y[j] = acc;
    }
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }
};

// Assembles the counts matrix from one sparse vector per structure. Rows
// are exactly the union of occupied indices, ascending.
inline CountsMatrix build_counts(const std::vector<SparseVector>& vectors) {
  if (vectors.empty()) throw EmptyDataset("no sparse vectors");
  const std::uint64_t length = vectors.front().length;
  for (const auto& v : vectors)
    if (v.length != length)
      throw LengthMismatch("sparse vectors of length " + std::to_string(v.length) +
                           " and " + std::to_string(length) + " in one dataset");

  CountsMatrix a;
  a.n = vectors.size();
  std::vector<std::uint32_t> indices;
  for (const auto& v : vectors)
    for (const auto& [idx, cnt] : v.entries) indices.push_back(idx);
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  a.term_index = std::move(indices);
  a.m = a.term_index.size();

  a.col_ptr.assign(a.n + 1, 0);
  for (std::size_t j = 0; j < vectors.size(); ++j)
    a.col_ptr[j + 1] = a.col_ptr[j] + vectors[j].entries.size();
  a.row_idx.reserve(a.col_ptr.back());
  a.values.reserve(a.col_ptr.back());
  for (const auto& v : vectors)
    for (const auto& [idx, cnt] : v.entries) {
      a.row_idx.push_back(static_cast<std::uint32_t>(a.row_of(idx)));
      a.values.push_back(static_cast<double>(cnt));
    }
  return a;
}

// Per-row inverse document frequency ln(D / D_i) where D_i counts the
// columns in which row i is non-zero.
inline std::vector<double> idf_weights(const CountsMatrix& a) {
  std::vector<std::uint32_t> doc_freq(a.m, 0);
  for (std::size_t p = 0; p < a.nnz(); ++p) ++doc_freq[a.row_idx[p]];
  std::vector<double> idf(a.m);
  for (std::size_t i = 0; i < a.m; ++i)
    idf[i] = std::log(static_cast<double>(a.n) / doc_freq[i]);
  return idf;
}

// TF-IDF reweighting: A'_{i,j} = (A_{i,j} / sum_i A_{i,j}) * ln(D / D_i).
// Touches stored entries only (O(nnz)); entries whose weight is exactly
// zero (terms present in every document) are dropped.
inline CountsMatrix tfidf(const CountsMatrix& a) {
  const auto idf = idf_weights(a);
  std::vector<double> col_sum(a.n, 0.0);
  for (std::size_t j = 0; j < a.n; ++j)
    for (std::size_t p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p)
      col_sum[j] += a.values[p];

  CountsMatrix out;
  out.m = a.m;
  out.n = a.n;
  out.term_index = a.term_index;
  out.col_ptr.assign(a.n + 1, 0);
  out.row_idx.reserve(a.nnz());
  out.values.reserve(a.nnz());
  for (std::size_t j = 0; j < a.n; ++j) {
    for (std::size_t p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
      const double w = a.values[p] / col_sum[j] * idf[a.row_idx[p]];
      if (w != 0.0) {
        out.row_idx.push_back(a.row_idx[p]);
        out.values.push_back(w);
      }
    }
    out.col_ptr[j + 1] = out.values.size();
  }
  return out;
}

// Top-k singular triplets. U has orthonormal columns, singular values are
// non-increasing, Vt has orthonormal rows.
struct SVDResult {
  Matrix U;               // m x k
  std::vector<double> S;  // k, non-increasing
  Matrix Vt;              // k x n
  int k = 0;
};

namespace detail {

inline void orthogonalize(std::vector<double>& w,
                          const std::vector<std::vector<double>>& basis) {
  // classical Gram-Schmidt applied twice
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      double proj = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) proj += q[i] * w[i];
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= proj * q[i];
    }
  }
}

inline double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline std::vector<double> fresh_unit_vector(
    std::size_t dim, const std::vector<std::vector<double>>& basis, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.normal();
    orthogonalize(v, basis);
    const double nrm = vec_norm(v);
    if (nrm > 1e-8) {
      for (auto& x : v) x /= nrm;
      return v;
    }
  }
  throw ConvergenceFailure("could not draw a vector outside the Krylov basis");
}

}  // namespace detail

struct SvdOptions {
  double tol = 1e-10;  // relative residual for Ritz convergence
  int max_basis = 0;   // 0 means min(m, n); smaller caps can fail to converge
  std::uint64_t seed = 0x5fc3a17ed5eeULL;
};

// Truncated SVD by Golub-Kahan-Lanczos bidiagonalization with full
// reorthogonalization. The matrix is touched only through sparse
// matrix-vector products, so cost scales with the number of non-zeros
// rather than the nominal vector length. The projected bidiagonal problem
// is solved densely (Eigen Jacobi SVD); Ritz triplets are accepted when
// their residual bound drops below tol * sigma_1.
inline SVDResult truncated_svd(const CountsMatrix& a, int k,
                               const SvdOptions& options = {}) {
  const std::size_t minmn = std::min(a.m, a.n);
  if (k < 1 || static_cast<std::size_t>(k) > minmn)
    throw KTooLarge("k = " + std::to_string(k) + " for a " + std::to_string(a.m) +
                    "x" + std::to_string(a.n) + " matrix");

  // Work on the taller orientation so a full basis is exact: rows >= cols
  // guarantees the right Krylov space spans the domain at s = min(m, n).
  const bool transposed = a.m < a.n;
  const std::size_t rows = transposed ? a.n : a.m;
  const std::size_t cols = transposed ? a.m : a.n;
  const auto apply = [&](const double* x, double* y) {
    if (transposed) a.multiply_transpose(x, y);
    else a.multiply(x, y);
  };
  const auto apply_t = [&](const double* x, double* y) {
    if (transposed) a.multiply(x, y);
    else a.multiply_transpose(x, y);
  };

  const std::size_t cap = options.max_basis > 0
                              ? std::min<std::size_t>(options.max_basis, cols)
                              : cols;
  const double breakdown = 1e-13 * std::max(a.frobenius_norm(), 1.0);

  Rng rng(options.seed);
  std::vector<std::vector<double>> left;   // u vectors, dim rows
  std::vector<std::vector<double>> right;  // v vectors, dim cols
  std::vector<double> alpha, beta;

  right.push_back(detail::fresh_unit_vector(cols, {}, rng));
  {
    std::vector<double> u(rows);
    apply(right[0].data(), u.data());
    const double nrm = detail::vec_norm(u);
    if (nrm > breakdown) {
      for (auto& x : u) x /= nrm;
      alpha.push_back(nrm);
      left.push_back(std::move(u));
    } else {
      alpha.push_back(0.0);
      left.push_back(detail::fresh_unit_vector(rows, left, rng));
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> bsvd;
  const auto evaluate = [&](std::size_t s, double coupling) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(s, s);
    for (std::size_t i = 0; i < s; ++i) {
      b(i, i) = alpha[i];
      if (i + 1 < s) b(i, i + 1) = beta[i];
    }
    bsvd.compute(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double sigma1 = bsvd.singularValues()(0);
    double worst = 0.0;
    for (int i = 0; i < k; ++i)
      worst = std::max(worst,
                       std::abs(coupling * bsvd.matrixU()(s - 1, i)));
    return sigma1 > 0.0 ? worst / sigma1 : 0.0;
  };

  std::size_t basis = 1;
  double achieved = std::numeric_limits<double>::infinity();
  bool converged = false;
  while (true) {
    // beta_s and v_{s+1}
    std::vector<double> w(cols);
    apply_t(left[basis - 1].data(), w.data());
    for (std::size_t i = 0; i < cols; ++i) w[i] -= alpha[basis - 1] * right[basis - 1][i];
    detail::orthogonalize(w, right);
    const double b_nrm = detail::vec_norm(w);

    if (basis >= static_cast<std::size_t>(k)) {
      const bool cheap = basis == cap || basis % 8 == 0 || b_nrm <= breakdown;
      if (cheap) {
        achieved = evaluate(basis, b_nrm <= breakdown ? 0.0 : b_nrm);
        if (achieved <= options.tol) converged = true;
      }
    }
    if (converged || basis == cap) break;

    beta.push_back(b_nrm <= breakdown ? 0.0 : b_nrm);
    if (b_nrm > breakdown) {
      for (auto& x : w) x /= b_nrm;
      right.push_back(std::move(w));
    } else {
      right.push_back(detail::fresh_unit_vector(cols, right, rng));
    }

    // alpha_{s+1} and u_{s+1}
    std::vector<double> z(rows);
    apply(right[basis].data(), z.data());
    for (std::size_t i = 0; i < rows; ++i) z[i] -= beta[basis - 1] * left[basis - 1][i];
    detail::orthogonalize(z, left);
    const double a_nrm = detail::vec_norm(z);
    if (a_nrm > breakdown) {
      for (auto& x : z) x /= a_nrm;
      alpha.push_back(a_nrm);
      left.push_back(std::move(z));
    } else {
      alpha.push_back(0.0);
      left.push_back(detail::fresh_unit_vector(rows, left, rng));
    }
    ++basis;
  }

  if (!converged && basis < minmn)
    throw ConvergenceFailure("basis cap " + std::to_string(cap) +
                             " reached with relative residual " +
                             std::to_string(achieved));

  // assemble the top-k triplets in the original orientation
  const std::size_t s = basis;
  Matrix u_out(a.m, static_cast<std::size_t>(k));
  Matrix vt_out(static_cast<std::size_t>(k), a.n);
  std::vector<double> sigma(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    sigma[static_cast<std::size_t>(j)] = bsvd.singularValues()(j);
    for (std::size_t row = 0; row < rows; ++row) {
      double acc = 0.0;
      for (std::size_t i = 0; i < s; ++i) acc += left[i][row] * bsvd.matrixU()(i, j);
      if (transposed) vt_out(static_cast<std::size_t>(j), row) = acc;
      else u_out(row, static_cast<std::size_t>(j)) = acc;
    }
    for (std::size_t col = 0; col < cols; ++col) {
      double acc = 0.0;
      for (std::size_t i = 0; i < s; ++i) acc += right[i][col] * bsvd.matrixV()(i, j);
      if (transposed) u_out(col, static_cast<std::size_t>(j)) = acc;
      else vt_out(static_cast<std::size_t>(j), col) = acc;
    }
  }

  // deterministic sign: largest-|entry| of each U column is positive
  for (int j = 0; j < k; ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < a.m; ++i)
      if (std::abs(u_out(i, static_cast<std::size_t>(j))) > best) {
        best = std::abs(u_out(i, static_cast<std::size_t>(j)));
        arg = i;
      }
    if (u_out(arg, static_cast<std::size_t>(j)) < 0.0) {
      for (std::size_t i = 0; i < a.m; ++i)
        u_out(i, static_cast<std::size_t>(j)) = -u_out(i, static_cast<std::size_t>(j));
      for (std::size_t i = 0; i < a.n; ++i)
        vt_out(static_cast<std::size_t>(j), i) = -vt_out(static_cast<std::size_t>(j), i);
    }
  }

  SVDResult out;
  out.U = std::move(u_out);
  out.S = std::move(sigma);
  out.Vt = std::move(vt_out);
  out.k = k;
  return out;
}

// Number of dimensions to keep: normalize the (non-increasing) singular
// values by sigma_1, take forward differences, and keep everything up to
// the last index where the curve still drops at least as fast as the
// threshold. A spectrum that never drops steeply keeps one dimension.
inline int select_k(const std::vector<double>& singular_values,
                    double threshold = -0.001) {
  if (singular_values.size() < 2)
    throw TooFewValues("select_k needs at least 2 singular values");
  const double s1 = singular_values.front();
  if (!(s1 > 0.0)) return 1;
  int k = 1;
  for (std::size_t i = 0; i + 1 < singular_values.size(); ++i) {
    const double gradient =
        (singular_values[i + 1] - singular_values[i]) / s1;
    if (gradient <= threshold) k = static_cast<int>(i) + 2;
  }
  return k;
}

// Reduced representations S * Vt: row i is sigma_i times row i of Vt.
inline Matrix reduce(const SVDResult& svd) {
  Matrix out(svd.Vt.rows(), svd.Vt.cols());
  for (std::size_t i = 0; i < svd.Vt.rows(); ++i)
    for (std::size_t j = 0; j < svd.Vt.cols(); ++j)
      out(i, j) = svd.S[i] * svd.Vt(i, j);
  return out;
}

// Projects a TF-IDF-weighted sparse column (pairs of term row, value)
// into the reduced space: U^T v.
inline std::vector<double> project_new(
    const SVDResult& svd,
    const std::vector<std::pair<std::size_t, double>>& column) {
  std::vector<double> out(static_cast<std::size_t>(svd.k), 0.0);
  for (const auto& [row, value] : column)
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] += svd.U(row, j) * value;
  return out;
}

// A fitted LSI stage: term dictionary, IDF weights and the truncated
// basis, everything needed to featurize held-out structures consistently
// with the training fold.
struct LsiModel {
  std::vector<std::uint32_t> term_index;
  std::vector<double> idf;
  SVDResult svd;

  // TF-IDF-weight a raw count vector against the training dictionary.
  // Unseen terms are dropped; the TF denominator is the full atom count
  // of the vector.
  std::vector<std::pair<std::size_t, double>> weight(const SparseVector& v) const {
    std::vector<std::pair<std::size_t, double>> column;
    const double total = static_cast<double>(v.total_count());
    if (total == 0.0) return column;
    for (const auto& [idx, cnt] : v.entries) {
      const auto it = std::lower_bound(term_index.begin(), term_index.end(), idx);
      if (it == term_index.end() || *it != idx) continue;
      const auto row = static_cast<std::size_t>(it - term_index.begin());
      const double w = cnt / total * idf[row];
      if (w != 0.0) column.emplace_back(row, w);
    }
    return column;
  }

  std::vector<double> project(const SparseVector& v) const {
    return project_new(svd, weight(v));
  }
};

struct FitOptions {
  int k = 0;                  // 0 selects k from the singular-value curve
  double threshold = -0.001;  // select_k gradient threshold
  int k_max_auto = 50;        // leading values computed for auto selection
};

struct FitResult {
  LsiModel model;
  Matrix train_features;  // k x n, equals S * Vt of the training matrix
  std::vector<double> leading_singular_values;
};

// Fits TF-IDF + truncated SVD on a training set of sparse vectors.
inline FitResult fit_lsi(const std::vector<SparseVector>& vectors,
                         const FitOptions& options = {}) {
  const CountsMatrix counts = build_counts(vectors);
  const CountsMatrix weighted = tfidf(counts);
  const auto minmn = static_cast<int>(std::min(weighted.m, weighted.n));

  FitResult out;
  int k = options.k;
  if (k == 0 && minmn < 2) k = 1;
  if (k == 0) {
    const int lead = std::max(2, std::min(options.k_max_auto, minmn));
    const SVDResult probe = truncated_svd(weighted, lead);
    out.leading_singular_values = probe.S;
    k = select_k(probe.S, options.threshold);
    out.model.svd = probe;
    out.model.svd.k = k;
    Matrix u(weighted.m, static_cast<std::size_t>(k));
    Matrix vt(static_cast<std::size_t>(k), weighted.n);
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
      for (std::size_t i = 0; i < weighted.m; ++i) u(i, j) = probe.U(i, j);
      for (std::size_t i = 0; i < weighted.n; ++i) vt(j, i) = probe.Vt(j, i);
    }
    out.model.svd.U = std::move(u);
    out.model.svd.Vt = std::move(vt);
    out.model.svd.S.assign(probe.S.begin(), probe.S.begin() + k);
  } else {
    if (k > minmn) k = minmn;  // small folds cannot support the configured k
    out.model.svd = truncated_svd(weighted, k);
    out.leading_singular_values = out.model.svd.S;
  }
  out.model.term_index = weighted.term_index;
  out.model.idf = idf_weights(counts);
  out.train_features = reduce(out.model.svd);
  return out;
}

}  // namespace sfcm::lsi
