#pragma once

// Hot loops of the library. Every kernel exists twice with identical signatures:
//   kernels::serial   - straightforward single-threaded reference, kept for testing;
//   kernels::parallel - OpenMP version used by the rest of the library.
// Parallel kernels reduce into per-row partials and sum them in row order, so their
// result does not depend on the thread count.

#include <cstddef>
#include <span>

#include "fsmlp/matrix.hpp"

namespace fsmlp::kernels {

/// Raw Sammon sums over unordered pairs {i, l}, i != l.
struct StressSums {
  double weighted = 0.0;    ///< sum of (dX - dY)^2 / dX
  double normalizer = 0.0;  ///< sum of dX
  std::size_t skipped = 0;  ///< pairs with dX == 0, excluded from both sums
};

// `rows` selects the points taking part; an empty span means every row of `x`.

namespace serial {

StressSums sammon_sums(const Matrix& x, const Matrix& y, std::span<const std::size_t> rows);

/// y = x * diag(gates) is implied; d_weighted receives d(weighted)/d(gates_j).
StressSums gated_sammon_sums(const Matrix& x, std::span<const double> gates,
                             std::span<const std::size_t> rows, std::span<double> d_weighted);

/// out = in * w^T + b, with w stored out_dim x in_dim.
void affine(const Matrix& in, const Matrix& w, std::span<const double> b, Matrix& out);

/// dw = delta^T * in; db = column sums of delta.
void weight_grad(const Matrix& delta, const Matrix& in, Matrix& dw, std::span<double> db);

/// din = delta * w.
void input_grad(const Matrix& delta, const Matrix& w, Matrix& din);

/// out(i, k) = |x_i - c_k|^2.
void squared_distances(const Matrix& x, const Matrix& centers, Matrix& out);

}  // namespace serial

namespace parallel {

StressSums sammon_sums(const Matrix& x, const Matrix& y, std::span<const std::size_t> rows);

/// y = x * diag(gates) is implied; d_weighted receives d(weighted)/d(gates_j).
StressSums gated_sammon_sums(const Matrix& x, std::span<const double> gates,
                             std::span<const std::size_t> rows, std::span<double> d_weighted);

/// out = in * w^T + b, with w stored out_dim x in_dim.
void affine(const Matrix& in, const Matrix& w, std::span<const double> b, Matrix& out);

/// dw = delta^T * in; db = column sums of delta.
void weight_grad(const Matrix& delta, const Matrix& in, Matrix& dw, std::span<double> db);

/// din = delta * w.
void input_grad(const Matrix& delta, const Matrix& w, Matrix& din);

/// out(i, k) = |x_i - c_k|^2.
void squared_distances(const Matrix& x, const Matrix& centers, Matrix& out);

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace fsmlp::kernels
