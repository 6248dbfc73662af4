#include <cmath>
#include <numeric>
#include <vector>

#include "fsmlp/kernels.hpp"

namespace fsmlp::kernels::serial {
namespace {

std::vector<std::size_t> all_rows_if_empty(std::span<const std::size_t> rows, std::size_t n) {
  if (!rows.empty()) return {rows.begin(), rows.end()};
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return std::sqrt(s);
}

void ensure_shape(Matrix& m, std::size_t rows, std::size_t cols) {
  if (m.rows() != rows || m.cols() != cols) m = Matrix(rows, cols);
}

}  // namespace

StressSums sammon_sums(const Matrix& x, const Matrix& y, std::span<const std::size_t> rows) {
  const auto idx = all_rows_if_empty(rows, x.rows());
  StressSums sums;
  // per-row partial sums, added in row order
  for (std::size_t a = 0; a < idx.size(); ++a) {
    double weighted = 0.0;
    double normalizer = 0.0;
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const double dx = distance(x.row(idx[a]), x.row(idx[b]));
      if (dx == 0.0) {
        ++sums.skipped;
        continue;
      }
      const double dy = distance(y.row(idx[a]), y.row(idx[b]));
      weighted += (dx - dy) * (dx - dy) / dx;
      normalizer += dx;
    }
    sums.weighted += weighted;
    sums.normalizer += normalizer;
  }
  return sums;
}

StressSums gated_sammon_sums(const Matrix& x, std::span<const double> gates,
                             std::span<const std::size_t> rows, std::span<double> d_weighted) {
  const auto idx = all_rows_if_empty(rows, x.rows());
  const std::size_t p = x.cols();
  std::fill(d_weighted.begin(), d_weighted.end(), 0.0);
  std::vector<double> diff2(p);
  std::vector<double> row_grad(p);
  StressSums sums;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const auto xa = x.row(idx[a]);
    double weighted = 0.0;
    double normalizer = 0.0;
    std::fill(row_grad.begin(), row_grad.end(), 0.0);
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const auto xb = x.row(idx[b]);
      double dx2 = 0.0;
      double dy2 = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double d = xa[j] - xb[j];
        diff2[j] = d * d;
        dx2 += diff2[j];
        dy2 += gates[j] * gates[j] * diff2[j];
      }
      if (dx2 == 0.0) {
        ++sums.skipped;
        continue;
      }
      const double dx = std::sqrt(dx2);
      const double dy = std::sqrt(dy2);
      weighted += (dx - dy) * (dx - dy) / dx;
      normalizer += dx;
      if (dy > 0.0) {
        const double coef = -2.0 * (dx - dy) / (dx * dy);
        for (std::size_t j = 0; j < p; ++j) row_grad[j] += coef * diff2[j];
      }
    }
    sums.weighted += weighted;
    sums.normalizer += normalizer;
    for (std::size_t j = 0; j < p; ++j) d_weighted[j] += row_grad[j];
  }
  for (std::size_t j = 0; j < p; ++j) d_weighted[j] *= gates[j];
  return sums;
}

void affine(const Matrix& in, const Matrix& w, std::span<const double> b, Matrix& out) {
  ensure_shape(out, in.rows(), w.rows());
  for (std::size_t i = 0; i < in.rows(); ++i) {
    const auto xi = in.row(i);
    for (std::size_t o = 0; o < w.rows(); ++o) {
      const auto wo = w.row(o);
      double s = b[o];
      for (std::size_t k = 0; k < xi.size(); ++k) s += xi[k] * wo[k];
      out(i, o) = s;
    }
  }
}

void weight_grad(const Matrix& delta, const Matrix& in, Matrix& dw, std::span<double> db) {
  ensure_shape(dw, delta.cols(), in.cols());
  dw.fill(0.0);
  std::fill(db.begin(), db.end(), 0.0);
  for (std::size_t o = 0; o < delta.cols(); ++o) {
    auto dwo = dw.row(o);
    for (std::size_t i = 0; i < delta.rows(); ++i) {
      const double d = delta(i, o);
      db[o] += d;
      const auto xi = in.row(i);
      for (std::size_t k = 0; k < xi.size(); ++k) dwo[k] += d * xi[k];
    }
  }
}

void input_grad(const Matrix& delta, const Matrix& w, Matrix& din) {
  ensure_shape(din, delta.rows(), w.cols());
  din.fill(0.0);
  for (std::size_t i = 0; i < delta.rows(); ++i) {
    auto di = din.row(i);
    for (std::size_t o = 0; o < w.rows(); ++o) {
      const double d = delta(i, o);
      const auto wo = w.row(o);
      for (std::size_t k = 0; k < wo.size(); ++k) di[k] += d * wo[k];
    }
  }
}

void squared_distances(const Matrix& x, const Matrix& centers, Matrix& out) {
  ensure_shape(out, x.rows(), centers.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xi = x.row(i);
    for (std::size_t k = 0; k < centers.rows(); ++k) {
      const auto ck = centers.row(k);
      double s = 0.0;
      for (std::size_t j = 0; j < xi.size(); ++j) {
        const double d = xi[j] - ck[j];
        s += d * d;
      }
      out(i, k) = s;
    }
  }
}

}  // namespace fsmlp::kernels::serial
