#include <cmath>
#include <numeric>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fsmlp/kernels.hpp"

namespace fsmlp::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {
namespace {

// Below this many inner-loop operations the fork/join overhead dominates.
constexpr std::size_t kMinParallelWork = 1 << 14;

std::vector<std::size_t> all_rows_if_empty(std::span<const std::size_t> rows, std::size_t n) {
  if (!rows.empty()) return {rows.begin(), rows.end()};
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

void ensure_shape(Matrix& m, std::size_t rows, std::size_t cols) {
  if (m.rows() != rows || m.cols() != cols) m = Matrix(rows, cols);
}

struct RowPartial {
  double weighted = 0.0;
  double normalizer = 0.0;
  std::size_t skipped = 0;
};

}  // namespace

StressSums sammon_sums(const Matrix& x, const Matrix& y, std::span<const std::size_t> rows) {
  const auto idx = all_rows_if_empty(rows, x.rows());
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(idx.size());
  const std::size_t px = x.cols();
  const std::size_t py = y.cols();
  std::vector<RowPartial> partial(idx.size());
  const bool go_parallel = idx.size() * idx.size() * (px + py) / 2 >= kMinParallelWork;

#pragma omp parallel for schedule(dynamic, 8) if (go_parallel)
  for (std::ptrdiff_t a = 0; a < m; ++a) {
    const double* xa = x.row(idx[a]).data();
    const double* ya = y.row(idx[a]).data();
    RowPartial acc;
    for (std::ptrdiff_t b = a + 1; b < m; ++b) {
      const double* xb = x.row(idx[b]).data();
      double dx2 = 0.0;
      for (std::size_t j = 0; j < px; ++j) {
        const double d = xa[j] - xb[j];
        dx2 += d * d;
      }
      if (dx2 == 0.0) {
        ++acc.skipped;
        continue;
      }
      const double* yb = y.row(idx[b]).data();
      double dy2 = 0.0;
      for (std::size_t j = 0; j < py; ++j) {
        const double d = ya[j] - yb[j];
        dy2 += d * d;
      }
      const double dx = std::sqrt(dx2);
      const double diff = dx - std::sqrt(dy2);
      acc.weighted += diff * diff / dx;
      acc.normalizer += dx;
    }
    partial[a] = acc;
  }

  StressSums sums;
  for (const auto& r : partial) {
    sums.weighted += r.weighted;
    sums.normalizer += r.normalizer;
    sums.skipped += r.skipped;
  }
  return sums;
}

StressSums gated_sammon_sums(const Matrix& x, std::span<const double> gates,
                             std::span<const std::size_t> rows, std::span<double> d_weighted) {
  const auto idx = all_rows_if_empty(rows, x.rows());
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(idx.size());
  const std::size_t p = x.cols();
  std::vector<RowPartial> partial(idx.size());
  Matrix grad_partial(idx.size(), p);
  std::vector<double> g2(p);
  for (std::size_t j = 0; j < p; ++j) g2[j] = gates[j] * gates[j];
  const bool go_parallel = idx.size() * idx.size() * p / 2 >= kMinParallelWork;

#pragma omp parallel if (go_parallel)
  {
    std::vector<double> diff2(p);
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t a = 0; a < m; ++a) {
      const double* xa = x.row(idx[a]).data();
      double* ga = grad_partial.row(static_cast<std::size_t>(a)).data();
      RowPartial acc;
      for (std::ptrdiff_t b = a + 1; b < m; ++b) {
        const double* xb = x.row(idx[b]).data();
        double dx2 = 0.0;
        double dy2 = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
          const double d = xa[j] - xb[j];
          diff2[j] = d * d;
          dx2 += diff2[j];
          dy2 += g2[j] * diff2[j];
        }
        if (dx2 == 0.0) {
          ++acc.skipped;
          continue;
        }
        const double dx = std::sqrt(dx2);
        const double dy = std::sqrt(dy2);
        acc.weighted += (dx - dy) * (dx - dy) / dx;
        acc.normalizer += dx;
        if (dy > 0.0) {
          const double coef = -2.0 * (dx - dy) / (dx * dy);
          for (std::size_t j = 0; j < p; ++j) ga[j] += coef * diff2[j];
        }
      }
      partial[a] = acc;
    }
  }

  StressSums sums;
  std::fill(d_weighted.begin(), d_weighted.end(), 0.0);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    sums.weighted += partial[a].weighted;
    sums.normalizer += partial[a].normalizer;
    sums.skipped += partial[a].skipped;
    const auto ga = grad_partial.row(a);
    for (std::size_t j = 0; j < p; ++j) d_weighted[j] += ga[j];
  }
  for (std::size_t j = 0; j < p; ++j) d_weighted[j] *= gates[j];
  return sums;
}

void affine(const Matrix& in, const Matrix& w, std::span<const double> b, Matrix& out) {
  ensure_shape(out, in.rows(), w.rows());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.rows());
  const std::size_t k_dim = in.cols();
  const std::size_t o_dim = w.rows();
  const bool go_parallel = in.rows() * k_dim * o_dim >= kMinParallelWork;

#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double* xi = in.row(i).data();
    double* oi = out.row(i).data();
    for (std::size_t o = 0; o < o_dim; ++o) {
      const double* wo = w.row(o).data();
      double s = b[o];
      for (std::size_t k = 0; k < k_dim; ++k) s += xi[k] * wo[k];
      oi[o] = s;
    }
  }
}

void weight_grad(const Matrix& delta, const Matrix& in, Matrix& dw, std::span<double> db) {
  ensure_shape(dw, delta.cols(), in.cols());
  const std::ptrdiff_t o_dim = static_cast<std::ptrdiff_t>(delta.cols());
  const std::size_t n = delta.rows();
  const std::size_t k_dim = in.cols();
  const bool go_parallel = n * k_dim * delta.cols() >= kMinParallelWork;

#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t o = 0; o < o_dim; ++o) {
    double* dwo = dw.row(o).data();
    std::fill(dwo, dwo + k_dim, 0.0);
    double bias = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = delta(i, o);
      bias += d;
      const double* xi = in.row(i).data();
      for (std::size_t k = 0; k < k_dim; ++k) dwo[k] += d * xi[k];
    }
    db[o] = bias;
  }
}

void input_grad(const Matrix& delta, const Matrix& w, Matrix& din) {
  ensure_shape(din, delta.rows(), w.cols());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(delta.rows());
  const std::size_t o_dim = w.rows();
  const std::size_t k_dim = w.cols();
  const bool go_parallel = delta.rows() * k_dim * o_dim >= kMinParallelWork;

#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double* di = din.row(i).data();
    std::fill(di, di + k_dim, 0.0);
    for (std::size_t o = 0; o < o_dim; ++o) {
      const double d = delta(i, o);
      const double* wo = w.row(o).data();
      for (std::size_t k = 0; k < k_dim; ++k) di[k] += d * wo[k];
    }
  }
}

void squared_distances(const Matrix& x, const Matrix& centers, Matrix& out) {
  ensure_shape(out, x.rows(), centers.rows());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.rows());
  const std::size_t c = centers.rows();
  const std::size_t d_dim = x.cols();
  const bool go_parallel = x.rows() * c * d_dim >= kMinParallelWork;

#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double* xi = x.row(i).data();
    for (std::size_t k = 0; k < c; ++k) {
      const double* ck = centers.row(k).data();
      double s = 0.0;
      for (std::size_t j = 0; j < d_dim; ++j) {
        const double d = xi[j] - ck[j];
        s += d * d;
      }
      out(i, k) = s;
    }
  }
}

}  // namespace parallel
}  // namespace fsmlp::kernels
