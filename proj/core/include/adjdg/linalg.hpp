#ifndef ADJDG_LINALG_HPP
#define ADJDG_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adjdg {

using Vec = std::vector<double>;

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Small dense row-major matrix; element blocks here never exceed a few dozen
// rows, so no effort is spent on blocking or vectorization.
struct Mat {
  int rows = 0, cols = 0;
  Vec a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline Vec matvec(const Mat& m, std::span<const double> x) {
  require(static_cast<int>(x.size()) == m.cols, "matvec: size mismatch");
  Vec y(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// y = A^T x
inline Vec mat_tvec(const Mat& m, std::span<const double> x) {
  require(static_cast<int>(x.size()) == m.rows, "mat_tvec: size mismatch");
  Vec y(m.cols, 0.0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) y[j] += m(i, j) * x[i];
  return y;
}

// In-place LL^T factorization for the small SPD mass blocks.
struct Cholesky {
  Mat l;

  Cholesky() = default;
  explicit Cholesky(Mat spd) : l(std::move(spd)) {
    require(l.rows == l.cols, "cholesky: square matrix required");
    const int n = l.rows;
    for (int j = 0; j < n; ++j) {
      double d = l(j, j);
      for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
      require(d > 0.0, "cholesky: matrix not positive definite");
      l(j, j) = std::sqrt(d);
      for (int i = j + 1; i < n; ++i) {
        double s = l(i, j);
        for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
        l(i, j) = s / l(j, j);
      }
    }
  }

  void solve_inplace(std::span<double> x) const {
    const int n = l.rows;
    require(static_cast<int>(x.size()) == n, "cholesky solve: size mismatch");
    for (int i = 0; i < n; ++i) {
      double s = x[i];
      for (int k = 0; k < i; ++k) s -= l(i, k) * x[k];
      x[i] = s / l(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = x[i];
      for (int k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
      x[i] = s / l(i, i);
    }
  }
};

}  // namespace adjdg

#endif
