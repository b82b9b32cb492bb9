#include "linalg.hpp"

#include <cmath>

#include "subwit/qcore.hpp"

namespace subwit::detail {

RealMatrix gram(const RealMatrix& a) {
  RealMatrix g(a.cols, a.cols);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double ai = a(r, i);
      if (ai == 0.0) continue;
      for (std::size_t j = 0; j < a.cols; ++j) g(i, j) += ai * a(r, j);
    }
  }
  return g;
}

std::vector<double> transpose_times(const RealMatrix& a, const std::vector<double>& b) {
  std::vector<double> out(a.cols, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t c = 0; c < a.cols; ++c) out[c] += a(r, c) * b[r];
  }
  return out;
}

std::vector<double> times(const RealMatrix& a, const std::vector<double>& x) {
  std::vector<double> out(a.rows, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t c = 0; c < a.cols; ++c) out[r] += a(r, c) * x[c];
  }
  return out;
}

std::optional<RealMatrix> cholesky(const RealMatrix& s) {
  const std::size_t n = s.rows;
  RealMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = s(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) return std::nullopt;
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return l;
}

std::vector<double> cholesky_solve(const RealMatrix& l, const std::vector<double>& b) {
  const std::size_t n = l.rows;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * y[k];
    y[i] = v / l(i, i);
  }
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double v = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * x[k];
    x[ii] = v / l(ii, ii);
  }
  return x;
}

RealMatrix cholesky_inverse(const RealMatrix& l) {
  const std::size_t n = l.rows;
  RealMatrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    e.assign(n, 0.0);
    e[c] = 1.0;
    const std::vector<double> col = cholesky_solve(l, e);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

std::vector<double> symmetric_eigenvalues(const RealMatrix& s) {
  ComplexMatrix m(s.rows);
  for (std::size_t r = 0; r < s.rows; ++r) {
    for (std::size_t c = 0; c < s.cols; ++c) m(r, c) = 0.5 * (s(r, c) + s(c, r));
  }
  return hermitian_eigen(m);
}

}  // namespace subwit::detail
