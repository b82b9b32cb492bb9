// Internal real dense helpers shared by the optimizer, the least-squares
// solver and the curve fitter.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace subwit::detail {

// Row-major dense real matrix.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

RealMatrix gram(const RealMatrix& a);                                 // A^T A
std::vector<double> transpose_times(const RealMatrix& a, const std::vector<double>& b);  // A^T b
std::vector<double> times(const RealMatrix& a, const std::vector<double>& x);

// Cholesky factor L (lower) of a symmetric matrix, or nullopt when the
// matrix is not numerically positive definite.
std::optional<RealMatrix> cholesky(const RealMatrix& s);
std::vector<double> cholesky_solve(const RealMatrix& l, const std::vector<double>& b);
RealMatrix cholesky_inverse(const RealMatrix& l);

// Ascending eigenvalues of a real symmetric matrix.
std::vector<double> symmetric_eigenvalues(const RealMatrix& s);

}  // namespace subwit::detail
