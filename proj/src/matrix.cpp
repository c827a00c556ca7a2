#include "chaincert/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "chaincert/errors.hpp"

namespace chaincert {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw ChainError(Errc::non_square, "empty matrix");
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw ChainError(Errc::non_square, "row " + std::to_string(i) + " has " +
                                             std::to_string(rows[i].size()) + " entries, expected " +
                                             std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<double> mat_vec(const Matrix& m, std::span<const double> x) {
  const std::size_t n = m.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<double> mat_transpose_vec(const Matrix& m, std::span<const double> x) {
  const std::size_t n = m.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += m(i, j) * x[i];
    y[j] = acc;
  }
  return y;
}

double frobenius_norm(const Matrix& m) {
  double acc = 0.0;
  for (double v : m.data()) acc += v * v;
  return std::sqrt(acc);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace chaincert
