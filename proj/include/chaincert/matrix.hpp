#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chaincert {

// Dense square matrix, row-major. Chains here are small (n up to a couple
// thousand), so no sparsity and no BLAS.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  static Matrix identity(std::size_t n);
  // Throws NonSquare unless rows form an n x n array.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// y = M x
std::vector<double> mat_vec(const Matrix& m, std::span<const double> x);
// y = Mᵀ x  (no transpose is materialized)
std::vector<double> mat_transpose_vec(const Matrix& m, std::span<const double> x);

double frobenius_norm(const Matrix& m);
double max_abs(std::span<const double> v);

}  // namespace chaincert
