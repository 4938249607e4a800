#pragma once

// Dense double-precision vectors and row-major matrices with the handful of
// kernels the memory network needs. Everything here is value-semantic; none of
// the free functions mutate their inputs except the explicit in-place helpers
// (axpy_inplace, add_outer_inplace) used by the gradient code.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace memnet {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0);
  explicit Vector(std::vector<double> data);
  Vector(std::initializer_list<double> init);

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> span() { return data_; }
  std::span<const double> span() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> data_;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  /// Row-wise literal, e.g. Matrix{{1, 2}, {3, 4}}.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// result[r] = sum_c M(r,c) * x[c]
Vector matvec(const Matrix& m, std::span<const double> x);
/// result[c] = sum_r M(r,c) * x[r], i.e. M^T x without materialising the transpose.
Vector matvec_transposed(const Matrix& m, std::span<const double> x);

/// Max-shifted softmax; safe for arbitrarily large finite scores.
Vector softmax(std::span<const double> g);

double dot(std::span<const double> a, std::span<const double> b);
Vector tanh_vec(std::span<const double> x);
Vector sigmoid_vec(std::span<const double> x);
Vector add(std::span<const double> a, std::span<const double> b);
Vector hadamard(std::span<const double> a, std::span<const double> b);
Vector scale(std::span<const double> x, double s);
Vector concat(std::span<const double> a, std::span<const double> b);

/// Unweighted mean of the matrix rows.
Vector row_mean(const Matrix& m);

/// y += a * x
void axpy_inplace(double a, std::span<const double> x, std::span<double> y);
/// M += a * u v^T
void add_outer_inplace(double a, std::span<const double> u, std::span<const double> v, Matrix& m);

bool all_finite(std::span<const double> x);

double sigmoid(double x);

}  // namespace memnet
