#include "memnet/ndcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memnet/errors.hpp"

namespace memnet {

namespace {

void require_same(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw DimensionError(std::string(what) + ": zero length");
}

}  // namespace

Vector::Vector(std::size_t n, double fill) : data_(n, fill) { require_nonempty(n, "Vector"); }

Vector::Vector(std::vector<double> data) : data_(std::move(data)) {
  require_nonempty(data_.size(), "Vector");
}

Vector::Vector(std::initializer_list<double> init) : data_(init) {
  require_nonempty(data_.size(), "Vector");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require_nonempty(rows, "Matrix rows");
  require_nonempty(cols, "Matrix cols");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_nonempty(rows, "Matrix rows");
  require_nonempty(cols, "Matrix cols");
  require_same(data_.size(), rows * cols, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  require_nonempty(rows_, "Matrix rows");
  cols_ = rows.begin()->size();
  require_nonempty(cols_, "Matrix cols");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require_same(r.size(), cols_, "Matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector matvec(const Matrix& m, std::span<const double> x) {
  require_same(m.cols(), x.size(), "matvec");
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
  return Vector(std::move(out));
}

Vector matvec_transposed(const Matrix& m, std::span<const double> x) {
  require_same(m.rows(), x.size(), "matvec_transposed");
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    const double xr = x[r];
    for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c] * xr;
  }
  return Vector(std::move(out));
}

Vector softmax(std::span<const double> g) {
  require_nonempty(g.size(), "softmax");
  const double mx = *std::max_element(g.begin(), g.end());
  std::vector<double> out(g.size());
  double z = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = std::exp(g[i] - mx);
    z += out[i];
  }
  for (double& v : out) v /= z;
  return Vector(std::move(out));
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Vector tanh_vec(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v = std::tanh(v);
  return Vector(std::move(out));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Vector sigmoid_vec(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v = sigmoid(v);
  return Vector(std::move(out));
}

Vector add(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "add");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return Vector(std::move(out));
}

Vector hadamard(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "hadamard");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return Vector(std::move(out));
}

Vector scale(std::span<const double> x, double s) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v *= s;
  return Vector(std::move(out));
}

Vector concat(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return Vector(std::move(out));
}

Vector row_mean(const Matrix& m) {
  require_nonempty(m.rows(), "row_mean");
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c];
  }
  const double inv = 1.0 / static_cast<double>(m.rows());
  for (double& v : out) v *= inv;
  return Vector(std::move(out));
}

void axpy_inplace(double a, std::span<const double> x, std::span<double> y) {
  require_same(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void add_outer_inplace(double a, std::span<const double> u, std::span<const double> v, Matrix& m) {
  require_same(m.rows(), u.size(), "add_outer rows");
  require_same(m.cols(), v.size(), "add_outer cols");
  for (std::size_t r = 0; r < u.size(); ++r) {
    const double s = a * u[r];
    auto row = m.row(r);
    for (std::size_t c = 0; c < v.size(); ++c) row[c] += s * v[c];
  }
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace memnet
