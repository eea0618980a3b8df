#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace replan {

/// Dense real vector. Holds weights, features and traces.
class RealVec {
 public:
  RealVec() = default;
  explicit RealVec(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  RealVec(std::initializer_list<double> values) : data_(values) {}
  explicit RealVec(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  operator std::span<double>() noexcept { return data_; }
  operator std::span<const double>() const noexcept { return data_; }

  const std::vector<double>& values() const noexcept { return data_; }

  void fill(double v);
  bool all_finite() const noexcept;

  friend bool operator==(const RealVec&, const RealVec&) = default;

 private:
  std::vector<double> data_;
};

/// Square row-major dense matrix.
class RealMat {
 public:
  RealMat() = default;
  explicit RealMat(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  RealMat(std::initializer_list<std::initializer_list<double>> rows);

  static RealMat identity(std::size_t n);

  std::size_t dim() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }

  void set_identity();
  bool all_finite() const noexcept;

  friend bool operator==(const RealMat&, const RealMat&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Kernel execution policy. `Auto` picks OpenMP above `kParallelMinDim`.
enum class Exec { Auto, Serial, Parallel };

inline constexpr std::size_t kParallelMinDim = 384;

double dot(std::span<const double> a, std::span<const double> b);

RealVec axpy(std::span<const double> y, double a, std::span<const double> x);
void axpy_inplace(std::span<double> y, double a, std::span<const double> x);

RealVec mat_vec(const RealMat& m, std::span<const double> v, Exec exec = Exec::Auto);
void mat_vec_into(const RealMat& m, std::span<const double> v, std::span<double> out,
                  Exec exec = Exec::Auto);

/// M - alpha * phi * (phi^T M). Vector-times-matrix then an outer-product
/// accumulate; O(n^2), never a matrix product.
RealMat rank1_left_update(const RealMat& m, std::span<const double> phi, double alpha,
                          Exec exec = Exec::Auto);

/// In-place form. `scratch` receives phi^T M and must have length n.
void rank1_left_update_inplace(RealMat& m, std::span<const double> phi, double alpha,
                               std::span<double> scratch, Exec exec = Exec::Auto);

double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);

/// Reference kernels. Single loop nest, fixed summation order.
namespace serial {
void mat_vec(const RealMat& m, std::span<const double> v, std::span<double> out);
void rank1_left_update(RealMat& m, std::span<const double> phi, double alpha,
                       std::span<double> scratch);
}  // namespace serial

/// OpenMP kernels. Each output element is accumulated in the same order as the
/// serial kernel, so results are bit-identical to `serial::`.
namespace omp {
void mat_vec(const RealMat& m, std::span<const double> v, std::span<double> out);
void rank1_left_update(RealMat& m, std::span<const double> phi, double alpha,
                       std::span<double> scratch);
}  // namespace omp

}  // namespace replan
