#include "replan/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "replan/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace replan {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

bool use_parallel(std::size_t n, Exec exec) {
  switch (exec) {
    case Exec::Serial:
      return false;
    case Exec::Parallel:
      return true;
    case Exec::Auto:
      break;
  }
  return n >= kParallelMinDim;
}

}  // namespace

void RealVec::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool RealVec::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

RealMat::RealMat(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
  data_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw DimensionError("RealMat: rows must form a square matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RealMat RealMat::identity(std::size_t n) {
  RealMat m(n);
  m.set_identity();
  return m;
}

void RealMat::set_identity() {
  std::fill(data_.begin(), data_.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) data_[i * n_ + i] = 1.0;
}

bool RealMat::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RealVec axpy(std::span<const double> y, double a, std::span<const double> x) {
  require_same(y.size(), x.size(), "axpy");
  RealVec out(std::vector<double>(y.begin(), y.end()));
  axpy_inplace(out, a, x);
  return out;
}

void axpy_inplace(std::span<double> y, double a, std::span<const double> x) {
  require_same(y.size(), x.size(), "axpy");
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

RealVec mat_vec(const RealMat& m, std::span<const double> v, Exec exec) {
  RealVec out(m.dim());
  mat_vec_into(m, v, out, exec);
  return out;
}

void mat_vec_into(const RealMat& m, std::span<const double> v, std::span<double> out, Exec exec) {
  require_same(m.dim(), v.size(), "mat_vec");
  require_same(m.dim(), out.size(), "mat_vec output");
  if (use_parallel(m.dim(), exec)) {
    omp::mat_vec(m, v, out);
  } else {
    serial::mat_vec(m, v, out);
  }
}

RealMat rank1_left_update(const RealMat& m, std::span<const double> phi, double alpha, Exec exec) {
  RealMat out = m;
  std::vector<double> scratch(m.dim());
  rank1_left_update_inplace(out, phi, alpha, scratch, exec);
  return out;
}

void rank1_left_update_inplace(RealMat& m, std::span<const double> phi, double alpha,
                               std::span<double> scratch, Exec exec) {
  require_same(m.dim(), phi.size(), "rank1_left_update");
  require_same(m.dim(), scratch.size(), "rank1_left_update scratch");
  if (use_parallel(m.dim(), exec)) {
    omp::rank1_left_update(m, phi, alpha, scratch);
  } else {
    serial::rank1_left_update(m, phi, alpha, scratch);
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double max_abs(std::span<const double> a) {
  double worst = 0.0;
  for (double x : a) worst = std::max(worst, std::abs(x));
  return worst;
}

namespace serial {

void mat_vec(const RealMat& m, std::span<const double> v, std::span<double> out) {
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * v[j];
    out[i] = s;
  }
}

void rank1_left_update(RealMat& m, std::span<const double> phi, double alpha,
                       std::span<double> scratch) {
  const std::size_t n = m.dim();
  std::fill(scratch.begin(), scratch.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = phi[i];
    const auto row = m.row(i);
    for (std::size_t j = 0; j < n; ++j) scratch[j] += p * row[j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double c = alpha * phi[i];
    auto row = m.row(i);
    for (std::size_t j = 0; j < n; ++j) row[j] -= c * scratch[j];
  }
}

}  // namespace serial

namespace omp {

void mat_vec(const RealMat& m, std::span<const double> v, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(m.dim());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto row = m.row(static_cast<std::size_t>(i));
    double s = 0.0;
    for (std::ptrdiff_t j = 0; j < n; ++j) s += row[j] * v[j];
    out[i] = s;
  }
}

void rank1_left_update(RealMat& m, std::span<const double> phi, double alpha,
                       std::span<double> scratch) {
  const std::size_t n = m.dim();
#pragma omp parallel
  {
    std::size_t lo = 0;
    std::size_t hi = n;
#ifdef _OPENMP
    const auto threads = static_cast<std::size_t>(omp_get_num_threads());
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
    lo = n * tid / threads;
    hi = n * (tid + 1) / threads;
#endif
    // Column block [lo, hi): same i-ascending accumulation as the serial kernel.
    for (std::size_t j = lo; j < hi; ++j) scratch[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = phi[i];
      const auto row = m.row(i);
      for (std::size_t j = lo; j < hi; ++j) scratch[j] += p * row[j];
    }
#pragma omp barrier
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const double c = alpha * phi[static_cast<std::size_t>(i)];
      auto row = m.row(static_cast<std::size_t>(i));
      for (std::size_t j = 0; j < n; ++j) row[j] -= c * scratch[j];
    }
  }
}

}  // namespace omp

}  // namespace replan
