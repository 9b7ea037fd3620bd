#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "salieval/error.hpp"

namespace salieval::ad {

// Dense row-major tensor of 64-bit reals. Everything in the classifiers is
// rank 2 (scalars are [1,1]), but the shape is kept as a list so callers can
// tell a [1,n] from an [n,1].
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape);
  Tensor(int64_t rows, int64_t cols);

  static Tensor zeros(int64_t rows, int64_t cols) { return Tensor(rows, cols); }
  static Tensor full(int64_t rows, int64_t cols, double v);
  static Tensor scalar(double v);
  static Tensor row(std::initializer_list<double> values);
  static Tensor from_values(int64_t rows, int64_t cols, std::vector<double> values);

  const std::vector<int64_t>& shape() const { return shape_; }
  int64_t size() const { return static_cast<int64_t>(v_.size()); }
  bool empty() const { return v_.empty(); }
  int64_t ndim() const { return static_cast<int64_t>(shape_.size()); }

  int64_t rows() const;
  int64_t cols() const;

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  double& at(int64_t i) { return v_[static_cast<size_t>(i)]; }
  double at(int64_t i) const { return v_[static_cast<size_t>(i)]; }
  double& at(int64_t r, int64_t c) { return v_[static_cast<size_t>(r * cols() + c)]; }
  double at(int64_t r, int64_t c) const { return v_[static_cast<size_t>(r * cols() + c)]; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  // Value of a single-element tensor.
  double item() const;

  bool all_finite() const;
  void ensure_finite(const char* context) const;

  void fill(double v);
  void add_in_place(const Tensor& o);
  void scale_in_place(double c);

 private:
  std::vector<int64_t> shape_;
  std::vector<double> v_;
};

}  // namespace salieval::ad
