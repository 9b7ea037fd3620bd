#include "salieval/tensor.hpp"

#include <cmath>
#include <string>

namespace salieval::ad {

namespace {
int64_t shape_product(const std::vector<int64_t>& shape) {
  int64_t n = 1;
  for (int64_t d : shape) {
    if (d < 0) throw ShapeError("negative dimension in tensor shape");
    n *= d;
  }
  return n;
}
}  // namespace

Tensor::Tensor(std::vector<int64_t> shape)
    : shape_(std::move(shape)), v_(static_cast<size_t>(shape_product(shape_)), 0.0) {}

Tensor::Tensor(int64_t rows, int64_t cols) : Tensor(std::vector<int64_t>{rows, cols}) {}

Tensor Tensor::full(int64_t rows, int64_t cols, double v) {
  Tensor t(rows, cols);
  t.fill(v);
  return t;
}

Tensor Tensor::scalar(double v) {
  Tensor t(1, 1);
  t.at(0) = v;
  return t;
}

Tensor Tensor::row(std::initializer_list<double> values) {
  Tensor t(1, static_cast<int64_t>(values.size()));
  int64_t i = 0;
  for (double v : values) t.at(i++) = v;
  return t;
}

Tensor Tensor::from_values(int64_t rows, int64_t cols, std::vector<double> values) {
  if (static_cast<int64_t>(values.size()) != rows * cols)
    throw ShapeError("from_values: value count does not match " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  Tensor t;
  t.shape_ = {rows, cols};
  t.v_ = std::move(values);
  return t;
}

int64_t Tensor::rows() const {
  if (shape_.size() != 2) throw ShapeError("rows(): tensor is not rank 2");
  return shape_[0];
}

int64_t Tensor::cols() const {
  if (shape_.size() != 2) throw ShapeError("cols(): tensor is not rank 2");
  return shape_[1];
}

double Tensor::item() const {
  if (size() != 1) throw ContractError("item(): tensor has more than one element");
  return v_[0];
}

bool Tensor::all_finite() const {
  for (double v : v_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::ensure_finite(const char* context) const {
  if (!all_finite()) throw NumericError(std::string("non-finite value in ") + context);
}

void Tensor::fill(double v) {
  for (double& x : v_) x = v;
}

void Tensor::add_in_place(const Tensor& o) {
  if (!same_shape(o)) throw ShapeError("add_in_place: shape mismatch");
  for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
}

void Tensor::scale_in_place(double c) {
  for (double& x : v_) x *= c;
}

}  // namespace salieval::ad
