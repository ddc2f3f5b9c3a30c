// Copyright 2026 The gradissect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>

#include <Eigen/Dense>

namespace gradissect {

/// Dense vector of doubles with checked element-wise algebra.
///
/// All binary operations verify that the operands have the same dimension
/// and throw DimensionError otherwise. Products written with `hadamard` are
/// element-wise; `dot` is the inner product.
class RealVector {
 public:
  RealVector() = default;
  explicit RealVector(std::size_t dim, double fill = 0.0);
  RealVector(std::initializer_list<double> values);
  explicit RealVector(Eigen::VectorXd values) : values_(std::move(values)) {}

  static RealVector zeros(std::size_t dim) { return RealVector(dim, 0.0); }
  static RealVector ones(std::size_t dim) { return RealVector(dim, 1.0); }

  std::size_t dim() const { return static_cast<std::size_t>(values_.size()); }

  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

  std::span<const double> values() const { return {values_.data(), dim()}; }
  std::span<double> values() { return {values_.data(), dim()}; }

  const double* begin() const { return values_.data(); }
  const double* end() const { return values_.data() + values_.size(); }
  double* begin() { return values_.data(); }
  double* end() { return values_.data() + values_.size(); }

  const Eigen::VectorXd& eigen() const { return values_; }

  bool all_finite() const { return values_.allFinite(); }

  friend bool operator==(const RealVector& a, const RealVector& b);

 private:
  Eigen::VectorXd values_;
};

enum class ElementwiseOp { kAdd, kSub, kMul, kDiv, kSquare, kSqrt, kSign };

/// Binary element-wise operation. Unary ops (square, sqrt, sign) ignore `b`
/// apart from the dimension check. Division throws DomainError on a zero
/// divisor; sqrt throws DomainError on negative input.
RealVector elementwise(ElementwiseOp op, const RealVector& a, const RealVector& b);
RealVector elementwise(ElementwiseOp op, const RealVector& a, double b);
RealVector elementwise(ElementwiseOp op, const RealVector& a);

/// Sign with sign(0) = +1.
inline double sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

RealVector sign(const RealVector& a);
RealVector square(const RealVector& a);
RealVector sqrt(const RealVector& a);
RealVector hadamard(const RealVector& a, const RealVector& b);
RealVector divide(const RealVector& a, const RealVector& b);
RealVector abs(const RealVector& a);

RealVector operator+(const RealVector& a, const RealVector& b);
RealVector operator-(const RealVector& a, const RealVector& b);
RealVector operator-(const RealVector& a);
RealVector operator*(double s, const RealVector& a);
RealVector operator*(const RealVector& a, double s);

double dot(const RealVector& a, const RealVector& b);
double squared_norm(const RealVector& a);
double norm(const RealVector& a);
double sum(const RealVector& a);

void check_same_dim(const RealVector& a, const RealVector& b, const char* where);

}  // namespace gradissect
