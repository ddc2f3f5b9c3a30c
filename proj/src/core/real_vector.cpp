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

#include "gradissect/core/real_vector.hpp"

#include <cmath>
#include <string>

#include "gradissect/core/error.hpp"

namespace gradissect {

RealVector::RealVector(std::size_t dim, double fill)
    : values_(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), fill)) {}

RealVector::RealVector(std::initializer_list<double> values)
    : values_(static_cast<Eigen::Index>(values.size())) {
  Eigen::Index i = 0;
  for (double v : values) values_[i++] = v;
}

bool operator==(const RealVector& a, const RealVector& b) {
  return a.dim() == b.dim() && (a.values_.array() == b.values_.array()).all();
}

void check_same_dim(const RealVector& a, const RealVector& b, const char* where) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(where) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

namespace {

double apply(ElementwiseOp op, double x, double y) {
  switch (op) {
    case ElementwiseOp::kAdd:
      return x + y;
    case ElementwiseOp::kSub:
      return x - y;
    case ElementwiseOp::kMul:
      return x * y;
    case ElementwiseOp::kDiv:
      if (y == 0.0) throw DomainError("elementwise: division by zero");
      return x / y;
    case ElementwiseOp::kSquare:
      return x * x;
    case ElementwiseOp::kSqrt:
      if (x < 0.0) throw DomainError("elementwise: sqrt of negative value");
      return std::sqrt(x);
    case ElementwiseOp::kSign:
      return sign(x);
  }
  return x;
}

}  // namespace

RealVector elementwise(ElementwiseOp op, const RealVector& a, const RealVector& b) {
  check_same_dim(a, b, "elementwise");
  RealVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = apply(op, a[i], b[i]);
  return out;
}

RealVector elementwise(ElementwiseOp op, const RealVector& a, double b) {
  RealVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = apply(op, a[i], b);
  return out;
}

RealVector elementwise(ElementwiseOp op, const RealVector& a) {
  return elementwise(op, a, 0.0);
}

RealVector sign(const RealVector& a) { return elementwise(ElementwiseOp::kSign, a); }
RealVector square(const RealVector& a) { return elementwise(ElementwiseOp::kSquare, a); }
RealVector sqrt(const RealVector& a) { return elementwise(ElementwiseOp::kSqrt, a); }

RealVector hadamard(const RealVector& a, const RealVector& b) {
  return elementwise(ElementwiseOp::kMul, a, b);
}

RealVector divide(const RealVector& a, const RealVector& b) {
  return elementwise(ElementwiseOp::kDiv, a, b);
}

RealVector abs(const RealVector& a) { return RealVector(Eigen::VectorXd(a.eigen().cwiseAbs())); }

RealVector operator+(const RealVector& a, const RealVector& b) {
  check_same_dim(a, b, "operator+");
  return RealVector(Eigen::VectorXd(a.eigen() + b.eigen()));
}

RealVector operator-(const RealVector& a, const RealVector& b) {
  check_same_dim(a, b, "operator-");
  return RealVector(Eigen::VectorXd(a.eigen() - b.eigen()));
}

RealVector operator-(const RealVector& a) { return RealVector(Eigen::VectorXd(-a.eigen())); }

RealVector operator*(double s, const RealVector& a) {
  return RealVector(Eigen::VectorXd(s * a.eigen()));
}

RealVector operator*(const RealVector& a, double s) { return s * a; }

double dot(const RealVector& a, const RealVector& b) {
  check_same_dim(a, b, "dot");
  return a.eigen().dot(b.eigen());
}

double squared_norm(const RealVector& a) { return a.eigen().squaredNorm(); }
double norm(const RealVector& a) { return a.eigen().norm(); }
double sum(const RealVector& a) { return a.eigen().sum(); }

}  // namespace gradissect
