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

#include "gradissect/optimizers/optimizer.hpp"

#include <string>

#include "gradissect/core/error.hpp"
#include "gradissect/estimators/variance.hpp"

namespace gradissect::optimizers {

using estimators::AdaptationFactors;

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kSgd:
      return "sgd";
    case Method::kSsd:
      return "ssd";
    case Method::kMSgd:
      return "m-sgd";
    case Method::kMSsd:
      return "m-ssd";
    case Method::kSvag:
      return "svag";
    case Method::kMSvag:
      return "m-svag";
    case Method::kMSvagMb:
      return "m-svag-mb";
    case Method::kAdam:
      return "adam";
    case Method::kAdamStar:
      return "adam-star";
    case Method::kIdealizedSvag:
      return "idealized-svag";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw ContractError("unknown method '" + std::string(name) + "'");
}

Optimizer::Optimizer(OptimizerConfig config, RealVector theta0)
    : config_(std::move(config)), theta_(std::move(theta0)) {
  require(config_.alpha > 0.0, "Optimizer: alpha must be positive");
  require(theta_.dim() > 0, "Optimizer: theta0 must be non-empty");
  require(theta_.all_finite(), "Optimizer: theta0 must be finite");
  const std::size_t d = theta_.dim();
  switch (config_.method) {
    case Method::kSgd:
    case Method::kSsd:
    case Method::kIdealizedSvag:
      break;
    case Method::kMSgd:
    case Method::kMSsd:
    case Method::kSvag:
    case Method::kMSvag:
    case Method::kAdamStar:
      ema_.emplace(d, config_.beta);
      break;
    case Method::kMSvagMb:
      require(config_.batch_size >= 2, "Optimizer: m-svag-mb needs batch_size >= 2");
      first_.emplace(d, config_.beta);
      r_ema_.emplace(d, config_.beta * config_.beta);
      break;
    case Method::kAdam:
      require(config_.epsilon >= 0.0, "Optimizer: epsilon must be non-negative");
      first_.emplace(d, config_.beta1);
      second_.emplace(d, config_.beta2);
      break;
  }
}

SampleRequest Optimizer::sample_request() const {
  SampleRequest r;
  r.batch_size = config_.batch_size;
  r.per_example = config_.method == Method::kMSvagMb;
  r.oracle = config_.method == Method::kIdealizedSvag;
  return r;
}

RealVector Optimizer::variance_estimate(const estimators::Moments& mv) const {
  if (config_.zero_variance_estimate) return RealVector::zeros(mv.m.dim());
  return estimators::ma_variance_estimate(mv.m, mv.v, config_.beta, t_);
}

void Optimizer::apply(double alpha, const RealVector& direction, const AdaptationFactors* f) {
  for (std::size_t i = 0; i < theta_.dim(); ++i) {
    if (f == nullptr) {
      theta_[i] -= alpha * direction[i];
    } else if (!f->no_update[i]) {
      theta_[i] -= alpha * (f->gamma[i] * direction[i]);
    }
  }
}

const RealVector& Optimizer::step(const RealVector& g, const StepAux& aux) {
  check_same_dim(theta_, g, "Optimizer::step");
  const double alpha = config_.alpha * config_.schedule.multiplier(t_);

  switch (config_.method) {
    case Method::kSgd:
      apply(alpha, g, nullptr);
      break;
    case Method::kSsd:
      apply(alpha, sign(g), nullptr);
      break;
    case Method::kMSgd: {
      const auto mv = ema_->update(g);
      apply(alpha, mv.m, nullptr);
      break;
    }
    case Method::kMSsd:
      ema_->update(g);
      apply(alpha, sign(ema_->m_tilde()), nullptr);
      break;
    case Method::kSvag: {
      const auto mv = ema_->update(g);
      factors_ = estimators::factor_svag(square(mv.m), variance_estimate(mv));
      apply(alpha, g, &*factors_);
      break;
    }
    case Method::kMSvag: {
      const auto mv = ema_->update(g);
      factors_ = estimators::factor_msvag(square(mv.m), variance_estimate(mv), config_.beta, t_);
      apply(alpha, mv.m, &*factors_);
      break;
    }
    case Method::kAdamStar: {
      const auto mv = ema_->update(g);
      factors_ =
          estimators::factor_adam_star(square(mv.m), variance_estimate(mv), config_.beta, t_);
      apply(alpha, sign(mv.m), &*factors_);
      break;
    }
    case Method::kMSvagMb: {
      if (aux.per_example_grads.size() < 2) {
        throw ContractError("Optimizer::step: m-svag-mb needs at least two per-example gradients");
      }
      const RealVector s_mb = config_.zero_variance_estimate
                                  ? RealVector::zeros(g.dim())
                                  : estimators::mb_variance_estimate(aux.per_example_grads);
      const RealVector& m = first_->update(g);
      const RealVector s_bar = estimators::mb_momentum_variance(*r_ema_, s_mb, config_.beta, t_);
      // s_bar already carries the rho(beta, t) factor.
      factors_ = estimators::factor_svag(square(m), s_bar);
      apply(alpha, m, &*factors_);
      break;
    }
    case Method::kAdam: {
      const RealVector& m = first_->update(g);
      const RealVector& v = second_->update(square(g));
      apply(alpha, estimators::adam_direction(m, v, config_.epsilon), nullptr);
      break;
    }
    case Method::kIdealizedSvag: {
      if (!aux.oracle) throw ContractError("Optimizer::step: idealized-svag needs a variance oracle");
      factors_ = estimators::factor_exact(aux.oracle->true_grad, aux.oracle->true_var);
      apply(alpha, g, &*factors_);
      break;
    }
  }
  ++t_;
  if (!theta_.all_finite()) throw DomainError("Optimizer::step: iterate became non-finite");
  return theta_;
}

}  // namespace gradissect::optimizers
