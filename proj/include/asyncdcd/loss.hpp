/**
 * Copyright 2026 The asyncdcd authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/
#pragma once

#include <string>

namespace dcd {

enum class LossKind { hinge, squared_hinge, logistic };

const char* loss_name(LossKind kind) noexcept;
LossKind loss_from_name(const std::string& name);  // config_error on unknown

/// Loss family plus the penalty C weighting loss against the regularizer.
struct LossSpec {
  LossKind kind = LossKind::hinge;
  double C = 1.0;  // must be > 0
};

/// Feasible interval of a dual variable. Closed for hinge ([0,C]) and squared
/// hinge ([0,+inf)); logistic dual variables live strictly inside (0,C) after
/// any update, although the conjugate is finite on the closed interval.
struct DualDomain {
  double lo = 0.0;
  double hi = 0.0;  // +inf for squared hinge
  bool open = false;

  bool contains(double a) const noexcept { return a >= lo && a <= hi; }
  bool strictly_contains(double a) const noexcept { return a > lo && a < hi; }
};

DualDomain dual_domain(const LossSpec& spec) noexcept;

/// Loss value at margin z: hinge C*max(1-z,0), squared hinge C*max(1-z,0)^2,
/// logistic C*log(1+exp(-z)).
double primal_loss(const LossSpec& spec, double z) noexcept;

/// Conjugate term of the dual objective at dual value alpha, i.e. the value
/// paired with -alpha. +inf outside the feasible interval.
double conjugate_loss(const LossSpec& spec, double alpha) noexcept;

/// Exact minimizer delta of
///     0.5*||w + delta*x_i||^2 + conjugate(alpha_i + delta)
/// given wx = w.x_i and norm_sq = ||x_i||^2 > 0. Closed form for hinge and
/// squared hinge; damped Newton on the stationarity equation for logistic.
/// alpha_i + delta stays feasible. Endpoint clamps are exact so callers can
/// compare against the bounds with ==.
double solve_subproblem(const LossSpec& spec, double wx, double norm_sq,
                        double alpha_i);

/// Proximal point argmin_u 0.5*(u-s)^2 + conjugate(u)/norm_sq. Satisfies
/// prox_point(alpha_i - wx/norm_sq) - alpha_i == solve_subproblem(...), which
/// the fixed-point diagnostics rely on. Implemented independently of
/// solve_subproblem so the two routes cross-check each other.
double prox_point(const LossSpec& spec, double s, double norm_sq);

}  // namespace dcd
