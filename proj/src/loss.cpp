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
#include "asyncdcd/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "asyncdcd/error.hpp"

namespace dcd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp(double v, double lo, double hi) {
  // Endpoint ties resolve to the endpoint exactly: shrinking tests alpha
  // against the bounds with ==.
  return v < lo ? lo : (v > hi ? hi : v);
}

// Root of g on the open interval (0, C); g must be strictly increasing with
// g -> -inf at 0+ and +inf at C-. Damped Newton: full step first, halved
// until it lands strictly inside the interval.
template <typename G, typename Gprime>
double newton_on_interval(G g, Gprime gp, double start, double C,
                          double tol) {
  double a = clamp(start, C * 1e-12, C * (1.0 - 1e-12));
  for (int it = 0; it < 100; ++it) {
    const double val = g(a);
    if (std::abs(val) <= tol) return a;
    double step = -val / gp(a);
    double next = a + step;
    while (next <= 0.0 || next >= C) {
      step *= 0.5;
      next = a + step;
      if (next == a) break;  // step underflowed; converged to the boundary
    }
    if (next == a) return a;
    a = next;
  }
  throw numeric_error("inner Newton solver did not converge");
}

}  // namespace

const char* loss_name(LossKind kind) noexcept {
  switch (kind) {
    case LossKind::hinge: return "hinge";
    case LossKind::squared_hinge: return "sqhinge";
    case LossKind::logistic: return "logistic";
  }
  return "?";
}

LossKind loss_from_name(const std::string& name) {
  if (name == "hinge") return LossKind::hinge;
  if (name == "sqhinge" || name == "squared_hinge")
    return LossKind::squared_hinge;
  if (name == "logistic") return LossKind::logistic;
  throw config_error("unknown loss '" + name + "'");
}

DualDomain dual_domain(const LossSpec& spec) noexcept {
  switch (spec.kind) {
    case LossKind::hinge: return {0.0, spec.C, false};
    case LossKind::squared_hinge: return {0.0, kInf, false};
    case LossKind::logistic: return {0.0, spec.C, true};
  }
  return {};
}

double primal_loss(const LossSpec& spec, double z) noexcept {
  switch (spec.kind) {
    case LossKind::hinge: return spec.C * std::max(1.0 - z, 0.0);
    case LossKind::squared_hinge: {
      const double m = std::max(1.0 - z, 0.0);
      return spec.C * m * m;
    }
    case LossKind::logistic:
      // C*log(1+exp(-z)) without overflow for large |z|
      return z >= 0.0 ? spec.C * std::log1p(std::exp(-z))
                      : spec.C * (-z + std::log1p(std::exp(z)));
  }
  return 0.0;
}

double conjugate_loss(const LossSpec& spec, double alpha) noexcept {
  const double C = spec.C;
  switch (spec.kind) {
    case LossKind::hinge:
      return (alpha >= 0.0 && alpha <= C) ? -alpha : kInf;
    case LossKind::squared_hinge:
      return alpha >= 0.0 ? -alpha + alpha * alpha / (4.0 * C) : kInf;
    case LossKind::logistic: {
      if (alpha < 0.0 || alpha > C) return kInf;
      const double xlogx = alpha > 0.0 ? alpha * std::log(alpha) : 0.0;
      const double r = C - alpha;
      const double rlogr = r > 0.0 ? r * std::log(r) : 0.0;
      // The -C*log(C) term makes this the true conjugate for every C
      // (value 0 at both interval endpoints).
      return xlogx + rlogr - C * std::log(C);
    }
  }
  return 0.0;
}

double solve_subproblem(const LossSpec& spec, double wx, double norm_sq,
                        double alpha_i) {
  if (!(norm_sq > 0.0))
    throw config_error("solve_subproblem requires a positive squared norm");
  const double C = spec.C;
  switch (spec.kind) {
    case LossKind::hinge:
      return clamp(alpha_i - (wx - 1.0) / norm_sq, 0.0, C) - alpha_i;
    case LossKind::squared_hinge: {
      const double denom = norm_sq + 1.0 / (2.0 * C);
      const double a_new =
          std::max(alpha_i + (1.0 - wx - alpha_i / (2.0 * C)) / denom, 0.0);
      return a_new - alpha_i;
    }
    case LossKind::logistic: {
      // stationarity: norm_sq*(a - alpha_i) + wx + log(a/(C-a)) = 0
      const auto g = [&](double a) {
        return norm_sq * (a - alpha_i) + wx + std::log(a / (C - a));
      };
      const auto gp = [&](double a) { return norm_sq + 1.0 / a + 1.0 / (C - a); };
      const double tol = 1e-12 * std::max(1.0, norm_sq);
      return newton_on_interval(g, gp, alpha_i, C, tol) - alpha_i;
    }
  }
  return 0.0;
}

double prox_point(const LossSpec& spec, double s, double norm_sq) {
  if (!(norm_sq > 0.0))
    throw config_error("prox_point requires a positive squared norm");
  const double C = spec.C;
  switch (spec.kind) {
    case LossKind::hinge:
      return clamp(s + 1.0 / norm_sq, 0.0, C);
    case LossKind::squared_hinge: {
      // argmin over u >= 0 of 0.5*(u-s)^2 + (-u + u^2/(4C))/norm_sq
      const double u = (s + 1.0 / norm_sq) / (1.0 + 1.0 / (2.0 * C * norm_sq));
      return std::max(u, 0.0);
    }
    case LossKind::logistic: {
      // stationarity: norm_sq*(u - s) + log(u/(C-u)) = 0
      const auto g = [&](double u) {
        return norm_sq * (u - s) + std::log(u / (C - u));
      };
      const auto gp = [&](double u) { return norm_sq + 1.0 / u + 1.0 / (C - u); };
      const double tol = 1e-12 * std::max(1.0, norm_sq);
      return newton_on_interval(g, gp, s, C, tol);
    }
  }
  return 0.0;
}

}  // namespace dcd
