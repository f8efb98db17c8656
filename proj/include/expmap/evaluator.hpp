#pragma once

/**
 * @file evaluator.hpp
 * @brief Numerical evaluation of the truncated series of E_p(v): directly over
 * lists, through the degree recurrence, and through the odd-factorial series
 * in r_0 that applies when nabla R = 0.
 *
 * The series is asymptotic in |v|. Tolerances in the test suites assume
 * |v| <= 0.5 in the metric of the model (or in chart units for connections
 * without one).
 */

#include <cmath>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "expmap/geometry.hpp"
#include "expmap/series.hpp"
#include "expmap/tensor.hpp"

namespace expmap {

inline constexpr int kDefaultTruncationDegree = 8;

struct SeriesEvaluation {
  LinearOperator op;
  int max_degree = 0;
  /// Homogeneous components E_0 .. E_N.
  std::vector<LinearOperator> components;
  std::vector<double> per_degree_norms;
  /// Norm of the highest computed component.
  double truncation_estimate = 0.0;
};

namespace detail {

inline void require_jet_for_degree(const CurvatureJet& jet, int N) {
  if (N < 0) throw InvalidInput("series evaluation: negative truncation degree");
  if (N >= 2 && jet.max_order < N - 2)
    throw InvalidInput("series evaluation: degree " + std::to_string(N) + " needs curvature jet order " +
                       std::to_string(N - 2) + ", have " + std::to_string(jet.max_order));
}

inline SeriesEvaluation assemble(std::vector<LinearOperator> components, int N) {
  SeriesEvaluation out;
  out.max_degree = N;
  out.op = LinearOperator::Zero(components[0].rows(), components[0].cols());
  for (const auto& E : components) {
    out.op += E;
    out.per_degree_norms.push_back(frobenius_norm(E));
  }
  out.truncation_estimate = out.per_degree_norms.back();
  out.components = std::move(components);
  return out;
}

}  // namespace detail

/**
 * E_n = sum over lists of degree n of r_nu / (nu! c_nu). Each r_nu is formed
 * once as r_{first} * r_{tail}, reusing the already computed tail.
 */
inline SeriesEvaluation evaluate_closed_form(const CurvatureJet& jet, const TangentVector& v, int N) {
  detail::require_jet_for_degree(jet, N);
  const int d = jet.dimension();
  if (v.size() != d) throw InvalidInput("evaluate_closed_form: dimension mismatch");
  const auto r = r_operators(jet, v, N - 1);

  std::map<List, LinearOperator, EnumerationOrder> cache;
  std::vector<LinearOperator> components;
  for (int n = 0; n <= N; ++n) {
    LinearOperator En = LinearOperator::Zero(d, d);
    for (const List& nu : lists_of_degree(static_cast<unsigned>(n))) {
      LinearOperator rnu = nu.empty() ? identity_operator(d) : compose(r[nu.front()], cache.at(nu.tail()));
      En += coefficient(nu).convert_to<double>() * rnu;
      cache.emplace(nu, std::move(rnu));
    }
    components.push_back(std::move(En));
  }
  return detail::assemble(std::move(components), N);
}

/// E_0 = id, E_1 = 0, E_n = 1/(n(n+1)) sum_{m=0}^{n-2} r_m E_{n-m-2} / m!.
inline SeriesEvaluation evaluate_recurrence(const CurvatureJet& jet, const TangentVector& v, int N) {
  detail::require_jet_for_degree(jet, N);
  const int d = jet.dimension();
  if (v.size() != d) throw InvalidInput("evaluate_recurrence: dimension mismatch");
  const auto r = r_operators(jet, v, N - 1);

  std::vector<LinearOperator> E;
  E.push_back(identity_operator(d));
  if (N >= 1) E.push_back(LinearOperator::Zero(d, d));
  for (int n = 2; n <= N; ++n) {
    LinearOperator sum = LinearOperator::Zero(d, d);
    double inv_fact = 1.0;
    for (int m = 0; m <= n - 2; ++m) {
      if (m > 0) inv_fact /= m;
      sum += inv_fact * (r[m] * E[n - m - 2]);
    }
    E.push_back(sum / (static_cast<double>(n) * (n + 1)));
  }
  return detail::assemble(std::move(E), N);
}

/// sum_{k=0}^{K} r_0(v)^k / (2k+1)!
inline LinearOperator evaluate_symmetric(const CurvatureJet& jet, const TangentVector& v, int K) {
  const int d = jet.dimension();
  if (K < 0) throw InvalidInput("evaluate_symmetric: negative term count");
  const LinearOperator r0 = r_n(jet, v, 0);
  LinearOperator sum = identity_operator(d);
  LinearOperator term = identity_operator(d);
  for (int k = 1; k <= K; ++k) {
    term = (r0 * term) / (static_cast<double>(2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

/**
 * || (t^2 d^2/dt^2 + 2t d/dt) E(t) - Rt(t) E(t) ||_F with
 *   E(t)  = sum_{n<=N} t^n E_n                      (closed-form components),
 *   Rt(t) = sum_{n=2}^{N} t^n r_{n-2}(v) / (n-2)!   (truncated transported curvature).
 * The left operator applied to t^n E_n gives n(n+1) t^n E_n.
 */
inline double ode_residual(const CurvatureJet& jet, const TangentVector& v, int N, double t) {
  const SeriesEvaluation ev = evaluate_closed_form(jet, v, N);
  const int d = jet.dimension();
  const auto r = r_operators(jet, v, N - 1);
  LinearOperator lhs = LinearOperator::Zero(d, d);
  LinearOperator E = LinearOperator::Zero(d, d);
  double tn = 1.0;
  for (int n = 0; n <= N; ++n, tn *= t) {
    lhs += (static_cast<double>(n) * (n + 1) * tn) * ev.components[n];
    E += tn * ev.components[n];
  }
  LinearOperator Rt = LinearOperator::Zero(d, d);
  double coef = t * t;  // t^n / (n-2)!
  for (int n = 2; n <= N; ++n) {
    if (n > 2) coef *= t / (n - 2);
    Rt += coef * r[n - 2];
  }
  return frobenius_norm(lhs - Rt * E);
}

inline nlohmann::json to_json(const SeriesEvaluation& ev) {
  return {{"operator", operator_to_json(ev.op)},
          {"max_degree", ev.max_degree},
          {"per_degree_norms", ev.per_degree_norms},
          {"truncation_estimate", ev.truncation_estimate}};
}

}  // namespace expmap
