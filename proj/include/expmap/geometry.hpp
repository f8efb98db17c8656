#pragma once

/**
 * @file geometry.hpp
 * @brief Curvature, its iterated covariant derivatives at a point, and the
 * operators r_n(v): w -> (v^n . nabla^n R)(v, w) v and their compositions.
 *
 * Sign convention: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
 * With it the unit sphere has r_0(v) = -|v|^2 on the complement of v, and
 * the Jacobi equation reads D^2 J = R(gamma', J) gamma'.
 */

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "expmap/jet.hpp"
#include "expmap/manifold.hpp"
#include "expmap/series.hpp"
#include "expmap/tensor.hpp"

namespace expmap {

/// R at x as a (1,3) tensor in [l, X, Y, Z] layout.
inline DenseTensor curvature(const ManifoldModel& M, const Point& x) {
  M.require_in_domain(x);
  return curvature_jet_field(M.christoffel_jet(x, 1)).value();
}

/// nabla^n R at p for n = 0..max_order; entry n is (1, 3+n), derivative slots first.
struct CurvatureJet {
  Point point;
  int max_order = 0;
  std::vector<DenseTensor> tensors;

  int dimension() const { return static_cast<int>(point.size()); }
  const DenseTensor& operator[](int n) const { return tensors.at(n); }
};

/**
 * Expands Gamma to order N+1 about p, forms R as a polynomial field of order
 * N, and applies the coordinate covariant derivative N times. Each step loses
 * one order, so entry n is exact (up to rounding) for every n <= N.
 */
inline CurvatureJet curvature_jet(const ManifoldModel& M, const Point& p, int max_order) {
  if (max_order < 0) throw InvalidInput("curvature_jet: negative order");
  M.require_in_domain(p);
  const ChristoffelJet gamma = M.christoffel_jet(p, max_order + 1);
  CurvatureJet jet{p, max_order, {}};
  jet.tensors.reserve(max_order + 1);
  JetTensor field = curvature_jet_field(gamma);
  jet.tensors.push_back(field.value());
  for (int n = 1; n <= max_order; ++n) {
    field = covariant_derivative(field, gamma);
    jet.tensors.push_back(field.value());
  }
  return jet;
}

namespace detail {

inline void require_order(const CurvatureJet& jet, int n, const char* what) {
  if (n < 0 || n > jet.max_order)
    throw InvalidInput(std::string(what) + ": order " + std::to_string(n) + " outside the jet (max " +
                       std::to_string(jet.max_order) + ")");
}

}  // namespace detail

/// v^n . (nabla^n R)_p, a (1,3) tensor.
inline DenseTensor directional_derivative(const CurvatureJet& jet, const TangentVector& v, int n) {
  detail::require_order(jet, n, "directional_derivative");
  return contract_leading(jet[n], v, n);
}

inline LinearOperator r_n(const CurvatureJet& jet, const TangentVector& v, int n) {
  detail::require_order(jet, n, "r_n");
  return sandwich_operator(directional_derivative(jet, v, n), v);
}

/// r_0(v), ..., r_{count-1}(v).
inline std::vector<LinearOperator> r_operators(const CurvatureJet& jet, const TangentVector& v, int count) {
  std::vector<LinearOperator> out;
  out.reserve(count > 0 ? count : 0);
  for (int m = 0; m < count; ++m) out.push_back(r_n(jet, v, m));
  return out;
}

/// r_{n_1} ... r_{n_k}; identity for the empty list.
inline LinearOperator r_list(const CurvatureJet& jet, const TangentVector& v, const List& nu) {
  if (!nu.empty()) detail::require_order(jet, static_cast<int>(nu.max_entry()), "r_list");
  LinearOperator out = identity_operator(jet.dimension());
  for (unsigned n : nu.entries()) out = compose(out, r_n(jet, v, static_cast<int>(n)));
  return out;
}

inline nlohmann::json to_json(const CurvatureJet& jet) {
  auto tensors = nlohmann::json::array();
  for (const auto& T : jet.tensors) tensors.push_back(to_json(T));
  return {{"point", vector_to_json(jet.point)}, {"max_order", jet.max_order}, {"tensors", tensors}};
}

inline CurvatureJet curvature_jet_from_json(const nlohmann::json& j) {
  CurvatureJet jet{vector_from_json(j.at("point")), j.at("max_order").get<int>(), {}};
  for (const auto& t : j.at("tensors")) jet.tensors.push_back(tensor_from_json(t));
  if (static_cast<int>(jet.tensors.size()) != jet.max_order + 1)
    throw InvalidInput("curvature jet: tensor count does not match max_order");
  return jet;
}

}  // namespace expmap
