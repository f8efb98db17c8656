#pragma once

/**
 * @file manifold.hpp
 * @brief A single-chart manifold with a torsion-free affine connection,
 * described by its Christoffel symbols and their exact Taylor jets.
 */

#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "expmap/error.hpp"
#include "expmap/jet.hpp"
#include "expmap/tensor.hpp"

namespace expmap {

class ManifoldModel {
 public:
  virtual ~ManifoldModel() = default;

  virtual int dimension() const = 0;
  virtual bool in_domain(const Point& x) const = 0;

  /**
   * Taylor jet of Gamma^k_{ij} at x, up to total order `order`, in [k, i, j]
   * layout. Implementations return exact coefficients (closed form or
   * polynomial re-expansion), never numerical derivatives.
   */
  virtual ChristoffelJet christoffel_jet(const Point& x, int order) const = 0;

  /// Riemannian metric at x for models that carry one.
  virtual std::optional<LinearOperator> metric(const Point&) const { return std::nullopt; }

  /// Parameters as used in the CLI config ({kind, dimension, ...}).
  virtual nlohmann::json describe() const = 0;

  std::string name() const { return describe().at("kind").get<std::string>(); }

  void require_in_domain(const Point& x) const {
    if (x.size() != dimension())
      throw InvalidInput("point has dimension " + std::to_string(x.size()) + ", model has " +
                         std::to_string(dimension()));
    if (!in_domain(x)) throw ChartDomainError(name() + ": point outside the chart domain");
  }

  /// Gamma^k_{ij}(x) as a (1,2)-shaped array.
  DenseTensor christoffel(const Point& x) const { return christoffel_jet(x, 0).value(); }
};

using ModelPtr = std::shared_ptr<const ManifoldModel>;

}  // namespace expmap
