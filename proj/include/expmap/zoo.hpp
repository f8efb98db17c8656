#pragma once

/**
 * @file zoo.hpp
 * @brief Concrete manifold models with exact Christoffel jets: flat space,
 * the round sphere (stereographic chart), hyperbolic space (Poincare ball)
 * and seeded random polynomial connections.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "expmap/manifold.hpp"

namespace expmap {

class FlatModel final : public ManifoldModel {
 public:
  explicit FlatModel(int dimension) : d_(dimension) {
    if (dimension < 1) throw InvalidInput("flat: dimension must be >= 1");
  }
  int dimension() const override { return d_; }
  bool in_domain(const Point& x) const override { return x.allFinite(); }
  ChristoffelJet christoffel_jet(const Point& x, int order) const override {
    require_in_domain(x);
    return ChristoffelJet(1, 2, d_, order);
  }
  std::optional<LinearOperator> metric(const Point&) const override {
    return LinearOperator::Identity(d_, d_);
  }
  nlohmann::json describe() const override { return {{"kind", "flat"}, {"dimension", d_}}; }

 private:
  int d_;
};

/**
 * Conformally flat metric g = exp(2 phi) delta with
 *   d_i phi = slope * x_i / (offset + quad * |x|^2).
 * Its Levi-Civita connection is
 *   Gamma^k_{ij} = delta^k_i phi_j + delta^k_j phi_i - delta_ij phi_k.
 */
class ConformalModel : public ManifoldModel {
 public:
  int dimension() const override { return d_; }

  ChristoffelJet christoffel_jet(const Point& x, int order) const override {
    require_in_domain(x);
    std::vector<TaylorPoly> coord;
    TaylorPoly s = TaylorPoly::constant(d_, order, offset_);
    for (int i = 0; i < d_; ++i) {
      coord.push_back(TaylorPoly::coordinate(d_, order, i, x[i]));
      s += quad_ * (coord[i] * coord[i]);
    }
    const TaylorPoly inv = s.reciprocal();
    std::vector<TaylorPoly> dphi;
    for (int i = 0; i < d_; ++i) dphi.push_back(slope_ * (coord[i] * inv));

    ChristoffelJet G(1, 2, d_, order);
    auto at = [&](int k, int i, int j) { return (static_cast<std::size_t>(k) * d_ + i) * d_ + j; };
    for (int k = 0; k < d_; ++k)
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
          TaylorPoly g(d_, order);
          if (k == i) g += dphi[j];
          if (k == j) g += dphi[i];
          if (i == j) g -= dphi[k];
          G.set(at(k, i, j), g);
        }
    return G;
  }

  std::optional<LinearOperator> metric(const Point& x) const override {
    const double s = offset_ + quad_ * x.squaredNorm();
    return LinearOperator::Identity(d_, d_) * (numerator_ / (s * s));
  }

 protected:
  ConformalModel(int dimension, double offset, double quad, double slope, double metric_numerator)
      : d_(dimension), offset_(offset), quad_(quad), slope_(slope), numerator_(metric_numerator) {}

  int d_;
  double offset_;
  double quad_;
  double slope_;
  double numerator_;
};

/// Round sphere of the given radius; g = 4 rho^4 / (rho^2 + |x|^2)^2 delta.
class SphereModel final : public ConformalModel {
 public:
  SphereModel(int dimension, double radius)
      : ConformalModel(dimension, radius * radius, 1.0, -2.0, 4.0 * std::pow(radius, 4)), radius_(radius) {
    if (dimension < 2) throw InvalidInput("sphere: dimension must be >= 2");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("sphere: radius must be positive");
  }
  double radius() const noexcept { return radius_; }
  bool in_domain(const Point& x) const override { return x.allFinite(); }
  nlohmann::json describe() const override {
    return {{"kind", "sphere"}, {"dimension", d_}, {"radius", radius_}};
  }

  /// Inverse stereographic projection into R^{d+1}, sphere centred at 0.
  Eigen::VectorXd embed(const Point& x) const {
    const double r2 = radius_ * radius_;
    const double s = r2 + x.squaredNorm();
    Eigen::VectorXd X(d_ + 1);
    X.head(d_) = (2.0 * r2 / s) * x;
    X[d_] = radius_ * (x.squaredNorm() - r2) / s;
    return X;
  }

  double distance(const Point& a, const Point& b) const {
    const double c = embed(a).dot(embed(b)) / (radius_ * radius_);
    return radius_ * std::acos(std::clamp(c, -1.0, 1.0));
  }

 private:
  double radius_;
};

/// Curvature -1 in the Poincare ball; g = 4 / (1 - |x|^2)^2 delta.
class HyperbolicModel final : public ConformalModel {
 public:
  explicit HyperbolicModel(int dimension) : ConformalModel(dimension, 1.0, -1.0, 2.0, 4.0) {
    if (dimension < 2) throw InvalidInput("hyperbolic: dimension must be >= 2");
  }
  bool in_domain(const Point& x) const override { return x.allFinite() && x.squaredNorm() < 1.0; }
  nlohmann::json describe() const override { return {{"kind", "hyperbolic"}, {"dimension", d_}}; }

  double distance(const Point& a, const Point& b) const {
    const double num = 2.0 * (a - b).squaredNorm();
    return std::acosh(1.0 + num / ((1.0 - a.squaredNorm()) * (1.0 - b.squaredNorm())));
  }
};

/**
 * Gamma^k_{ij}(x) = sum_alpha c^k_{ij,alpha} x^alpha over monomials of degree
 * <= max_poly_degree, with c uniform in [-scale, scale] drawn from a seeded
 * mt19937_64 for i <= j and mirrored to j > i. No metric is involved.
 */
class PolynomialConnection final : public ManifoldModel {
 public:
  PolynomialConnection(int dimension, int max_poly_degree, double scale, std::uint64_t seed)
      : d_(dimension), degree_(max_poly_degree), scale_(scale), seed_(seed) {
    if (dimension < 2) throw InvalidInput("polynomial: dimension must be >= 2");
    if (max_poly_degree < 0) throw InvalidInput("polynomial: degree must be >= 0");
    if (!(scale >= 0.0) || !std::isfinite(scale)) throw InvalidInput("polynomial: scale must be >= 0");
    const int n_mono = monomial_basis(d_, degree_)->size();
    coeffs_.assign(static_cast<std::size_t>(d_) * d_ * d_ * n_mono, 0.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-scale, scale);
    for (int k = 0; k < d_; ++k)
      for (int i = 0; i < d_; ++i)
        for (int j = i; j < d_; ++j)
          for (int a = 0; a < n_mono; ++a) {
            const double c = uniform(rng);
            coeffs_[index(k, i, j, a)] = c;
            coeffs_[index(k, j, i, a)] = c;
          }
  }

  int dimension() const override { return d_; }
  bool in_domain(const Point& x) const override { return x.allFinite() && x.squaredNorm() < 1.0; }
  nlohmann::json describe() const override {
    return {{"kind", "polynomial"}, {"dimension", d_}, {"degree", degree_}, {"scale", scale_}, {"seed", seed_}};
  }

  /// Coefficient of x^alpha (alpha indexed in the graded monomial basis) in Gamma^k_{ij}.
  double coefficient(int k, int i, int j, int alpha) const { return coeffs_[index(k, i, j, alpha)]; }
  int degree() const noexcept { return degree_; }

  ChristoffelJet christoffel_jet(const Point& x, int order) const override {
    require_in_domain(x);
    const auto basis = monomial_basis(d_, degree_);
    // Re-expand each monomial x^alpha about x: prod_i (x_i + h_i)^alpha_i.
    std::vector<std::vector<TaylorPoly>> powers(d_);
    for (int i = 0; i < d_; ++i) {
      powers[i].push_back(TaylorPoly::constant(d_, order, 1.0));
      const TaylorPoly xi = TaylorPoly::coordinate(d_, order, i, x[i]);
      for (int e = 1; e <= degree_; ++e) powers[i].push_back(powers[i].back() * xi);
    }
    std::vector<TaylorPoly> monomials;
    for (int a = 0; a < basis->size(); ++a) {
      TaylorPoly m = TaylorPoly::constant(d_, order, 1.0);
      for (int i = 0; i < d_; ++i)
        if (const int e = basis->exponent(a, i); e > 0) m = m * powers[i][e];
      monomials.push_back(std::move(m));
    }
    ChristoffelJet G(1, 2, d_, order);
    for (int k = 0; k < d_; ++k)
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
          auto out = G.poly((static_cast<std::size_t>(k) * d_ + i) * d_ + j);
          for (int a = 0; a < basis->size(); ++a) {
            const double c = coeffs_[index(k, i, j, a)];
            const auto m = monomials[a].coefficients();
            for (std::size_t t = 0; t < out.size(); ++t) out[t] += c * m[t];
          }
        }
    return G;
  }

 private:
  std::size_t index(int k, int i, int j, int a) const {
    const std::size_t n_mono = coeffs_.size() / (static_cast<std::size_t>(d_) * d_ * d_);
    return ((static_cast<std::size_t>(k) * d_ + i) * d_ + j) * n_mono + a;
  }

  int d_;
  int degree_;
  double scale_;
  std::uint64_t seed_;
  std::vector<double> coeffs_;
};

inline ModelPtr flat(int dimension) { return std::make_shared<FlatModel>(dimension); }
inline ModelPtr sphere(int dimension, double radius = 1.0) {
  return std::make_shared<SphereModel>(dimension, radius);
}
inline ModelPtr hyperbolic(int dimension) { return std::make_shared<HyperbolicModel>(dimension); }
inline ModelPtr polynomial_connection(int dimension, int max_poly_degree = 3, double scale = 0.5,
                                      std::uint64_t seed = 42) {
  return std::make_shared<PolynomialConnection>(dimension, max_poly_degree, scale, seed);
}

/// Builds a model from {kind, dimension, radius | degree, scale, seed}.
inline ModelPtr model_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int d = j.at("dimension").get<int>();
    if (kind == "flat") return flat(d);
    if (kind == "sphere") return sphere(d, j.value("radius", 1.0));
    if (kind == "hyperbolic") return hyperbolic(d);
    if (kind == "polynomial")
      return polynomial_connection(d, j.value("degree", 3), j.value("scale", 0.5),
                                   j.value("seed", std::uint64_t{42}));
    throw InvalidInput("unknown manifold kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("manifold description: ") + e.what());
  }
}

}  // namespace expmap
