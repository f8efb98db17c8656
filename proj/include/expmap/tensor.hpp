#pragma once

/**
 * @file tensor.hpp
 * @brief Dense mixed-variance tensors at a single tangent space, and the d x d
 * operator algebra on T_pM.
 *
 * Components are stored row-major with the contravariant slots first, then the
 * covariant slots in declared order. The curvature tensor is a (1,3) tensor
 * laid out as [l, X, Y, Z], so R(X,Y)Z = sum R[l,i,j,k] X^i Y^j Z^k e_l.
 * The n-th covariant derivative is (1, 3+n) with the derivative slots leading
 * the covariant slots.
 */

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "expmap/error.hpp"

namespace expmap {

using TangentVector = Eigen::VectorXd;
using LinearOperator = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

class DenseTensor {
 public:
  DenseTensor() = default;

  DenseTensor(int contravariant, int covariant, int dimension)
      : contra_(contravariant), cov_(covariant), dim_(dimension) {
    if (contravariant < 0 || covariant < 0 || dimension <= 0)
      throw InvalidInput("DenseTensor: negative arity or nonpositive dimension");
    data_.assign(ipow(dim_, contra_ + cov_), 0.0);
  }

  DenseTensor(int contravariant, int covariant, int dimension, std::vector<double> components)
      : DenseTensor(contravariant, covariant, dimension) {
    if (components.size() != data_.size())
      throw InvalidInput("DenseTensor: component count " + std::to_string(components.size()) +
                         " does not match d^arity = " + std::to_string(data_.size()));
    data_ = std::move(components);
  }

  int contravariant_arity() const noexcept { return contra_; }
  int covariant_arity() const noexcept { return cov_; }
  int arity() const noexcept { return contra_ + cov_; }
  int dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> components() const noexcept { return data_; }
  std::span<double> components() noexcept { return data_; }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  /// Flat offset of a full multi-index.
  std::size_t offset(std::span<const int> index) const {
    if (static_cast<int>(index.size()) != arity()) throw InvalidInput("DenseTensor: index arity mismatch");
    std::size_t off = 0;
    for (int i : index) off = off * dim_ + static_cast<std::size_t>(i);
    return off;
  }

  std::size_t offset(std::initializer_list<int> index) const {
    return offset(std::span<const int>(index.begin(), index.size()));
  }
  double at(std::initializer_list<int> index) const {
    return data_[offset(std::span<const int>(index.begin(), index.size()))];
  }
  double& at(std::initializer_list<int> index) {
    return data_[offset(std::span<const int>(index.begin(), index.size()))];
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  double norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (double x : data_)
      if (!std::isfinite(x)) return false;
    return true;
  }

 private:
  int contra_ = 0;
  int cov_ = 0;
  int dim_ = 1;
  std::vector<double> data_ = {0.0};
};

/**
 * Contracts v into the first covariant slot, n times: v^{(x)n} . T.
 * The result has n fewer covariant slots.
 */
inline DenseTensor contract_leading(const DenseTensor& T, const TangentVector& v, int n) {
  if (n < 0) throw InvalidInput("contract_leading: negative contraction count");
  if (v.size() != T.dimension()) throw InvalidInput("contract_leading: dimension mismatch");
  if (n > T.covariant_arity())
    throw InvalidInput("contract_leading: tensor has only " + std::to_string(T.covariant_arity()) +
                       " covariant slots, asked for " + std::to_string(n));
  DenseTensor cur = T;
  const std::size_t d = T.dimension();
  for (int step = 0; step < n; ++step) {
    DenseTensor next(cur.contravariant_arity(), cur.covariant_arity() - 1, cur.dimension());
    // [hi | slot | lo] with slot the first covariant index.
    const std::size_t hi = ipow(d, cur.contravariant_arity());
    const std::size_t lo = ipow(d, cur.covariant_arity() - 1);
    for (std::size_t h = 0; h < hi; ++h)
      for (std::size_t s = 0; s < d; ++s) {
        const double vs = v[static_cast<Eigen::Index>(s)];
        if (vs == 0.0) continue;
        const std::size_t src = (h * d + s) * lo;
        const std::size_t dst = h * lo;
        for (std::size_t l = 0; l < lo; ++l) next[dst + l] += vs * cur[src + l];
      }
    cur = std::move(next);
  }
  return cur;
}

inline LinearOperator identity_operator(int d) { return LinearOperator::Identity(d, d); }

inline LinearOperator compose(const LinearOperator& A, const LinearOperator& B) {
  if (A.cols() != B.rows() || A.rows() != A.cols() || B.rows() != B.cols())
    throw InvalidInput("compose: dimension mismatch");
  return A * B;
}

inline TangentVector apply(const LinearOperator& A, const TangentVector& w) {
  if (A.cols() != w.size()) throw InvalidInput("apply: dimension mismatch");
  return A * w;
}

inline double frobenius_norm(const LinearOperator& A) { return A.norm(); }

/// R(X,Y)Z for a (1,3) tensor in [l, X, Y, Z] layout.
inline TangentVector curvature_action(const DenseTensor& R, const TangentVector& X, const TangentVector& Y,
                                      const TangentVector& Z) {
  const int d = R.dimension();
  TangentVector out = TangentVector::Zero(d);
  std::size_t idx = 0;
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double xy = X[i] * Y[j];
        for (int k = 0; k < d; ++k) out[l] += R[idx++] * xy * Z[k];
      }
  return out;
}

/// The operator w -> T(v, w) v for a (1,3) tensor T.
inline LinearOperator sandwich_operator(const DenseTensor& T, const TangentVector& v) {
  if (T.contravariant_arity() != 1 || T.covariant_arity() != 3)
    throw InvalidInput("sandwich_operator: expected a (1,3) tensor");
  if (v.size() != T.dimension()) throw InvalidInput("sandwich_operator: dimension mismatch");
  const int d = T.dimension();
  LinearOperator M = LinearOperator::Zero(d, d);
  std::size_t idx = 0;
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) M(l, j) += T[idx++] * v[i] * v[k];
  return M;
}

// JSON: {"contravariant_arity", "covariant_arity", "dimension", "components"}
inline nlohmann::json to_json(const DenseTensor& T) {
  return {{"contravariant_arity", T.contravariant_arity()},
          {"covariant_arity", T.covariant_arity()},
          {"dimension", T.dimension()},
          {"components", std::vector<double>(T.components().begin(), T.components().end())}};
}

inline DenseTensor tensor_from_json(const nlohmann::json& j) {
  return DenseTensor(j.at("contravariant_arity").get<int>(), j.at("covariant_arity").get<int>(),
                     j.at("dimension").get<int>(), j.at("components").get<std::vector<double>>());
}

// JSON: {"dimension", "entries"} with entries row-major.
inline nlohmann::json operator_to_json(const LinearOperator& A) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(A.size()));
  for (Eigen::Index r = 0; r < A.rows(); ++r)
    for (Eigen::Index c = 0; c < A.cols(); ++c) flat.push_back(A(r, c));
  return {{"dimension", A.rows()}, {"entries", flat}};
}

inline LinearOperator operator_from_json(const nlohmann::json& j) {
  const int d = j.at("dimension").get<int>();
  const auto flat = j.at("entries").get<std::vector<double>>();
  if (d <= 0 || flat.size() != static_cast<std::size_t>(d) * d)
    throw InvalidInput("operator_from_json: entry count does not match dimension");
  LinearOperator A(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) A(r, c) = flat[static_cast<std::size_t>(r) * d + c];
  return A;
}

inline nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  const auto xs = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

}  // namespace expmap
