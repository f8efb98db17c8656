#pragma once

/**
 * @file jet.hpp
 * @brief Truncated multivariate Taylor polynomials and polynomial-valued
 * tensors.
 *
 * A TaylorPoly of order K in d variables stores the Taylor coefficients
 * c_alpha of f(p + h) = sum c_alpha h^alpha over all monomials with
 * |alpha| <= K. Monomials are graded by total degree, so the coefficients of
 * a lower-order truncation are a prefix of the higher-order ones; every
 * operation relies on that.
 *
 * JetTensor is a dense tensor whose components are TaylorPolys of one common
 * order. It carries the coordinate covariant derivative used to build
 * nabla^n R exactly from a Christoffel jet.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "expmap/error.hpp"
#include "expmap/tensor.hpp"

namespace expmap {

/// Graded monomial basis in d variables up to total degree K, with the
/// multiplication and differentiation index tables.
class MonomialBasis {
 public:
  MonomialBasis(int dimension, int order) : d_(dimension), K_(order) {
    if (dimension <= 0 || order < 0) throw InvalidInput("MonomialBasis: bad dimension or order");
    std::vector<std::uint8_t> alpha(d_, 0);
    count_upto_.assign(K_ + 1, 0);
    for (int k = 0; k <= K_; ++k) {
      enumerate_degree(k, 0, alpha);
      count_upto_[k] = static_cast<int>(degree_.size());
    }
    std::map<std::vector<std::uint8_t>, int> lookup;
    for (int a = 0; a < size(); ++a) lookup.emplace(exponent(a), a);

    mul_.resize(size());
    for (int a = 0; a < size(); ++a) {
      const int nb = count_upto_[K_ - degree_[a]];
      mul_[a].resize(nb);
      for (int b = 0; b < nb; ++b) {
        std::vector<std::uint8_t> sum(d_);
        for (int i = 0; i < d_; ++i) sum[i] = exps_[a * d_ + i] + exps_[b * d_ + i];
        mul_[a][b] = lookup.at(sum);
      }
    }
    raise_.assign(static_cast<std::size_t>(d_) * size(), -1);
    for (int m = 0; m < d_; ++m)
      for (int a = 0; a < size(); ++a) {
        if (degree_[a] == K_) continue;
        auto up = exponent(a);
        ++up[m];
        raise_[static_cast<std::size_t>(m) * size() + a] = lookup.at(up);
      }
  }

  int dimension() const noexcept { return d_; }
  int order() const noexcept { return K_; }
  int size() const noexcept { return static_cast<int>(degree_.size()); }

  /// Number of monomials of total degree <= k.
  int count_upto(int k) const { return k < 0 ? 0 : count_upto_[std::min(k, K_)]; }
  int degree(int a) const { return degree_[a]; }
  std::vector<std::uint8_t> exponent(int a) const {
    return {exps_.begin() + a * d_, exps_.begin() + (a + 1) * d_};
  }
  int exponent(int a, int var) const { return exps_[a * d_ + var]; }

  /// Index of alpha_a + alpha_b for b < count_upto(K - deg a).
  std::span<const int> products(int a) const { return mul_[a]; }
  /// Index of alpha + e_m, or -1 when deg alpha == K.
  int raised(int m, int a) const { return raise_[static_cast<std::size_t>(m) * size() + a]; }

  int index_of(std::span<const int> alpha) const {
    int k = 0;
    for (int x : alpha) k += x;
    if (k > K_ || static_cast<int>(alpha.size()) != d_) return -1;
    for (int a = count_upto(k - 1); a < count_upto(k); ++a) {
      bool eq = true;
      for (int i = 0; i < d_ && eq; ++i) eq = exps_[a * d_ + i] == alpha[i];
      if (eq) return a;
    }
    return -1;
  }

 private:
  void enumerate_degree(int remaining, int var, std::vector<std::uint8_t>& alpha) {
    if (var == d_ - 1) {
      alpha[var] = static_cast<std::uint8_t>(remaining);
      exps_.insert(exps_.end(), alpha.begin(), alpha.end());
      int k = 0;
      for (auto x : alpha) k += x;
      degree_.push_back(k);
      alpha[var] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      alpha[var] = static_cast<std::uint8_t>(e);
      enumerate_degree(remaining - e, var + 1, alpha);
    }
    alpha[var] = 0;
  }

  int d_;
  int K_;
  std::vector<std::uint8_t> exps_;
  std::vector<int> degree_;
  std::vector<int> count_upto_;
  std::vector<std::vector<int>> mul_;
  std::vector<int> raise_;
};

/// Shared, lazily built basis for (d, K). Thread-safe.
inline std::shared_ptr<const MonomialBasis> monomial_basis(int dimension, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dimension, order}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(dimension, order);
  return slot;
}

namespace detail {

// out[0..count(K)) += a * b truncated at total degree K; a and b must hold at
// least count(K) coefficients each.
inline void mul_accumulate(const MonomialBasis& basis, int K, std::span<const double> a,
                           std::span<const double> b, std::span<double> out, double sign = 1.0) {
  const int na = basis.count_upto(K);
  for (int i = 0; i < na; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const double s = sign * ai;
    const int nb = basis.count_upto(K - basis.degree(i));
    const int* idx = basis.products(i).data();
    const double* bp = b.data();
    double* op = out.data();
    for (int j = 0; j < nb; ++j) op[idx[j]] += s * bp[j];
  }
}

}  // namespace detail

class TaylorPoly {
 public:
  TaylorPoly() = default;

  TaylorPoly(int dimension, int order)
      : basis_(monomial_basis(dimension, std::max(order, 0))),
        order_(order),
        c_(basis_->count_upto(order), 0.0) {
    if (order < 0) throw InvalidInput("TaylorPoly: negative order");
  }

  static TaylorPoly constant(int dimension, int order, double value) {
    TaylorPoly p(dimension, order);
    p.c_[0] = value;
    return p;
  }

  /// The coordinate function x_i = x0_i + h_i expanded at x0.
  static TaylorPoly coordinate(int dimension, int order, int var, double x0) {
    TaylorPoly p = constant(dimension, order, x0);
    if (order >= 1) p.c_[1 + var] = 1.0;
    return p;
  }

  int dimension() const noexcept { return basis_ ? basis_->dimension() : 0; }
  int order() const noexcept { return order_; }
  const MonomialBasis& basis() const { return *basis_; }
  std::span<const double> coefficients() const noexcept { return c_; }
  std::span<double> coefficients() noexcept { return c_; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  double& operator[](int a) { return c_[a]; }
  double operator[](int a) const { return c_[a]; }

  /// Partial derivative d^alpha f at the expansion point.
  double partial(std::span<const int> alpha) const {
    const int a = basis_->index_of(alpha);
    if (a < 0) throw InvalidInput("TaylorPoly::partial: multi-index exceeds the jet order");
    double fact = 1.0;
    for (int x : alpha)
      for (int i = 2; i <= x; ++i) fact *= i;
    return c_[a] * fact;
  }

  TaylorPoly truncated(int order) const {
    if (order > order_) throw InvalidInput("TaylorPoly::truncated: cannot raise the order");
    TaylorPoly p(dimension(), order);
    std::copy_n(c_.begin(), p.c_.size(), p.c_.begin());
    return p;
  }

  /// d/dx_m, one order lower.
  TaylorPoly derivative(int m) const {
    if (order_ == 0) throw InvalidInput("TaylorPoly::derivative: order-0 jet");
    TaylorPoly p(dimension(), order_ - 1);
    for (std::size_t a = 0; a < p.c_.size(); ++a) {
      const int up = basis_->raised(m, static_cast<int>(a));
      p.c_[a] = (basis_->exponent(static_cast<int>(a), m) + 1) * c_[up];
    }
    return p;
  }

  /// Sums truncate to the smaller order, like products.
  TaylorPoly& operator+=(const TaylorPoly& o) {
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  TaylorPoly& operator-=(const TaylorPoly& o) {
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  TaylorPoly& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }

  friend TaylorPoly operator+(TaylorPoly a, const TaylorPoly& b) { return a += b; }
  friend TaylorPoly operator-(TaylorPoly a, const TaylorPoly& b) { return a -= b; }
  friend TaylorPoly operator*(TaylorPoly a, double s) { return a *= s; }
  friend TaylorPoly operator*(double s, TaylorPoly a) { return a *= s; }
  friend TaylorPoly operator-(TaylorPoly a) { return a *= -1.0; }

  /// Product truncated at the smaller of the two orders.
  friend TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b) {
    const int K = std::min(a.order_, b.order_);
    TaylorPoly p(a.dimension(), K);
    detail::mul_accumulate(*monomial_basis(a.dimension(), K), K, a.c_, b.c_, p.c_);
    return p;
  }

  /// 1/f by the geometric series in the non-constant part.
  TaylorPoly reciprocal() const {
    const double f0 = value();
    if (f0 == 0.0) throw InvalidInput("TaylorPoly::reciprocal: zero constant term");
    TaylorPoly u = *this * (1.0 / f0);
    u.c_[0] = 0.0;
    TaylorPoly sum = constant(dimension(), order_, 1.0);
    TaylorPoly power = sum;
    for (int k = 1; k <= order_; ++k) {
      power = power * u;
      power *= -1.0;
      sum += power;
    }
    return sum * (1.0 / f0);
  }

  /// Evaluates the truncated polynomial at displacement h.
  double evaluate(std::span<const double> h) const {
    double s = 0.0;
    for (std::size_t a = 0; a < c_.size(); ++a) {
      double term = c_[a];
      if (term == 0.0) continue;
      for (int i = 0; i < dimension(); ++i)
        for (int e = basis_->exponent(static_cast<int>(a), i); e > 0; --e) term *= h[i];
      s += term;
    }
    return s;
  }

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  int order_ = 0;
  std::vector<double> c_;
};

/**
 * A dense tensor of Taylor polynomials of one common order, in the same
 * component layout as DenseTensor. Also used for the (1,2) Christoffel array
 * Gamma[k, i, j] = Gamma^k_{ij}, which is not a tensor but shares the storage.
 */
class JetTensor {
 public:
  JetTensor() = default;

  JetTensor(int contravariant, int covariant, int dimension, int order)
      : contra_(contravariant),
        cov_(covariant),
        dim_(dimension),
        order_(order),
        basis_(monomial_basis(dimension, std::max(order, 0))),
        stride_(basis_->count_upto(order)),
        components_(ipow(dimension, contravariant + covariant)),
        data_(components_ * stride_, 0.0) {
    if (order < 0) throw InvalidInput("JetTensor: negative order");
  }

  int contravariant_arity() const noexcept { return contra_; }
  int covariant_arity() const noexcept { return cov_; }
  int dimension() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  std::size_t component_count() const noexcept { return components_; }
  std::size_t coefficient_count() const noexcept { return stride_; }
  const MonomialBasis& basis() const { return *basis_; }

  std::span<const double> poly(std::size_t component) const {
    return {data_.data() + component * stride_, stride_};
  }
  std::span<double> poly(std::size_t component) { return {data_.data() + component * stride_, stride_}; }

  void set(std::size_t component, const TaylorPoly& p) {
    if (p.order() < order_) throw InvalidInput("JetTensor::set: polynomial order too low");
    std::copy_n(p.coefficients().begin(), stride_, poly(component).begin());
  }

  TaylorPoly get(std::size_t component) const {
    TaylorPoly p(dim_, order_);
    std::copy_n(poly(component).begin(), stride_, p.coefficients().begin());
    return p;
  }

  bool is_zero(std::size_t component) const {
    for (double x : poly(component))
      if (x != 0.0) return false;
    return true;
  }

  /// Component values at the expansion point.
  DenseTensor value() const {
    DenseTensor T(contra_, cov_, dim_);
    for (std::size_t c = 0; c < components_; ++c) T[c] = data_[c * stride_];
    return T;
  }

 private:
  int contra_ = 0;
  int cov_ = 0;
  int dim_ = 1;
  int order_ = 0;
  std::shared_ptr<const MonomialBasis> basis_;
  std::size_t stride_ = 0;
  std::size_t components_ = 0;
  std::vector<double> data_;
};

/// Christoffel symbols Gamma^k_{ij} as a (1,2)-shaped jet, layout [k, i, j].
using ChristoffelJet = JetTensor;

/**
 * Coordinate covariant derivative of a polynomial tensor field:
 *   (nabla T)[.., m, ..] = d_m T + sum_upper Gamma^q_{m p} T[..p..]
 *                                - sum_lower Gamma^p_{m q} T[..p..].
 * The new covariant slot is inserted first among the covariant slots. The
 * result has order T.order() - 1; gamma must have at least that order.
 */
inline JetTensor covariant_derivative(const JetTensor& T, const ChristoffelJet& gamma) {
  const int d = T.dimension();
  const int K = T.order() - 1;
  if (K < 0) throw InvalidInput("covariant_derivative: jet order exhausted");
  if (gamma.dimension() != d || gamma.order() < K)
    throw InvalidInput("covariant_derivative: Christoffel jet order too low");

  const int a = T.contravariant_arity();
  const int b = T.covariant_arity();
  const int slots = a + b;
  JetTensor out(a, b + 1, d, K);
  const MonomialBasis& big = *monomial_basis(d, T.order());
  const MonomialBasis& basis = *monomial_basis(d, K);
  const int n_out = basis.count_upto(K);

  std::vector<std::size_t> stride(slots);
  for (int s = 0; s < slots; ++s) stride[s] = ipow(d, slots - 1 - s);
  const std::size_t lo_span = ipow(d, b);
  const std::size_t gdd = static_cast<std::size_t>(d) * d;

  std::vector<bool> gamma_zero(gamma.component_count());
  for (std::size_t c = 0; c < gamma.component_count(); ++c) gamma_zero[c] = gamma.is_zero(c);

  for (std::size_t I = 0; I < T.component_count(); ++I) {
    const auto t = T.poly(I);
    const std::size_t hi = I / lo_span;
    const std::size_t lo = I % lo_span;
    for (int m = 0; m < d; ++m) {
      auto o = out.poly((hi * d + m) * lo_span + lo);
      for (int c = 0; c < n_out; ++c) {
        const int up = big.raised(m, c);
        o[c] += (big.exponent(c, m) + 1) * t[up];
      }
    }
    // Each correction term of output (m, J) reads T at the component J with
    // one slot replaced; iterate from the source side instead: the source
    // component I contributes to every J that differs from I in one slot.
    for (int s = 0; s < slots; ++s) {
      const int p = static_cast<int>((I / stride[s]) % d);
      for (int q = 0; q < d; ++q) {
        const std::size_t J = I + (static_cast<std::ptrdiff_t>(q) - p) * static_cast<std::ptrdiff_t>(stride[s]);
        const std::size_t Jhi = J / lo_span;
        const std::size_t Jlo = J % lo_span;
        for (int m = 0; m < d; ++m) {
          // upper slot q: + Gamma^q_{m p};  lower slot q: - Gamma^p_{m q}
          const std::size_t g = s < a ? static_cast<std::size_t>(q) * gdd + static_cast<std::size_t>(m) * d + p
                                      : static_cast<std::size_t>(p) * gdd + static_cast<std::size_t>(m) * d + q;
          if (gamma_zero[g]) continue;
          auto o = out.poly((Jhi * d + m) * lo_span + Jlo);
          detail::mul_accumulate(basis, K, gamma.poly(g), t, o, s < a ? 1.0 : -1.0);
        }
      }
    }
  }
  return out;
}

/**
 * Curvature components from a Christoffel jet of order K+1, as a (1,3) jet
 * of order K in [l, i, j, k] layout:
 *   R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
 *             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik},
 * i.e. R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
 */
inline JetTensor curvature_jet_field(const ChristoffelJet& gamma) {
  const int d = gamma.dimension();
  const int K = gamma.order() - 1;
  if (K < 0) throw InvalidInput("curvature: Christoffel jet must have order >= 1");
  const MonomialBasis& big = *monomial_basis(d, gamma.order());
  const MonomialBasis& basis = *monomial_basis(d, K);
  const int n_out = basis.count_upto(K);
  auto G = [&](int k, int i, int j) {
    return gamma.poly((static_cast<std::size_t>(k) * d + i) * d + j);
  };
  auto at = [&](int l, int i, int j, int k) { return ((static_cast<std::size_t>(l) * d + i) * d + j) * d + k; };
  // Only i < j is computed; the (i, j) antisymmetry is imposed exactly.
  JetTensor R(1, 3, d, K);
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          auto o = R.poly(at(l, i, j, k));
          const auto gjk = G(l, j, k);
          const auto gik = G(l, i, k);
          for (int c = 0; c < n_out; ++c) {
            o[c] += (big.exponent(c, i) + 1) * gjk[big.raised(i, c)] -
                    (big.exponent(c, j) + 1) * gik[big.raised(j, c)];
          }
          for (int m = 0; m < d; ++m) {
            detail::mul_accumulate(basis, K, G(l, i, m), G(m, j, k), o, 1.0);
            detail::mul_accumulate(basis, K, G(l, j, m), G(m, i, k), o, -1.0);
          }
          auto mirror = R.poly(at(l, j, i, k));
          for (std::size_t c = 0; c < o.size(); ++c) mirror[c] = -o[c];
        }
  return R;
}

}  // namespace expmap
