#pragma once

/**
 * @file oracle.hpp
 * @brief Ground truth for E_p(v) by integrating the geodesic, parallel
 * transport and Jacobi equations in the chart with classical RK4.
 *
 * Nothing here touches the curvature jet at p: the connection and curvature
 * are sampled from the model at every stage point along the geodesic.
 */

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "expmap/error.hpp"
#include "expmap/geometry.hpp"
#include "expmap/manifold.hpp"
#include "expmap/tensor.hpp"

namespace expmap {

inline constexpr int kDefaultSteps = 2000;

struct GeodesicTrajectory {
  std::vector<double> t;
  std::vector<Point> position;
  std::vector<TangentVector> velocity;

  const Point& endpoint() const { return position.back(); }
};

/// Columns are the basis vectors of T_pM transported along the geodesic.
struct TransportFrame {
  std::vector<double> t;
  std::vector<LinearOperator> frame;
};

namespace detail {

enum class Parts { geodesic, frame, jacobi };

/**
 * Flat state [x, x', U, J, P] where U is the transport frame, J the Jacobi
 * fields for initial data J(0) = 0, DJ/dt(0) = e_c, and P = DJ/dt. Matrices
 * are stored column-major (Eigen default).
 */
class ChartSystem {
 public:
  ChartSystem(const ManifoldModel& M, Parts parts) : M_(M), d_(M.dimension()), parts_(parts) {}

  int size() const {
    const int dd = d_ * d_;
    switch (parts_) {
      case Parts::geodesic: return 2 * d_;
      case Parts::frame: return 2 * d_ + dd;
      case Parts::jacobi: return 2 * d_ + 3 * dd;
    }
    return 0;
  }

  Eigen::VectorXd initial(const Point& p, const TangentVector& v) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(size());
    y.head(d_) = p;
    y.segment(d_, d_) = v;
    const int dd = d_ * d_;
    if (parts_ != Parts::geodesic) mat(y, 0) = LinearOperator::Identity(d_, d_);
    if (parts_ == Parts::jacobi) {
      (void)dd;
      mat(y, 2) = LinearOperator::Identity(d_, d_);
    }
    return y;
  }

  // Block b of the matrix section: 0 = U, 1 = J, 2 = P.
  Eigen::Map<LinearOperator> mat(Eigen::VectorXd& y, int b) const {
    return Eigen::Map<LinearOperator>(y.data() + 2 * d_ + b * d_ * d_, d_, d_);
  }
  Eigen::Map<const LinearOperator> mat(const Eigen::VectorXd& y, int b) const {
    return Eigen::Map<const LinearOperator>(y.data() + 2 * d_ + b * d_ * d_, d_, d_);
  }

  Eigen::VectorXd rhs(double t, const Eigen::VectorXd& y) const {
    const Point x = y.head(d_);
    if (!M_.in_domain(x))
      throw ChartDomainError(M_.name() + ": geodesic left the chart domain at t = " + std::to_string(t), t);
    const TangentVector xd = y.segment(d_, d_);
    const bool need_R = parts_ == Parts::jacobi;
    const ChristoffelJet gjet = M_.christoffel_jet(x, need_R ? 1 : 0);
    const DenseTensor G = gjet.value();

    // A(u)^k = Gamma^k_{ij} x'^i u^j, as a matrix acting on u.
    LinearOperator A = LinearOperator::Zero(d_, d_);
    for (int k = 0; k < d_; ++k)
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) A(k, j) += G[(static_cast<std::size_t>(k) * d_ + i) * d_ + j] * xd[i];

    Eigen::VectorXd dy(size());
    dy.head(d_) = xd;
    dy.segment(d_, d_) = -A * xd;
    if (parts_ == Parts::geodesic) return dy;

    mat(dy, 0) = -A * mat(y, 0);
    if (parts_ == Parts::jacobi) {
      const DenseTensor R = curvature_jet_field(gjet).value();
      const LinearOperator S = sandwich_operator(R, xd);  // J -> R(x', J) x'
      mat(dy, 1) = mat(y, 2) - A * mat(y, 1);
      mat(dy, 2) = S * mat(y, 1) - A * mat(y, 2);
    }
    return dy;
  }

 private:
  const ManifoldModel& M_;
  int d_;
  Parts parts_;
};

/// Fixed-step classical RK4 on [0, T]; `observe` sees every grid node.
template <class System, class Observer>
Eigen::VectorXd rk4(const System& sys, Eigen::VectorXd y, double T, int steps, Observer&& observe) {
  const double h = T / steps;
  observe(0.0, y);
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const Eigen::VectorXd k1 = sys.rhs(t, y);
    const Eigen::VectorXd k2 = sys.rhs(t + 0.5 * h, y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = sys.rhs(t + 0.5 * h, y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = sys.rhs(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    observe(t + h, y);
  }
  return y;
}

inline void check_inputs(const ManifoldModel& M, const Point& p, const TangentVector& v, int steps) {
  if (steps <= 0) throw InvalidInput("integrator: step count must be positive");
  M.require_in_domain(p);
  if (v.size() != M.dimension()) throw InvalidInput("integrator: vector dimension mismatch");
  if (!v.allFinite()) throw InvalidInput("integrator: non-finite vector");
}

inline Eigen::VectorXd integrate(const ManifoldModel& M, Parts parts, const Point& p, const TangentVector& v,
                                 int steps) {
  check_inputs(M, p, v, steps);
  ChartSystem sys(M, parts);
  Eigen::VectorXd y = rk4(sys, sys.initial(p, v), 1.0, steps, [](double, const Eigen::VectorXd&) {});
  if (!M.in_domain(y.head(M.dimension())))
    throw ChartDomainError(M.name() + ": geodesic left the chart domain at t = 1", 1.0);
  return y;
}

}  // namespace detail

/// gamma(t) = Exp_p(t v) on [0, 1]; the endpoint approximates Exp_p(v).
inline GeodesicTrajectory integrate_geodesic(const ManifoldModel& M, const Point& p, const TangentVector& v,
                                             int steps = kDefaultSteps) {
  detail::check_inputs(M, p, v, steps);
  const int d = M.dimension();
  detail::ChartSystem sys(M, detail::Parts::geodesic);
  GeodesicTrajectory traj;
  detail::rk4(sys, sys.initial(p, v), 1.0, steps, [&](double t, const Eigen::VectorXd& y) {
    if (!M.in_domain(y.head(d)))
      throw ChartDomainError(M.name() + ": geodesic left the chart domain at t = " + std::to_string(t), t);
    traj.t.push_back(t);
    traj.position.push_back(y.head(d));
    traj.velocity.push_back(y.segment(d, d));
  });
  return traj;
}

/**
 * Parallel transport of the coordinate basis along `traj`, solving
 * u' + Gamma(x', u) = 0 jointly with the geodesic on the same grid.
 */
inline TransportFrame transport_frame(const ManifoldModel& M, const GeodesicTrajectory& traj) {
  if (traj.t.size() < 2) throw InvalidInput("transport_frame: trajectory needs at least one step");
  const int steps = static_cast<int>(traj.t.size()) - 1;
  const double T = traj.t.back();
  detail::ChartSystem sys(M, detail::Parts::frame);
  TransportFrame out;
  detail::rk4(sys, sys.initial(traj.position.front(), traj.velocity.front()), T, steps,
              [&](double t, const Eigen::VectorXd& y) {
                out.t.push_back(t);
                out.frame.push_back(sys.mat(y, 0));
              });
  return out;
}

/**
 * E_p(v) = I_p(v)^{-1} d_v Exp_p. Column c integrates D^2 J = R(x', J) x'
 * with J(0) = 0, DJ/dt(0) = e_c, so J(1) = d_v Exp_p e_c, then maps it back
 * with the inverse transport frame.
 */
inline LinearOperator oracle_E(const ManifoldModel& M, const Point& p, const TangentVector& v,
                               int steps = kDefaultSteps) {
  detail::ChartSystem sys(M, detail::Parts::jacobi);
  Eigen::VectorXd y = detail::integrate(M, detail::Parts::jacobi, p, v, steps);
  const LinearOperator U = sys.mat(y, 0);
  const LinearOperator J = sys.mat(y, 1);
  return U.partialPivLu().solve(J);
}

/// Exp_p(v) in chart coordinates.
inline Point exp_map(const ManifoldModel& M, const Point& p, const TangentVector& v, int steps = kDefaultSteps) {
  return detail::integrate(M, detail::Parts::geodesic, p, v, steps).head(M.dimension());
}

/**
 * Second oracle that avoids curvature altogether: differentiate the chart
 * endpoint Exp_p(v + s w) in s with a five-point stencil, then transport
 * back. Costlier and noisier than oracle_E.
 */
inline LinearOperator oracle_E_finite_difference(const ManifoldModel& M, const Point& p, const TangentVector& v,
                                                 int steps = kDefaultSteps, double h = 1e-3) {
  const int d = M.dimension();
  detail::ChartSystem sys(M, detail::Parts::frame);
  Eigen::VectorXd y = detail::integrate(M, detail::Parts::frame, p, v, steps);
  const LinearOperator U = sys.mat(y, 0);
  LinearOperator D(d, d);
  for (int c = 0; c < d; ++c) {
    const TangentVector e = TangentVector::Unit(d, c);
    const Point fp2 = exp_map(M, p, v + 2 * h * e, steps);
    const Point fp1 = exp_map(M, p, v + h * e, steps);
    const Point fm1 = exp_map(M, p, v - h * e, steps);
    const Point fm2 = exp_map(M, p, v - 2 * h * e, steps);
    D.col(c) = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
  }
  return U.partialPivLu().solve(D);
}

/**
 * (I_p(v)^{-1} R_{Exp_p v})(v, ., v): curvature sampled at the endpoint,
 * pulled back with the transport frame U, i.e. w -> U^{-1} R(Uv, Uw) Uv.
 */
inline LinearOperator transported_curvature(const ManifoldModel& M, const Point& p, const TangentVector& v,
                                            int steps = kDefaultSteps) {
  detail::ChartSystem sys(M, detail::Parts::frame);
  Eigen::VectorXd y = detail::integrate(M, detail::Parts::frame, p, v, steps);
  const int d = M.dimension();
  const LinearOperator U = sys.mat(y, 0);
  const DenseTensor R = curvature(M, y.head(d));
  const LinearOperator S = sandwich_operator(R, U * v);
  return U.partialPivLu().solve(S * U);
}

/// Central finite-difference weights for the derivative of order `order` on
/// integer offsets -half..half (Fornberg's recursion).
inline std::vector<double> central_difference_weights(int order, int half) {
  const int n = 2 * half + 1;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i - half;
  // c[j][k]: weight of node j for derivative k.
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  const double z = 0.0;
  double c4 = x[0] - z;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][order];
  return w;
}

struct Lemma2Result {
  int n = 0;
  LinearOperator lhs;
  LinearOperator rhs;
  double distance = 0.0;
};

/**
 * Compares d^n/dt^n of t -> Rt(tv) at t = 0, where Rt is the transported
 * curvature, with n(n-1) r_{n-2}(v).
 *
 * Rt(tv) = t^2 (I^{-1} R)(v, ., v), so by Leibniz its value and first
 * derivative vanish at 0 and lhs is exactly zero for n <= 1. For n >= 2 the
 * derivative comes from a 9-point central stencil on samples at t = k h,
 * h = fd_step / |v|, with one Richardson step between h and h/2.
 */
inline Lemma2Result lemma2_check(const ManifoldModel& M, const Point& p, const TangentVector& v, int n,
                                 int steps = kDefaultSteps, double fd_step = 1e-2) {
  if (n < 0 || n > 4) throw InvalidInput("lemma2_check: n must be in 0..4");
  const int d = M.dimension();
  if (v.size() != d) throw InvalidInput("lemma2_check: dimension mismatch");
  M.require_in_domain(p);

  Lemma2Result out;
  out.n = n;
  out.lhs = LinearOperator::Zero(d, d);
  out.rhs = LinearOperator::Zero(d, d);
  if (n >= 2) {
    const CurvatureJet jet = curvature_jet(M, p, n - 2);
    out.rhs = static_cast<double>(n * (n - 1)) * r_n(jet, v, n - 2);

    const double vnorm = v.norm();
    if (vnorm > 0.0) {
      constexpr int half = 4;
      const auto w = central_difference_weights(n, half);
      auto stencil = [&](double h) {
        LinearOperator D = LinearOperator::Zero(d, d);
        for (int k = -half; k <= half; ++k) {
          if (k == 0) continue;  // Rt(0) = 0
          D += w[k + half] * transported_curvature(M, p, (k * h) * v, steps);
        }
        return LinearOperator(D / std::pow(h, n));
      };
      // Symmetric 9-point stencils are accurate to the even order >= 9 - n.
      const int accuracy = (9 - n) % 2 == 0 ? 9 - n : 10 - n;
      const double h = fd_step / vnorm;
      const double gain = std::pow(2.0, accuracy);
      out.lhs = (gain * stencil(h / 2) - stencil(h)) / (gain - 1.0);
    }
  }
  out.distance = frobenius_norm(out.lhs - out.rhs);
  return out;
}

inline nlohmann::json to_json(const GeodesicTrajectory& traj) {
  auto pos = nlohmann::json::array();
  auto vel = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    pos.push_back(vector_to_json(traj.position[i]));
    vel.push_back(vector_to_json(traj.velocity[i]));
  }
  return {{"t", traj.t}, {"position", pos}, {"velocity", vel}};
}

inline nlohmann::json to_json(const TransportFrame& frame) {
  auto frames = nlohmann::json::array();
  for (const auto& U : frame.frame) frames.push_back(operator_to_json(U));
  return {{"t", frame.t}, {"frame", frames}};
}

inline nlohmann::json to_json(const Lemma2Result& r) {
  return {{"n", r.n},
          {"lhs", operator_to_json(r.lhs)},
          {"rhs", operator_to_json(r.rhs)},
          {"distance", r.distance}};
}

}  // namespace expmap
