#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "expmap/expmap.hpp"
#include "test_support.hpp"

using namespace expmap;
using expmap::testing::base_point;
using expmap::testing::random_vector;
using expmap::testing::with_length;
using expmap::testing::zoo_models;

TEST(Evaluator, FlatSpaceGivesIdentity) {
  const auto jet = curvature_jet(*flat(3), Point::Zero(3), 8);
  const TangentVector v = TangentVector::Constant(3, 0.7);
  for (int N : {0, 1, 5, 10}) {
    EXPECT_EQ(evaluate_closed_form(jet, v, N).op, identity_operator(3));
    EXPECT_EQ(evaluate_recurrence(jet, v, N).op, identity_operator(3));
  }
}

TEST(Evaluator, DegreeAtMostOneIsIdentity) {
  const auto M = polynomial_connection(3, 3, 0.5, 42);
  const auto jet = curvature_jet(*M, Point::Zero(3), 0);
  const TangentVector v = TangentVector::Constant(3, 0.2);
  for (int N : {0, 1}) {
    const auto ev = evaluate_closed_form(jet, v, N);
    EXPECT_EQ(ev.op, identity_operator(3));
    EXPECT_EQ(static_cast<int>(ev.components.size()), N + 1);
  }
}

TEST(Evaluator, UnitSphereEigenvalues) {
  const auto M = sphere(2, 1.0);
  const Point p = Point::Zero(2);
  const auto jet = curvature_jet(*M, p, 8);
  const TangentVector v = with_length(*M, p, (TangentVector(2) << 1.0, 0.0).finished(), 0.5);
  const LinearOperator E = evaluate_closed_form(jet, v, 10).op;
  EXPECT_NEAR(E(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(E(1, 1), std::sin(0.5) / 0.5, 1e-8);
  EXPECT_NEAR(E(0, 1), 0.0, 1e-14);
  EXPECT_NEAR(E(1, 0), 0.0, 1e-14);
}

TEST(Evaluator, HyperbolicEigenvalues) {
  const auto M = hyperbolic(3);
  const Point p = Point::Zero(3);
  const auto jet = curvature_jet(*M, p, 8);
  const TangentVector v = with_length(*M, p, (TangentVector(3) << 0.0, 0.0, 1.0).finished(), 0.5);
  const LinearOperator E = evaluate_closed_form(jet, v, 10).op;
  EXPECT_NEAR(E(0, 0), std::sinh(0.5) / 0.5, 1e-8);
  EXPECT_NEAR(E(1, 1), std::sinh(0.5) / 0.5, 1e-8);
  EXPECT_NEAR(E(2, 2), 1.0, 1e-12);
}

TEST(Evaluator, ClosedFormEqualsRecurrence) {
  std::mt19937_64 rng(21);
  for (const auto& M : zoo_models())
    for (std::uint64_t s = 0; s < 3; ++s) {
      const Point p = base_point(*M, s);
      const auto jet = curvature_jet(*M, p, 8);
      const TangentVector v = random_vector(rng, M->dimension(), -0.3, 0.3);
      for (int N : {2, 5, 8, 10}) {
        const auto a = evaluate_closed_form(jet, v, N);
        const auto b = evaluate_recurrence(jet, v, N);
        EXPECT_LE(frobenius_norm(a.op - b.op), 1e-12 * (1 + frobenius_norm(a.op))) << M->name() << " N=" << N;
        for (int n = 0; n <= N; ++n)
          EXPECT_LE(frobenius_norm(a.components[n] - b.components[n]), 1e-13) << M->name() << " n=" << n;
      }
    }
}

TEST(Evaluator, SymmetricReductionOnSpaceForms) {
  std::mt19937_64 rng(22);
  for (const auto& M : {sphere(2, 1.0), hyperbolic(2), sphere(3, 2.0)}) {
    const Point p = base_point(*M, 0);
    const auto jet = curvature_jet(*M, p, 10);
    for (int trial = 0; trial < 5; ++trial) {
      const TangentVector v = with_length(*M, p, random_vector(rng, M->dimension()), 0.5);
      const LinearOperator series = evaluate_closed_form(jet, v, 12).op;
      const LinearOperator sym = evaluate_symmetric(jet, v, 5);
      EXPECT_LE(frobenius_norm(series - sym), 1e-9) << M->name();
    }
  }
}

TEST(Evaluator, OddComponentsVanishOnSpaceForms) {
  const auto M = sphere(3, 1.0);
  const auto jet = curvature_jet(*M, base_point(*M, 1), 8);
  const TangentVector v = TangentVector::Constant(3, 0.2);
  const auto ev = evaluate_closed_form(jet, v, 10);
  for (int n = 1; n <= 10; n += 2) EXPECT_LE(ev.per_degree_norms[n], 1e-12);
}

TEST(Evaluator, FirstComponentIsZeroAndSecondIsRZeroOverSix) {
  const auto M = polynomial_connection(3, 3, 0.5, 42);
  const auto jet = curvature_jet(*M, Point::Zero(3), 4);
  const TangentVector v = TangentVector::Constant(3, 0.2);
  const auto ev = evaluate_closed_form(jet, v, 6);
  EXPECT_EQ(ev.per_degree_norms[1], 0.0);
  EXPECT_LE(frobenius_norm(ev.components[2] - r_n(jet, v, 0) / 6.0), 1e-16);
  EXPECT_LE(frobenius_norm(ev.components[3] - r_n(jet, v, 1) / 12.0), 1e-16);
  EXPECT_EQ(ev.truncation_estimate, ev.per_degree_norms.back());
}

TEST(Evaluator, ComponentsAreHomogeneous) {
  std::mt19937_64 rng(23);
  const auto M = polynomial_connection(3, 3, 0.5, 42);
  const auto jet = curvature_jet(*M, base_point(*M, 3), 8);
  const TangentVector v = random_vector(rng, 3, -0.2, 0.2);
  const auto a = evaluate_closed_form(jet, 2.0 * v, 10);
  const auto b = evaluate_closed_form(jet, v, 10);
  for (int n = 0; n <= 10; ++n)
    EXPECT_LE(frobenius_norm(a.components[n] - std::pow(2.0, n) * b.components[n]),
              1e-12 * (1 + frobenius_norm(a.components[n])));
}

TEST(Evaluator, OdeResidual) {
  const auto M = polynomial_connection(3, 3, 0.5, 42);
  const auto jet = curvature_jet(*M, Point::Zero(3), 8);
  const TangentVector v = TangentVector::Constant(3, 0.3);
  EXPECT_EQ(ode_residual(jet, v, 8, 0.0), 0.0);
  EXPECT_EQ(ode_residual(curvature_jet(*flat(3), Point::Zero(3), 8), v, 8, 0.5), 0.0);

  // Residual is O(t^{N+1}) at least: fit the log-log slope.
  std::vector<double> ts = {0.05, 0.1, 0.2, 0.4}, res;
  for (double t : ts) res.push_back(ode_residual(jet, v, 8, t));
  EXPECT_GE(loglog_slope(ts, res), 8.5);
}

TEST(Evaluator, InsufficientJetOrderThrows) {
  const auto jet = curvature_jet(*sphere(2), Point::Zero(2), 3);
  const TangentVector v = TangentVector::Constant(2, 0.1);
  EXPECT_NO_THROW(evaluate_closed_form(jet, v, 5));
  EXPECT_THROW(evaluate_closed_form(jet, v, 6), InvalidInput);
  EXPECT_THROW(evaluate_recurrence(jet, v, 6), InvalidInput);
  EXPECT_THROW(evaluate_closed_form(jet, v, -1), InvalidInput);
  EXPECT_THROW(evaluate_closed_form(jet, TangentVector::Zero(3), 4), InvalidInput);
}

TEST(Evaluator, JsonArtifact) {
  const auto jet = curvature_jet(*sphere(2), Point::Zero(2), 4);
  const auto j = to_json(evaluate_closed_form(jet, TangentVector::Constant(2, 0.1), 6));
  EXPECT_EQ(j.at("max_degree"), 6);
  EXPECT_EQ(j.at("per_degree_norms").size(), 7u);
  EXPECT_EQ(operator_from_json(j.at("operator")).rows(), 2);
}
