#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

using namespace spike_regions;
using testing_util::Q;

namespace {

Network<Rational> ramp_net(const Rational& gamma, std::size_t cells) {
  auto f = [gamma](std::span<const Rational> x) { return Rational(gamma * x[0]); };
  return step_network(grid_approximant<Rational>(f, {{Q(0), Q(1)}}, cells));
}

// Staircase target written out directly from its defining formula.
double staircase_direct(double x, long K, double eps) {
  const double d = eps / 100;
  const long k = std::lround(x);
  if (std::abs(x - static_cast<double>(k)) < d && k >= 0 && k <= K)
    return 100 * x + eps * (static_cast<double>(k) + 0.5) - 100 * static_cast<double>(k);
  return eps * std::ceil(x);
}

// Midpoint rule on a fine uniform grid over each transition window; the
// step net equals k eps on [k-1, k) by construction.
double staircase_l2_quadrature(long K, double eps) {
  const double d = eps / 100;
  const int M = 200000;
  double total = 0;
  for (long k = 0; k <= K; ++k) {
    const double a = k == 0 ? 0.0 : k - d, b = k == K ? static_cast<double>(K) : k + d;
    const double h = (b - a) / M;
    for (int i = 0; i < M; ++i) {
      const double x = a + (i + 0.5) * h;
      const double net = x < static_cast<double>(K) ? eps * (std::floor(x) + 1) : 0.0;
      const double e = staircase_direct(x, K, eps) - net;
      total += e * e * h;
    }
  }
  return total;
}

}  // namespace

TEST(SupError, RampMatchesHalfCellSlope) {
  const Domain1D<Rational> dom{Q(0), Q(1)};
  EXPECT_EQ(sup_error_exact(ramp_net(Q(1), 1), ramp_target(Q(1), Q(0), Q(1)), dom), Q(1, 2));
  EXPECT_EQ(sup_error_exact(ramp_net(Q(4), 2), ramp_target(Q(4), Q(0), Q(1)), dom), Q(1));
  for (std::size_t N = 1; N <= 12; ++N)
    EXPECT_EQ(sup_error_exact(ramp_net(Q(3), N), ramp_target(Q(3), Q(0), Q(1)), dom),
              Q(3) / Rational(static_cast<long>(2 * N)));
}

TEST(SupError, ConstantTargetIsExact) {
  auto f = [](std::span<const Rational>) { return Q(5, 3); };
  const auto net = step_network(grid_approximant<Rational>(f, {{Q(-1), Q(2)}}, 4));
  EXPECT_EQ(sup_error_exact(net, constant_target(Q(5, 3), Q(-1), Q(2)), Domain1D<Rational>{Q(-1), Q(2)}), Q(0));
}

TEST(SupError, ClosedDomainSeesOutsideValue) {
  // At x = hi the step net returns its outside value 0.
  const Domain1D<Rational> closed{Q(0), Q(1), true};
  EXPECT_EQ(sup_error_exact(ramp_net(Q(1), 4), ramp_target(Q(1), Q(0), Q(1)), closed), Q(1));
}

TEST(SupError, DimensionChecks) {
  const auto net2 = indicator_network(PolyhedronSpec<Rational>{Matrix<Rational>{{Q(1), Q(1)}}, {Q(0)}});
  EXPECT_THROW(sup_error_exact(net2, ramp_target(Q(1), Q(0), Q(1)), Domain1D<Rational>{Q(0), Q(1)}),
               DimensionError);
  EXPECT_THROW(sup_error_exact(ramp_net(Q(1), 2), ramp_target(Q(1), Q(0), Q(1)), Domain1D<Rational>{Q(1), Q(0)}),
               ValidationError);
}

TEST(L2Error, RampClosedForm) {
  // Each cell of width h contributes gamma^2 h^3 / 12.
  for (std::size_t N : {1u, 2u, 5u}) {
    const Rational h = Q(1) / Rational(static_cast<long>(N));
    EXPECT_EQ(l2_error_exact(ramp_net(Q(2), N), ramp_target(Q(2), Q(0), Q(1)), Domain1D<Rational>{Q(0), Q(1)}),
              Q(4) * h * h * h / Q(12) * Rational(static_cast<long>(N)));
  }
}

TEST(L2Error, StaircaseAgreesWithQuadrature) {
  for (long K : {1L, 2L, 4L, 7L})
    for (const char* e : {"1/10", "1/4", "1/2"}) {
      const Rational eps = testing_util::R(e);
      const Rational exact = l2_error_staircase(staircase_net(K, eps), K, eps);
      const double quad = staircase_l2_quadrature(K, eps.convert_to<double>());
      EXPECT_NEAR(exact.convert_to<double>(), quad, 1e-6 * quad) << "K=" << K << " eps=" << e;
    }
}

TEST(L2Error, StaircaseClosedFormValue) {
  EXPECT_EQ(l2_error_staircase(staircase_net(4, Q(1, 10)), 4, Q(1, 10)), Q(1, 150000));
  for (long K = 1; K <= 6; ++K)
    EXPECT_EQ(l2_error_staircase(staircase_net(K, Q(1, 5)), K, Q(1, 5)), Rational(K) * Q(1, 125) / Q(600));
}

TEST(L2Error, ConstantShiftGrowsByTotalMeasure) {
  const long K = 4;
  const Rational eps = Q(1, 10), c = Q(3, 7);
  const auto net = staircase_net(K, eps);
  auto shifted = staircase_target(K, eps);
  for (auto& p : shifted.pieces) p.intercept += c;
  const Domain1D<Rational> dom{Q(0), Rational(K), true};
  const Rational base = l2_error_exact(net, staircase_target(K, eps), dom);
  const Rational moved = l2_error_exact(net, shifted, dom);
  // cross term: 2c * integral of (target - net); the remainder is c^2 K
  const Rational cross = moved - base - c * c * Rational(K);
  auto linear = [&](const Rational& s) {
    auto t = staircase_target(K, eps);
    for (auto& p : t.pieces) p.intercept += s;
    return l2_error_exact(net, t, dom) - base - s * s * Rational(K);
  };
  EXPECT_EQ(linear(Q(2) * c), Q(2) * cross);
  EXPECT_EQ(linear(-c), -cross);
}

TEST(Staircase, TargetValidation) {
  EXPECT_THROW(staircase_target(0, Q(1, 10)), ValidationError);
  EXPECT_THROW(staircase_target(3, Q(0)), ValidationError);
  EXPECT_THROW(staircase_target(3, Q(1)), ValidationError);
  const auto t = staircase_target(3, Q(1, 10));
  EXPECT_EQ(t(Q(1, 2)), Q(1, 10));
  EXPECT_EQ(t(Q(3, 2)), Q(2, 10));
  EXPECT_EQ(t(Q(1)), Q(1, 10) * Q(3, 2));
}

TEST(Staircase, NetTakesStepValues) {
  const auto net = staircase_net(5, Q(1, 3));
  for (long k = 1; k <= 5; ++k) {
    EXPECT_EQ(detail::realize_scalar(net, Rational(k - 1)), Q(k, 3));
    EXPECT_EQ(detail::realize_scalar(net, Rational(k) - Q(1, 1000)), Q(k, 3));
  }
  EXPECT_EQ(detail::realize_scalar(net, Q(5)), Q(0));
}

TEST(Scaling, SupErrorInverseInWidth) {
  const Rational gamma = Q(5, 2);
  for (std::size_t w = 2; w <= 20; ++w) {
    const auto err = sup_error_exact(ramp_net(gamma, w - 1), ramp_target(gamma, Q(0), Q(1)),
                                     Domain1D<Rational>{Q(0), Q(1)});
    EXPECT_EQ(err, gamma / Rational(static_cast<long>(2 * (w - 1))));
  }
}

TEST(FloatMode, MatchesExactWithinTolerance) {
  const auto exact = l2_error_staircase(staircase_net(3, Q(1, 4)), 3, Q(1, 4));
  const double fl = l2_error_staircase(staircase_net(3, 0.25), 3, 0.25);
  EXPECT_NEAR(fl, exact.convert_to<double>(), 1e-12);
}
