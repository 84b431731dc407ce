#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "presto/controller.hpp"
#include "presto/errors.hpp"

using namespace presto;

namespace {

TsmcGains gains71() {
  TsmcGains g;
  g.alphas = {100.0};
  g.betas = {9.0};
  g.exps = {{3, 5}, {1, 3}};
  g.delta = 5.0;
  g.mu = 1e-4;
  return g;
}

TsmcGains gains72() {
  TsmcGains g;
  g.alphas = {4.9};
  g.betas = {3.0};
  g.exps = {{3, 5}, {1, 3}};
  g.delta = 3.0;
  g.mu = 0.01;
  g.tau = 3.7;
  g.sat = SaturationBounds{-30.0, 10.0};
  return g;
}

}  // namespace

TEST_SUITE("controller") {

TEST_CASE("n = 2 sliding stack") {
  const TsmcGains g = gains71();
  auto z = sliding_stack_n2({0.0, 0.0}, 0.0, g);
  CHECK(z.s_values[0] == 0.0);
  CHECK(z.s_values[1] == 0.0);
  auto a = sliding_stack_n2({1.0, 5.0}, 0.0, g);
  CHECK(a.s_values[0] == 1.0);
  CHECK(a.sdot_values[0] == 5.0);
  CHECK(a.s_values[1] == doctest::Approx(114.0));
  CHECK(sliding_stack_n2({-1.0, -5.0}, 0.0, g).s_values[1] == doctest::Approx(-114.0));
  CHECK(sliding_stack_n2({1.0, 5.0}, 0.25, g).s_values[1] == doctest::Approx(114.25));
}

TEST_CASE("tsmc law at the reference state") {
  const TsmcGains g = gains71();
  const PlantParams pp;
  const auto stack = sliding_stack_n2({1.0, 5.0}, 0.0, g);
  // canonical form x2' = f + b u + d with f = -K1 x1 - K2 x1^3, b = -g
  const double f = -97.4 + 19.97;
  const double b = 1.09;
  const double expect = -(f + 100.0 * 5.0 + 9.0 * 0.6 * 5.0 + 0.0 + 5.0 * 114.0 + 1e-4 * std::cbrt(114.0)) / b;
  const double u = tsmc_control({1.0, 5.0}, 0.0, stack, pp, g);
  CHECK(u == doctest::Approx(expect).epsilon(1e-9));

  // linear in d_hat with slope -1/b
  const double d = 2.5;
  const double u1 = tsmc_control({1.0, 5.0}, d, stack, pp, g);
  const double u2 = tsmc_control({1.0, 5.0}, 2.0 * d, stack, pp, g);
  CHECK(u2 - u1 == doctest::Approx(-d / b).epsilon(1e-9));

  // closed loop: x2' = f + b u + d_hat gives s2' = -delta s2 - mu s2^{1/3}
  const double x2dot = f + b * u;
  const double s2dot = x2dot + 100.0 * 5.0 + 9.0 * 0.6 * 5.0;
  CHECK(s2dot == doctest::Approx(-5.0 * 114.0 - 1e-4 * std::cbrt(114.0)).epsilon(1e-9));
}

TEST_CASE("tsmc law at the origin and singular input") {
  const TsmcGains g = gains71();
  PlantParams pp;
  CHECK(tsmc_control({0.0, 0.0}, 0.0, sliding_stack_n2({0.0, 0.0}, 0.0, g), pp, g) == 0.0);
  CHECK(ddt_signed_pow(0.0, 5.0, {3, 5}) == 0.0);
  CHECK(ddt_signed_pow(1e-13, 5.0, {3, 5}) == 0.0);
  CHECK(std::isfinite(tsmc_control({0.0, 3.0}, 1.0, sliding_stack_n2({0.0, 3.0}, 0.0, g), pp, g)));
  CHECK(std::isfinite(tsmc_control({1e-11, 3.0}, 1.0, sliding_stack_n2({1e-11, 3.0}, 0.0, g), pp, g)));
  pp.g = 0.0;
  CHECK_THROWS_AS(tsmc_control({1.0, 1.0}, 0.0, sliding_stack_n2({1.0, 1.0}, 0.0, g), pp, g), SingularInputError);
}

TEST_CASE("gain gate") {
  TsmcGains g = gains71();
  CHECK_NOTHROW(g.validate());
  g.exps[0] = {1, 3};
  try {
    g.validate();
    FAIL("expected rejection");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("p1/q1 > 1/2") != std::string::npos);
  }
  g = gains71();
  g.delta = 0.0;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = gains71();
  g.exps[1] = {3, 3};
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = gains72();
  g.sat = SaturationBounds{1.0, 10.0};
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = gains71();
  g.alphas = {1.0, 2.0};
  CHECK_THROWS_AS(g.validate(), DomainError);
}

TEST_CASE("saturation") {
  const SaturationBounds sat{-30.0, 10.0};
  CHECK(saturate(5.0, sat) == 5.0);
  CHECK(saturate(50.0, sat) == 10.0);
  CHECK(saturate(-100.0, sat) == -30.0);
  CHECK(regularized_input(10.0, -1.09, 3.7) == doctest::Approx(-2.2298).epsilon(1e-4));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = 1e3 * u(rng), b = 5.0 * u(rng), tau = 0.01 + 10.0 * std::fabs(u(rng));
    CHECK(std::fabs(regularized_input(v, b, tau)) <= std::fabs(v) / (2.0 * std::sqrt(tau)) * (1.0 + 1e-12));
  }
}

TEST_CASE("saturated law") {
  const TsmcGains g = gains72();
  const PlantParams pp;
  auto zero = saturated_tsmc_control({0.0, 0.0}, 0.0, sliding_stack_n2({0.0, 0.0}, 0.0, g), pp, g);
  CHECK(zero.v_r == 0.0);
  CHECK(zero.u_c == 0.0);
  CHECK(zero.u == 0.0);

  const auto st = sliding_stack_n2({1.0, 5.0}, 0.0, g);
  const auto cmd = saturated_tsmc_control({1.0, 5.0}, 0.4, st, pp, g);
  const double s2 = 5.0 + 4.9 + 3.0;
  const double vr = -(-97.4 + 19.97) - 4.9 * 5.0 - 3.0 * 0.6 * 5.0 - 0.4 - 3.0 * s2 - 0.01 * std::cbrt(s2);
  CHECK(cmd.v_r == doctest::Approx(vr).epsilon(1e-12));
  CHECK(cmd.u_c == doctest::Approx(1.09 * vr / (1.09 * 1.09 + 3.7)).epsilon(1e-12));
  CHECK(cmd.u == saturate(cmd.u_c, *g.sat));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const State2 x{u(rng) * 0.1, u(rng)};
    const auto c = saturated_tsmc_control(x, u(rng), sliding_stack_n2(x, 0.01 * u(rng), g), pp, g);
    CHECK(c.u >= -30.0);
    CHECK(c.u <= 10.0);
  }
}

TEST_CASE("generic stack reproduces the n = 2 stack") {
  const TsmcGains g = gains71();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    const double e[] = {u(rng), u(rng) * 5.0};
    const double s_obs = 0.1 * u(rng);
    const auto gen = sliding_stack(e, s_obs, g);
    const auto ref = sliding_stack_n2({e[0], e[1]}, s_obs, g);
    CHECK(gen.stack.s_values[0] == doctest::Approx(ref.s_values[0]));
    CHECK(gen.stack.s_values[1] == doctest::Approx(ref.s_values[1]).epsilon(1e-12));
    const double ff = 100.0 * e[1] + 9.0 * ddt_signed_pow(e[0], e[1], {3, 5});
    CHECK(gen.feedforward == doctest::Approx(ff).epsilon(1e-12));
    const PlantParams pp;
    CHECK(tsmc_control_canonical(pp.drift(e[0]), pp.input_gain(), 0.3, gen, g) ==
          doctest::Approx(tsmc_control({e[0], e[1]}, 0.3, ref, pp, g)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sliding_stack(std::vector<double>{1.0}, 0.0, g), DomainError);
}

TEST_CASE("generic stack derivatives at n = 3 match finite differences") {
  TsmcGains g;
  g.alphas = {2.0, 3.0};
  g.betas = {1.5, 0.7};
  g.exps = {{5, 7}, {3, 5}, {1, 3}};
  CHECK_NOTHROW(g.validate());

  // smooth error trajectory and its first three derivatives
  auto e = [](double t, int k) {
    switch (k) {
      case 0: return std::sin(t) + 0.3 * t * t + 0.5;
      case 1: return std::cos(t) + 0.6 * t;
      case 2: return -std::sin(t) + 0.6;
      default: return -std::cos(t);
    }
  };
  auto stack_at = [&](double t) {
    const double d[] = {e(t, 0), e(t, 1), e(t, 2)};
    return sliding_stack(d, 0.0, g);
  };
  const double h = 1e-4;
  for (double t : {0.3, 0.9, 1.7, 2.4}) {
    const auto mid = stack_at(t);
    const auto up = stack_at(t + h), dn = stack_at(t - h);
    const double s2dot_fd = (up.stack.s_values[1] - dn.stack.s_values[1]) / (2 * h);
    CHECK(mid.stack.sdot_values[1] == doctest::Approx(s2dot_fd).epsilon(1e-6));

    auto P = [&](double tt) { return signed_pow(e(tt, 0), g.exps[0]); };
    auto Q = [&](double tt) { return signed_pow(stack_at(tt).stack.s_values[1], g.exps[1]); };
    const double ff = g.alphas[0] * e(t, 2) + g.betas[0] * (P(t + h) - 2 * P(t) + P(t - h)) / (h * h) +
                      g.alphas[1] * s2dot_fd + g.betas[1] * (Q(t + h) - Q(t - h)) / (2 * h);
    CHECK(mid.feedforward == doctest::Approx(ff).epsilon(1e-5));

    // s3 = s2' + alpha2 s2 + beta2 s2^{3/5}
    const double s2 = mid.stack.s_values[1];
    CHECK(mid.stack.s_values[2] == doctest::Approx(s2dot_fd + 3.0 * s2 + 0.7 * signed_pow(s2, {3, 5})).epsilon(1e-6));
  }
}

TEST_CASE("baseline SMC") {
  const SmcGains g;
  const PlantParams pp;
  const auto z = smc_control({0.0, 0.0}, g, pp, 97.4);
  CHECK(z.s == 0.0);
  CHECK(z.u_eq == 0.0);
  CHECK(z.u_c == 0.0);
  CHECK(z.u == 0.0);

  SmcGains y1 = g;
  y1.Y = 1.0;
  const auto c = smc_control({1.0, 0.0}, y1, pp, 97.4);
  CHECK(c.s == 1.0);
  CHECK(c.u_eq == doctest::Approx((0.0 - 97.4 + 19.97) / -1.09).epsilon(1e-12));
  CHECK(c.u_c == doctest::Approx((2.6 + y1.Kg) / -1.09).epsilon(1e-9));
  CHECK(c.u == doctest::Approx(c.u_eq + c.u_c));

  SmcGains bad = g;
  bad.Kg = 0.5 * bad.eta;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  PlantParams p0;
  p0.g = 0.0;
  CHECK_THROWS_AS(smc_control({1.0, 0.0}, g, p0, 97.4), SingularInputError);
}

TEST_CASE("SMC reaching condition with d = 0") {
  const SmcGains g;
  const PlantParams pp;
  const double dt = 1e-4;
  const double band = 50.0 * dt * (g.Kg + 10.0);
  State2 x{1.0, 5.0};
  for (int i = 0; i < 30000; ++i) {
    const auto cmd = smc_control(x, g, pp, 97.4);
    const auto xd = plant_derivative(x, cmd.u, 0.0, pp);
    const double sdot = xd[1] + g.Y * xd[0];
    if (std::fabs(cmd.s) > band) CHECK(cmd.s * sdot <= -g.eta * std::fabs(cmd.s) + 1e-9);
    x = plant_step(x, cmd.u, 0.0, pp, dt);
  }
}

}
