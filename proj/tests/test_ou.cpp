#include <catch2/catch_amalgamated.hpp>

#include "cwi/contraction.hpp"
#include "cwi/moments.hpp"
#include "cwi/ou.hpp"
#include "cwi/quadrature.hpp"

using namespace cwi;

TEST_CASE("quadrature reproduces closed-form integrals") {
  REQUIRE(integrate([](double t) { return std::exp(-2.0 * t); }, 0.0, 10.0) ==
          Catch::Approx(0.5 * (1.0 - std::exp(-20.0))).epsilon(1e-12));
  REQUIRE(integrate([](double t) { return t * t * t; }, 0.0, 2.0) == Catch::Approx(4.0));
  // Richardson-style verification: halving the interval and summing agrees
  const auto f = [](double t) { return std::sin(3.0 * t) * std::exp(-t); };
  const double whole = integrate(f, 0.0, 5.0, 1e-13);
  const double split = integrate(f, 0.0, 2.1, 1e-13) + integrate(f, 2.1, 5.0, 1e-13);
  REQUIRE(whole == Catch::Approx(split).epsilon(1e-11));
}

TEST_CASE("OUConfig guards") {
  OUConfig cfg;
  cfg.gamma = cplx(1.0, 0.5);
  cfg.T = 4.0;
  cfg.dt = 1.0 / 64.0;
  REQUIRE_NOTHROW(cfg.validate());
  cfg.dt = 5.0;
  REQUIRE_THROWS_AS(cfg.validate(), input_error);
  cfg.dt = 1.0;  // e^{-2 dt} < 1/2 at lambda = 1
  REQUIRE_THROWS_AS(cfg.validate(), input_error);
  cfg.gamma = cplx(-1.0, 0.0);
  cfg.dt = 1.0 / 64.0;
  REQUIRE_THROWS_AS(cfg.validate(), input_error);
}

TEST_CASE("one-step transition has the stationary-increment variance") {
  OUConfig cfg;
  cfg.gamma = 1.0;
  cfg.T = 0.25;
  cfg.dt = 0.125;  // inspect z[1], one step from Z_0 = 0
  double acc = 0.0;
  const int count = 20000;
  for (int s = 0; s < count; ++s) acc += std::norm(simulate_ou(cfg, derive_seed(3, s)).z[1]);
  const double expect = (1.0 - std::exp(-2.0 * 0.125)) / 2.0;
  REQUIRE(acc / count == Catch::Approx(expect).margin(4.0 * expect / std::sqrt(double(count))));
}

TEST_CASE("stationary variance approaches 1/(2 lambda)") {
  OUConfig cfg;
  cfg.gamma = 1.0;
  cfg.T = 8.0;
  cfg.dt = 1.0 / 32.0;
  double acc = 0.0;
  const int count = 4000;
  for (int s = 0; s < count; ++s) acc += std::norm(simulate_ou(cfg, derive_seed(5, s)).z.back());
  REQUIRE(acc / count == Catch::Approx(0.5).margin(0.05));
}

TEST_CASE("exact transition and Euler agree in first two moments at small dt") {
  OUConfig cfg;
  cfg.gamma = 1.0;
  cfg.T = 2.0;
  cfg.dt = 1.0 / 256.0;
  double acc_exact = 0.0, acc_euler = 0.0;
  cplx mean_exact = 0.0, mean_euler = 0.0;
  const int count = 2000;
  for (int s = 0; s < count; ++s) {
    const cplx a = simulate_ou(cfg, derive_seed(7, s)).z.back();
    const cplx b = simulate_ou_euler(cfg, derive_seed(7, s)).z.back();
    acc_exact += std::norm(a);
    acc_euler += std::norm(b);
    mean_exact += a;
    mean_euler += b;
  }
  REQUIRE(acc_exact / count == Catch::Approx(acc_euler / count).margin(0.05));
  REQUIRE(std::abs(mean_exact - mean_euler) / count < 0.05);
}

TEST_CASE("estimator recovers gamma and guards degenerate paths") {
  OUConfig cfg;
  cfg.gamma = cplx(1.0, 0.25);
  cfg.T = 50.0;
  cfg.dt = 1.0 / 64.0;
  cplx acc = 0.0;
  const int count = 200;
  for (int s = 0; s < count; ++s) acc += estimator(simulate_ou(cfg, derive_seed(11, s)), cfg);
  REQUIRE(std::abs(acc / double(count) - cfg.gamma) < 0.1);

  OUPath zero;
  zero.dt = cfg.dt;
  zero.z.assign(65, 0.0);
  zero.dzeta.assign(64, 0.0);
  REQUIRE_THROWS_AS(estimator(zero, cfg), numeric_error);
}

TEST_CASE("statistic moments match the closed form") {
  OUConfig cfg;
  cfg.gamma = 1.0;
  cfg.T = 4.0;
  cfg.dt = 1.0 / 512.0;
  const double expect = ou_sigma_sq(1.0, 4.0);
  double acc2 = 0.0;
  cplx acc_sq = 0.0;
  const int count = 4000;
  for (int s = 0; s < count; ++s) {
    const cplx f = statistic_ft(simulate_ou(cfg, derive_seed(13, s)), cfg);
    acc2 += std::norm(f);
    acc_sq += f * f;
  }
  REQUIRE(acc2 / count == Catch::Approx(expect).margin(0.06));
  REQUIRE(std::abs(acc_sq) / count < 0.06);  // E F_T^2 = 0

  OUPath missing;
  missing.dt = cfg.dt;
  missing.z.assign(9, cplx(1.0));
  REQUIRE_THROWS_AS(statistic_ft(missing, cfg), input_error);
}

TEST_CASE("sigma_sq closed form vs direct quadrature and spot value") {
  REQUIRE(ou_sigma_sq(1.0, 1.0) == Catch::Approx(0.25 + std::exp(-2.0) / 4.0).epsilon(1e-12));
  for (const double T : {2.0, 7.0, 31.0}) {
    const double quad =
        integrate([&](double tau) { return (T - tau) * std::exp(-2.0 * tau); }, 0.0, T) / T;
    REQUIRE(ou_sigma_sq(1.0, T) == Catch::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("normalization gives E|F'|^2 = 1/(2 lambda)") {
  for (const double T : {5.0, 40.0}) {
    const double c = ou_c_t(0.7, T);
    REQUIRE(ou_sigma_sq(0.7, T) / c == Catch::Approx(1.0 / (2.0 * 0.7)).epsilon(1e-12));
  }
}

TEST_CASE("exact quantities match the discretized-kernel pipeline") {
  const double lambda = 1.0, T = 5.0;
  const int n = 2000;
  const KernelTensor f = discretize_ou_kernel(lambda, T, n);
  const OUExact e = ou_exact_quantities(lambda, T);

  const auto [sigma_sq, ef2] = second_moments(f);
  REQUIRE(sigma_sq == Catch::Approx(e.sigma_sq).margin(2e-3));
  // the half-weighted diagonal cells leave an O(h) remnant in E F^2
  REQUIRE(std::abs(ef2) < T / n);

  const KernelTensor h = reverse_conjugate(f);
  const double a01 = norm_sq(contract(f, h, 0, 1));
  const double a10 = norm_sq(contract(f, h, 1, 0));
  REQUIRE(a01 + a10 == Catch::Approx(e.A).margin(1e-3));

  const double g01 = norm_sq(contract(f, f, 0, 1));
  REQUIRE(g01 == Catch::Approx(e.gnorm2).margin(1e-3));
}

TEST_CASE("asymptotic behavior on the T grid") {
  // A ~ 1/(2T) and |E F^2 conj F| ~ 1/(2 sqrt(T)) at lambda = 1; frozen
  // regression windows from the quadrature oracle.
  for (const double T : {25.0, 50.0, 100.0, 200.0, 400.0}) {
    const OUExact e = ou_exact_quantities(1.0, T);
    REQUIRE(e.A * T > 0.40);
    REQUIRE(e.A * T < 0.52);
    REQUIRE(e.third_mixed * std::sqrt(T) > 0.42);
    REQUIRE(e.third_mixed * std::sqrt(T) < 0.52);
  }
}

TEST_CASE("rate_study output structure on a small grid") {
  const RateStudy study = rate_study(1.0, {4.0, 8.0, 16.0, 32.0}, 32, 3, 99, 256);
  REQUIRE(study.rows.size() == 4);
  double prev_upper = 1e18;
  for (const RateRow& r : study.rows) {
    REQUIRE(std::isfinite(r.sigma_sq_exact));
    REQUIRE(std::isfinite(r.w1_estimate));
    REQUIRE(r.w1_stderr >= 0.0);
    REQUIRE(r.upper_moment < prev_upper);
    prev_upper = r.upper_moment;
  }
  REQUIRE(study.slope_upper < 0.0);
  REQUIRE_THROWS_AS(rate_study(1.0, {4.0, 2.0, 8.0, 16.0}, 32, 3, 1, 256), input_error);
  REQUIRE_THROWS_AS(rate_study(1.0, {4.0, 8.0}, 32, 3, 1, 256), input_error);
}
