#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cwi/common.hpp"
#include "cwi/kernel.hpp"
#include "cwi/moments.hpp"
#include "cwi/quadrature.hpp"
#include "cwi/rng.hpp"
#include "cwi/wasserstein.hpp"

namespace cwi {

/// Complex Ornstein-Uhlenbeck study configuration: dZ_t = -gamma Z_t dt + d(zeta)_t
/// driven by a standard complex Brownian motion, Z_0 = 0.
struct OUConfig {
  cplx gamma;              // drift, Re(gamma) = lambda > 0
  double T = 1.0;          // horizon
  double dt = 1.0 / 64.0;  // storage step
  std::size_t mc_paths = 1;
  std::uint64_t seed = 0;

  double lambda() const { return gamma.real(); }

  void validate() const {
    if (!(gamma.real() > 0.0)) throw input_error("OUConfig: Re(gamma) must be positive");
    if (!(T > 0.0) || !(dt > 0.0) || !(dt < T)) throw input_error("OUConfig: need 0 < dt < T");
    if (!(std::exp(-2.0 * gamma.real() * dt) > 0.5))
      throw input_error("OUConfig: dt too coarse, e^(-2 lambda dt) must exceed 1/2");
    if (mc_paths < 1) throw input_error("OUConfig: mc_paths must be >= 1");
  }
};

/// One trajectory on the grid t_k = k dt_eff: values z[0..steps] and the driving
/// Brownian increments dzeta[0..steps-1].
struct OUPath {
  double dt = 0.0;
  std::vector<cplx> z;
  std::vector<cplx> dzeta;
};

/// Exact-transition sampling: Z_{k+1} = e^{-gamma dt} Z_k + eta_k with eta_k the
/// semigroup-weighted increment integral. eta_k and dzeta_k are jointly complex
/// Gaussian with E[eta conj(dzeta)] = (1 - e^{-gamma dt})/gamma, so both are
/// drawn from the same two underlying standard draws per step. No time
/// discretization bias in the path law.
inline OUPath simulate_ou(const OUConfig& cfg, std::uint64_t path_seed) {
  cfg.validate();
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));
  const double dt = cfg.T / static_cast<double>(steps);
  const double lambda = cfg.lambda();

  const cplx decay = std::exp(-cfg.gamma * dt);
  const cplx cov = (1.0 - decay) / cfg.gamma;       // E[eta conj(dzeta)]
  const double v_eta = (1.0 - std::exp(-2.0 * lambda * dt)) / (2.0 * lambda);
  const double resid = v_eta - std::norm(cov) / dt;
  const double resid_sd = std::sqrt(std::max(0.0, resid));
  const double sqrt_dt = std::sqrt(dt);

  OUPath path;
  path.dt = dt;
  path.z.resize(steps + 1);
  path.dzeta.resize(steps);
  path.z[0] = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const cplx w1 = complex_gauss(path_seed, /*stream=*/0x6f753161ULL, k);
    const cplx w2 = complex_gauss(path_seed, /*stream=*/0x6f753162ULL, k);
    const cplx dz = sqrt_dt * w1;
    const cplx eta = (cov / dt) * dz + resid_sd * w2;
    path.dzeta[k] = dz;
    path.z[k + 1] = decay * path.z[k] + eta;
  }
  return path;
}

/// Euler-Maruyama cross-check scheme on the same driving increments.
inline OUPath simulate_ou_euler(const OUConfig& cfg, std::uint64_t path_seed) {
  cfg.validate();
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));
  const double dt = cfg.T / static_cast<double>(steps);
  const double sqrt_dt = std::sqrt(dt);
  OUPath path;
  path.dt = dt;
  path.z.resize(steps + 1);
  path.dzeta.resize(steps);
  path.z[0] = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const cplx dz = sqrt_dt * complex_gauss(path_seed, /*stream=*/0x6f753161ULL, k);
    path.dzeta[k] = dz;
    path.z[k + 1] = path.z[k] - cfg.gamma * path.z[k] * dt + dz;
  }
  return path;
}

/// Least-squares drift estimator gamma_hat = -(sum conj(Z_k) dZ_k)/(sum |Z_k|^2 dt).
inline cplx estimator(const OUPath& path, const OUConfig& cfg) {
  if (path.z.size() < 2) throw input_error("estimator: path too short");
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k + 1 < path.z.size(); ++k) {
    num += std::conj(path.z[k]) * (path.z[k + 1] - path.z[k]);
    den += std::norm(path.z[k]) * path.dt;
  }
  if (!(den > 1e-12 * cfg.T)) throw numeric_error("estimator: degenerate path, denominator near zero");
  return -num / den;
}

/// F_T = (1/sqrt(T)) sum conj(Z_{t_k}) dzeta_k, the Ito sum of the statistic.
inline cplx statistic_ft(const OUPath& path, const OUConfig& cfg) {
  if (path.dzeta.empty() || path.dzeta.size() + 1 != path.z.size())
    throw input_error("statistic_ft: path is missing its driving increments");
  std::vector<cplx> terms(path.dzeta.size());
  for (std::size_t k = 0; k < path.dzeta.size(); ++k)
    terms[k] = std::conj(path.z[k]) * path.dzeta[k];
  return pairwise_sum(terms) / std::sqrt(cfg.T);
}

/// E|F_T|^2 in closed form.
inline double ou_sigma_sq(double lambda, double T) {
  if (!(lambda > 0.0) || !(T > 0.0)) throw input_error("ou_sigma_sq: lambda, T must be positive");
  const double l2 = lambda * lambda;
  return 1.0 / (2.0 * lambda) + std::exp(-2.0 * lambda * T) / (4.0 * l2 * T) -
         1.0 / (4.0 * l2 * T);
}

/// Variance normalization making E|F'_T|^2 = 1/(2 lambda):
/// F'_T = F_T / sqrt(c_T), c_T = 2 lambda E|F_T|^2.
inline double ou_c_t(double lambda, double T) { return 2.0 * lambda * ou_sigma_sq(lambda, T); }

struct OUExact {
  double sigma_sq;     // E|F_T|^2
  double A;            // ||psi (x)_{0,1} h||^2 + ||psi (x)_{1,0} h||^2
  double third_mixed;  // |E F_T^2 conj(F_T)|
  double gnorm2;       // ||psi (x)_{0,1} psi||^2 (= the (1,0) norm as well)
};

/// Exact (basis-truncation-free) moment and contraction quantities of the
/// unnormalized F_T, by adaptive quadrature of the explicit exponential
/// kernels. All quantities depend on gamma only through lambda = Re(gamma).
inline OUExact ou_exact_quantities(double lambda, double T) {
  if (!(lambda > 0.0) || !(T > 0.0))
    throw input_error("ou_exact_quantities: lambda, T must be positive");
  const double tol = 1e-11 * std::max(1.0, T);
  const double l2 = lambda * lambda;

  // (psi (x)_{0,1} h)(t,s) = (1/T) e^{-conj(gamma) t - gamma s} (e^{2 lambda min} - 1)/(2 lambda);
  // squared norm reduced to one dimension by integrating the min-free variable.
  const double a01 =
      integrate(
          [&](double t) {
            const double em2 = std::exp(-2.0 * lambda * t);
            return (1.0 - em2) / (2.0 * lambda) - 2.0 * t * em2 +
                   em2 * (1.0 - em2) / (2.0 * lambda);
          },
          0.0, T, tol) /
      (2.0 * l2 * T * T);

  // Same reduction for (psi (x)_{1,0} h), written in differences of exponents so
  // every factor stays in [0,1] for large lambda T.
  const double a10 =
      integrate(
          [&](double t) {
            const double em2t = std::exp(-2.0 * lambda * t);
            const double tail = std::exp(-2.0 * lambda * (T - t));
            return (1.0 - em2t - 2.0 * tail + 2.0 * std::exp(-2.0 * lambda * T) + tail * tail -
                    std::exp(-2.0 * lambda * T) * tail) /
                   (2.0 * lambda);
          },
          0.0, T, tol) /
      (2.0 * l2 * T * T);

  // (psi (x)_{0,1} psi)(t,s) = (1/T)(t-s) e^{-conj(gamma)(t-s)} 1{s<=t}; the
  // (1,0) contraction yields the same kernel, and E F^2 conj(F) is twice its
  // pairing with psi.
  const double tau2 = integrate(
      [&](double tau) { return (T - tau) * tau * tau * std::exp(-2.0 * lambda * tau); }, 0.0, T,
      tol);
  const double tau1 = integrate(
      [&](double tau) { return (T - tau) * tau * std::exp(-2.0 * lambda * tau); }, 0.0, T, tol);

  OUExact e{};
  e.sigma_sq = ou_sigma_sq(lambda, T);
  e.A = a01 + a10;
  e.gnorm2 = tau2 / (T * T);
  e.third_mixed = 2.0 * tau1 / std::pow(T, 1.5);
  return e;
}

/// MomentReport of the normalized statistic F'_T (a (1,1) element with
/// E F'^2 = E F'^3 = 0 and E|F'|^2 = 1/(2 lambda)), assembled from the exact
/// quadrature quantities instead of a coordinate kernel.
inline MomentReport ou_moment_report(double lambda, double T) {
  const OUExact e = ou_exact_quantities(lambda, T);
  const double c = ou_c_t(lambda, T);
  MomentReport r{};
  r.p = 1;
  r.q = 1;
  r.n = 0;
  r.sigma_sq = 1.0 / (2.0 * lambda);
  r.ef2 = 0.0;
  r.third = 0.0;
  r.third_mixed = e.third_mixed / std::pow(c, 1.5);
  r.kappa = (e.A + 4.0 * e.gnorm2) / (c * c);
  r.A = e.A / (c * c);
  r.c1 = lower_c1(1, 1);
  r.lambda1 = 0.5 * r.sigma_sq;
  r.lambda2 = 0.5 * r.sigma_sq;
  return r;
}

/// psi_T sampled on an n-cell uniform grid (midpoints), scaled by the cell
/// width so discrete contractions approximate the integral ones. The diagonal
/// carries weight 1/2: the indicator covers half of each diagonal cell.
inline KernelTensor discretize_ou_kernel(cplx gamma, double T, int n) {
  if (!(gamma.real() > 0.0) || !(T > 0.0) || n < 1)
    throw input_error("discretize_ou_kernel: bad parameters");
  const double h = T / n;
  const double scale = h / std::sqrt(T);
  std::vector<cplx> coeffs(static_cast<std::size_t>(n) * n, 0.0);
  for (int ti = 0; ti < n; ++ti) {
    const double t = (ti + 0.5) * h;
    for (int si = 0; si <= ti; ++si) {
      const double s = (si + 0.5) * h;
      const double w = (si == ti) ? 0.5 : 1.0;
      coeffs[static_cast<std::size_t>(ti) * n + si] =
          w * scale * std::exp(-std::conj(gamma) * (t - s));
    }
  }
  return KernelTensor(1, 1, n, std::move(coeffs));
}

struct RateRow {
  double T;
  double sigma_sq_exact;
  double A_exact;
  double third_mixed_exact;
  double upper_moment;
  double campese_ref;
  double w1_estimate;
  double w1_stderr;
};

struct RateStudy {
  std::vector<RateRow> rows;
  double slope_upper = 0.0;    // log-log OLS slope of upper_moment vs T
  double slope_campese = 0.0;  // slope of the reference comparison bound
  double slope_w1 = 0.0;       // slope of the MC Wasserstein estimate
  double slope_w1_stderr = 0.0;
};

namespace detail {

inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxy / sxx;
}

}  // namespace detail

/// Rate experiment: exact bound columns plus MC two-sample W1 between the
/// normalized statistic and CN(0, 1/(2 lambda)), `points` paths per replicate.
/// The two-sample estimator has a finite-count bias floor; the same count is
/// used at every T so the fitted slope is unaffected by it.
inline RateStudy rate_study(double lambda, const std::vector<double>& tgrid, std::size_t points,
                            int replicates, std::uint64_t seed,
                            std::size_t steps_per_path = 4096) {
  if (tgrid.size() < 4) throw input_error("rate_study: need at least 4 grid points");
  for (std::size_t k = 0; k + 1 < tgrid.size(); ++k)
    if (!(tgrid[k] < tgrid[k + 1])) throw input_error("rate_study: T grid must be increasing");
  if (points < 2 || replicates < 2) throw input_error("rate_study: need points, replicates >= 2");

  RateStudy study;
  std::vector<double> logt, log_upper, log_campese, log_w1;
  std::vector<std::vector<double>> m_sq_by_t, n_sq_by_t;

  // Common random numbers across the T grid: each replicate reuses one unit
  // Gaussian target and one unit null cloud at every T (rescaled to the
  // horizon's variance), so the matching-floor fluctuations are shared across
  // horizons and cancel in the fitted slope. The null-vs-target distance
  // scales exactly linearly under the rescaling, so it is matched once.
  std::vector<std::vector<std::array<double, 2>>> unit_target(replicates);
  std::vector<double> unit_null_w1(replicates);
  for (int r = 0; r < replicates; ++r) {
    const std::uint64_t gseed = derive_seed(seed, 0x77317265ULL + r);
    PlanarSample g, h;
    g.points.resize(points);
    h.points.resize(points);
    for (std::size_t k = 0; k < points; ++k) {
      auto [x, y] = gauss_pair(gseed, /*stream=*/1, k);
      g.points[k] = {x, y};
      auto [u, v] = gauss_pair(gseed, /*stream=*/2, k);
      h.points[k] = {u, v};
    }
    unit_null_w1[r] = w1_exact(h, g);
    unit_target[r] = std::move(g.points);
  }

  for (std::size_t ti = 0; ti < tgrid.size(); ++ti) {
    const double T = tgrid[ti];
    const OUExact exact = ou_exact_quantities(lambda, T);
    const MomentReport mr = ou_moment_report(lambda, T);
    const Bound1d b = bound_1d(mr);
    const double e_abs4 = mr.kappa + 2.0 * mr.sigma_sq * mr.sigma_sq;

    OUConfig cfg{};
    cfg.gamma = lambda;
    cfg.T = T;
    cfg.dt = T / static_cast<double>(steps_per_path);
    cfg.seed = seed;

    const double c = ou_c_t(lambda, T);
    const double inv_sqrt_c = 1.0 / std::sqrt(c);
    const double target_sd = std::sqrt(0.5 * mr.sigma_sq);  // per real component

    const std::uint64_t tseed = derive_seed(seed, 0x72617465ULL + ti);
    // per replicate: statistic-vs-target W1 and the matched Gaussian null
    // (shared across horizons), to correct the finite-count floor
    std::vector<double> m_sq(replicates), n_sq(replicates);
    for (int r = 0; r < replicates; ++r) {
      const std::uint64_t rseed = derive_seed(tseed, r);
      PlanarSample sample, target;
      sample.points.resize(points);
      target.points.resize(points);
      for (std::size_t k = 0; k < points; ++k) {
        const OUPath path = simulate_ou(cfg, derive_seed(rseed, k));
        const cplx fp = inv_sqrt_c * statistic_ft(path, cfg);
        sample.points[k] = {fp.real(), fp.imag()};
        target.points[k] = {target_sd * unit_target[r][k][0], target_sd * unit_target[r][k][1]};
      }
      const double m = w1_exact(sample, target);
      const double f = target_sd * unit_null_w1[r];
      m_sq[r] = m * m;
      n_sq[r] = f * f;
    }
    const double mean_m = pairwise_sum<double>(m_sq) / replicates;
    const double mean_n = pairwise_sum<double>(n_sq) / replicates;
    const double w1_mean = detail::debias_w1(mean_m, mean_n);
    std::vector<double> loo_t(replicates);
    for (int r = 0; r < replicates; ++r)
      loo_t[r] = detail::debias_w1((mean_m * replicates - m_sq[r]) / (replicates - 1),
                                   (mean_n * replicates - n_sq[r]) / (replicates - 1));
    double lmt = 0.0;
    for (double v : loo_t) lmt += v;
    lmt /= replicates;
    double lsst = 0.0;
    for (double v : loo_t) lsst += (v - lmt) * (v - lmt);
    const double w1_se = std::sqrt(lsst * (replicates - 1) / replicates);

    study.rows.push_back({T, exact.sigma_sq, exact.A, exact.third_mixed, b.upper_moment,
                          bound_campese_reference(mr.sigma_sq, e_abs4), w1_mean, w1_se});
    logt.push_back(std::log(T));
    log_upper.push_back(std::log(b.upper_moment));
    log_campese.push_back(std::log(study.rows.back().campese_ref));
    log_w1.push_back(std::log(std::max(w1_mean, 1e-12)));
    m_sq_by_t.push_back(std::move(m_sq));
    n_sq_by_t.push_back(std::move(n_sq));
  }

  study.slope_upper = detail::ols_slope(logt, log_upper);
  study.slope_campese = detail::ols_slope(logt, log_campese);
  study.slope_w1 = detail::ols_slope(logt, log_w1);

  // Jackknife over replicates: refit the slope with replicate r removed at
  // every T simultaneously.
  const int R = static_cast<int>(m_sq_by_t.front().size());
  std::vector<double> loo(R);
  for (int r = 0; r < R; ++r) {
    std::vector<double> ly(tgrid.size());
    for (std::size_t ti = 0; ti < tgrid.size(); ++ti) {
      double sm = 0.0, sn = 0.0;
      for (int j = 0; j < R; ++j)
        if (j != r) {
          sm += m_sq_by_t[ti][j];
          sn += n_sq_by_t[ti][j];
        }
      ly[ti] = std::log(std::max(detail::debias_w1(sm / (R - 1), sn / (R - 1)), 1e-12));
    }
    loo[r] = detail::ols_slope(logt, ly);
  }
  double lm = 0.0;
  for (double v : loo) lm += v;
  lm /= R;
  double lss = 0.0;
  for (double v : loo) lss += (v - lm) * (v - lm);
  study.slope_w1_stderr = std::sqrt(lss * (R - 1) / R);

  return study;
}

}  // namespace cwi
