#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "cwi/assignment.hpp"
#include "cwi/common.hpp"
#include "cwi/moments.hpp"
#include "cwi/rng.hpp"

namespace cwi {

inline constexpr int kMaxMatchingSize = 8192;

/// Uniformly weighted planar point cloud (Re, Im pairs).
struct PlanarSample {
  std::vector<std::array<double, 2>> points;

  static PlanarSample from_complex(const std::vector<cplx>& zs) {
    PlanarSample s;
    s.points.reserve(zs.size());
    for (const cplx& z : zs) s.points.push_back({z.real(), z.imag()});
    return s;
  }
};

/// Exact empirical W1 between equal-size uniform measures: min-cost perfect
/// matching with Euclidean ground cost, divided by the count.
inline double w1_exact(const PlanarSample& a, const PlanarSample& b) {
  const int n = static_cast<int>(a.points.size());
  if (n < 1) throw input_error("w1_exact: empty sample");
  if (b.points.size() != a.points.size())
    throw input_error("w1_exact: sample sizes differ; resampling is the caller's job");
  if (n > kMaxMatchingSize) throw input_error("w1_exact: count exceeds the matching guard");
  for (const auto& pt : a.points)
    if (!std::isfinite(pt[0]) || !std::isfinite(pt[1])) throw input_error("w1_exact: non-finite point");
  for (const auto& pt : b.points)
    if (!std::isfinite(pt[0]) || !std::isfinite(pt[1])) throw input_error("w1_exact: non-finite point");

  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const auto& pa = a.points[i];
    double* row = cost.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double dx = pa[0] - b.points[j][0];
      const double dy = pa[1] - b.points[j][1];
      row[j] = std::sqrt(dx * dx + dy * dy);
    }
  }
  std::vector<int> rowsol;
  return solve_assignment(cost, n, rowsol) / n;
}

/// 1-d W1 of equal-size samples: mean absolute difference of sorted values.
inline double w1_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || a.size() != b.size()) throw input_error("w1_1d: sample sizes differ");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> diffs(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) diffs[k] = std::abs(a[k] - b[k]);
  return pairwise_sum<double>(diffs) / static_cast<double>(a.size());
}

struct W1Estimate {
  double estimate;
  double stderr_;
  std::vector<double> replicate_values;
};

namespace detail {

// Floor-corrected combination of matched sample-vs-target and target-vs-target
// distances. The finite-count matching floor enters the two-sample W1 roughly
// in quadrature with the true distance, so subtracting the squared null
// distance of a matched Gaussian pair removes the floor to first order.
inline double debias_w1(double mean_sq_sample, double mean_sq_null) {
  return std::sqrt(std::max(0.0, mean_sq_sample - mean_sq_null));
}

}  // namespace detail

/// Estimate of d_W(samples, CN(0, sigma)) for d = 1. Per replicate, the
/// samples are matched against fresh complex-Gaussian draws, and a second
/// independent Gaussian sample is matched against the same target to measure
/// the finite-count floor; the estimate is the floor-corrected combination,
/// with a jackknife standard error over replicates. replicate_values holds the
/// per-replicate floor-corrected values.
inline W1Estimate w1_to_gaussian(const PlanarSample& samples, const ComplexCovariance& sigma,
                                 std::uint64_t seed, int replicates) {
  if (sigma.d != 1) throw input_error("w1_to_gaussian: d=1 covariance required");
  if (replicates < 2) throw input_error("w1_to_gaussian: need at least 2 replicates");
  const double s = std::sqrt(0.5 * sigma.sigma(0, 0).real());
  const std::size_t count = samples.points.size();

  std::vector<double> m_sq(replicates), n_sq(replicates), vals(replicates);
  for (int r = 0; r < replicates; ++r) {
    PlanarSample target, null_draw;
    target.points.resize(count);
    null_draw.points.resize(count);
    const std::uint64_t rs = derive_seed(seed, 0x77315f72ULL + r);
    for (std::size_t k = 0; k < count; ++k) {
      auto [x, y] = gauss_pair(rs, /*stream=*/1, k);
      target.points[k] = {s * x, s * y};
      auto [u, v] = gauss_pair(rs, /*stream=*/2, k);
      null_draw.points[k] = {s * u, s * v};
    }
    const double m = w1_exact(samples, target);
    const double f = w1_exact(null_draw, target);
    m_sq[r] = m * m;
    n_sq[r] = f * f;
    vals[r] = detail::debias_w1(m_sq[r], n_sq[r]);
  }

  const double mean_m = pairwise_sum<double>(m_sq) / replicates;
  const double mean_n = pairwise_sum<double>(n_sq) / replicates;
  const double est = detail::debias_w1(mean_m, mean_n);

  // jackknife over replicates of the aggregate floor-corrected statistic
  std::vector<double> loo(replicates);
  for (int r = 0; r < replicates; ++r) {
    const double mm = (mean_m * replicates - m_sq[r]) / (replicates - 1);
    const double nn = (mean_n * replicates - n_sq[r]) / (replicates - 1);
    loo[r] = detail::debias_w1(mm, nn);
  }
  double lm = 0.0;
  for (double v : loo) lm += v;
  lm /= replicates;
  double lss = 0.0;
  for (double v : loo) lss += (v - lm) * (v - lm);
  const double se = std::sqrt(lss * (replicates - 1) / replicates);
  return {est, se, std::move(vals)};
}

}  // namespace cwi
