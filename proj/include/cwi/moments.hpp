#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "cwi/common.hpp"
#include "cwi/contraction.hpp"
#include "cwi/kernel.hpp"
#include "cwi/rng.hpp"

namespace cwi {

/// Hermitian non-negative definite d x d complex covariance, together with the
/// realified 2d x 2d matrix S' = [Re/2, -Im/2; Im/2, Re/2].
struct ComplexCovariance {
  int d;
  Eigen::MatrixXcd sigma;

  explicit ComplexCovariance(Eigen::MatrixXcd s) : d(static_cast<int>(s.rows())), sigma(std::move(s)) {
    if (d < 1 || sigma.cols() != d) throw input_error("ComplexCovariance: square matrix required");
    if ((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw input_error("ComplexCovariance: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_prime());
    if (es.eigenvalues().minCoeff() < -1e-12)
      throw input_error("ComplexCovariance: matrix is not non-negative definite");
  }

  static ComplexCovariance scalar(double sigma_sq) {
    Eigen::MatrixXcd s(1, 1);
    s(0, 0) = sigma_sq;
    return ComplexCovariance(std::move(s));
  }

  Eigen::MatrixXd sigma_prime() const {
    Eigen::MatrixXd sp(2 * d, 2 * d);
    const Eigen::MatrixXd re = 0.5 * sigma.real();
    const Eigen::MatrixXd im = 0.5 * sigma.imag();
    sp << re, -im, im, re;
    return sp;
  }

  double lambda_max() const {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(sigma).eigenvalues().maxCoeff();
  }
  double lambda_min() const {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(sigma).eigenvalues().minCoeff();
  }
};

/// sigma^2 = E|F|^2 = p! q! <f,f> and E F^2 = 1{p=q} p! q! <f,h>.
inline std::pair<double, cplx> second_moments(const KernelTensor& f) {
  const double pq_fact = factorial(f.p()) * factorial(f.q());
  const double sigma_sq = pq_fact * norm_sq(f);
  cplx ef2 = 0.0;
  if (f.p() == f.q()) ef2 = pq_fact * inner_product(f, reverse_conjugate(f));
  return {sigma_sq, ef2};
}

/// (E F^3, E F^2 conj F); both vanish unless p = q.
inline std::pair<cplx, cplx> third_moments(const KernelTensor& f) {
  const int p = f.p(), q = f.q();
  if (p != q) return {0.0, 0.0};
  const KernelTensor h = reverse_conjugate(f);
  cplx third = 0.0, third_mixed = 0.0;
  const double p_fact_sq = factorial(p) * factorial(p);
  for (int i = 0; i <= p; ++i) {
    const double coef =
        factorial(i) * factorial(p - i) * p_fact_sq * std::pow(binomial(p, i), 4);
    const KernelTensor s = contract_sym(f, f, i, p - i);
    third += coef * inner_product(s, h);
    third_mixed += coef * inner_product(s, f);
  }
  return {third, third_mixed};
}

// Two independent printed expansions of the fourth-moment gap
// kappa = E|F|^4 - 2 (E|F|^2)^2 - |E F^2|^2.

inline double kappa_v1(const KernelTensor& f) {
  const int p = f.p(), q = f.q(), l = p + q;
  const int lp = 2 * std::min(p, q);
  const KernelTensor h = reverse_conjugate(f);
  const double pq_fact_sq = factorial(p) * factorial(q) * factorial(p) * factorial(q);
  double total = 0.0;
  // theta_r
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= q; ++j) {
      const int r = i + j;
      if (r < 1 || r > l - 1) continue;
      const double coef = binomial(p, i) * binomial(p, i) * binomial(q, j) * binomial(q, j) *
                          pq_fact_sq;
      total += coef * norm_sq(contract(f, h, i, j));
    }
  // phi_r, including the extra r = l' term when p != q
  const int rmax = (p != q) ? lp : lp - 1;
  for (int r = 1; r <= rmax; ++r) {
    KernelTensor sum = KernelTensor::zero(2 * p - r, 2 * q - r, f.n());
    for (int i = 0; i <= std::min(p, q); ++i) {
      const int j = r - i;
      if (j < 0 || j > std::min(p, q)) continue;
      const double coef = binomial(p, i) * binomial(q, i) * binomial(q, j) * binomial(p, j) *
                          factorial(i) * factorial(j);
      sum = add(sum, scale(contract_sym(f, f, i, j), coef));
    }
    total += factorial(2 * p - r) * factorial(2 * q - r) * norm_sq(sum);
  }
  return total;
}

inline double kappa_v2(const KernelTensor& f) {
  const int p = f.p(), q = f.q(), l = p + q;
  const int lp = 2 * std::min(p, q);
  const KernelTensor h = reverse_conjugate(f);
  const double pq_fact_sq = factorial(p) * factorial(q) * factorial(p) * factorial(q);
  double total = 0.0;
  // rho_r
  for (int r = 1; r <= l - 1; ++r) {
    KernelTensor sum = KernelTensor::zero(l - r, l - r, f.n());
    for (int i = 0; i <= p; ++i) {
      const int j = r - i;
      if (j < 0 || j > q) continue;
      const double coef = binomial(p, i) * binomial(p, i) * binomial(q, j) * binomial(q, j) *
                          factorial(i) * factorial(j);
      sum = add(sum, scale(contract_sym(f, h, i, j), coef));
    }
    const double lr_fact = factorial(l - r);
    total += lr_fact * lr_fact * norm_sq(sum);
  }
  // varsigma_r, including the extra r = l' term when p != q
  const int rmax = (p != q) ? lp : lp - 1;
  for (int i = 0; i <= std::min(p, q); ++i)
    for (int j = 0; j <= std::min(p, q); ++j) {
      const int r = i + j;
      if (r < 1 || r > rmax) continue;
      const double coef = binomial(p, i) * binomial(q, i) * binomial(q, j) * binomial(p, j) *
                          pq_fact_sq;
      total += coef * norm_sq(contract(f, f, i, j));
    }
  return total;
}

/// Cov(|F1|^2, |F2|^2) - |E F1 conj F2|^2 - |E F1 F2|^2 via the exact four-term
/// contraction expansion; reduces to kappa_v1 when f1 = f2.
inline double cross_fourth(const KernelTensor& f1, const KernelTensor& f2) {
  if (f1.n() != f2.n()) throw input_error("cross_fourth: basis dimension mismatch");
  const int p1 = f1.p(), q1 = f1.q(), p2 = f2.p(), q2 = f2.q();
  const int l = std::min(p1, p2) + std::min(q1, q2);
  const int lp = std::min(p1, q2) + std::min(q1, p2);
  const KernelTensor h2 = reverse_conjugate(f2);
  const double fact_all = factorial(p1) * factorial(q1) * factorial(p2) * factorial(q2);

  double total = 0.0;
  // psi_r terms: r = 1..l-1 always; r = l only when (p1,q1) != (p2,q2)
  for (int i = 0; i <= std::min(p1, p2); ++i)
    for (int j = 0; j <= std::min(q1, q2); ++j) {
      const int r = i + j;
      if (r < 1) continue;
      if (r == l && (p1 == p2 && q1 == q2)) continue;
      const double coef = binomial(p1, i) * binomial(q1, j) * binomial(q2, j) * binomial(p2, i) *
                          fact_all;
      total += coef * norm_sq(contract(f1, h2, i, j));
    }
  // phi_r terms: r = 1..l'-1 always; r = l' only when (p1,q1) != (q2,p2)
  const int rmax = (p1 == q2 && q1 == p2) ? lp - 1 : lp;
  for (int r = 1; r <= rmax; ++r) {
    KernelTensor sum = KernelTensor::zero(p1 + p2 - r, q1 + q2 - r, f1.n());
    for (int i = 0; i <= std::min(p1, q2); ++i) {
      const int j = r - i;
      if (j < 0 || j > std::min(q1, p2)) continue;
      const double coef = binomial(p1, i) * binomial(q1, j) * binomial(q2, i) * binomial(p2, j) *
                          factorial(i) * factorial(j);
      sum = add(sum, scale(contract_sym(f1, f2, i, j), coef));
    }
    total += factorial(p1 + p2 - r) * factorial(q1 + q2 - r) * norm_sq(sum);
  }
  return total;
}

/// Explicit lower-bound constant c1(p,q) = min over 0 < i+j < p+q of
/// C(p,i)^2 C(q,j)^2 (p! q!)^2.
inline double lower_c1(int p, int q) {
  const int l = p + q;
  if (l < 2) throw input_error("lower_c1: requires p+q >= 2");
  const double pq_fact_sq = factorial(p) * factorial(q) * factorial(p) * factorial(q);
  double best = -1.0;
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= q; ++j) {
      if (i + j < 1 || i + j > l - 1) continue;
      const double c = binomial(p, i) * binomial(p, i) * binomial(q, j) * binomial(q, j) *
                       pq_fact_sq;
      if (best < 0 || c < best) best = c;
    }
  return best;
}

/// Exact moments, fourth-moment gap and bound inputs for a single kernel.
struct MomentReport {
  int p, q, n;
  double sigma_sq;      // E|F|^2
  cplx ef2;             // E F^2 = a + i b
  cplx third;           // E F^3
  cplx third_mixed;     // E F^2 conj F
  double kappa;         // E|F|^4 - 2 sigma^4 - |E F^2|^2
  double A;             // one-kernel contraction aggregate
  double c1;            // explicit lower constant c1(p,q)
  double lambda1, lambda2;
};

inline MomentReport moment_report(const KernelTensor& f) {
  MomentReport r{};
  r.p = f.p();
  r.q = f.q();
  r.n = f.n();
  std::tie(r.sigma_sq, r.ef2) = second_moments(f);
  std::tie(r.third, r.third_mixed) = third_moments(f);
  r.kappa = kappa_v1(f);
  r.A = contraction_norm_sum(f, reverse_conjugate(f));
  r.c1 = (f.order() >= 2) ? lower_c1(f.p(), f.q()) : 0.0;
  const double ab = std::abs(r.ef2);
  r.lambda1 = 0.5 * (r.sigma_sq + ab);
  r.lambda2 = 0.5 * (r.sigma_sq - ab);
  return r;
}

struct Bound1d {
  double upper_moment;           // printed constant times sqrt(kappa)
  double upper_contraction_raw;  // sqrt(A); its constant c2 is unspecified
  double lower_raw;              // max(|E F^3|, |E F^2 conj F|, kappa); c1(a,b,sigma) unspecified
};

/// One-dimensional Berry-Esseen bound quantities. Requires the theorem
/// hypothesis sigma^2 > |E F^2| (lambda2 > 0).
inline Bound1d bound_1d(const MomentReport& r) {
  if (r.lambda2 <= 0.0)
    throw numeric_error("bound_1d: degenerate covariance, sigma^2 <= |E F^2|");
  const int l = r.p + r.q;
  double binom_sum = 0.0;
  for (int k = 1; k <= l - 1; ++k) binom_sum += binomial(2 * k, k);
  Bound1d b{};
  b.upper_moment = 4.0 * std::sqrt(2.0) * std::sqrt(binom_sum) * std::sqrt(r.lambda1) /
                   r.lambda2 * std::sqrt(std::max(0.0, r.kappa));
  b.upper_contraction_raw = std::sqrt(std::max(0.0, r.A));
  b.lower_raw = std::max({std::abs(r.third), std::abs(r.third_mixed), r.kappa});
  return b;
}

/// Reference comparison bound (weaker rate): for E F^2 = 0,
/// d_W <= sqrt(2)/sigma * sqrt(delta + sqrt(E|F|^4 * delta / 2)),
/// delta = E|F|^4 - 2 sigma^4.
inline double bound_campese_reference(double sigma_sq, double e_abs4) {
  const double delta = std::max(0.0, e_abs4 - 2.0 * sigma_sq * sigma_sq);
  return std::sqrt(2.0) / std::sqrt(sigma_sq) *
         std::sqrt(delta + std::sqrt(0.5 * e_abs4 * delta));
}

struct BoundMulti {
  double upper;                // (2 sqrt(d lambda_max)/lambda_min) sqrt(E||F||^4 - E||Z||^4)
  double moment_gap;           // E||F||^4 - E||Z||^4 assembled from cross_fourth pairs
  double rhs_contraction_raw;  // bracketed sum with the succ-gated cross terms, constant c omitted
};

/// d-dimensional bound. Assumes the theorem hypothesis E[F F'] = 0 (verified by
/// tests, not enforced here).
inline BoundMulti bound_multi(const std::vector<KernelTensor>& kernels,
                              const ComplexCovariance& sigma) {
  const int d = static_cast<int>(kernels.size());
  if (d < 1 || sigma.d != d) throw input_error("bound_multi: kernel/covariance size mismatch");
  const double lmin = sigma.lambda_min();
  if (lmin <= 0.0) throw input_error("bound_multi: covariance must be positive definite");
  const double lmax = sigma.lambda_max();

  BoundMulti b{};
  for (int j = 0; j < d; ++j)
    for (int r = 0; r < d; ++r) b.moment_gap += cross_fourth(kernels[j], kernels[r]);
  b.upper = 2.0 * std::sqrt(d * lmax) / lmin * std::sqrt(std::max(0.0, b.moment_gap));

  std::vector<KernelTensor> hs;
  hs.reserve(d);
  for (const auto& f : kernels) hs.push_back(reverse_conjugate(f));
  for (int r = 0; r < d; ++r) {
    b.rhs_contraction_raw += contraction_norm_sum(kernels[r], hs[r]);
    for (int j = 0; j < d; ++j) {
      if (j == r) continue;
      const int pr = kernels[r].p(), qr = kernels[r].q();
      const int pj = kernels[j].p(), qj = kernels[j].q();
      const double fr2 = norm_sq(kernels[r]);
      const double fj2 = norm_sq(kernels[j]);
      if (succ({pj, qj}, {qr, pr}))
        b.rhs_contraction_raw += fr2 * norm(contract(kernels[j], hs[j], pj - qr, qj - pr));
      if (succ({pj, qj}, {pr, qr}))
        b.rhs_contraction_raw += fr2 * norm(contract(kernels[j], hs[j], pj - pr, qj - qr));
      if (succ({pr, qr}, {qj, pj}))
        b.rhs_contraction_raw += fj2 * norm(contract(kernels[r], hs[r], pr - qj, qr - pj));
      if (succ({pr, qr}, {pj, qj}))
        b.rhs_contraction_raw += fj2 * norm(contract(kernels[r], hs[r], pr - pj, qr - qj));
    }
  }
  return b;
}

/// Samples of the realified CN_d(0, Sigma) vector: 2d-dimensional rows with
/// covariance Sigma'. Deterministic per seed.
inline std::vector<Eigen::VectorXd> sample_cn(const ComplexCovariance& sigma, std::size_t count,
                                              std::uint64_t seed) {
  const int m = 2 * sigma.d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma.sigma_prime());
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw input_error("sample_cn: realified covariance is indefinite");
  const Eigen::MatrixXd root =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  std::vector<Eigen::VectorXd> out(count);
  for (std::size_t s = 0; s < count; ++s) {
    Eigen::VectorXd g(m);
    for (int k = 0; k < m; k += 2) {
      auto [x, y] = gauss_pair(seed, /*stream=*/0x636e30ULL, s * static_cast<std::size_t>(m) + k);
      g(k) = x;
      if (k + 1 < m) g(k + 1) = y;
    }
    out[s] = root * g;
  }
  return out;
}

}  // namespace cwi
