#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "cwi/common.hpp"
#include "cwi/contraction.hpp"
#include "cwi/hermite.hpp"
#include "cwi/kernel.hpp"
#include "cwi/rng.hpp"

namespace cwi {

/// One realization of the complex isonormal process on the truncated basis:
/// n i.i.d. standard symmetric complex Gaussians, reproducible from the seed.
struct GaussianField {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<cplx> z;
};

inline GaussianField sample_field(int n, std::uint64_t seed) {
  if (n < 1) throw input_error("sample_field: n must be >= 1");
  GaussianField field{n, seed, std::vector<cplx>(n)};
  for (int k = 0; k < n; ++k) field.z[k] = complex_gauss(seed, /*stream=*/0x6669656cULL, k);
  return field;
}

namespace detail {

// Pathwise evaluation of I_{p,q}(f) by the Hermite-product expansion over index
// multisets: each coordinate tuple contributes
//   f[tuple] * prod_k 2^{-(a_k+b_k)/2} H_{a_k,b_k}(sqrt2 Z_k),
// where a_k, b_k are the tuple's unbarred/barred multiplicities of basis index k.
// Summing over all ordered tuples of a group-symmetric f reproduces the multiset
// expansion with its combinatorial multiplicities, so no per-class bookkeeping
// is needed. The weight is invariant under in-group permutations of the tuple,
// hence the sum also equals I_{p,q}(symmetrize_groups(f)) for arbitrary f.
inline cplx evaluate_unchecked(const KernelTensor& f, const GaussianField& field) {
  if (f.n() != field.n) throw input_error("evaluate_integral: basis dimension mismatch");
  const int p = f.p(), q = f.q(), n = f.n(), l = p + q;
  if (l == 0) return f[0];

  constexpr double inv_sqrt2 = 0.7071067811865475244;
  const double sqrt2 = 1.4142135623730950488;
  std::vector<HermiteTable> tables;
  tables.reserve(n);
  for (int k = 0; k < n; ++k) tables.emplace_back(sqrt2 * field.z[k], p, q);
  std::vector<double> pow_half(l + 1);
  pow_half[0] = 1.0;
  for (int k = 1; k <= l; ++k) pow_half[k] = pow_half[k - 1] * inv_sqrt2;

  std::vector<int> idx(l), alpha(n, 0), beta(n, 0), touched;
  touched.reserve(l);
  std::vector<cplx> terms(f.size());
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    const cplx fv = f[flat];
    if (fv == 0.0) continue;
    decode_index(flat, n, l, idx.data());
    touched.clear();
    for (int k = 0; k < p; ++k) {
      const int d = idx[k];
      if (alpha[d] == 0 && beta[d] == 0) touched.push_back(d);
      ++alpha[d];
    }
    for (int k = p; k < l; ++k) {
      const int d = idx[k];
      if (alpha[d] == 0 && beta[d] == 0) touched.push_back(d);
      ++beta[d];
    }
    cplx w = fv;
    for (int d : touched) {
      w *= pow_half[alpha[d] + beta[d]] * tables[d](alpha[d], beta[d]);
      alpha[d] = 0;
      beta[d] = 0;
    }
    terms[flat] = w;
  }
  return pairwise_sum(terms);
}

}  // namespace detail

/// Pathwise value of the complex multiple Wiener-Ito integral I_{p,q}(f).
/// f must be group-symmetric; symmetrize first if it is not.
inline cplx evaluate_integral(const KernelTensor& f, const GaussianField& field) {
  const double tol = 1e-9 * std::max(1.0, norm(f));
  if (symmetry_defect(f) > tol)
    throw input_error("evaluate_integral: kernel is not group-symmetric");
  return detail::evaluate_unchecked(f, field);
}

/// |LHS - RHS| of the product formula
///   I_{a,b}(f) I_{c,d}(g) = sum_{i,j} C(a,i)C(d,i)C(b,j)C(c,j) i! j! I(f (x)_{i,j} g)
/// evaluated pathwise on one field; the identity is almost sure, so the
/// residual is pure rounding.
inline double verify_product_formula(const KernelTensor& f, const KernelTensor& g,
                                     const GaussianField& field) {
  const cplx lhs = evaluate_integral(f, field) * evaluate_integral(g, field);
  const int a = f.p(), b = f.q(), c = g.p(), d = g.q();
  cplx rhs = 0.0;
  for (int i = 0; i <= std::min(a, d); ++i)
    for (int j = 0; j <= std::min(b, c); ++j) {
      const double coef =
          binomial(a, i) * binomial(d, i) * binomial(b, j) * binomial(c, j) * factorial(i) *
          factorial(j);
      rhs += coef * detail::evaluate_unchecked(contract(f, g, i, j), field);
    }
  return std::abs(lhs - rhs);
}

/// Finite truncated chaos decomposition: at most one group-symmetric kernel per
/// (p,q) plus the (0,0) constant.
struct ChaosElement {
  cplx constant = 0.0;
  std::map<std::pair<int, int>, KernelTensor> terms;

  void add_term(KernelTensor f) {
    if (f.order() == 0) throw input_error("ChaosElement: use `constant` for the (0,0) term");
    if (!is_group_symmetric(f, 1e-9 * std::max(1.0, norm(f))))
      throw input_error("ChaosElement: kernels must be group-symmetric");
    const auto key = std::make_pair(f.p(), f.q());
    if (terms.contains(key)) throw input_error("ChaosElement: duplicate (p,q) term");
    if (!terms.empty() && terms.begin()->second.n() != f.n())
      throw input_error("ChaosElement: basis dimension mismatch across terms");
    terms.emplace(key, std::move(f));
  }

  int n() const { return terms.empty() ? 1 : terms.begin()->second.n(); }
};

inline cplx sample_chaos(const ChaosElement& elem, const GaussianField& field) {
  cplx value = elem.constant;
  for (const auto& [pq, f] : elem.terms) value += detail::evaluate_unchecked(f, field);
  return value;
}

/// Batched pathwise samples of I_{p,q}(f) over fields seeded (seed, index).
inline std::vector<cplx> sample_integral_batch(const KernelTensor& f, std::size_t count,
                                               std::uint64_t seed) {
  const double tol = 1e-9 * std::max(1.0, norm(f));
  if (symmetry_defect(f) > tol)
    throw input_error("sample_integral_batch: kernel is not group-symmetric");
  std::vector<cplx> out(count);
  for (std::size_t s = 0; s < count; ++s)
    out[s] = detail::evaluate_unchecked(f, sample_field(f.n(), derive_seed(seed, s)));
  return out;
}

}  // namespace cwi
