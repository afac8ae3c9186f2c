#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "cwi/common.hpp"
#include "cwi/kernel.hpp"

namespace cwi {

// (i,j)-contraction calculus: i pairs f's unbarred slots with g's barred slots,
// j pairs f's barred slots with g's unbarred slots. Contractions consume the
// LAST i unbarred and LAST j barred slots of f, and the LAST j unbarred and
// LAST i barred slots of g; for group-symmetric inputs the slot choice is
// immaterial.

inline void check_contraction_ranges(const KernelTensor& f, const KernelTensor& g, int i, int j) {
  if (f.n() != g.n()) throw input_error("contract: basis dimension mismatch");
  if (i < 0 || i > std::min(f.p(), g.q()))
    throw input_error("contract: i out of range [0, min(p_f, q_g)]");
  if (j < 0 || j > std::min(f.q(), g.p()))
    throw input_error("contract: j out of range [0, min(q_f, p_g)]");
}

/// f (x)_{i,j} g; result shape (p_f+p_g-i-j, q_f+q_g-i-j, n). Bilinear;
/// contract(f,g,0,0) is the tensor product.
inline KernelTensor contract(const KernelTensor& f, const KernelTensor& g, int i, int j) {
  check_contraction_ranges(f, g, i, j);
  const int n = f.n();
  const int a = f.p(), b = f.q(), c = g.p(), d = g.q();

  const auto pw = [&](int e) { return KernelTensor::expected_size(e, 0, n); };
  const std::size_t ntf = pw(a - i), nu = pw(i), nsf = pw(b - j), nv = pw(j);
  const std::size_t ntg = pw(c - j), nsg = pw(d - i);
  const std::size_t ncontr = nu * nv;

  using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  // A[(tf,sf), (u,v)] from f layout [tf, u, sf, v]
  Mat A(static_cast<Eigen::Index>(ntf * nsf), static_cast<Eigen::Index>(ncontr));
  for (std::size_t tf = 0; tf < ntf; ++tf)
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t sf = 0; sf < nsf; ++sf) {
        const std::size_t base = ((tf * nu + u) * nsf + sf) * nv;
        const std::size_t row = tf * nsf + sf;
        for (std::size_t v = 0; v < nv; ++v) A(row, u * nv + v) = f[base + v];
      }

  // B[(u,v), (tg,sg)] from g layout [tg, v, sg, u]
  Mat B(static_cast<Eigen::Index>(ncontr), static_cast<Eigen::Index>(ntg * nsg));
  for (std::size_t tg = 0; tg < ntg; ++tg)
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t sg = 0; sg < nsg; ++sg) {
        const std::size_t base = ((tg * nv + v) * nsg + sg) * nu;
        const std::size_t col = tg * nsg + sg;
        for (std::size_t u = 0; u < nu; ++u) B(u * nv + v, col) = g[base + u];
      }

  Mat C = A * B;

  // scatter C[(tf,sf),(tg,sg)] into output layout [tf, tg, sf, sg]
  std::vector<cplx> out(ntf * ntg * nsf * nsg);
  for (std::size_t tf = 0; tf < ntf; ++tf)
    for (std::size_t tg = 0; tg < ntg; ++tg)
      for (std::size_t sf = 0; sf < nsf; ++sf) {
        const std::size_t base = ((tf * ntg + tg) * nsf + sf) * nsg;
        const std::size_t row = tf * nsf + sf;
        for (std::size_t sg = 0; sg < nsg; ++sg) out[base + sg] = C(row, tg * nsg + sg);
      }
  return KernelTensor(a + c - i - j, b + d - i - j, n, std::move(out));
}

/// f (~x)_{i,j} g: contract then group-symmetrize.
inline KernelTensor contract_sym(const KernelTensor& f, const KernelTensor& g, int i, int j) {
  return symmetrize_groups(contract(f, g, i, j));
}

/// Strict componentwise dominance on chaos indices:
/// (p1,q1) succ (p2,q2) iff (p1,q1) != (p2,q2), p1 >= p2 and q1 >= q2.
inline bool succ(std::pair<int, int> pq1, std::pair<int, int> pq2) {
  return pq1 != pq2 && pq1.first >= pq2.first && pq1.second >= pq2.second;
}

namespace detail {
inline void check_reverse_pair(const KernelTensor& f, const KernelTensor& h, const char* who) {
  const KernelTensor expect = reverse_conjugate(f);
  if (!h.same_shape(expect)) throw input_error(std::string(who) + ": h shape mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k)
    worst = std::max(worst, std::abs(h[k] - expect[k]));
  const double scale = std::max(1.0, norm(f));
  if (worst > 1e-9 * scale)
    throw input_error(std::string(who) + ": h is not the reverse complex conjugate of f");
}
}  // namespace detail

/// Sum of squared contraction norms ||f (x)_{i,j} h||^2 over 0 < i+j < p+q.
inline double contraction_norm_sum(const KernelTensor& f, const KernelTensor& h) {
  const int p = f.p(), q = f.q(), l = p + q;
  double total = 0.0;
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= q; ++j) {
      if (i + j <= 0 || i + j >= l) continue;
      total += norm_sq(contract(f, h, i, j));
    }
  return total;
}

/// The aggregate A(f1,h1,f2,h2): both single-kernel contraction-norm sums.
/// h_k must be the reverse complex conjugate of f_k (checked to tolerance).
inline double quantity_A(const KernelTensor& f1, const KernelTensor& h1, const KernelTensor& f2,
                         const KernelTensor& h2) {
  detail::check_reverse_pair(f1, h1, "quantity_A");
  detail::check_reverse_pair(f2, h2, "quantity_A");
  if (f1.order() < 1 || f2.order() < 1) throw input_error("quantity_A: requires p+q >= 1");
  return contraction_norm_sum(f1, h1) + contraction_norm_sum(f2, h2);
}

/// One-kernel convenience: A(f,h) = sum over 0<i+j<l of ||f (x)_{i,j} h||^2.
inline double quantity_A(const KernelTensor& f, const KernelTensor& h) {
  detail::check_reverse_pair(f, h, "quantity_A");
  if (f.order() < 1) throw input_error("quantity_A: requires p+q >= 1");
  return contraction_norm_sum(f, h);
}

/// The four succ-gated cross terms B(f1,h1,f2,h2); vanishes when no strict
/// dominance relation holds among the index pairs.
inline double quantity_B(const KernelTensor& f1, const KernelTensor& h1, const KernelTensor& f2,
                         const KernelTensor& h2) {
  detail::check_reverse_pair(f1, h1, "quantity_B");
  detail::check_reverse_pair(f2, h2, "quantity_B");
  const int p1 = f1.p(), q1 = f1.q(), p2 = f2.p(), q2 = f2.q();
  double total = 0.0;
  if (succ({p2, q2}, {q1, p1}))
    total += norm_sq(f1) * norm(contract(f2, h2, p2 - q1, q2 - p1));
  if (succ({p2, q2}, {p1, q1}))
    total += norm_sq(f1) * norm(contract(f2, h2, p2 - p1, q2 - q1));
  if (succ({p1, q1}, {q2, p2}))
    total += norm_sq(f2) * norm(contract(f1, h1, p1 - q2, q1 - p2));
  if (succ({p1, q1}, {p2, q2}))
    total += norm_sq(f2) * norm(contract(f1, h1, p1 - p2, q1 - q2));
  return total;
}

}  // namespace cwi
