#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "cwi/common.hpp"
#include "cwi/rng.hpp"

namespace cwi {

inline constexpr std::size_t kMaxKernelCoeffs = 10'000'000;  // dense-storage guard
inline constexpr int kExplicitPermLimit = 10'000;            // p!*q! cutoff for explicit averaging

/// Coordinates of a complex kernel f in H^{(x)p} (x) H^{(x)q} over a truncated
/// n-dimensional orthonormal basis. Layout: the p unbarred indices come first
/// (outermost), then the q barred indices, row-major. Immutable value type.
class KernelTensor {
public:
  KernelTensor(int p, int q, int n, std::vector<cplx> coeffs)
      : p_(p), q_(q), n_(n), coeffs_(std::move(coeffs)) {
    if (p < 0 || q < 0) throw input_error("KernelTensor: negative order");
    if (n < 1) throw input_error("KernelTensor: basis dimension must be >= 1");
    const std::size_t expect = expected_size(p, q, n);
    if (coeffs_.size() != expect)
      throw input_error("KernelTensor: coefficient count " + std::to_string(coeffs_.size()) +
                        " does not match n^(p+q) = " + std::to_string(expect));
  }

  static KernelTensor zero(int p, int q, int n) {
    return KernelTensor(p, q, n, std::vector<cplx>(expected_size(p, q, n)));
  }

  static std::size_t expected_size(int p, int q, int n) {
    if (p < 0 || q < 0 || n < 1) throw input_error("KernelTensor: bad shape");
    std::size_t s = 1;
    for (int k = 0; k < p + q; ++k) {
      if (s > kMaxKernelCoeffs / static_cast<std::size_t>(n))
        throw input_error("KernelTensor: n^(p+q) exceeds the dense-storage guard");
      s *= static_cast<std::size_t>(n);
    }
    return s;
  }

  int p() const { return p_; }
  int q() const { return q_; }
  int n() const { return n_; }
  int order() const { return p_ + q_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx operator[](std::size_t flat) const { return coeffs_[flat]; }

  bool same_shape(const KernelTensor& other) const {
    return p_ == other.p_ && q_ == other.q_ && n_ == other.n_;
  }

private:
  int p_, q_, n_;
  std::vector<cplx> coeffs_;
};

// -- index <-> flat-offset helpers (base-n digits, most significant first) --

inline void decode_index(std::size_t flat, int n, int len, int* out) {
  for (int k = len - 1; k >= 0; --k) {
    out[k] = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
  }
}

inline std::size_t encode_index(const int* idx, int n, int len) {
  std::size_t flat = 0;
  for (int k = 0; k < len; ++k) flat = flat * static_cast<std::size_t>(n) + idx[k];
  return flat;
}

inline KernelTensor make_kernel(int p, int q, int n, std::vector<cplx> coeffs) {
  return KernelTensor(p, q, n, std::move(coeffs));
}

// -- linear algebra on matching shapes --

inline KernelTensor add(const KernelTensor& a, const KernelTensor& b) {
  if (!a.same_shape(b)) throw input_error("add: shape mismatch");
  std::vector<cplx> c(a.coeffs());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += b[k];
  return KernelTensor(a.p(), a.q(), a.n(), std::move(c));
}

inline KernelTensor scale(const KernelTensor& a, cplx s) {
  std::vector<cplx> c(a.coeffs());
  for (auto& v : c) v *= s;
  return KernelTensor(a.p(), a.q(), a.n(), std::move(c));
}

/// <f,g> = sum f * conj(g); conjugate-linear in g.
inline cplx inner_product(const KernelTensor& f, const KernelTensor& g) {
  if (!f.same_shape(g)) throw input_error("inner_product: shape mismatch");
  std::vector<cplx> terms(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) terms[k] = f[k] * std::conj(g[k]);
  return pairwise_sum(terms);
}

inline double norm_sq(const KernelTensor& f) {
  std::vector<double> terms(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) terms[k] = std::norm(f[k]);
  return pairwise_sum<double>(terms);
}

inline double norm(const KernelTensor& f) { return std::sqrt(norm_sq(f)); }

/// h(t_1..t_q, s_1..s_p) = conj f(s_1..s_p, t_1..t_q); shape (q,p,n).
inline KernelTensor reverse_conjugate(const KernelTensor& f) {
  const int p = f.p(), q = f.q(), n = f.n();
  std::vector<cplx> out(f.size());
  const std::size_t np = KernelTensor::expected_size(p, 0, n);
  const std::size_t nq = KernelTensor::expected_size(q, 0, n);
  for (std::size_t s = 0; s < np; ++s)
    for (std::size_t t = 0; t < nq; ++t) out[t * np + s] = std::conj(f[s * nq + t]);
  return KernelTensor(q, p, n, std::move(out));
}

namespace detail {

inline std::vector<std::vector<int>> all_permutations(int m) {
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return perms;
}

inline KernelTensor symmetrize_explicit(const KernelTensor& f) {
  const int p = f.p(), q = f.q(), n = f.n(), l = p + q;
  const auto pperms = all_permutations(p);
  const auto qperms = all_permutations(q);
  std::vector<cplx> out(f.size());
  std::vector<int> idx(l), src(l);
  const double inv = 1.0 / (static_cast<double>(pperms.size()) * qperms.size());
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    decode_index(flat, n, l, idx.data());
    cplx acc = 0.0;
    for (const auto& sp : pperms) {
      for (int k = 0; k < p; ++k) src[k] = idx[sp[k]];
      for (const auto& sq : qperms) {
        for (int k = 0; k < q; ++k) src[p + k] = idx[p + sq[k]];
        acc += f[encode_index(src.data(), n, l)];
      }
    }
    out[flat] = acc * inv;
  }
  return KernelTensor(p, q, n, std::move(out));
}

// Group coordinates by sorted index multisets; O(size * l log l) instead of
// O(size * p! q!).
inline KernelTensor symmetrize_canonical(const KernelTensor& f) {
  const int p = f.p(), q = f.q(), n = f.n(), l = p + q;
  std::vector<cplx> sums(f.size());
  std::vector<double> counts(f.size());
  std::vector<int> idx(l);
  std::vector<std::size_t> canon(f.size());
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    decode_index(flat, n, l, idx.data());
    std::sort(idx.begin(), idx.begin() + p);
    std::sort(idx.begin() + p, idx.end());
    const std::size_t c = encode_index(idx.data(), n, l);
    canon[flat] = c;
    sums[c] += f[flat];
    counts[c] += 1.0;
  }
  std::vector<cplx> out(f.size());
  for (std::size_t flat = 0; flat < f.size(); ++flat)
    out[flat] = sums[canon[flat]] / counts[canon[flat]];
  return KernelTensor(p, q, n, std::move(out));
}

}  // namespace detail

/// Average over S_p x S_q acting within the unbarred and barred index groups
/// separately (never mixing groups). Idempotent, linear, norm non-increasing.
inline KernelTensor symmetrize_groups(const KernelTensor& f) {
  double nperm = factorial(f.p()) * factorial(f.q());
  if (nperm <= kExplicitPermLimit) return detail::symmetrize_explicit(f);
  return detail::symmetrize_canonical(f);
}

/// Max deviation |f[i] - f[sigma(i)]| over adjacent in-group transpositions.
inline double symmetry_defect(const KernelTensor& f) {
  const int p = f.p(), q = f.q(), n = f.n(), l = p + q;
  std::vector<int> idx(l);
  double worst = 0.0;
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    decode_index(flat, n, l, idx.data());
    for (int k = 0; k + 1 < l; ++k) {
      if (k + 1 == p) continue;  // never swap across the group boundary
      if (idx[k] == idx[k + 1]) continue;
      std::swap(idx[k], idx[k + 1]);
      const std::size_t other = encode_index(idx.data(), n, l);
      std::swap(idx[k], idx[k + 1]);
      worst = std::max(worst, std::abs(f[flat] - f[other]));
    }
  }
  return worst;
}

inline bool is_group_symmetric(const KernelTensor& f, double tol = 1e-10) {
  return symmetry_defect(f) <= tol;
}

/// Group-symmetrized kernel with i.i.d. standard complex Gaussian coordinates
/// before symmetrization; deterministic per seed.
inline KernelTensor random_kernel(int p, int q, int n, std::uint64_t seed) {
  const std::size_t sz = KernelTensor::expected_size(p, q, n);
  std::vector<cplx> c(sz);
  for (std::size_t k = 0; k < sz; ++k) c[k] = complex_gauss(seed, /*stream=*/0x6b65726eULL, k);
  return symmetrize_groups(KernelTensor(p, q, n, std::move(c)));
}

}  // namespace cwi
