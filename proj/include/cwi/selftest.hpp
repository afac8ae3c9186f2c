#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cwi/chaos.hpp"
#include "cwi/common.hpp"
#include "cwi/contraction.hpp"
#include "cwi/hermite.hpp"
#include "cwi/kernel.hpp"
#include "cwi/moments.hpp"
#include "cwi/rng.hpp"

namespace cwi {

/// One invariant check: `tag` names the identity being verified, `worst` is the
/// observed deviation against `tolerance`.
struct SelftestResult {
  std::string suite;
  std::string tag;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

namespace detail {

inline void push(std::vector<SelftestResult>& out, const std::string& suite,
                 const std::string& tag, double worst, double tol) {
  out.push_back({suite, tag, worst, tol, worst <= tol});
}

inline std::vector<KernelTensor> selftest_corpus(std::uint64_t seed) {
  std::vector<KernelTensor> corpus;
  int k = 0;
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) {
      if (p + q < 1) continue;
      for (int n = 2; n <= 3; ++n) corpus.push_back(random_kernel(p, q, n, derive_seed(seed, k++)));
    }
  return corpus;
}

}  // namespace detail

/// Runs the invariant suite. `filter` restricts to suites whose name contains
/// it; `mutate` injects a deliberate fault (recognized value: "hermite") so the
/// harness around the suite can be exercised.
inline std::vector<SelftestResult> run_selftest(const std::string& filter = "",
                                                const std::string& mutate = "",
                                                std::uint64_t seed = 0x73656c66ULL) {
  std::vector<SelftestResult> out;
  const auto wants = [&](const std::string& suite) {
    return filter.empty() || suite.find(filter) != std::string::npos;
  };

  if (wants("hermite")) {
    double w_p0 = 0.0, w_11 = 0.0, w_12 = 0.0, w_22 = 0.0, w_gen = 0.0;
    for (int t = 0; t < 50; ++t) {
      const cplx z = 2.0 * complex_gauss(seed, /*stream=*/1, t);
      HermiteTable table(z, 6, 6);
      for (int p = 0; p <= 5; ++p) {
        w_p0 = std::max(w_p0, std::abs(table(p, 0) - std::pow(z, p)));
        w_p0 = std::max(w_p0, std::abs(table(0, p) - std::pow(std::conj(z), p)));
      }
      const double injected = (mutate == "hermite") ? 1.0 : 0.0;
      w_11 = std::max(w_11, std::abs(table(1, 1) + injected - (std::norm(z) - 2.0)));
      w_12 = std::max(w_12, std::abs(table(1, 2) - std::conj(z) * (std::norm(z) - 4.0)));
      const double a2 = std::norm(z);
      w_22 = std::max(w_22, std::abs(table(2, 2) - (a2 * a2 - 8.0 * a2 + 8.0)));

      cplx lam = 0.4 * complex_gauss(seed, /*stream=*/2, t);
      if (std::abs(lam) > 0.45) lam *= 0.45 / std::abs(lam);
      cplx series = 0.0;
      HermiteTable big(z, 16, 16);
      for (int p = 0; p <= 16; ++p)
        for (int q = 0; q <= 16; ++q)
          series += std::pow(std::conj(lam), p) * std::pow(lam, q) /
                    (factorial(p) * factorial(q)) * big(p, q);
      const cplx direct = std::exp(lam * std::conj(z) + std::conj(lam) * z - 2.0 * std::norm(lam));
      w_gen = std::max(w_gen, std::abs(series - direct));
    }
    detail::push(out, "hermite", "H_{p,0}(z)=z^p and H_{0,q}(z)=conj(z)^q", w_p0, 1e-10);
    detail::push(out, "hermite", "H_{1,1}(z)=|z|^2-2", w_11, 1e-12);
    detail::push(out, "hermite", "H_{1,2}(z)=conj(z)(|z|^2-4)", w_12, 1e-11);
    detail::push(out, "hermite", "H_{2,2}(z)=|z|^4-8|z|^2+8", w_22, 1e-10);
    detail::push(out, "hermite",
                 "exp(l conj(z)+conj(l) z-2|l|^2) = sum conj(l)^p l^q/(p!q!) H_{p,q}(z)", w_gen,
                 1e-8);
  }

  if (wants("product")) {
    double worst = 0.0;
    const std::vector<std::pair<int, int>> shapes = {{1, 0}, {0, 1}, {1, 1}, {2, 1}};
    int k = 0;
    for (const auto& [a, b] : shapes)
      for (const auto& [c, d] : shapes) {
        const KernelTensor f = random_kernel(a, b, 3, derive_seed(seed, 100 + k));
        const KernelTensor g = random_kernel(c, d, 3, derive_seed(seed, 200 + k));
        const GaussianField field = sample_field(3, derive_seed(seed, 300 + k));
        worst = std::max(worst, verify_product_formula(f, g, field));
        ++k;
      }
    detail::push(out, "product",
                 "I_{a,b}(f) I_{c,d}(g) = sum C(a,i)C(d,i)C(b,j)C(c,j) i! j! I(f (x)_{i,j} g)",
                 worst, 1e-8);
  }

  if (wants("isometry")) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const KernelTensor f = random_kernel(2, 1, 3, derive_seed(seed, 400 + t));
      const KernelTensor h = reverse_conjugate(f);
      const cplx full = contract(f, h, f.p(), f.q())[0];
      worst = std::max(worst, std::abs(full - norm_sq(f)));
    }
    detail::push(out, "isometry", "f (x)_{p,q} h = <f,f> = ||f||^2", worst, 1e-12);
  }

  if (wants("expansions")) {
    double worst = 0.0;
    for (const KernelTensor& f : detail::selftest_corpus(derive_seed(seed, 5))) {
      if (f.order() < 2) continue;
      const double v1 = kappa_v1(f), v2 = kappa_v2(f);
      worst = std::max(worst, std::abs(v1 - v2) / std::max(1.0, std::abs(v1)));
    }
    detail::push(out, "expansions", "fourth-moment gap expansion v1 = expansion v2", worst, 1e-9);
  }

  if (wants("contraction")) {
    double worst_sym = 0.0, worst_cs = 0.0;
    int k = 0;
    for (const KernelTensor& f : detail::selftest_corpus(derive_seed(seed, 6))) {
      const KernelTensor g = random_kernel(f.p(), f.q(), f.n(), derive_seed(seed, 600 + k++));
      for (int i = 0; i <= std::min(f.p(), g.q()); ++i)
        for (int j = 0; j <= std::min(f.q(), g.p()); ++j) {
          const KernelTensor c = contract(f, g, i, j);
          worst_sym = std::max(worst_sym, norm(symmetrize_groups(c)) - norm(c));
          worst_cs = std::max(worst_cs, norm(c) - norm(f) * norm(g));
        }
    }
    detail::push(out, "contraction", "||sym(f (x)_{i,j} g)|| <= ||f (x)_{i,j} g||", worst_sym,
                 1e-10);
    detail::push(out, "contraction", "||f (x)_{i,j} g|| <= ||f|| ||g||", worst_cs, 1e-10);
  }

  if (wants("lower")) {
    double worst = 0.0;
    for (const KernelTensor& f : detail::selftest_corpus(derive_seed(seed, 7))) {
      if (f.order() < 2) continue;
      const double a = contraction_norm_sum(f, reverse_conjugate(f));
      worst = std::max(worst, lower_c1(f.p(), f.q()) * a - kappa_v1(f));
    }
    detail::push(out, "lower", "c1(p,q) A(f,h) <= kappa", worst, 1e-9);
  }

  return out;
}

}  // namespace cwi
