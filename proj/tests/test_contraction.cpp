#include <catch2/catch_amalgamated.hpp>

#include "cwi/contraction.hpp"
#include "cwi/kernel.hpp"
#include "oracles.hpp"

using namespace cwi;

namespace {

double max_abs_diff(const KernelTensor& a, const KernelTensor& b) {
  REQUIRE(a.same_shape(b));
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

}  // namespace

TEST_CASE("contract matches the nested-loop oracle across admissible (i,j)") {
  const std::vector<std::pair<int, int>> shapes = {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {2, 2}};
  int seed = 0;
  for (const auto& [a, b] : shapes)
    for (const auto& [c, d] : shapes) {
      const KernelTensor f = random_kernel(a, b, 3, 100 + seed);
      const KernelTensor g = random_kernel(c, d, 3, 200 + seed);
      ++seed;
      for (int i = 0; i <= std::min(a, d); ++i)
        for (int j = 0; j <= std::min(b, c); ++j) {
          INFO("shapes (" << a << "," << b << ")x(" << c << "," << d << ") i=" << i << " j=" << j);
          REQUIRE(max_abs_diff(contract(f, g, i, j), oracles::naive_contract(f, g, i, j)) < 1e-12);
        }
    }
}

TEST_CASE("contract range validation") {
  const KernelTensor f = random_kernel(1, 1, 2, 1);
  const KernelTensor g = random_kernel(1, 1, 2, 2);
  const KernelTensor other_n = random_kernel(1, 1, 3, 3);
  REQUIRE_THROWS_AS(contract(f, g, 2, 0), input_error);
  REQUIRE_THROWS_AS(contract(f, g, 0, 2), input_error);
  REQUIRE_THROWS_AS(contract(f, g, -1, 0), input_error);
  REQUIRE_THROWS_AS(contract(f, other_n, 0, 0), input_error);
}

TEST_CASE("(0,0)-contraction is the tensor product") {
  const KernelTensor f = random_kernel(1, 0, 2, 5);
  const KernelTensor g = random_kernel(0, 1, 2, 6);
  const KernelTensor t = contract(f, g, 0, 0);
  REQUIRE(t.p() == 1);
  REQUIRE(t.q() == 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      int idx[2] = {a, b};
      REQUIRE(std::abs(t[encode_index(idx, 2, 2)] - f[a] * g[b]) < 1e-15);
    }
}

TEST_CASE("full contraction against the reverse conjugate recovers the squared norm") {
  for (int seed = 0; seed < 5; ++seed) {
    const KernelTensor f = random_kernel(2, 1, 3, 300 + seed);
    const KernelTensor h = reverse_conjugate(f);
    const KernelTensor full = contract(f, h, f.p(), f.q());
    REQUIRE(full.order() == 0);
    REQUIRE(std::abs(full[0] - cplx(norm_sq(f))) < 1e-11);
  }
}

TEST_CASE("slot choice is immaterial for group-symmetric inputs") {
  // Contracting the FIRST slots instead of the last ones: permute a symmetric
  // kernel's index groups first; the result must be unchanged.
  const KernelTensor f = random_kernel(2, 1, 3, 7);
  const KernelTensor g = random_kernel(1, 2, 3, 8);
  // reverse the unbarred group of f by hand
  std::vector<cplx> c(f.size());
  int idx[3];
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    decode_index(flat, 3, 3, idx);
    std::swap(idx[0], idx[1]);
    c[flat] = f[encode_index(idx, 3, 3)];
  }
  const KernelTensor f_swapped(2, 1, 3, std::move(c));
  REQUIRE(max_abs_diff(contract(f, g, 1, 1), contract(f_swapped, g, 1, 1)) < 1e-12);
}

TEST_CASE("contraction is bilinear") {
  const KernelTensor f1 = random_kernel(1, 1, 2, 11);
  const KernelTensor f2 = random_kernel(1, 1, 2, 12);
  const KernelTensor g = random_kernel(1, 1, 2, 13);
  const cplx s(1.5, -0.5);
  const KernelTensor lhs = contract(add(f1, scale(f2, s)), g, 1, 0);
  const KernelTensor rhs = add(contract(f1, g, 1, 0), scale(contract(f2, g, 1, 0), s));
  REQUIRE(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("contraction norm inequalities hold on random pairs") {
  for (int seed = 0; seed < 20; ++seed) {
    const KernelTensor f = random_kernel(2, 1, 3, 400 + seed);
    const KernelTensor g = random_kernel(1, 2, 3, 500 + seed);
    for (int i = 0; i <= std::min(f.p(), g.q()); ++i)
      for (int j = 0; j <= std::min(f.q(), g.p()); ++j) {
        const KernelTensor c = contract(f, g, i, j);
        REQUIRE(norm(c) <= norm(f) * norm(g) + 1e-10);
        REQUIRE(norm(symmetrize_groups(c)) <= norm(c) + 1e-10);
      }
  }
}

TEST_CASE("succ is a strict dominance order") {
  REQUIRE(succ({5, 1}, {3, 1}));
  REQUIRE(succ({2, 2}, {1, 1}));
  REQUIRE_FALSE(succ({2, 2}, {2, 2}));
  REQUIRE_FALSE(succ({5, 1}, {3, 2}));
  REQUIRE_FALSE(succ({3, 2}, {5, 1}));
}

TEST_CASE("quantity_A single-sum convention and validation") {
  // f = e1 (x) bar-e1 in n=2: the only admissible middle contractions are
  // (0,1) and (1,0), each of norm 1, so A(f,h) = 2.
  std::vector<cplx> c(4, 0.0);
  int idx[2] = {1, 1};
  c[encode_index(idx, 2, 2)] = 1.0;
  const KernelTensor f(1, 1, 2, std::move(c));
  const KernelTensor h = reverse_conjugate(f);
  REQUIRE(quantity_A(f, h) == Catch::Approx(2.0));
  REQUIRE(quantity_A(f, h, f, h) == Catch::Approx(4.0));

  std::vector<cplx> c2(4, 0.0);
  int idx2[2] = {0, 1};
  c2[encode_index(idx2, 2, 2)] = 1.0;
  const KernelTensor off_diag(1, 1, 2, std::move(c2));  // e0 (x) bar-e1, h != f
  REQUIRE_THROWS_AS(quantity_A(off_diag, off_diag), input_error);
}

TEST_CASE("quantity_B gates vanish without dominance") {
  const KernelTensor f1 = random_kernel(5, 1, 2, 21);
  const KernelTensor f2 = random_kernel(3, 2, 2, 22);
  REQUIRE(quantity_B(f1, reverse_conjugate(f1), f2, reverse_conjugate(f2)) == 0.0);
  const KernelTensor g1 = random_kernel(2, 2, 2, 23);
  const KernelTensor g2 = random_kernel(1, 1, 2, 24);
  REQUIRE(quantity_B(g1, reverse_conjugate(g1), g2, reverse_conjugate(g2)) > 1e-8);
}
