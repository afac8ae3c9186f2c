#include <catch2/catch_amalgamated.hpp>

#include "cwi/kernel.hpp"
#include "cwi/rng.hpp"

using namespace cwi;

TEST_CASE("index encode/decode round-trips") {
  const int n = 3, l = 4;
  int idx[4];
  for (std::size_t flat = 0; flat < 81; ++flat) {
    decode_index(flat, n, l, idx);
    REQUIRE(encode_index(idx, n, l) == flat);
  }
}

TEST_CASE("constructor validates shape") {
  REQUIRE_THROWS_AS(KernelTensor(1, 1, 2, std::vector<cplx>(3)), input_error);
  REQUIRE_THROWS_AS(KernelTensor(-1, 0, 2, std::vector<cplx>(1)), input_error);
  REQUIRE_THROWS_AS(KernelTensor(0, 0, 0, std::vector<cplx>(1)), input_error);
  REQUIRE_THROWS_AS(KernelTensor::expected_size(8, 8, 10), input_error);  // guard
}

TEST_CASE("reverse_conjugate is an involution and preserves norm") {
  const KernelTensor f = random_kernel(2, 1, 3, 7);
  const KernelTensor h = reverse_conjugate(f);
  REQUIRE(h.p() == 1);
  REQUIRE(h.q() == 2);
  REQUIRE(norm(h) == Catch::Approx(norm(f)));
  const KernelTensor back = reverse_conjugate(h);
  for (std::size_t k = 0; k < f.size(); ++k) REQUIRE(std::abs(back[k] - f[k]) < 1e-15);
}

TEST_CASE("reverse_conjugate transposes groups pointwise") {
  // f(t1,t2; s) with value v at (t1,t2;s) must appear conjugated at h(s; t1,t2).
  std::vector<cplx> c(KernelTensor::expected_size(2, 1, 2), 0.0);
  int idx[3] = {1, 0, 1};  // t=(1,0), s=(1)
  c[encode_index(idx, 2, 3)] = cplx(2.0, -3.0);
  const KernelTensor f(2, 1, 2, std::move(c));
  const KernelTensor h = reverse_conjugate(f);
  int hidx[3] = {1, 1, 0};  // t'=(1), s'=(1,0)
  REQUIRE(h[encode_index(hidx, 2, 3)] == cplx(2.0, 3.0));
}

TEST_CASE("symmetrize_groups is idempotent, linear-norm-contractive, group-only") {
  const KernelTensor raw(2, 2, 2, [] {
    std::vector<cplx> c(16);
    for (std::size_t k = 0; k < 16; ++k) c[k] = cplx(double(k), double(k % 5));
    return c;
  }());
  const KernelTensor s = symmetrize_groups(raw);
  REQUIRE(is_group_symmetric(s, 1e-12));
  REQUIRE(norm(s) <= norm(raw) + 1e-12);
  const KernelTensor ss = symmetrize_groups(s);
  for (std::size_t k = 0; k < s.size(); ++k) REQUIRE(std::abs(ss[k] - s[k]) < 1e-14);
}

TEST_CASE("explicit and canonical symmetrization agree") {
  const std::size_t sz = KernelTensor::expected_size(2, 2, 3);
  std::vector<cplx> c(sz);
  for (std::size_t k = 0; k < sz; ++k) c[k] = complex_gauss(11, 0, k);
  const KernelTensor f(2, 2, 3, std::move(c));
  const KernelTensor a = detail::symmetrize_explicit(f);
  const KernelTensor b = detail::symmetrize_canonical(f);
  for (std::size_t k = 0; k < sz; ++k) REQUIRE(std::abs(a[k] - b[k]) < 1e-13);
}

TEST_CASE("symmetry_defect detects a cross-group-only symmetric kernel") {
  // symmetric under swapping t<->s but not within the barred group
  std::vector<cplx> c(KernelTensor::expected_size(0, 2, 2), 0.0);
  int i01[2] = {0, 1};
  c[encode_index(i01, 2, 2)] = 1.0;
  const KernelTensor f(0, 2, 2, std::move(c));
  REQUIRE(symmetry_defect(f) > 0.5);
  REQUIRE_FALSE(is_group_symmetric(f));
}

TEST_CASE("inner product is conjugate-linear in the second argument") {
  const KernelTensor f = random_kernel(1, 1, 3, 1);
  const KernelTensor g = random_kernel(1, 1, 3, 2);
  const cplx s(0.5, -2.0);
  const cplx lhs = inner_product(f, scale(g, s));
  const cplx rhs = std::conj(s) * inner_product(f, g);
  REQUIRE(std::abs(lhs - rhs) < 1e-12);
  REQUIRE(std::abs(inner_product(f, f) - cplx(norm_sq(f))) < 1e-12);
}

TEST_CASE("random_kernel is deterministic per seed and group-symmetric") {
  const KernelTensor a = random_kernel(2, 1, 3, 42);
  const KernelTensor b = random_kernel(2, 1, 3, 42);
  const KernelTensor c = random_kernel(2, 1, 3, 43);
  for (std::size_t k = 0; k < a.size(); ++k) REQUIRE(a[k] == b[k]);
  REQUIRE(is_group_symmetric(a, 1e-12));
  double diff = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) diff = std::max(diff, std::abs(a[k] - c[k]));
  REQUIRE(diff > 1e-3);
}
