#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwi {

using cplx = std::complex<double>;

/// Thrown when caller-supplied data violates a precondition (exit code 2 in the CLI).
class input_error : public std::invalid_argument {
public:
  explicit input_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Thrown when a computation degenerates numerically (short paths, singular covariances).
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double kDefaultRelTol = 1e-12;

inline double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Pairwise (cascade) summation; reduction-order independent by construction.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return T{};
  if (n <= 8) {
    T s{};
    for (const T& x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs));
}

}  // namespace cwi
