#pragma once

#include <vector>

#include "cwi/common.hpp"

namespace cwi {

/// Complex Hermite (Hermite-Laguerre-Ito) polynomials H_{p,q}(z) at a fixed z,
/// for all 0 <= p <= pmax, 0 <= q <= qmax. Generating function (variance-2
/// convention): exp(la*conj(z) + conj(la)*z - 2|la|^2) = sum conj(la)^p la^q / (p! q!) H_{p,q}(z).
class HermiteTable {
public:
  HermiteTable(cplx z, int pmax, int qmax)
      : z_(z), pmax_(pmax), qmax_(qmax), values_((pmax + 1) * (qmax + 1)) {
    if (pmax < 0 || qmax < 0) throw input_error("HermiteTable: negative degree");
    at(0, 0) = 1.0;
    // H_{p+1,0} = z H_{p,0}
    for (int p = 0; p < pmax; ++p) at(p + 1, 0) = z * at(p, 0);
    // H_{p,q+1} = conj(z) H_{p,q} - 2p H_{p-1,q}
    for (int q = 0; q < qmax; ++q)
      for (int p = 0; p <= pmax; ++p) {
        cplx v = std::conj(z) * at(p, q);
        if (p >= 1) v -= 2.0 * p * at(p - 1, q);
        at(p, q + 1) = v;
      }
  }

  cplx z() const { return z_; }
  int pmax() const { return pmax_; }
  int qmax() const { return qmax_; }

  cplx operator()(int p, int q) const { return values_[p * (qmax_ + 1) + q]; }

private:
  cplx& at(int p, int q) { return values_[p * (qmax_ + 1) + q]; }

  cplx z_;
  int pmax_, qmax_;
  std::vector<cplx> values_;
};

inline HermiteTable hermite_table(cplx z, int pmax, int qmax) {
  return HermiteTable(z, pmax, qmax);
}

}  // namespace cwi
