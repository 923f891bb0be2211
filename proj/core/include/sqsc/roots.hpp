#pragma once
//
// Polynomial root extraction via companion-matrix eigendecomposition with a
// Newton polish, shared by the spectrum-theory solvers. Closed-form branch
// selection (Cardano and friends) is deliberately avoided: it is error-prone
// near the degenerate families this library must handle gracefully.
//

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace sqsc {

using cplx = std::complex<double>;

/// Horner evaluation of p and p' for ascending coefficients.
inline void poly_eval(const std::vector<cplx>& c, cplx x, cplx& p, cplx& dp) {
  p = cplx(0, 0);
  dp = cplx(0, 0);
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * x + p;
    p = p * x + c[i];
  }
}

/// All complex roots of sum_i c[i] x^i. Leading coefficients below
/// 1e-14 * max|c| are trimmed so degenerate families reduce their degree
/// instead of dividing by ~zero. Each root gets three Newton steps.
inline std::vector<cplx> poly_roots(std::vector<cplx> coeffs) {
  double cmax = 0.0;
  for (const cplx& c : coeffs) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0) return {};
  std::size_t deg = coeffs.size();
  while (deg > 0 && std::abs(coeffs[deg - 1]) <= 1e-14 * cmax) --deg;
  if (deg <= 1) return {};  // constant (or all-negligible) polynomial
  coeffs.resize(deg);
  const std::size_t k = deg - 1;  // polynomial degree

  std::vector<cplx> roots;
  if (k == 1) {
    roots.push_back(-coeffs[0] / coeffs[1]);
  } else if (k == 2) {
    const cplx a = coeffs[2], b = coeffs[1], c0 = coeffs[0];
    const cplx sq = std::sqrt(b * b - 4.0 * a * c0);
    // Pick the larger-magnitude numerator first to avoid cancellation.
    const cplx q = (std::real(std::conj(b) * sq) >= 0.0) ? -0.5 * (b + sq) : -0.5 * (b - sq);
    roots.push_back(q / a);
    roots.push_back(std::abs(q) > 0.0 ? c0 / q : -b / a - roots[0]);
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(k),
                                                   static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i + 1 < k; ++i) comp(static_cast<Eigen::Index>(i + 1),
                                                 static_cast<Eigen::Index>(i)) = 1.0;
    for (std::size_t i = 0; i < k; ++i)
      comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k - 1)) =
          -coeffs[i] / coeffs[k];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      roots.push_back(es.eigenvalues()(i));
  }

  for (cplx& r : roots) {
    for (int it = 0; it < 3; ++it) {
      cplx p, dp;
      poly_eval(coeffs, r, p, dp);
      if (std::abs(dp) == 0.0) break;
      r -= p / dp;
    }
  }
  return roots;
}

/// Real roots of a real-coefficient polynomial; a root is accepted as real
/// when |Im| <= 1e-8 * (1 + |root|). Returned sorted ascending.
inline std::vector<double> poly_real_roots(const std::vector<double>& coeffs) {
  std::vector<cplx> cc(coeffs.begin(), coeffs.end());
  std::vector<double> out;
  for (const cplx& r : poly_roots(std::move(cc)))
    if (std::abs(r.imag()) <= 1e-8 * (1.0 + std::abs(r))) out.push_back(r.real());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sqsc
