#pragma once
//
// Entry-wise compression operators (sparsify / quantize / binarize / sign)
// and their Gaussian-Hermite coefficients (a0, a1, a2, nu), computed both in
// closed form and by Gauss-Hermite quadrature. The coefficient triple
// (a1, a2, nu) is the only thing the spectrum theory ever sees of f.
//

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sqsc/common.hpp"

namespace sqsc {

enum class NonlinKind { Linear, Sparse, Quantize, Binarize, Sign, Custom };

/// A compression operator. `s` is the truncation threshold (the operator
/// switches branch at |t| = sqrt(2)*s); `M >= 2` is the quantizer's bit
/// parameter. Sign is Binarize with s = 0.
struct Nonlinearity {
  NonlinKind kind = NonlinKind::Linear;
  double s = 0.0;
  int M = 2;
  std::function<double(double)> custom_fn;
  std::string custom_name;

  static Nonlinearity linear() { return {NonlinKind::Linear, 0.0, 2, nullptr, {}}; }
  static Nonlinearity sparse(double s) { return {NonlinKind::Sparse, s, 2, nullptr, {}}; }
  static Nonlinearity quantize(int M, double s) {
    return {NonlinKind::Quantize, s, M, nullptr, {}};
  }
  static Nonlinearity binarize(double s) { return {NonlinKind::Binarize, s, 2, nullptr, {}}; }
  static Nonlinearity sign() { return {NonlinKind::Sign, 0.0, 2, nullptr, {}}; }
  static Nonlinearity custom(std::string name, std::function<double(double)> fn) {
    Nonlinearity f;
    f.kind = NonlinKind::Custom;
    f.custom_fn = std::move(fn);
    f.custom_name = std::move(name);
    return f;
  }
};

/// Gaussian moments of f: a0 = E[f(xi)], a1 = E[xi f(xi)],
/// sqrt(2) a2 = E[xi^2 f(xi)] - a0, nu = E[f^2(xi)] - a0^2, xi ~ N(0,1).
/// Always nu >= a1^2 + a2^2. For the built-in (odd) operators a0 = 0.
struct HermiteCoefficients {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double nu = 0.0;
  /// True when a nonzero a0 was measured (Custom operators only): downstream
  /// kernel builds must subtract a0 before use.
  bool a0_nonzero = false;
};

/// Validate invariants (s >= 0, M >= 2 for Quantize, callable Custom).
void validate(const Nonlinearity& f);

/// Evaluate f(t). Total function; the boundary |t| = sqrt(2)*s falls in the
/// non-exceeding branch.
double apply(const Nonlinearity& f, double t);

/// Closed-form coefficients for the built-in operators (rejects Custom).
HermiteCoefficients coefficients_closed_form(const Nonlinearity& f);

/// Quadrature coefficients; works for any kind including Custom. Smooth
/// operators use an `nodes`-point Gauss-Hermite rule; the piecewise-constant
/// built-ins are integrated segment by segment between their jump points
/// with `nodes` Gauss-Legendre points per segment, so the jumps cost no
/// accuracy. `nodes >= 64`; the default matches the closed forms to well
/// below 1e-10 for every built-in.
HermiteCoefficients coefficients_quadrature(const Nonlinearity& f, int nodes = 200);

/// d a1 / ds and d nu / ds of the closed forms (Sparse/Quantize/Binarize;
/// zero for Linear/Sign). Used by the optimal-threshold solver.
void coefficient_derivatives(const Nonlinearity& f, double& da1_ds, double& dnu_ds);

/// Expected fraction of nonzero kernel entries in the Gaussian limit:
/// erfc(s) for Sparse/Binarize, 1 otherwise.
double sparsity_level(const Nonlinearity& f);

/// Estimated payload bits for an n x n kernel: nonzero-count (= sparsity *
/// n^2) times the per-entry cost: dense float for Linear/Sparse/Custom,
/// 2^{M-2}+1 bits for Quantize, 1 bit for Binarize/Sign.
std::int64_t storage_bits(const Nonlinearity& f, std::int64_t n, int bits_per_dense_entry);

/// Alternative per-entry accounting for Quantize: ceil(log2(codebook size))
/// with codebook size 2^{M-1}+2. Identical to storage_bits for other kinds.
std::int64_t storage_bits_naive(const Nonlinearity& f, std::int64_t n,
                                int bits_per_dense_entry);

/// The quantizer's full value set, sorted ascending:
/// {±2^{2-M}(k+1/2) : 0 <= k < 2^{M-2}} ∪ {±1}.
std::vector<double> quantize_codebook(int M);

/// Compact spec strings: `linear`, `sparse:s=1.25`, `quantize:M=3,s=0.8`,
/// `binarize:s=0.43`, `sign`.
std::string to_string(const Nonlinearity& f);
Nonlinearity parse_nonlinearity(const std::string& spec);

/// Gauss-Hermite rule adapted to the standard normal weight:
/// E[g(xi)] ~= sum_i weights[i] * g(nodes[i]). Rules are cached per size.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussHermiteRule& gauss_hermite(int n);

}  // namespace sqsc
