//
// Spectral theory engine implementation.
//

#include "sqsc/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sqsc/parallel.hpp"
#include "sqsc/roots.hpp"

namespace sqsc {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSqrtPi = 1.77245385090551602729816748334114518;

double sq(double v) { return v * v; }

// Fixed-point residual of the self-consistent equation
//   -1/m = z + a1^2 m / (c + a1 m) + (nu - a1^2) m / c.
double fixed_point_residual(const SpectrumModel& md, cplx z, cplx m) {
  const double beta = md.nu - sq(md.a1);
  const cplx lhs = -1.0 / m;
  const cplx rhs = z + sq(md.a1) * m / (md.c + md.a1 * m) + beta * m / md.c;
  return std::abs(lhs - rhs);
}

// Ascending coefficients of the cleared cubic in m (constant term first).
std::vector<cplx> master_cubic(const SpectrumModel& md, cplx z) {
  const double beta = md.nu - sq(md.a1);
  return {cplx(sq(md.c), 0.0), md.c * (z * md.c + md.a1), md.c * (z * md.a1 + md.nu),
          cplx(md.a1 * beta, 0.0)};
}

// All roots of the master polynomial at z, ordered so the one nearest to
// `seed` comes first. When the cubic is nondegenerate the roots come from a
// cheap Newton-plus-deflation solve (the seed is always close to one root);
// degenerate families and Newton failures fall back to the companion matrix.
std::vector<cplx> master_roots_near(const SpectrumModel& md, cplx z, cplx seed) {
  const std::vector<cplx> coeffs = master_cubic(md, z);
  double cmax = 0.0;
  for (const cplx& c : coeffs) cmax = std::max(cmax, std::abs(c));
  std::vector<cplx> roots;
  if (std::abs(coeffs[3]) > 1e-14 * cmax) {
    cplx r = seed;
    bool ok = false;
    for (int it = 0; it < 24; ++it) {
      cplx p, dp;
      poly_eval(coeffs, r, p, dp);
      if (std::abs(dp) == 0.0) break;
      const cplx step = p / dp;
      r -= step;
      if (std::abs(step) <= 1e-14 * (1.0 + std::abs(r))) {
        ok = true;
        break;
      }
    }
    if (ok) {
      // Deflate by the converged root; the remaining quadratic is solved in
      // the cancellation-stable form.
      const cplx b1 = coeffs[3];
      const cplx b0 = coeffs[2] + b1 * r;
      const cplx c0 = coeffs[1] + b0 * r;
      const cplx disc = std::sqrt(b0 * b0 - 4.0 * b1 * c0);
      const cplx q = (std::real(std::conj(b0) * disc) >= 0.0) ? -0.5 * (b0 + disc)
                                                              : -0.5 * (b0 - disc);
      roots = {r, q / b1, std::abs(q) > 0.0 ? c0 / q : -b0 / b1 - q / b1};
      for (std::size_t i = 1; i < roots.size(); ++i) {
        for (int it = 0; it < 2; ++it) {
          cplx p, dp;
          poly_eval(coeffs, roots[i], p, dp);
          if (std::abs(dp) == 0.0) break;
          roots[i] -= p / dp;
        }
      }
    }
  }
  if (roots.empty()) roots = poly_roots(coeffs);
  if (roots.empty()) throw NumericsError("stieltjes: master polynomial had no roots");
  std::sort(roots.begin(), roots.end(),
            [&](const cplx& a, const cplx& b) { return std::abs(a - seed) < std::abs(b - seed); });
  return roots;
}

// The physical branch of the master equation. Root selection by the sign of
// Im[m] alone is ambiguous close to the real axis, where all roots become
// nearly real; instead the branch is tracked by continuation in Im[z] from
// the asymptotic regime, where the transform of a unit-mass law is -1/z.
// Halving Im[z] per rung keeps the tracked root separated from the spurious
// ones: root gaps shrink no faster than sqrt(Im z) near support edges while
// one rung moves the root by a fraction of that gap.
cplx track_branch(const SpectrumModel& md, double x, double y_target) {
  const double beta = md.nu - sq(md.a1);
  const double scale = 1.0 + std::abs(x) + md.a1 * (1.0 + 1.0 / md.c) + md.nu +
                       2.0 * std::sqrt(std::max(beta, 0.0) * (1.0 + 1.0 / md.c));
  double y = std::max(8.0 * scale, y_target);
  cplx m = -1.0 / cplx(x, y);
  for (;;) {
    m = master_roots_near(md, cplx(x, y), m).front();
    if (y <= y_target) return m;
    y = std::max(0.5 * y, y_target);
  }
}

double horner(const std::vector<double>& ascending, double x) {
  double p = 0.0;
  for (std::size_t i = ascending.size(); i-- > 0;) p = p * x + ascending[i];
  return p;
}

// F and G of the phase-transition corollary.
std::vector<double> F_coeffs(const SpectrumModel& md) {
  return {-md.c, -2.0 * md.c, 1.0 - md.c * md.nu / sq(md.a1), 2.0, 1.0};
}

double G_of(const SpectrumModel& md, double x) {
  const double beta = md.nu - sq(md.a1);
  return (md.a1 / md.c) * (1.0 + x) + md.a1 / x + (beta / md.a1) / (1.0 + x);
}

}  // namespace

void validate(const SpectrumModel& md) {
  const bool finite = std::isfinite(md.a1) && std::isfinite(md.a2) && std::isfinite(md.nu) &&
                      std::isfinite(md.c) && std::isfinite(md.kappa) && std::isfinite(md.rho) &&
                      std::isfinite(md.eta);
  if (!finite) throw DomainError("model: non-finite parameter");
  if (!(md.c > 0.0)) throw DomainError("model: c must be positive");
  if (md.nu < 0.0) throw DomainError("model: nu must be nonnegative");
  if (md.nu < sq(md.a1) + sq(md.a2) - 1e-9 * std::max(1.0, md.nu)) {
    throw DomainError("model: nu < a1^2 + a2^2 is impossible for a Gaussian moment");
  }
  if (md.kappa < 1.0) throw DomainError("model: kurtosis below 1");
  if (md.rho < 0.0) throw DomainError("model: rho must be nonnegative");
  if (std::abs(md.eta) > 1.0) throw DomainError("model: |eta| must be at most 1");
}

SpectrumModel model_from_operator(const Nonlinearity& f, double c, double kappa, double rho,
                                  double eta) {
  const HermiteCoefficients h =
      f.kind == NonlinKind::Custom ? coefficients_quadrature(f) : coefficients_closed_form(f);
  SpectrumModel md;
  md.a1 = h.a1;
  md.a2 = h.a2;
  md.nu = h.nu;
  md.c = c;
  md.kappa = kappa;
  md.rho = rho;
  md.eta = eta;
  validate(md);
  return md;
}

bool SupportDescription::contains(double x, double margin) const {
  for (std::size_t i = 0; i + 1 < edges.size(); i += 2) {
    if (x >= edges[i] - margin && x <= edges[i + 1] + margin) return true;
  }
  return false;
}

std::complex<double> stieltjes(const SpectrumModel& md, std::complex<double> z) {
  validate(md);
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("stieltjes: non-finite z");
  }
  cplx m;
  if (z.imag() > 0.0) {
    m = track_branch(md, z.real(), z.imag());
  } else if (z.imag() < 0.0) {
    m = std::conj(track_branch(md, z.real(), -z.imag()));
  } else {
    // Real z: take the limit from the upper half-plane. Track the physical
    // branch down to a tiny offset, then pick the nearest exact root.
    const cplx probe = track_branch(md, z.real(), 1e-9);
    m = master_roots_near(md, z, probe).front();
  }
  const double res = fixed_point_residual(md, z, m);
  if (!(res <= 1e-10 * (1.0 + std::abs(z)))) {
    std::ostringstream os;
    os << "stieltjes: residual " << res << " at z = (" << z.real() << ", " << z.imag()
       << "); candidate roots:";
    for (const cplx& r : poly_roots(master_cubic(md, z))) {
      os << " (" << r.real() << ", " << r.imag() << ")";
    }
    throw NumericsError(os.str());
  }
  return m;
}

std::vector<double> density(const SpectrumModel& md, const std::vector<double>& x_grid,
                            const DensityOptions& opts) {
  validate(md);
  if (!(opts.eps_im > 0.0)) throw DomainError("density: eps_im must be positive");
  std::vector<double> out(x_grid.size(), 0.0);
  const RangeBlocks blocks{static_cast<std::int64_t>(x_grid.size()), 64};
  std::vector<std::string> failure(static_cast<std::size_t>(blocks.count()));
  parallel_for_blocks(blocks.count(), opts.threads, [&](std::int64_t b) {
    try {
      for (std::int64_t i = blocks.begin(b); i < blocks.end(b); ++i) {
        const double x = x_grid[static_cast<std::size_t>(i)];
        const cplx m1 = track_branch(md, x, opts.eps_im);
        const double r1 = m1.imag() / kPi;
        double val = r1;
        if (opts.richardson) {
          // One extra continuation rung from the already-tracked root keeps
          // both evaluations on the same branch.
          const cplx m2 = master_roots_near(md, cplx(x, 0.5 * opts.eps_im), m1).front();
          val = 2.0 * m2.imag() / kPi - r1;  // cancels the O(eps) boundary error
        }
        if (val < -1e-6) {
          throw NumericsError("density: negative value " + std::to_string(val) + " at x = " +
                              std::to_string(x));
        }
        out[static_cast<std::size_t>(i)] = std::max(val, 0.0);
      }
    } catch (const std::exception& e) {
      failure[static_cast<std::size_t>(b)] = e.what();
    }
  });
  for (const std::string& msg : failure) {
    if (!msg.empty()) throw NumericsError(msg);
  }
  return out;
}

double x_of_m(const SpectrumModel& md, double m) {
  const double beta = md.nu - sq(md.a1);
  const double denom = md.c + md.a1 * m;
  if (m == 0.0 || denom == 0.0) throw DomainError("x_of_m: evaluation at a pole");
  return -1.0 / m - sq(md.a1) * m / denom - beta * m / md.c;
}

double x_prime_of_m(const SpectrumModel& md, double m) {
  const double beta = md.nu - sq(md.a1);
  const double denom = md.c + md.a1 * m;
  if (m == 0.0 || denom == 0.0) throw DomainError("x_prime_of_m: evaluation at a pole");
  return 1.0 / sq(m) - sq(md.a1) * md.c / sq(denom) - beta / md.c;
}

SupportDescription support_edges(const SpectrumModel& md) {
  validate(md);
  if (!(md.nu > 0.0)) throw DomainError("support_edges: degenerate model with nu = 0");
  const double a1 = md.a1, c = md.c;
  const double beta = md.nu - sq(a1);

  std::vector<double> edges;
  if (beta <= 1e-12 * std::max(md.nu, sq(a1))) {
    // nu = a1^2: pure Marchenko-Pastur shape; one extremum escapes to
    // m = infinity (x -> -a1), so the quartic loses it. Closed form instead.
    const double lo = a1 * (1.0 / c - 2.0 / std::sqrt(c));
    const double hi = a1 * (1.0 / c + 2.0 / std::sqrt(c));
    edges = {std::min(lo, hi), std::max(lo, hi)};
  } else {
    // x'(m) = 0 cleared by m^2 (c + a1 m)^2 c: quartic in m (ascending).
    const std::vector<double> quartic = {
        c * c * c, 2.0 * a1 * c * c, sq(a1) * c - md.nu * c * c, -2.0 * a1 * beta * c,
        -sq(a1) * beta};
    for (const double m : poly_real_roots(quartic)) {
      if (std::abs(m) < 1e-300) continue;
      if (std::abs(c + a1 * m) <= 1e-10 * (c + std::abs(a1 * m))) continue;
      edges.push_back(x_of_m(md, m));
    }
    std::sort(edges.begin(), edges.end());
    // Merge near-coincident extrema (support components touching).
    std::vector<double> merged;
    for (const double e : edges) {
      if (merged.empty() || std::abs(e - merged.back()) > 1e-9 * (1.0 + std::abs(e))) {
        merged.push_back(e);
      }
    }
    edges = std::move(merged);
  }

  if (edges.size() != 2 && edges.size() != 4) {
    std::ostringstream os;
    os << "support_edges: expected 2 or 4 edges, found " << edges.size() << ":";
    for (const double e : edges) os << ' ' << e;
    throw NumericsError(os.str());
  }
  SupportDescription out;
  out.edges = std::move(edges);
  out.components = static_cast<int>(out.edges.size() / 2);
  return out;
}

std::vector<SpikePrediction> noninformative_spikes(const SpectrumModel& md,
                                                   std::vector<SpikeCandidate>* diagnostics) {
  validate(md);
  if (diagnostics) diagnostics->clear();
  std::vector<SpikePrediction> out;
  if (std::abs(md.a2) <= 1e-14 || md.kappa <= 1.0 + 1e-14) return out;

  const double mag = std::sqrt(2.0 / (md.kappa - 1.0)) / md.a2;
  const double beta = md.nu - sq(md.a1);
  const double xs[2] = {mag, -mag};

  // Degenerate pair x = +-1/a1: one candidate hits the pole of x(m) and the
  // two spikes merge into a single isolated eigenvalue.
  for (const double x : xs) {
    if (std::abs(md.a1 * x - 1.0) <= 1e-10 * (1.0 + std::abs(md.a1 * x))) {
      const double lhs = beta * sq(x) + sq(md.a1 * x) / sq(1.0 + md.a1 * x);
      const double z = -md.nu / md.a1 - md.a1 * (2.0 - md.c) / (2.0 * md.c);
      const bool adm = lhs < 1.0 / md.c;
      if (diagnostics) diagnostics->push_back({x, z, adm});
      if (adm) out.push_back({z, md.c * x, false, 0.0, true});
      return out;
    }
  }

  for (const double x : xs) {
    const double denom = 1.0 + md.a1 * x;
    if (std::abs(denom) <= 1e-12 * (1.0 + std::abs(md.a1 * x))) {
      if (diagnostics) diagnostics->push_back({x, 0.0, false});
      continue;
    }
    const double lhs = beta * sq(x) + sq(md.a1 * x) / sq(denom);
    const double z = -1.0 / (md.c * x) - sq(md.a1) * x / denom - beta * x;
    const bool adm = lhs < 1.0 / md.c;
    if (diagnostics) diagnostics->push_back({x, z, adm});
    if (adm) out.push_back({z, md.c * x, false, 0.0, true});
  }
  std::sort(out.begin(), out.end(),
            [](const SpikePrediction& a, const SpikePrediction& b) {
              return a.location < b.location;
            });
  return out;
}

double phase_transition(const SpectrumModel& md) {
  validate(md);
  if (!(md.a1 > 0.0)) {
    throw DomainError(
        "phase_transition: requires a1 > 0 (negate the operator and study -K instead)");
  }
  if (std::abs(md.a2) > 1e-12) {
    throw DomainError("phase_transition: defined for a2 = 0 models (use general_spikes)");
  }
  const std::vector<double> F = F_coeffs(md);
  const std::vector<double> roots = poly_real_roots(F);
  if (roots.empty()) throw NumericsError("phase_transition: F has no real roots");
  double gamma = roots.back();
  // One Newton polish on F.
  cplx p, dp;
  std::vector<cplx> Fc(F.begin(), F.end());
  poly_eval(Fc, cplx(gamma, 0.0), p, dp);
  if (std::abs(dp) > 0.0) gamma -= (p / dp).real();

  const double lo = std::sqrt(md.c);
  const double hi = std::sqrt(md.c * md.nu) / md.a1;
  if (gamma < lo - 1e-9 * (1.0 + lo) || gamma > hi + 1e-9 * (1.0 + hi)) {
    std::ostringstream os;
    os << "phase_transition: gamma = " << gamma << " violates the bracket [" << lo << ", " << hi
       << "] (root-finder bug)";
    throw NumericsError(os.str());
  }
  return gamma;
}

SpikePrediction informative_spike(const SpectrumModel& md) {
  const double gamma = phase_transition(md);
  SpikePrediction out;
  if (md.rho > gamma) {
    const double rho = md.rho;
    const double F_rho = horner(F_coeffs(md), rho);
    out.location = G_of(md, rho);
    out.m_value = -md.c / (md.a1 * (1.0 + rho));
    out.informative = true;
    out.alignment = std::clamp(F_rho / (rho * sq(1.0 + rho) * (1.0 + rho)), 0.0, 1.0);
  } else {
    out.location = G_of(md, gamma);  // right bulk edge: no isolated eigenvalue
    out.m_value = -md.c / (md.a1 * (1.0 + gamma));
    out.informative = false;
    out.alignment = 0.0;
  }
  return out;
}

std::vector<SpikePrediction> general_spikes(const SpectrumModel& md) {
  validate(md);
  const double a1 = md.a1, a2 = md.a2, c = md.c, rho = md.rho, eta = md.eta;
  const double k1 = md.kappa - 1.0;
  // Spike catalogue polynomial H(m), ascending coefficients.
  const std::vector<double> H = {2.0 * c * c * c, 2.0 * a1 * c * c * (rho + 1.0),
                                 -sq(a2) * c * k1, a1 * sq(a2) * k1 * (sq(eta) * rho - 1.0 - rho)};
  const double m_star = a1 > 1e-14 ? -c / (a1 * (1.0 + rho)) : std::numeric_limits<double>::quiet_NaN();
  const bool alignment_closed_form = eta == 0.0 || std::abs(a2) <= 1e-14;

  std::vector<SpikePrediction> out;
  for (const double m : poly_real_roots(H)) {
    if (std::abs(m) < 1e-300) continue;
    // Clearing denominators plants a phantom root at the pole m = -c/a1
    // (e.g. the rho = 0 factorization); x(m) diverges there.
    if (std::abs(c + a1 * m) <= 1e-10 * (c + std::abs(a1 * m))) continue;
    const double xp = x_prime_of_m(md, m);
    if (!(xp > 0.0)) continue;  // inside the bulk: no isolated eigenvalue
    SpikePrediction sp;
    sp.location = x_of_m(md, m);
    sp.m_value = m;
    sp.informative = std::isfinite(m_star) && std::abs(m - m_star) <= 1e-8 * (1.0 + std::abs(m_star));
    if (sp.informative) {
      if (alignment_closed_form) {
        sp.alignment = std::clamp((rho / (1.0 + rho)) * sq(m) * xp, 0.0, 1.0);
        sp.alignment_available = true;
      } else {
        sp.alignment = 0.0;
        sp.alignment_available = false;
      }
    } else {
      sp.alignment = 0.0;
      sp.alignment_available = true;
    }
    out.push_back(sp);
  }
  std::sort(out.begin(), out.end(),
            [](const SpikePrediction& a, const SpikePrediction& b) {
              return a.location < b.location;
            });
  return out;
}

double misclassification(double alpha) {
  if (!(alpha >= 0.0) || alpha >= 1.0) {
    throw DomainError("misclassification: alignment must lie in [0, 1)");
  }
  return 0.5 * std::erfc(std::sqrt(alpha / (2.0 - 2.0 * alpha)));
}

double optimal_threshold(NonlinKind family, int M) {
  if (family == NonlinKind::Binarize) {
    // s = exp(-s^2) / (2 sqrt(pi) erfc(s)): bisection on the monotone residual.
    auto g = [](double s) {
      return s - std::exp(-s * s) / (2.0 * kSqrtPi * std::erfc(s));
    };
    double lo = 0.0, hi = 2.0;
    if (!(g(lo) < 0.0 && g(hi) > 0.0)) {
      throw DomainError("optimal_threshold: binarize bracket not found");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < 0.0 ? lo : hi) = mid;
      if (hi - lo < 1e-12) break;
    }
    return 0.5 * (lo + hi);
  }
  if (family == NonlinKind::Quantize) {
    if (M < 2) throw DomainError("optimal_threshold: quantize requires M >= 2");
    // Stationarity of nu / a1^2: a1 nu' - 2 a1' nu = 0.
    auto h = [M](double s) {
      const Nonlinearity f = Nonlinearity::quantize(M, s);
      const HermiteCoefficients q = coefficients_closed_form(f);
      double da1 = 0.0, dnu = 0.0;
      coefficient_derivatives(f, da1, dnu);
      return q.a1 * dnu - 2.0 * da1 * q.nu;
    };
    double lo = 1e-3, hi = 8.0;
    if (!(h(lo) < 0.0 && h(hi) > 0.0)) {
      throw DomainError("optimal_threshold: quantize bracket not found (family misconfigured)");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) < 0.0 ? lo : hi) = mid;
      if (hi - lo < 1e-11) break;
    }
    return 0.5 * (lo + hi);
  }
  throw DomainError("optimal_threshold: family must be Binarize or Quantize");
}

UniformEquivalent uniform_equivalent(double s) {
  if (!(s >= 0.0)) throw DomainError("uniform_equivalent: s must be nonnegative");
  UniformEquivalent out;
  out.eps_selec = std::erfc(s);
  out.eps_unif = std::erfc(s) + 2.0 * s * std::exp(-s * s) / kSqrtPi;
  out.ratio = out.eps_selec / out.eps_unif;
  out.ratio_asymptote = 1.0 / (2.0 * (1.0 + s * s));
  return out;
}

SubsamplingTheory subsampling_theory(const SpectrumModel& md, double eps_sub) {
  validate(md);
  if (!(eps_sub > 0.0 && eps_sub <= 1.0)) {
    throw DomainError("subsampling_theory: eps_sub must lie in (0, 1]");
  }
  SpectrumModel sub = md;
  sub.a1 = std::sqrt(md.nu);
  sub.a2 = 0.0;
  sub.c = md.c / eps_sub;
  SubsamplingTheory out;
  out.gamma = phase_transition(sub);
  const SpikePrediction sp = informative_spike(sub);
  out.lambda = sp.location;
  out.alpha = sp.alignment;
  return out;
}

std::vector<EquiPerfPoint> equi_performance_curve(CompressionMethod method, double target_error,
                                                  double c, const std::vector<double>& eps_grid) {
  if (!(target_error > 0.0 && target_error <= 0.5)) {
    throw DomainError("equi_performance_curve: target error must lie in (0, 0.5]");
  }
  if (!(c > 0.0)) throw DomainError("equi_performance_curve: c must be positive");

  // Invert the error for the target alignment once:
  // 0.5 erfc(sqrt(alpha/(2-2 alpha))) = t  =>  alpha = 2 q^2 / (1 + 2 q^2).
  const bool at_transition = target_error >= 0.5 - 1e-12;
  double alpha_target = 0.0;
  if (!at_transition) {
    const double q = erfc_inv(2.0 * target_error);
    alpha_target = 2.0 * q * q / (1.0 + 2.0 * q * q);
  }

  std::vector<EquiPerfPoint> out;
  out.reserve(eps_grid.size());
  for (const double eps : eps_grid) {
    if (!(eps > 0.0 && eps <= 1.0)) {
      throw DomainError("equi_performance_curve: eps must lie in (0, 1]");
    }
    SpectrumModel md;
    md.a2 = 0.0;
    md.c = c;
    switch (method) {
      case CompressionMethod::Selective: {
        const double s = erfc_inv(eps);
        const double a1 = std::erfc(s) + 2.0 * s * std::exp(-s * s) / kSqrtPi;
        md.a1 = a1;
        md.nu = a1;  // truncation keeps nu = a1
        break;
      }
      case CompressionMethod::Uniform:
        md.a1 = eps;
        md.nu = eps;  // nu / a1^2 = 1/eps
        break;
      case CompressionMethod::Subsample:
        md.a1 = 1.0;
        md.nu = 1.0;
        md.c = c / eps;
        break;
    }

    EquiPerfPoint pt;
    pt.eps = eps;
    const double gamma = phase_transition(md);
    if (at_transition) {
      pt.rho = gamma;
      out.push_back(pt);
      continue;
    }

    auto alpha_at = [&md](double rho) {
      SpectrumModel m2 = md;
      m2.rho = rho;
      return informative_spike(m2).alignment;
    };
    double lo = gamma, hi = gamma + 1.0;
    int guard = 0;
    while (alpha_at(hi) < alpha_target && guard++ < 80) hi *= 2.0;
    if (alpha_at(hi) < alpha_target) {
      pt.rho = std::numeric_limits<double>::quiet_NaN();
      pt.attainable = false;
      out.push_back(pt);
      continue;
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (alpha_at(mid) < alpha_target ? lo : hi) = mid;
      if (hi - lo <= 1e-10 * (1.0 + hi)) break;
    }
    pt.rho = 0.5 * (lo + hi);
    out.push_back(pt);
  }
  return out;
}

double erfc_inv(double y) {
  if (!(y > 0.0 && y < 2.0)) throw DomainError("erfc_inv: argument must lie in (0, 2)");
  if (y == 1.0) return 0.0;
  double lo, hi;
  if (y < 1.0) {
    lo = 0.0;
    hi = 40.0;  // erfc underflows to 0 well before 40, so the sign holds
  } else {
    lo = -40.0;
    hi = 0.0;
  }
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid) > y ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double f = std::erfc(s) - y;
    const double df = -2.0 * std::exp(-s * s) / kSqrtPi;
    s -= f / df;
  }
  return s;
}

const char* to_string(CompressionMethod m) {
  switch (m) {
    case CompressionMethod::Selective: return "selective";
    case CompressionMethod::Uniform: return "uniform";
    case CompressionMethod::Subsample: return "subsample";
  }
  return "?";
}

CompressionMethod parse_method(const std::string& name) {
  if (name == "selective") return CompressionMethod::Selective;
  if (name == "uniform") return CompressionMethod::Uniform;
  if (name == "subsample" || name == "subsampling") return CompressionMethod::Subsample;
  throw ParseError("unknown compression method: " + name +
                   " (expected selective|uniform|subsample)");
}

}  // namespace sqsc
