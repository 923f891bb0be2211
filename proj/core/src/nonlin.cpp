#include "sqsc/nonlin.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace sqsc {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kSqrt2OverPi = 0.79788456080286535587989211986876;   // sqrt(2/pi)
constexpr double kTwoOverSqrtPi = 1.1283791670955125738961589031215;  // 2/sqrt(pi)
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;    // 1/sqrt(2 pi)

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

/// Kahan-compensated accumulator.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

void validate(const Nonlinearity& f) {
  if (f.s < 0.0) throw DomainError("nonlinearity: threshold s must be >= 0");
  if (!(f.s == f.s)) throw DomainError("nonlinearity: threshold s is NaN");
  if (f.kind == NonlinKind::Quantize && f.M < 2)
    throw DomainError("nonlinearity: quantize requires M >= 2");
  if (f.kind == NonlinKind::Custom && !f.custom_fn)
    throw DomainError("nonlinearity: custom operator has no function");
}

double apply(const Nonlinearity& f, double t) {
  const double thr = kSqrt2 * f.s;
  switch (f.kind) {
    case NonlinKind::Linear:
      return t;
    case NonlinKind::Sparse:
      return std::abs(t) > thr ? t : 0.0;
    case NonlinKind::Quantize: {
      if (std::abs(t) > thr) return sgn(t);
      const double unit = std::ldexp(1.0, 2 - f.M);  // 2^{2-M}
      if (thr == 0.0) return 0.5 * unit;  // single boundary point t = 0
      const double step = std::floor(t * std::ldexp(1.0, f.M - 2) / thr);
      // The positive boundary |t| = thr lands one step above the top codebook
      // level; cap it at the adjacent saturation value +1 (still in-codebook).
      return std::min(unit * (step + 0.5), 1.0);
    }
    case NonlinKind::Binarize:
      return std::abs(t) > thr ? sgn(t) : 0.0;
    case NonlinKind::Sign:
      return sgn(t);
    case NonlinKind::Custom:
      return f.custom_fn(t);
  }
  return 0.0;  // unreachable
}

HermiteCoefficients coefficients_closed_form(const Nonlinearity& f) {
  validate(f);
  const double s = f.s;
  HermiteCoefficients h;
  switch (f.kind) {
    case NonlinKind::Linear:
      h.a1 = 1.0;
      h.nu = 1.0;
      return h;
    case NonlinKind::Sparse: {
      const double a = std::erfc(s) + 2.0 * s * std::exp(-s * s) / std::sqrt(M_PI);
      h.a1 = a;
      h.nu = a;
      return h;
    }
    case NonlinKind::Quantize: {
      const int M = f.M;
      const int K = 1 << (M - 2);  // 2^{M-2}
      const double four_pow = std::ldexp(1.0, 2 * (M - 2));  // 4^{M-2}
      Kahan a1_sum;
      a1_sum.add(1.0);
      a1_sum.add(std::exp(-s * s));
      for (int k = 1; k < K; ++k) a1_sum.add(2.0 * std::exp(-k * k * s * s / four_pow));
      h.a1 = kSqrt2OverPi * std::ldexp(1.0, 1 - M) * a1_sum.sum;

      Kahan nu_sum;
      nu_sum.add(1.0);
      nu_sum.add(-(std::ldexp(1.0, M) - 1.0) / std::ldexp(1.0, 2 * (M - 1)) * std::erf(s));
      for (int k = 1; k < K; ++k)
        nu_sum.add(-k * std::erf(k * s * std::ldexp(1.0, 2 - M)) / std::ldexp(1.0, 2 * M - 5));
      h.nu = nu_sum.sum;
      return h;
    }
    case NonlinKind::Binarize:
      h.a1 = std::exp(-s * s) * kSqrt2OverPi;
      h.nu = std::erfc(s);
      return h;
    case NonlinKind::Sign:
      h.a1 = kSqrt2OverPi;
      h.nu = 1.0;
      return h;
    case NonlinKind::Custom:
      throw DomainError("coefficients_closed_form: no closed form for custom operators; "
                        "use coefficients_quadrature");
  }
  return h;  // unreachable
}

void coefficient_derivatives(const Nonlinearity& f, double& da1_ds, double& dnu_ds) {
  validate(f);
  const double s = f.s;
  const double es2 = std::exp(-s * s);
  switch (f.kind) {
    case NonlinKind::Linear:
    case NonlinKind::Sign:
      da1_ds = 0.0;
      dnu_ds = 0.0;
      return;
    case NonlinKind::Sparse:
      // d/ds [erfc(s) + 2 s e^{-s^2}/sqrt(pi)] = -4 s^2 e^{-s^2}/sqrt(pi)
      da1_ds = -4.0 * s * s * es2 / std::sqrt(M_PI);
      dnu_ds = da1_ds;
      return;
    case NonlinKind::Binarize:
      da1_ds = -2.0 * s * es2 * kSqrt2OverPi;
      dnu_ds = -kTwoOverSqrtPi * es2;
      return;
    case NonlinKind::Quantize: {
      const int M = f.M;
      const int K = 1 << (M - 2);
      const double four_pow = std::ldexp(1.0, 2 * (M - 2));  // 4^{M-2}
      Kahan a1d;
      a1d.add(es2);
      for (int k = 1; k < K; ++k)
        a1d.add(2.0 * k * k / four_pow * std::exp(-k * k * s * s / four_pow));
      da1_ds = kSqrt2OverPi * std::ldexp(1.0, 1 - M) * (-2.0 * s) * a1d.sum;

      Kahan nud;
      nud.add((std::ldexp(1.0, M) - 1.0) / std::ldexp(1.0, 2 * (M - 1)) * es2);
      for (int k = 1; k < K; ++k)
        nud.add(k * k * std::ldexp(1.0, 2 - M) / std::ldexp(1.0, 2 * M - 5) *
                std::exp(-k * k * s * s / four_pow));
      dnu_ds = -kTwoOverSqrtPi * nud.sum;
      return;
    }
    case NonlinKind::Custom:
      throw DomainError("coefficient_derivatives: not defined for custom operators");
  }
}

const GaussHermiteRule& gauss_hermite(int n) {
  if (n < 1) throw DomainError("gauss_hermite: need at least one node");
  static std::mutex mu;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Golub-Welsch on the Hermite Jacobi matrix (physicists' weight e^{-y^2}):
  // zero diagonal, off-diagonal beta_k = sqrt(k/2). Eigenvalues are the nodes
  // y_i; weights are sqrt(pi) * (first eigenvector component)^2. Substituting
  // x = sqrt(2) y adapts the rule to the standard normal weight, under which
  // the weights are simply the squared first components (they sum to 1).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericsError("gauss_hermite: tridiagonal eigensolve failed");

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = kSqrt2 * es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Golub-Welsch on the Legendre Jacobi matrix: zero diagonal, off-diagonal
  // beta_k = k / sqrt(4k^2 - 1). Weights are 2 * (first component)^2.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericsError("gauss_legendre: tridiagonal eigensolve failed");

  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = 2.0 * v0 * v0;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

// Jump discontinuities of the built-in operators, sorted ascending. Custom
// and linear operators report none.
std::vector<double> jump_points(const Nonlinearity& f) {
  const double thr = kSqrt2 * f.s;
  switch (f.kind) {
    case NonlinKind::Sparse:
      // At s = 0 the truncation keeps t almost everywhere: no jump.
      return thr > 0.0 ? std::vector<double>{-thr, thr} : std::vector<double>{};
    case NonlinKind::Binarize:
      return thr > 0.0 ? std::vector<double>{-thr, thr} : std::vector<double>{0.0};
    case NonlinKind::Sign:
      return {0.0};
    case NonlinKind::Quantize: {
      if (thr == 0.0) return {0.0};
      const int K = 1 << (f.M - 2);
      std::vector<double> out;
      out.reserve(2 * K + 1);
      for (int j = -K; j <= K; ++j) out.push_back(thr * j / K);
      return out;
    }
    default:
      return {};
  }
}

}  // namespace

HermiteCoefficients coefficients_quadrature(const Nonlinearity& f, int nodes) {
  validate(f);
  if (nodes < 64) throw DomainError("coefficients_quadrature: need at least 64 nodes");

  Kahan e_f, e_xf, e_xxf, e_ff;
  auto accumulate = [&](double x, double w) {
    const double fx = apply(f, x);
    if (!std::isfinite(fx)) {
      std::ostringstream msg;
      msg << "coefficients_quadrature: operator returned non-finite value at t = " << x;
      throw NumericsError(msg.str());
    }
    e_f.add(w * fx);
    e_xf.add(w * x * fx);
    e_xxf.add(w * x * x * fx);
    e_ff.add(w * fx * fx);
  };

  const std::vector<double> jumps = jump_points(f);
  if (jumps.empty()) {
    // Smooth operator: plain Gauss-Hermite converges spectrally.
    const GaussHermiteRule& rule = gauss_hermite(nodes);
    for (int i = 0; i < nodes; ++i) accumulate(rule.nodes[i], rule.weights[i]);
  } else {
    // Piecewise-smooth operator: Gauss-Hermite would stall at algebraic
    // accuracy across the jumps. Split the axis at them instead and apply an
    // `nodes`-point Gauss-Legendre rule per smooth segment with the normal
    // density folded into the weights; interior nodes never sample the
    // boundary values. |t| > 12 is dropped (Gaussian tail mass ~ 1.8e-33).
    constexpr double kTail = 12.0;
    std::vector<double> ends;
    ends.push_back(-kTail);
    for (const double b : jumps)
      if (b > -kTail + 1e-9 && b < kTail - 1e-9) ends.push_back(b);
    ends.push_back(kTail);
    const GaussLegendreRule& rule = gauss_legendre(nodes);
    for (std::size_t seg = 0; seg + 1 < ends.size(); ++seg) {
      const double mid = 0.5 * (ends[seg] + ends[seg + 1]);
      const double half = 0.5 * (ends[seg + 1] - ends[seg]);
      if (!(half > 0.0)) continue;
      for (int i = 0; i < nodes; ++i) {
        const double x = mid + half * rule.nodes[i];
        accumulate(x, rule.weights[i] * half * kInvSqrt2Pi * std::exp(-0.5 * x * x));
      }
    }
  }

  HermiteCoefficients h;
  h.a0 = e_f.sum;
  h.a1 = e_xf.sum;
  h.a2 = (e_xxf.sum - h.a0) / kSqrt2;
  h.nu = e_ff.sum - h.a0 * h.a0;
  h.a0_nonzero = std::abs(h.a0) > 1e-10;
  return h;
}

double sparsity_level(const Nonlinearity& f) {
  validate(f);
  switch (f.kind) {
    case NonlinKind::Sparse:
    case NonlinKind::Binarize:
      return std::erfc(f.s);
    case NonlinKind::Sign:
      return 1.0;  // erfc(0)
    default:
      return 1.0;  // Linear/Quantize/Custom: codebooks and floats exclude 0
  }
}

namespace {

int bits_per_entry(const Nonlinearity& f, int bits_per_dense_entry, bool naive) {
  switch (f.kind) {
    case NonlinKind::Quantize: {
      if (naive) {
        const int levels = (1 << (f.M - 1)) + 2;  // codebook size
        return static_cast<int>(std::ceil(std::log2(static_cast<double>(levels))));
      }
      return (1 << (f.M - 2)) + 1;
    }
    case NonlinKind::Binarize:
    case NonlinKind::Sign:
      return 1;
    default:
      return bits_per_dense_entry;
  }
}

std::int64_t storage_bits_impl(const Nonlinearity& f, std::int64_t n,
                               int bits_per_dense_entry, bool naive) {
  validate(f);
  if (n < 1) throw DomainError("storage_bits: n must be >= 1");
  if (bits_per_dense_entry != 32 && bits_per_dense_entry != 64)
    throw DomainError("storage_bits: bits_per_dense_entry must be 32 or 64");
  const double nnz = sparsity_level(f) * static_cast<double>(n) * static_cast<double>(n);
  return std::llround(nnz * bits_per_entry(f, bits_per_dense_entry, naive));
}

}  // namespace

std::int64_t storage_bits(const Nonlinearity& f, std::int64_t n, int bits_per_dense_entry) {
  return storage_bits_impl(f, n, bits_per_dense_entry, /*naive=*/false);
}

std::int64_t storage_bits_naive(const Nonlinearity& f, std::int64_t n,
                                int bits_per_dense_entry) {
  return storage_bits_impl(f, n, bits_per_dense_entry, /*naive=*/true);
}

std::vector<double> quantize_codebook(int M) {
  if (M < 2) throw DomainError("quantize_codebook: M >= 2 required");
  const int K = 1 << (M - 2);
  const double unit = std::ldexp(1.0, 2 - M);
  std::vector<double> cb;
  cb.reserve(2 * (K + 1));
  cb.push_back(-1.0);
  for (int k = K - 1; k >= 0; --k) cb.push_back(-unit * (k + 0.5));
  for (int k = 0; k < K; ++k) cb.push_back(unit * (k + 0.5));
  cb.push_back(1.0);
  return cb;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double_field(const std::string& spec, const std::string& v) {
  double out = 0.0;
  const char* b = v.data();
  auto [ptr, ec] = std::from_chars(b, b + v.size(), out);
  if (ec != std::errc() || ptr != b + v.size())
    throw ParseError("nonlinearity spec '" + spec + "': bad numeric value '" + v + "'");
  return out;
}

}  // namespace

std::string to_string(const Nonlinearity& f) {
  switch (f.kind) {
    case NonlinKind::Linear:
      return "linear";
    case NonlinKind::Sparse:
      return "sparse:s=" + format_double(f.s);
    case NonlinKind::Quantize:
      return "quantize:M=" + std::to_string(f.M) + ",s=" + format_double(f.s);
    case NonlinKind::Binarize:
      return "binarize:s=" + format_double(f.s);
    case NonlinKind::Sign:
      return "sign";
    case NonlinKind::Custom:
      return "custom:" + (f.custom_name.empty() ? std::string("unnamed") : f.custom_name);
  }
  return {};
}

Nonlinearity parse_nonlinearity(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      const std::string item = rest.substr(pos, comma - pos);
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ParseError("nonlinearity spec '" + spec + "': expected key=value, got '" +
                         item + "'");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
      pos = comma + 1;
    }
  }
  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ParseError("nonlinearity spec '" + spec + "': missing field '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto finish = [&](Nonlinearity f) {
    if (!kv.empty())
      throw ParseError("nonlinearity spec '" + spec + "': unknown field '" +
                       kv.begin()->first + "'");
    validate(f);
    return f;
  };

  if (head == "linear") return finish(Nonlinearity::linear());
  if (head == "sign") return finish(Nonlinearity::sign());
  if (head == "sparse")
    return finish(Nonlinearity::sparse(parse_double_field(spec, take("s"))));
  if (head == "binarize")
    return finish(Nonlinearity::binarize(parse_double_field(spec, take("s"))));
  if (head == "quantize") {
    const double m = parse_double_field(spec, take("M"));
    const double s = parse_double_field(spec, take("s"));
    if (m != std::floor(m))
      throw ParseError("nonlinearity spec '" + spec + "': M must be an integer");
    return finish(Nonlinearity::quantize(static_cast<int>(m), s));
  }
  throw ParseError("nonlinearity spec '" + spec +
                   "': unknown kind (expected linear|sparse|quantize|binarize|sign)");
}

}  // namespace sqsc
