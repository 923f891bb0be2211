//
// Lanczos with full reorthogonalization and the dense fallback.
//

#include "sqsc/eigs.hpp"

#include <algorithm>
#include <cmath>

#include "sqsc/rng.hpp"

namespace sqsc {

namespace {

void fill_unit_random(Eigen::VectorXd& v, std::uint64_t seed) {
  Rng rng(seed);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.next_normal();
  const double nrm = v.norm();
  if (nrm <= 0.0) throw NumericsError("lanczos: degenerate start vector");
  v /= nrm;
}

// Classical Gram-Schmidt against the first `cols` columns of Q, twice.
void reorthogonalize(const Eigen::MatrixXd& Q, Eigen::Index cols, Eigen::VectorXd& w) {
  if (cols <= 0) return;
  const auto basis = Q.leftCols(cols);
  for (int pass = 0; pass < 2; ++pass) {
    w.noalias() -= basis * (basis.transpose() * w);
  }
}

}  // namespace

EigenPairs top_eigenpairs(const LinOp& A, Index n, int k, const LanczosOptions& opts) {
  if (n < 1) throw DomainError("lanczos: empty operator");
  if (k < 1 || k > 8) throw DomainError("lanczos: k must lie in [1, 8]");
  if (k > n) throw DomainError("lanczos: k exceeds dimension");
  const int m = opts.max_iter > 0 ? std::min<int>(opts.max_iter, static_cast<int>(n))
                                  : static_cast<int>(std::min<Index>(n, 300));
  if (m < k) throw DomainError("lanczos: max_iter below k");

  Eigen::MatrixXd Q(n, m);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);  // beta[j] links q_j -> q_{j+1}
  Eigen::VectorXd w(n), q_col(n);

  fill_unit_random(q_col, opts.seed);
  Q.col(0) = q_col;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  int it = 0;
  bool converged = false;

  for (; it < m; ++it) {
    A(Q.col(it).data(), w.data());
    alpha[it] = Q.col(it).dot(w);
    w.noalias() -= alpha[it] * Q.col(it);
    if (it > 0) w.noalias() -= beta[it - 1] * Q.col(it - 1);
    reorthogonalize(Q, it + 1, w);
    const double b = w.norm();

    // Convergence test on the current tridiagonal section.
    if (it + 1 >= k) {
      tri.computeFromTridiagonal(alpha.head(it + 1), beta.head(it));
      const auto& ev = tri.eigenvalues();  // ascending
      const double scale =
          std::max({std::abs(ev[0]), std::abs(ev[it]), 1e-30});
      bool all_ok = true;
      for (int r = 0; r < k; ++r) {
        // Residual of the r-th largest Ritz pair: |beta_it * last component|.
        const double s_last = tri.eigenvectors()(it, it - r);
        if (std::abs(b * s_last) > opts.tol * scale) {
          all_ok = false;
          break;
        }
      }
      if (all_ok) {
        converged = true;
        ++it;
        break;
      }
    }

    if (it + 1 == m) {
      ++it;
      break;
    }

    if (b < 1e-14) {
      // Invariant subspace found. Enough directions for k? Then stop early;
      // otherwise restart with a fresh orthogonalized direction (beta = 0
      // decouples the tridiagonal blocks, which is exactly right).
      if (it + 1 >= k) {
        converged = true;
        ++it;
        break;
      }
      fill_unit_random(w, derive_seed(opts.seed, static_cast<std::uint64_t>(1000 + it)));
      reorthogonalize(Q, it + 1, w);
      const double nb = w.norm();
      if (nb < 1e-14) throw NumericsError("lanczos: cannot extend Krylov basis");
      beta[it] = 0.0;
      Q.col(it + 1) = w / nb;
    } else {
      beta[it] = b;
      Q.col(it + 1) = w / b;
    }
  }

  const int dim = it;  // tridiagonal dimension actually built (>= 1)
  tri.computeFromTridiagonal(alpha.head(dim), beta.head(dim - 1));
  const auto& theta = tri.eigenvalues();  // ascending

  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  out.residuals.resize(static_cast<std::size_t>(k));
  out.iterations = dim;
  out.converged = converged;
  for (int r = 0; r < k; ++r) {
    const int src = dim - 1 - r;  // descending order
    out.values[r] = theta[src];
    Eigen::VectorXd v = Q.leftCols(dim) * tri.eigenvectors().col(src);
    const double nv = v.norm();
    if (nv <= 0.0) throw NumericsError("lanczos: zero Ritz vector");
    v /= nv;
    A(v.data(), w.data());
    out.residuals[static_cast<std::size_t>(r)] = (w - out.values[r] * v).norm();
    out.vectors.col(r) = v;
  }
  return out;
}

DenseSpectrum full_spectrum(const Eigen::MatrixXd& K, bool with_vectors) {
  const Eigen::Index n = K.rows();
  if (n != K.cols()) throw DomainError("full_spectrum: matrix not square");
  if (n > 8192) throw DomainError("full_spectrum: n > 8192, use the iterative solver");
  const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
  const double asym = (K - K.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) throw DomainError("full_spectrum: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      K, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericsError("full_spectrum: solver failed");
  DenseSpectrum out;
  out.values = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

double sign_align(Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size() || u.size() == 0) {
    throw DomainError("sign_align: dimension mismatch");
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu <= 0.0 || nv <= 0.0) throw DomainError("sign_align: zero vector");
  const double dot = u.dot(v);
  if (dot < 0.0) u = -u;
  const double c = dot / (nu * nv);
  return c * c;
}

double sign_align(Eigen::VectorXd& u, const std::vector<int>& labels) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = static_cast<double>(labels[i]);
  }
  return sign_align(u, v);
}

}  // namespace sqsc
