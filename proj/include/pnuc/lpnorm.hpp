#pragma once

// Operator norms of matrices acting on l^p of a finite set.
//
// Closed forms exist for p in {1, 2, inf}. Everywhere else the norm is a
// nonconvex maximization; pnorm_estimate returns a certified lower bound
// (the witness vector reproduces the value) and pnorm_oracle is an
// independent brute-force search meant for small test instances.

#include <pnuc/common.hpp>

#include <span>
#include <vector>

namespace pnuc {

/// (sum |x_i|^p)^(1/p), or max |x_i| when p = inf.
template <typename Derived>
double vector_pnorm(const Eigen::MatrixBase<Derived>& x, PExponent p) {
  if (x.size() == 0) throw DomainError("vector_pnorm: empty vector");
  const auto mod = x.cwiseAbs();
  if (p.is_infinite()) return mod.maxCoeff();
  if (p.is_one()) return mod.sum();
  if (p.is_two()) return x.norm();
  const double scale = mod.maxCoeff();
  if (scale == 0.0) return 0.0;
  return scale * std::pow((mod / scale).array().pow(p.p()).sum(), 1.0 / p.p());
}

/// The norming functional of x in l^q: sign(x_i) |x_i|^(p-1), scaled to unit
/// l^q norm, so that <x, dual_map(x)> = ||x||_p. Defined for p in [1, inf).
template <typename Derived>
Eigen::Matrix<cplx, Eigen::Dynamic, 1> dual_map(const Eigen::MatrixBase<Derived>& x, PExponent p) {
  if (p.is_infinite()) throw UnsupportedExponent("dual_map: p = inf has no entrywise norming functional");
  const Index n = x.size();
  Eigen::Matrix<cplx, Eigen::Dynamic, 1> out(n);
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return out.setZero();
  if (p.is_one()) {
    for (Index i = 0; i < n; ++i) out(i) = unit_sign(x(i));
    return out;
  }
  for (Index i = 0; i < n; ++i) {
    const cplx z = cplx(x(i)) / scale;
    out(i) = unit_sign(z) * std::pow(std::abs(z), p.p() - 1.0);
  }
  return out / vector_pnorm(out, p.conjugate());
}

/// Conjugate transpose. With the bilinear pairing <x, y> = sum x_i conj(y_i),
/// <Ax, y> = <x, adjoint(A) y>.
template <typename Derived>
auto adjoint(const Eigen::MatrixBase<Derived>& a) {
  return a.adjoint().eval();
}

/// Closed-form operator norm for p in {1, 2, inf}.
template <typename Derived>
double pnorm_exact(const Eigen::MatrixBase<Derived>& a, PExponent p) {
  if (a.size() == 0) return 0.0;
  if (p.is_one()) return a.cwiseAbs().colwise().sum().maxCoeff();
  if (p.is_infinite()) return a.cwiseAbs().rowwise().sum().maxCoeff();
  if (p.is_two()) {
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> m = a;
    return m.jacobiSvd().singularValues()(0);
  }
  throw UnsupportedExponent("pnorm_exact: only p in {1, 2, inf} have closed forms");
}

enum class NormMethod { exact, power_iteration, oracle };

const char* to_string(NormMethod m);

struct PNormEstimate {
  double value = 0.0;
  CVector witness;  ///< unit vector in l^p with ||A witness||_p == value
  NormMethod method = NormMethod::exact;
  bool converged = true;
  int restarts_used = 0;
};

struct EstimatorOptions {
  int restarts = 32;
  int max_iters = 1000;
  double tol = 1e-10;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

/// Best lower bound on ||A||_{p->p} over the deterministic starts, `restarts`
/// random complex starts and any caller-supplied starts, via the dual-norm
/// power iteration x <- dual_q(A* dual_p(A x)). Delegates to pnorm_exact when
/// p has a closed form.
PNormEstimate pnorm_estimate(const CMatrix& a, PExponent p, const EstimatorOptions& opts = {},
                             std::span<const CVector> extra_starts = {});

/// Continue an existing estimate from additional starting vectors only.
PNormEstimate improve_estimate(const CMatrix& a, PExponent p, PNormEstimate current,
                               std::span<const CVector> starts, const EstimatorOptions& opts = {});

/// Largest ||A x||_p over `samples` random unit vectors, each polished by
/// ascent: projected gradient ascent of ||Ax||_p/||x||_p for 1 < p < inf,
/// conditional-gradient (vertex) ascent at p = 1 and p = inf where the
/// sphere is not smooth. Refuses matrices with a dimension above 6.
double pnorm_oracle(const CMatrix& a, PExponent p, int samples, std::uint64_t seed = 7);

}  // namespace pnuc
