#include <pnuc/lpnorm.hpp>

#include <Eigen/Sparse>

#include <algorithm>
#include <optional>

namespace pnuc {

const char* to_string(NormMethod m) {
  switch (m) {
    case NormMethod::exact: return "exact";
    case NormMethod::power_iteration: return "power-iteration";
    case NormMethod::oracle: return "oracle";
  }
  return "?";
}

namespace {

double ratio(const CMatrix& a, const CVector& x, PExponent p) {
  const double nx = vector_pnorm(x, p);
  return nx == 0.0 ? 0.0 : vector_pnorm(a * x, p) / nx;
}

CVector normalized(const CVector& x, PExponent p) { return x / vector_pnorm(x, p); }

PNormEstimate exact_estimate(const CMatrix& a, PExponent p) {
  PNormEstimate est;
  est.method = NormMethod::exact;
  est.converged = true;
  const Index n = a.cols();
  est.witness = CVector::Zero(n);
  if (a.cwiseAbs().maxCoeff() == 0.0) {
    est.witness(0) = 1.0;
    est.value = 0.0;
    return est;
  }
  if (p.is_one()) {
    Index k = 0;
    a.cwiseAbs().colwise().sum().maxCoeff(&k);
    est.witness(k) = 1.0;
  } else if (p.is_infinite()) {
    Index k = 0;
    a.cwiseAbs().rowwise().sum().maxCoeff(&k);
    for (Index j = 0; j < n; ++j) {
      const cplx s = unit_sign(std::conj(a(k, j)));
      est.witness(j) = s == cplx(0.0) ? cplx(1.0) : s;
    }
  } else {
    Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinV);
    est.witness = svd.matrixV().col(0);
  }
  est.value = ratio(a, est.witness, p);
  return est;
}

struct Run {
  double value;
  CVector x;
  bool converged;
};

// Dual-norm power iteration from one start. Values are nondecreasing along
// the run, but the best iterate is tracked regardless.
template <typename Mat, typename AdjMat>
Run power_run(const Mat& a, const AdjMat& a_adj, const CVector& start, PExponent p, const EstimatorOptions& opts) {
  CVector x = normalized(start, p);
  CVector y = a * x;
  Run best{vector_pnorm(y, p), x, false};
  const PExponent q = p.conjugate();
  // Iterates can drift along a face of maximizers while the value has
  // settled; five steps without relative progress end the run too.
  double previous = best.value;
  int stalled = 0;
  for (int it = 0; it < opts.max_iters; ++it) {
    if (y.cwiseAbs().maxCoeff() == 0.0) {
      best.converged = true;
      return best;
    }
    const CVector z = a_adj * dual_map(y, p);
    if (z.cwiseAbs().maxCoeff() == 0.0) {
      best.converged = true;
      return best;
    }
    const CVector next = dual_map(z, q);
    y = a * next;
    const double v = vector_pnorm(y, p);
    if (v > best.value) {
      best.value = v;
      best.x = next;
    }
    const double step = (next - x).cwiseAbs().maxCoeff();
    x = next;
    stalled = std::abs(v - previous) <= 1e-13 * std::max(v, 1e-300) ? stalled + 1 : 0;
    previous = v;
    if (step < opts.tol || stalled >= 5) {
      best.converged = true;
      return best;
    }
  }
  return best;
}

using SparseC = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// Crossed-product operators are block sparse; past a modest size a sparse
// copy makes the matrix-vector products much cheaper.
struct Operator {
  const CMatrix& dense;
  CMatrix dense_adj;
  std::optional<SparseC> sparse, sparse_adj;

  explicit Operator(const CMatrix& a) : dense(a) {
    const Index nnz = (a.array() != cplx(0.0)).count();
    if (a.size() >= 4096 && nnz * 4 < a.size()) {
      sparse.emplace(a.sparseView());
      sparse_adj.emplace(SparseC(a.adjoint().sparseView()));
    } else {
      dense_adj = a.adjoint();
    }
  }

  Run run(const CVector& start, PExponent p, const EstimatorOptions& opts) const {
    if (sparse) return power_run(*sparse, *sparse_adj, start, p, opts);
    return power_run(dense, dense_adj, start, p, opts);
  }
};

void fold_run(PNormEstimate& est, Run run) {
  ++est.restarts_used;
  if (run.value > est.value || est.witness.size() == 0) {
    est.value = run.value;
    est.witness = std::move(run.x);
    est.converged = run.converged;
  }
}

}  // namespace

PNormEstimate improve_estimate(const CMatrix& a, PExponent p, PNormEstimate current,
                               std::span<const CVector> starts, const EstimatorOptions& opts) {
  if (p.has_closed_form()) return current;
  const Operator op(a);
  for (const CVector& s : starts) {
    if (s.size() != a.cols() || s.cwiseAbs().maxCoeff() == 0.0) continue;
    fold_run(current, op.run(s, p, opts));
  }
  current.witness = normalized(current.witness, p);
  current.value = ratio(a, current.witness, p);
  return current;
}

PNormEstimate pnorm_estimate(const CMatrix& a, PExponent p, const EstimatorOptions& opts,
                             std::span<const CVector> extra_starts) {
  if (a.size() == 0) throw DomainError("pnorm_estimate: empty matrix");
  if (!all_finite(a)) throw DomainError("pnorm_estimate: non-finite entries");
  if (p.has_closed_form()) return exact_estimate(a, p);

  const Index n = a.cols();
  PNormEstimate est;
  est.method = NormMethod::power_iteration;
  est.value = -1.0;

  std::vector<CVector> starts;
  {
    Index best_col = 0;
    double best_norm = -1.0;
    for (Index j = 0; j < n; ++j) {
      const double c = vector_pnorm(a.col(j), p);
      if (c > best_norm) {
        best_norm = c;
        best_col = j;
      }
    }
    starts.push_back(CVector::Unit(n, best_col));
    starts.push_back(CVector::Ones(n));
  }
  Rng rng(opts.seed);
  for (int r = 0; r < opts.restarts; ++r) starts.push_back(random_complex_vector(n, rng));

  const Operator op(a);
  for (const CVector& s : starts) fold_run(est, op.run(s, p, opts));
  for (const CVector& s : extra_starts) {
    if (s.size() != n || s.cwiseAbs().maxCoeff() == 0.0) continue;
    fold_run(est, op.run(s, p, opts));
  }
  est.witness = normalized(est.witness, p);
  est.value = ratio(a, est.witness, p);
  return est;
}

namespace {

double oracle_smooth(const CMatrix& a, PExponent p, CVector x) {
  x = normalized(x, p);
  double value = vector_pnorm(a * x, p);
  double eta = 0.5;
  for (int it = 0; it < 20000 && eta > 1e-15; ++it) {
    const CVector y = a * x;
    if (value == 0.0) break;
    const CVector grad = a.adjoint() * dual_map(y, p) - value * dual_map(x, p);
    if (grad.cwiseAbs().maxCoeff() < 1e-14) break;
    for (;;) {
      CVector trial = x + eta * grad;
      const double nt = vector_pnorm(trial, p);
      if (nt > 0.0) {
        trial /= nt;
        const double tv = vector_pnorm(a * trial, p);
        if (tv > value) {
          x = trial;
          value = tv;
          eta *= 1.5;
          break;
        }
      }
      eta *= 0.5;
      if (eta <= 1e-15) break;
    }
  }
  return value;
}

// Conditional-gradient ascent over the unit ball: the linear maximizer of a
// subgradient is a vertex (p = 1) or a unimodular vector (p = inf), and by
// convexity of x -> ||Ax||_p the value never decreases.
double oracle_vertex(const CMatrix& a, PExponent p, CVector x) {
  x = normalized(x, p);
  double value = vector_pnorm(a * x, p);
  const Index n = a.cols();
  for (int it = 0; it < 1000; ++it) {
    const CVector y = a * x;
    CVector sub = CVector::Zero(y.size());
    if (p.is_one()) {
      for (Index i = 0; i < y.size(); ++i) sub(i) = unit_sign(y(i));
    } else {
      Index k = 0;
      y.cwiseAbs().maxCoeff(&k);
      sub(k) = unit_sign(y(k));
    }
    const CVector g = a.adjoint() * sub;
    CVector v = CVector::Zero(n);
    if (p.is_one()) {
      Index k = 0;
      g.cwiseAbs().maxCoeff(&k);
      v(k) = unit_sign(g(k)) == cplx(0.0) ? cplx(1.0) : unit_sign(g(k));
    } else {
      for (Index j = 0; j < n; ++j) v(j) = unit_sign(g(j)) == cplx(0.0) ? cplx(1.0) : unit_sign(g(j));
    }
    const double nv = vector_pnorm(a * v, p);
    if (!(nv > value)) break;
    value = nv;
    x = v;
  }
  return value;
}

}  // namespace

double pnorm_oracle(const CMatrix& a, PExponent p, int samples, std::uint64_t seed) {
  if (a.rows() > 6 || a.cols() > 6) throw RefusalError("pnorm_oracle: dimension guard (at most 6) exceeded");
  if (a.size() == 0) throw DomainError("pnorm_oracle: empty matrix");
  if (samples < 1) throw DomainError("pnorm_oracle: samples must be positive");
  if (a.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Rng rng(seed);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CVector x = random_complex_vector(a.cols(), rng);
    const double v = (p.is_one() || p.is_infinite()) ? oracle_vertex(a, p, x) : oracle_smooth(a, p, x);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace pnuc
