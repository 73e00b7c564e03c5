#include <pnuc/opspace.hpp>

#include <algorithm>
#include <utility>

namespace pnuc {

CMatrix matrix_unit(Index n, Index i, Index j) {
  if (n < 1 || i < 0 || j < 0 || i >= n || j >= n) throw DomainError("matrix_unit: index out of range");
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

LinearMap::LinearMap(Index domain_dim, Index codomain_dim, Action action, std::string name)
    : domain_dim_(domain_dim), codomain_dim_(codomain_dim), action_(std::move(action)), name_(std::move(name)) {
  if (domain_dim < 1 || codomain_dim < 1) throw DomainError("LinearMap: dimensions must be positive");
}

LinearMap LinearMap::identity(Index d) {
  LinearMap id(d, d, [](const CMatrix& x) { return x; }, "identity");
  id.backward_ = {CMatrix::Identity(d, d)};
  id.forward_ = {CMatrix::Identity(d, d)};
  return id;
}

LinearMap LinearMap::from_coefficients(Index domain_dim, Index codomain_dim, CMatrix coefficients,
                                       std::string name) {
  if (coefficients.rows() != codomain_dim * codomain_dim || coefficients.cols() != domain_dim * domain_dim)
    throw DomainError("LinearMap: coefficient matrix must be (c^2) x (d^2)");
  auto coeffs = std::make_shared<const CMatrix>(std::move(coefficients));
  return LinearMap(
      domain_dim, codomain_dim,
      [coeffs, domain_dim, codomain_dim](const CMatrix& x) {
        CVector v(domain_dim * domain_dim);
        for (Index i = 0; i < domain_dim; ++i)
          for (Index j = 0; j < domain_dim; ++j) v(i * domain_dim + j) = x(i, j);
        const CVector w = (*coeffs) * v;
        CMatrix y(codomain_dim, codomain_dim);
        for (Index i = 0; i < codomain_dim; ++i)
          for (Index j = 0; j < codomain_dim; ++j) y(i, j) = w(i * codomain_dim + j);
        return y;
      },
      std::move(name));
}

CMatrix LinearMap::operator()(const CMatrix& x) const {
  if (x.rows() != domain_dim_ || x.cols() != domain_dim_)
    throw DomainError("LinearMap '" + name_ + "': input has the wrong size");
  return action_(x);
}

CMatrix LinearMap::coefficients() const {
  const Index d = domain_dim_, c = codomain_dim_;
  CMatrix coeffs(c * c, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const CMatrix y = (*this)(matrix_unit(d, i, j));
      for (Index r = 0; r < c; ++r)
        for (Index s = 0; s < c; ++s) coeffs(r * c + s, i * d + j) = y(r, s);
    }
  return coeffs;
}

LinearMap& LinearMap::with_name(std::string name) {
  name_ = std::move(name);
  return *this;
}

LinearMap& LinearMap::with_domain(Sampler sampler) {
  sampler_ = std::move(sampler);
  return *this;
}

LinearMap& LinearMap::with_backward_lifts(std::vector<CMatrix> lifts) {
  for (const auto& l : lifts)
    if (l.rows() != domain_dim_ || l.cols() != codomain_dim_) throw DomainError("backward lift must be d x c");
  backward_ = std::move(lifts);
  return *this;
}

LinearMap& LinearMap::with_forward_lifts(std::vector<CMatrix> lifts) {
  for (const auto& l : lifts)
    if (l.rows() != codomain_dim_ || l.cols() != domain_dim_) throw DomainError("forward lift must be c x d");
  forward_ = std::move(lifts);
  return *this;
}

CMatrix LinearMap::sample_domain(Rng& rng) const {
  if (sampler_) return sampler_(rng);
  return random_complex_matrix(domain_dim_, domain_dim_, rng);
}

namespace {

std::vector<CMatrix> products(const std::vector<CMatrix>& left, const std::vector<CMatrix>& right) {
  constexpr std::size_t cap = 64;
  std::vector<CMatrix> out;
  for (const auto& l : left)
    for (const auto& r : right) {
      if (out.size() == cap) return out;
      out.push_back(l * r);
    }
  return out;
}

}  // namespace

LinearMap compose(const LinearMap& outer, const LinearMap& inner) {
  if (inner.codomain_dim() != outer.domain_dim()) throw DomainError("compose: dimension mismatch");
  LinearMap out(
      inner.domain_dim(), outer.codomain_dim(), [outer, inner](const CMatrix& x) { return outer(inner(x)); },
      outer.name() + "*" + inner.name());
  if (inner.has_domain_sampler()) out.with_domain([inner](Rng& rng) { return inner.sample_domain(rng); });
  out.with_backward_lifts(products(inner.backward_lifts(), outer.backward_lifts()));
  out.with_forward_lifts(products(outer.forward_lifts(), inner.forward_lifts()));
  return out;
}

LinearMap amplify(const LinearMap& phi, Index n) {
  if (n < 1) throw DomainError("amplify: n must be positive");
  const Index d = phi.domain_dim(), c = phi.codomain_dim();
  LinearMap out(
      n * d, n * c,
      [phi, n, d, c](const CMatrix& x) {
        CMatrix y(n * c, n * c);
        for (Index i = 0; i < n; ++i)
          for (Index j = 0; j < n; ++j) y.block(i * c, j * c, c, c) = phi(x.block(i * d, j * d, d, d));
        return y;
      },
      phi.name() + "^(" + std::to_string(n) + ")");
  out.with_domain([phi, n, d](Rng& rng) {
    CMatrix x(n * d, n * d);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) x.block(i * d, j * d, d, d) = phi.sample_domain(rng);
    return x;
  });
  const CMatrix id = CMatrix::Identity(n, n);
  std::vector<CMatrix> back, fwd;
  for (const auto& l : phi.backward_lifts()) back.push_back(kron(id, l));
  for (const auto& l : phi.forward_lifts()) fwd.push_back(kron(id, l));
  out.with_backward_lifts(std::move(back));
  out.with_forward_lifts(std::move(fwd));
  return out;
}

bool CbEstimate::contractive(double tol) const {
  return std::all_of(levels.begin(), levels.end(), [tol](const CbLevel& l) { return l.level_max <= 1.0 + tol; });
}

bool CbEstimate::isometric(double tol) const {
  return std::all_of(levels.begin(), levels.end(), [tol](const CbLevel& l) {
    return l.level_max >= 1.0 - tol && l.level_max <= 1.0 + tol;
  });
}

namespace {

// The candidate starts with the largest Rayleigh-type ratio for `a`.
std::vector<CVector> ranked_starts(const CMatrix& a, PExponent p, const std::vector<CMatrix>& lifts,
                                   const CVector& witness, std::size_t keep) {
  std::vector<std::pair<double, CVector>> ranked;
  for (const auto& l : lifts) {
    if (l.cols() != witness.size() || l.rows() != a.cols()) continue;
    CVector s = l * witness;
    const double ns = s.size() ? s.cwiseAbs().maxCoeff() : 0.0;
    if (ns == 0.0) continue;
    const double r = vector_pnorm(a * s, p) / vector_pnorm(s, p);
    ranked.emplace_back(r, std::move(s));
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<CVector> out;
  for (std::size_t i = 0; i < ranked.size() && i < keep; ++i) out.push_back(std::move(ranked[i].second));
  return out;
}

}  // namespace

RatioEval map_ratio(const LinearMap& phi, const CMatrix& x, PExponent p, const EstimatorOptions& opts) {
  RatioEval r;
  r.input = pnorm_estimate(x, p, opts);
  const CMatrix y = phi(x);
  const auto fwd = ranked_starts(y, p, phi.forward_lifts(), r.input.witness, 4);
  r.output = pnorm_estimate(y, p, opts, fwd);
  const auto back = ranked_starts(x, p, phi.backward_lifts(), r.output.witness, 4);
  r.input = improve_estimate(x, p, r.input, back, opts);
  r.ratio = r.input.value > 0.0 ? r.output.value / r.input.value : 0.0;
  return r;
}

CbEstimate cb_norm_lower(const LinearMap& phi, PExponent p, const CbOptions& opts) {
  if (opts.n_max < 1) throw DomainError("cb_norm_lower: n_max must be positive");
  CbEstimate est;
  double running = 0.0;
  for (int n = 1; n <= opts.n_max; ++n) {
    const LinearMap amp = n == 1 ? phi : amplify(phi, n);
    Rng rng(opts.seed + 0x1000193ull * static_cast<std::uint64_t>(n));
    double level = 0.0;
    auto consider = [&](const CMatrix& x) {
      double r = map_ratio(amp, x, p, opts.norm).ratio;
      level = std::max(level, r);
      CMatrix cur = x;
      double eta = 0.25;
      for (int step = 0; step < opts.refine_steps; ++step) {
        CMatrix dir = amp.sample_domain(rng);
        const double scale = cur.norm() / std::max(dir.norm(), 1e-300);
        const CMatrix cand = cur + (eta * scale) * dir;
        const double rc = map_ratio(amp, cand, p, opts.norm).ratio;
        if (rc > r) {
          r = rc;
          cur = cand;
          eta *= 1.5;
        } else {
          eta *= 0.5;
        }
        level = std::max(level, r);
      }
    };
    if (n == 1)
      for (const auto& probe : opts.probes) level = std::max(level, map_ratio(phi, probe, p, opts.norm).ratio);
    for (int t = 0; t < opts.trials; ++t) consider(amp.sample_domain(rng));
    running = std::max(running, level);
    est.levels.push_back({n, running, level});
  }
  est.best = running;
  return est;
}

}  // namespace pnuc
