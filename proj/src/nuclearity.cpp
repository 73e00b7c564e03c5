#include <pnuc/nuclearity.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace pnuc {

namespace {

CertificateRecord record(std::string name, const CbEstimate& cb, bool isometric = false) {
  CertificateRecord r;
  r.map = std::move(name);
  for (const auto& l : cb.levels) r.levels.push_back(l.level_max);
  r.passed = isometric ? cb.isometric() : cb.contractive();
  return r;
}

Index folner_position(const FolnerSet& F, Element t) {
  auto it = std::lower_bound(F.members.begin(), F.members.end(), t);
  if (it == F.members.end() || *it != t) throw DomainError("element outside the Foelner set");
  return static_cast<Index>(it - F.members.begin());
}

CMatrix random_block_element(Index blocks, const ConcreteAlgebra& alg, Rng& rng) {
  const Index d = alg.base_dim();
  CMatrix m(blocks * d, blocks * d);
  for (Index i = 0; i < blocks; ++i)
    for (Index j = 0; j < blocks; ++j) m.block(i * d, j * d, d, d) = alg.random_element(rng);
  return m;
}

double sup_diff(const CVector& a, const CVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

double Factorization::max_error() const {
  double m = 0.0;
  for (const auto& [id, e] : roundtrip_errors) m = std::max(m, e);
  return m;
}

double roundtrip_error(const LinearMap& phi, const LinearMap& psi, const CMatrix& x, PExponent p,
                       const EstimatorOptions& opts) {
  const CMatrix diff = psi(phi(x)) - x;
  if (diff.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  return pnorm_estimate(diff, p, opts).value;
}

std::map<std::string, double> measure_roundtrip(const LinearMap& phi, const LinearMap& psi,
                                                const std::vector<TestElement>& tests, PExponent p,
                                                const EstimatorOptions& opts) {
  std::map<std::string, double> out;
  for (const auto& t : tests) out[t.id] = roundtrip_error(phi, psi, t.x, p, opts);
  return out;
}

Factorization make_factorization(LinearMap phi, LinearMap psi, PExponent p, const std::vector<TestElement>& tests,
                                 const CbOptions& opts) {
  if (phi.codomain_dim() != psi.domain_dim() || psi.codomain_dim() != phi.domain_dim())
    throw DomainError("factorization maps do not compose to an endomorphism");
  Factorization f{phi, psi, phi.codomain_dim(), {}, {}, {}};
  f.phi_cb = cb_norm_lower(phi, p, opts);
  f.psi_cb = cb_norm_lower(psi, p, opts);
  f.roundtrip_errors = measure_roundtrip(phi, psi, tests, p, opts.norm);
  return f;
}

// ---------------------------------------------------------------------------
// Foelner pair

CMatrix folner_selection(const FolnerSet& F, const CovariantRep& rep) {
  const Index d = rep.base_dim();
  CMatrix s = CMatrix::Zero(static_cast<Index>(F.size()) * d, rep.dim());
  for (std::size_t i = 0; i < F.size(); ++i) {
    const auto k = rep.site_index(F.members[i]);
    if (!k) throw DomainError("Foelner set member outside the representation sites");
    s.block(static_cast<Index>(i) * d, *k * d, d, d).setIdentity();
  }
  return s;
}

CMatrix folner_phi(const CcElement& f, const FolnerSet& F, const CovariantRep& rep) {
  const Group& g = rep.system().group;
  const IsometricAction& alpha = rep.system().action;
  const Index d = rep.base_dim(), n = static_cast<Index>(F.size());
  CMatrix out = CMatrix::Zero(n * d, n * d);
  for (const auto& [s, a] : f.terms()) {
    const Element s_inv = g.inverse(s);
    for (Index i = 0; i < n; ++i) {
      const Element r = F.members[static_cast<std::size_t>(i)];
      const Element col = g.multiply(s_inv, r);
      if (!F.contains(col)) continue;
      out.block(i * d, folner_position(F, col) * d, d, d) += alpha.apply(g.inverse(r), a);
    }
  }
  const CMatrix sel = folner_selection(F, rep);
  const CMatrix compressed = sel * integrated_form(rep, f) * sel.transpose();
  if (max_abs_diff(out, compressed) > 1e-12)
    throw std::logic_error("folner_phi: formula and compression disagree beyond 1e-12");
  return out;
}

LinearMap folner_phi_map(const FolnerSet& F, const CovariantRep& rep, int sample_radius) {
  const CMatrix sel = folner_selection(F, rep);
  LinearMap phi(
      rep.dim(), sel.rows(), [sel](const CMatrix& x) { return CMatrix(sel * x * sel.transpose()); }, "phi_F");
  const auto support = sampling_support(rep, sample_radius);
  phi.with_domain([rep, support](Rng& rng) {
    return integrated_form(rep, random_cc_element(rep.system(), support, rng));
  });
  phi.with_backward_lifts({sel.transpose()});
  phi.with_forward_lifts({sel});
  return phi;
}

CMatrix folner_psi(const CMatrix& m, const FolnerSet& F, const CovariantRep& rep) {
  const Group& g = rep.system().group;
  const IsometricAction& alpha = rep.system().action;
  const Index d = rep.base_dim(), n = static_cast<Index>(F.size());
  if (m.rows() != n * d || m.cols() != n * d) throw DomainError("folner_psi: input is not in M_F (x) A");
  // Unscaled terms accumulate in extended precision and are divided by |F|
  // once, so |F| identical contributions come back exactly.
  using WideMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  WideMatrix acc = WideMatrix::Zero(rep.dim(), rep.dim());
  const auto& sites = rep.sites();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const auto a = m.block(i * d, j * d, d, d);
      if (a.cwiseAbs().maxCoeff() == 0.0) continue;
      const Element s = F.members[static_cast<std::size_t>(i)], t = F.members[static_cast<std::size_t>(j)];
      const CMatrix b = alpha.apply(s, a);
      // pi(b) v(s t^-1): block (r, t s^-1 r) = alpha_{r^-1}(b).
      const Element shift_inv = g.multiply(t, g.inverse(s));
      for (std::size_t k = 0; k < sites.size(); ++k) {
        const auto col = rep.site_index(g.multiply(shift_inv, sites[k]));
        if (!col) continue;
        acc.block(static_cast<Index>(k) * d, *col * d, d, d) +=
            alpha.apply(g.inverse(sites[k]), b).cast<std::complex<long double>>();
      }
    }
  acc /= static_cast<long double>(n);
  return acc.cast<cplx>();
}

LinearMap folner_psi_map(const FolnerSet& F, const CovariantRep& rep) {
  const Index d = rep.base_dim(), n = static_cast<Index>(F.size());
  for (Element t : F.members)
    if (!rep.site_index(t)) throw DomainError("Foelner set member outside the representation sites");
  LinearMap psi(n * d, rep.dim(), [F, rep](const CMatrix& m) { return folner_psi(m, F, rep); }, "psi_F");
  const ConcreteAlgebra alg = rep.system().algebra;
  psi.with_domain([n, alg](Rng& rng) { return random_block_element(n, alg, rng); });
  const Group& g = rep.system().group;
  // Every g = t^-1 x with t in F and x a site contributes a fiber.
  std::set<Element> fibers;
  for (Element t : F.members)
    for (Element x : rep.sites()) fibers.insert(g.multiply(g.inverse(t), x));
  std::vector<CMatrix> back, fwd;
  for (Element site : fibers) {
    const CMatrix w_adj = rep.system().action.implementer(g.inverse(site)).matrix().adjoint();
    CMatrix l = CMatrix::Zero(n * d, rep.dim());
    bool any = false;
    for (Index i = 0; i < n; ++i) {
      const auto k = rep.site_index(g.multiply(F.members[static_cast<std::size_t>(i)], site));
      if (!k) continue;
      l.block(i * d, *k * d, d, d) = w_adj;
      any = true;
    }
    if (!any) continue;
    fwd.push_back(l.adjoint());
    back.push_back(std::move(l));
  }
  psi.with_backward_lifts(std::move(back));
  psi.with_forward_lifts(std::move(fwd));
  return psi;
}

DualityCheck psi_duality_identity(const CMatrix& t, const CVector& xi, const CVector& eta, const FolnerSet& F,
                                  const CovariantRep& rep, Index k) {
  if (rep.is_window()) throw DomainError("psi_duality_identity: needs whole-group translations");
  const Group& g = rep.system().group;
  const Index d = rep.base_dim(), n = static_cast<Index>(F.size()), dim = rep.dim();
  if (k < 1 || t.rows() != k * n * d || t.cols() != k * n * d) throw DomainError("psi_duality_identity: T has the wrong size");
  if (xi.size() != k * dim || eta.size() != k * dim) throw DomainError("psi_duality_identity: vectors have the wrong size");

  const LinearMap psi_k = amplify(folner_psi_map(F, rep), k);
  DualityCheck c;
  c.lhs = (eta.transpose() * (psi_k(t) * xi))(0);

  // T~ = sum_ij e_ij (x) sum_st sigma_st (x) pi(a^ij_st) on l^p(k) (x) l^p(F) (x) (l^p(G) (x) E).
  const Index big = k * n * dim;
  CMatrix tt = CMatrix::Zero(big, big);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      for (Index s = 0; s < n; ++s)
        for (Index u = 0; u < n; ++u) {
          const CMatrix a = t.block((i * n + s) * d, (j * n + u) * d, d, d);
          if (a.cwiseAbs().maxCoeff() == 0.0) continue;
          tt.block((i * n + s) * dim, (j * n + u) * dim, dim, dim) = rep.pi(a);
        }

  const PExponent p = rep.p();
  const double fp = std::pow(static_cast<double>(n), -1.0 / p.p());
  const double fq = std::pow(static_cast<double>(n), -1.0 / p.q());
  CVector xt(big), et(big);
  for (Index i = 0; i < k; ++i)
    for (Index r = 0; r < n; ++r) {
      const CMatrix shift = rep.v(g.inverse(F.members[static_cast<std::size_t>(r)]));
      xt.segment((i * n + r) * dim, dim) = fp * (shift * xi.segment(i * dim, dim));
      et.segment((i * n + r) * dim, dim) = fq * (shift * eta.segment(i * dim, dim));
    }
  c.rhs = (et.transpose() * (tt * xt))(0);
  c.xi_norm = vector_pnorm(xi, p);
  c.xi_tilde_norm = vector_pnorm(xt, p);
  c.eta_norm = vector_pnorm(eta, p.conjugate());
  c.eta_tilde_norm = vector_pnorm(et, p.conjugate());
  return c;
}

CbEstimate psi_contractivity_certificate(const FolnerSet& F, const CovariantRep& rep, const CbOptions& opts) {
  return cb_norm_lower(folner_psi_map(F, rep), rep.p(), opts);
}

namespace {

double folner_bound(const CcElement& f, const FolnerSet& F, const CovariantRep& rep, const EstimatorOptions& opts) {
  double bound = 0.0;
  for (const auto& [s, a] : f.terms()) {
    const double c = static_cast<double>(folner_intersection(F, s)) / static_cast<double>(F.size());
    if (c == 1.0) continue;
    bound += std::abs(1.0 - c) * reduced_norm(CcElement::delta(s, a), rep, opts).value;
  }
  return bound;
}

}  // namespace

RoundtripBound folner_roundtrip(const CcElement& f, const FolnerSet& F, const CovariantRep& rep,
                                const EstimatorOptions& opts) {
  RoundtripBound r;
  const CMatrix diff = folner_psi(folner_phi(f, F, rep), F, rep) - integrated_form(rep, f);
  r.error = diff.cwiseAbs().maxCoeff() == 0.0 ? 0.0 : pnorm_estimate(diff, rep.p(), opts).value;
  r.bound = folner_bound(f, F, rep, opts);
  return r;
}

// ---------------------------------------------------------------------------
// C(X)

double PartitionOfUnity::sum_defect() const {
  if (bumps.empty()) return kInf;
  RVector total = RVector::Zero(model_size());
  for (const auto& b : bumps) total += b;
  return (total.array() - 1.0).abs().maxCoeff();
}

PartitionOfUnity circle_partition(Index grid, Index arcs) {
  if (grid < 1 || arcs < 1) throw DomainError("circle_partition: sizes must be positive");
  if (grid % arcs != 0) throw DomainError("circle_partition: the number of arcs must divide the grid size");
  PartitionOfUnity pu;
  const Index step = grid / arcs;
  for (Index i = 0; i < arcs; ++i) {
    const Index c = i * step;
    RVector b(grid);
    std::vector<Index> cover;
    for (Index j = 0; j < grid; ++j) {
      const Index off = std::abs(j - c);
      const Index dist = std::min(off, grid - off);
      b(j) = arcs == 1 ? 1.0 : std::max(0.0, 1.0 - static_cast<double>(dist) / static_cast<double>(step));
      if (b(j) > 0.0) cover.push_back(j);
    }
    pu.points.push_back(c);
    pu.bumps.push_back(std::move(b));
    pu.cover.push_back(std::move(cover));
  }
  return pu;
}

CVector circle_function(Index grid, const std::function<cplx(cplx)>& f) {
  CVector v(grid);
  for (Index j = 0; j < grid; ++j)
    v(j) = f(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid)));
  return v;
}

CVector cx_point_eval_phi(const CVector& f, const std::vector<Index>& points) {
  CVector out(static_cast<Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < 0 || points[i] >= f.size()) throw DomainError("cx_point_eval_phi: point outside the model");
    out(static_cast<Index>(i)) = f(points[i]);
  }
  return out;
}

CVector cx_partition_psi(const CVector& d, const PartitionOfUnity& pu) {
  if (d.size() != pu.size()) throw DomainError("cx_partition_psi: one coefficient per bump");
  CVector out = CVector::Zero(pu.model_size());
  for (Index i = 0; i < pu.size(); ++i) out += d(i) * pu.bumps[static_cast<std::size_t>(i)].cast<cplx>();
  return out;
}

double max_oscillation(const CVector& f, const PartitionOfUnity& pu) {
  double m = 0.0;
  for (const auto& u : pu.cover)
    for (Index x : u)
      for (Index y : u) m = std::max(m, std::abs(f(x) - f(y)));
  return m;
}

LinearMap cx_phi_map(const PartitionOfUnity& pu) {
  const Index grid = pu.model_size(), n = pu.size();
  const auto points = pu.points;
  LinearMap phi(
      grid, n, [points](const CMatrix& x) { return CMatrix(cx_point_eval_phi(x.diagonal(), points).asDiagonal()); },
      "cx_phi");
  phi.with_domain([grid](Rng& rng) { return CMatrix(random_complex_vector(grid, rng).asDiagonal()); });
  CMatrix sel = CMatrix::Zero(n, grid);
  for (Index i = 0; i < n; ++i) sel(i, points[static_cast<std::size_t>(i)]) = 1.0;
  phi.with_backward_lifts({sel.transpose()});
  phi.with_forward_lifts({sel});
  return phi;
}

LinearMap cx_psi_map(const PartitionOfUnity& pu) {
  const Index grid = pu.model_size(), n = pu.size();
  LinearMap psi(
      n, grid, [pu](const CMatrix& x) { return CMatrix(cx_partition_psi(x.diagonal(), pu).asDiagonal()); },
      "cx_psi");
  psi.with_domain([n](Rng& rng) { return CMatrix(random_complex_vector(n, rng).asDiagonal()); });
  CMatrix sel = CMatrix::Zero(n, grid);
  for (Index i = 0; i < n; ++i) sel(i, pu.points[static_cast<std::size_t>(i)]) = 1.0;
  psi.with_backward_lifts({sel});
  psi.with_forward_lifts({sel.transpose()});
  return psi;
}

Factorization cx_factorization(const PartitionOfUnity& pu, PExponent p,
                               const std::vector<std::pair<std::string, CVector>>& tests, const CbOptions& opts) {
  Factorization f{cx_phi_map(pu), cx_psi_map(pu), pu.size(), {}, {}, {}};
  f.phi_cb = cb_norm_lower(f.phi, p, opts);
  f.psi_cb = cb_norm_lower(f.psi, p, opts);
  for (const auto& [id, fn] : tests) f.roundtrip_errors[id] = sup_diff(cx_partition_psi(cx_point_eval_phi(fn, pu.points), pu), fn);
  return f;
}

// ---------------------------------------------------------------------------
// Lifts

Factorization lift_factorization(const Factorization& fact, Index n, PExponent p,
                                 const std::vector<TestElement>& tests, const CbOptions& opts) {
  if (n < 1) throw DomainError("lift_factorization: n must be positive");
  Factorization f = make_factorization(amplify(fact.phi, n), amplify(fact.psi, n), p, tests, opts);
  f.target_dim = n * fact.target_dim;
  return f;
}

LiftMeasurement measure_lift(const Factorization& fact, Index n, const CMatrix& x, PExponent p,
                             const EstimatorOptions& opts) {
  const Index d = fact.phi.domain_dim();
  if (x.rows() != n * d || x.cols() != n * d) throw DomainError("measure_lift: input is not in M_n (x) A");
  LiftMeasurement m;
  m.lifted_error = roundtrip_error(amplify(fact.phi, n), amplify(fact.psi, n), x, p, opts);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      m.max_entry_error = std::max(m.max_entry_error, roundtrip_error(fact.phi, fact.psi, x.block(i * d, j * d, d, d), p, opts));
  m.bound = static_cast<double>(n * n) * m.max_entry_error;
  return m;
}

LinearMap corner_embedding(Index n, Index d) {
  if (n < 1 || d < 1) throw DomainError("corner_embedding: sizes must be positive");
  LinearMap iota(
      d, n * d,
      [n, d](const CMatrix& a) {
        CMatrix out = CMatrix::Zero(n * d, n * d);
        out.topLeftCorner(d, d) = a;
        return out;
      },
      "iota");
  const CMatrix emb = CMatrix::Identity(n * d, d);
  iota.with_backward_lifts({emb.transpose()});
  iota.with_forward_lifts({emb});
  return iota;
}

LinearMap corner_map(Index n, Index d) {
  if (n < 1 || d < 1) throw DomainError("corner_map: sizes must be positive");
  LinearMap rho(n * d, d, [d](const CMatrix& x) { return CMatrix(x.topLeftCorner(d, d)); }, "rho");
  const CMatrix emb = CMatrix::Identity(n * d, d);
  rho.with_backward_lifts({emb});
  rho.with_forward_lifts({emb.transpose()});
  return rho;
}

CornerRestriction corner_restrict(const Factorization& fact, Index n, PExponent p,
                                  const std::vector<TestElement>& tests, const CbOptions& opts) {
  const Index nd = fact.phi.domain_dim();
  if (n < 1 || nd % n != 0) throw DomainError("corner_restrict: domain is not M_n (x) A");
  const Index d = nd / n;
  LinearMap iota = corner_embedding(n, d);
  LinearMap rho = corner_map(n, d);
  const LinearMap outer_phi = fact.phi;
  iota.with_domain([outer_phi, d](Rng& rng) { return CMatrix(outer_phi.sample_domain(rng).topLeftCorner(d, d)); });
  rho.with_domain([outer_phi](Rng& rng) { return outer_phi.sample_domain(rng); });

  CornerRestriction out{make_factorization(compose(fact.phi, iota), compose(rho, fact.psi), p, tests, opts), {}, {}};
  out.iota_cb = cb_norm_lower(iota, p, opts);
  out.rho_cb = cb_norm_lower(rho, p, opts);
  return out;
}

CMatrix truncate_stable(const CMatrix& t, Index n_keep, Index d) {
  if (d < 1 || t.rows() != t.cols() || t.rows() % d != 0) throw DomainError("truncate_stable: not a block operator");
  if (n_keep < 0 || n_keep * d > t.rows()) throw DomainError("truncate_stable: N exceeds the window");
  CMatrix out = CMatrix::Zero(t.rows(), t.cols());
  out.topLeftCorner(n_keep * d, n_keep * d) = t.topLeftCorner(n_keep * d, n_keep * d);
  return out;
}

LinearMap truncation_map(Index sites, Index n_keep, Index d) {
  if (sites < 1 || n_keep < 0 || n_keep > sites) throw DomainError("truncation_map: N exceeds the window");
  LinearMap kappa(
      sites * d, sites * d, [n_keep, d](const CMatrix& t) { return truncate_stable(t, n_keep, d); }, "kappa");
  CMatrix proj = CMatrix::Zero(sites * d, sites * d);
  proj.topLeftCorner(n_keep * d, n_keep * d).setIdentity();
  kappa.with_backward_lifts({proj});
  kappa.with_forward_lifts({proj});
  return kappa;
}

// ---------------------------------------------------------------------------
// Composition

ComposedFactorization compose_factorizations(const LinearMap& bridge_phi, const LinearMap& bridge_psi,
                                             const Factorization& fact_b, const std::vector<TestElement>& tests,
                                             PExponent p, const CbOptions& opts, bool certify_composite) {
  ComposedFactorization out{
      Factorization{compose(fact_b.phi, bridge_phi), compose(bridge_psi, fact_b.psi), fact_b.target_dim, {}, {}, {}},
      {}, {}, {}, {}, true};

  const auto check = [](const std::string& name, const CbEstimate& cb) {
    for (const auto& l : cb.levels)
      if (l.level_max > 1.0 + 1e-6)
        throw CertificateError("bridge map " + name + " exceeds 1 + 1e-6 at level " + std::to_string(l.n) + ": " +
                               std::to_string(l.level_max));
  };
  out.bridge_phi_cb = cb_norm_lower(bridge_phi, p, opts);
  check(bridge_phi.name(), out.bridge_phi_cb);
  out.bridge_psi_cb = cb_norm_lower(bridge_psi, p, opts);
  check(bridge_psi.name(), out.bridge_psi_cb);

  if (certify_composite) {
    out.fact.phi_cb = cb_norm_lower(out.fact.phi, p, opts);
    out.fact.psi_cb = cb_norm_lower(out.fact.psi, p, opts);
  } else {
    out.fact.phi_cb = out.bridge_phi_cb;
    out.fact.psi_cb = out.bridge_psi_cb;
  }

  for (const auto& t : tests) {
    const CMatrix y = bridge_phi(t.x);
    const double bridge = roundtrip_error(bridge_phi, bridge_psi, t.x, p, opts.norm);
    const double base = roundtrip_error(fact_b.phi, fact_b.psi, y, p, opts.norm);
    const double total = roundtrip_error(out.fact.phi, out.fact.psi, t.x, p, opts.norm);
    out.bridge_errors[t.id] = bridge;
    out.base_errors[t.id] = base;
    out.fact.roundtrip_errors[t.id] = total;
    if (total > bridge + base + 1e-9) out.bookkeeping_ok = false;
  }
  return out;
}

Factorization exact_matrix_factorization(Index blocks, const ConcreteAlgebra& alg, PExponent p, const CbOptions& opts) {
  const Index d = alg.base_dim(), dim = blocks * d;
  LinearMap phi0 = LinearMap::identity(dim).with_name("phi0");
  phi0.with_domain([blocks, alg](Rng& rng) { return random_block_element(blocks, alg, rng); });
  const bool diagonal = alg.kind() == ConcreteAlgebra::Kind::diagonal;
  LinearMap psi0(
      dim, dim,
      [diagonal, d](const CMatrix& x) {
        if (!diagonal) return x;
        // Keep entries whose E coordinates agree: the pinching onto M_F (x) D_d.
        CMatrix out = CMatrix::Zero(x.rows(), x.cols());
        for (Index j = 0; j < x.cols(); ++j)
          for (Index i = j % d; i < x.rows(); i += d) out(i, j) = x(i, j);
        return out;
      },
      "psi0");
  psi0.with_domain([dim](Rng& rng) { return random_complex_matrix(dim, dim, rng); });
  // The pinching is the mean of conjugations by I (x) diag(omega^{jk}); those
  // unitaries carry a norming vector of the output to one of the input.
  std::vector<CMatrix> back;
  for (Index k = 0; k < (diagonal ? d : 1); ++k) {
    CVector phases(dim);
    for (Index i = 0; i < dim; ++i)
      phases(i) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * (i % d)) / static_cast<double>(d));
    back.push_back(phases.asDiagonal());
  }
  psi0.with_backward_lifts(std::move(back));
  psi0.with_forward_lifts({CMatrix::Identity(dim, dim)});
  Factorization f{phi0, psi0, dim, {}, {}, {}};
  f.phi_cb = cb_norm_lower(f.phi, p, opts);
  f.psi_cb = cb_norm_lower(f.psi, p, opts);
  return f;
}

// ---------------------------------------------------------------------------
// Witnesses

Witness crossed_nuclearity_witness(const std::vector<NamedElement>& fs, double epsilon, const CrossedSystem& sys,
                                   PExponent p, const WitnessOptions& opts) {
  if (!(epsilon > 0.0)) throw DomainError("witness: epsilon must be positive");
  const Group& g = sys.group;
  std::set<Element> f3;
  Element radius = 0;
  for (const auto& e : fs) {
    if (e.f.base_dim() != sys.base_dim()) throw DomainError("witness: element " + e.id + " has the wrong base dimension");
    for (Element s : e.f.support()) {
      if (!g.contains(s)) throw DomainError("witness: element " + e.id + " is supported outside the group");
      f3.insert(s);
      radius = std::max<Element>(radius, s < 0 ? -s : s);
    }
  }
  std::vector<Element> shifts(f3.begin(), f3.end());
  if (shifts.empty()) shifts.push_back(g.identity());

  const auto max_norm = [&](const CovariantRep& rep) {
    double m = 0.0;
    for (const auto& e : fs)
      if (!e.f.empty()) m = std::max(m, reduced_norm(e.f, rep, opts.norm).value);
    return m;
  };
  // The reduced norms are lower estimates; a relative pad keeps rounding from
  // loosening delta.
  const auto delta_for = [&](double m) { return m > 0.0 ? epsilon / (3.0 * m * (1.0 + 1e-9)) : 1.0; };

  std::optional<CovariantRep> rep;
  std::optional<FolnerSet> F;
  double delta = 0.0;
  if (g.is_finite()) {
    rep.emplace(build_regular_rep(sys, p));
    delta = delta_for(max_norm(*rep));
    F.emplace(folner_search(g, shifts, delta));
  } else {
    Element w = std::max<Element>(radius + 1, g.window_radius());
    for (int round = 0; round < 6; ++round) {
      rep.emplace(build_window_rep(sys, p, -w, w));
      delta = delta_for(max_norm(*rep));
      F.emplace(folner_search(g, shifts, delta));
      const Element need = std::max<Element>(radius + static_cast<Element>(F->size()), g.window_radius());
      if (need == w) break;
      w = need;
    }
    if (!rep->site_index(F->members.front()) || !rep->site_index(F->members.back())) {
      w = radius + static_cast<Element>(F->size());
      rep.emplace(build_window_rep(sys, p, -w, w));
    }
  }

  const LinearMap phi_f = folner_phi_map(*F, *rep, opts.sample_radius);
  const LinearMap psi_f = folner_psi_map(*F, *rep);
  const Factorization base = exact_matrix_factorization(static_cast<Index>(F->size()), sys.algebra, p, opts.cb);

  std::vector<TestElement> tests;
  for (const auto& e : fs) tests.push_back({e.id, integrated_form(*rep, e.f)});
  // phi0 is the identity and psi0 a mean of isometric conjugations, so the
  // composite maps are certified through their Foelner factors.
  ComposedFactorization composed = compose_factorizations(phi_f, psi_f, base, tests, p, opts.cb, false);

  WitnessReport r;
  r.group = g.label();
  r.p = p.p();
  if (rep->is_window()) r.window = std::make_pair(rep->sites().front(), rep->sites().back());
  r.folner_members = F->members;
  for (Element s : shifts) r.folner_ratios[s] = folner_ratio(*F, s);
  r.delta = delta;
  r.epsilon = epsilon;
  r.bookkeeping_ok = composed.bookkeeping_ok;
  bool ok = composed.bookkeeping_ok;
  for (const auto& e : fs) {
    ElementRecord er;
    er.id = e.id;
    er.reduced_norm = e.f.empty() ? 0.0 : reduced_norm(e.f, *rep, opts.norm).value;
    er.roundtrip_error = composed.fact.roundtrip_errors.at(e.id);
    er.bound = folner_bound(e.f, *F, *rep, opts.norm);
    ok = ok && er.roundtrip_error < epsilon && er.roundtrip_error <= er.bound + 1e-6;
    r.elements.push_back(std::move(er));
  }
  r.certificates.push_back(record("phi", composed.bridge_phi_cb));
  r.certificates.push_back(record("psi", composed.bridge_psi_cb));
  r.certificates.push_back(record("phi0", base.phi_cb));
  r.certificates.push_back(record("psi0", base.psi_cb));
  for (const auto& c : r.certificates) ok = ok && c.passed;
  r.passed = ok;
  return Witness{std::move(composed.fact), std::move(r)};
}

RotationReport rotation_demo(Index n, long long k, PExponent p, double epsilon, const WitnessOptions& opts) {
  if (n < 1) throw DomainError("rotation_demo: N must be positive");
  if (std::gcd(static_cast<long long>(n), k) != 1) throw DomainError("rotation_demo: k must be coprime to N");
  const Group g = Group::finite(FiniteGroup::cyclic(static_cast<int>(n)));
  const CrossedSystem sys(g, ConcreteAlgebra::diagonal(n), IsometricAction::coordinate_rotation(g, n, k));

  const CVector w = circle_function(n, [](cplx z) { return z; });
  const CcElement u = CcElement::delta(1 % n, CMatrix::Identity(n, n));
  const CcElement z = CcElement::delta(0, w.asDiagonal());

  RotationReport r;
  r.n = n;
  r.k = k;
  r.theta_model = static_cast<double>(k) / static_cast<double>(n);
  const CovariantRep rep = build_regular_rep(sys, p);
  const CMatrix iu = integrated_form(rep, u), iz = integrated_form(rep, z);
  const cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  r.commutation_defect = max_abs_diff(iu * iz, phase * iz * iu);

  r.witness = crossed_nuclearity_witness({{"u", u}, {"z", z}}, epsilon, sys, p, opts).report;

  // C(X) pair on the same n-point model of the circle.
  Index arcs = 1;
  for (Index q = 2; q <= n; ++q)
    if (n % q == 0) {
      arcs = n / q;
      break;
    }
  r.arcs = arcs;
  const PartitionOfUnity pu = circle_partition(n, arcs);
  r.partition_defect = pu.sum_defect();
  const std::vector<std::pair<std::string, CVector>> tests = {
      {"one", circle_function(n, [](cplx) { return cplx(1.0); })},
      {"z", w},
      {"z2", circle_function(n, [](cplx x) { return x * x; })},
      {"re_z", circle_function(n, [](cplx x) { return cplx(x.real()); })}};
  const Factorization cx = cx_factorization(pu, p, tests, opts.cb);
  bool ok = r.witness.passed && r.commutation_defect <= 1e-12 && r.partition_defect <= 1e-12;
  for (const auto& [id, f] : tests) {
    r.cx_errors[id] = cx.roundtrip_errors.at(id);
    r.cx_oscillations[id] = max_oscillation(f, pu);
    ok = ok && r.cx_errors[id] <= r.cx_oscillations[id] + 1e-12;
  }
  r.cx_certificates.push_back(record("cx_phi", cx.phi_cb));
  r.cx_certificates.push_back(record("cx_psi", cx.psi_cb, true));
  for (const auto& c : r.cx_certificates) ok = ok && c.passed;
  r.passed = ok;
  return r;
}

}  // namespace pnuc
