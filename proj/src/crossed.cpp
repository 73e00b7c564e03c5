#include <pnuc/crossed.hpp>

#include <algorithm>
#include <numeric>

namespace pnuc {

// ---------------------------------------------------------------------------
// algebra

ConcreteAlgebra ConcreteAlgebra::full(Index d) {
  if (d < 1) throw DomainError("algebra dimension must be positive");
  return ConcreteAlgebra(d, Kind::full);
}

ConcreteAlgebra ConcreteAlgebra::diagonal(Index d) {
  if (d < 1) throw DomainError("algebra dimension must be positive");
  return ConcreteAlgebra(d, Kind::diagonal);
}

std::string ConcreteAlgebra::label() const {
  return (kind_ == Kind::full ? "full:" : "diagonal:") + std::to_string(dim_);
}

bool ConcreteAlgebra::contains(const CMatrix& a, double tol) const {
  if (a.rows() != dim_ || a.cols() != dim_) return false;
  if (kind_ == Kind::full) return true;
  for (Index i = 0; i < dim_; ++i)
    for (Index j = 0; j < dim_; ++j)
      if (i != j && std::abs(a(i, j)) > tol) return false;
  return true;
}

CMatrix ConcreteAlgebra::project(const CMatrix& a) const {
  if (kind_ == Kind::full) return a;
  return a.diagonal().asDiagonal();
}

CMatrix ConcreteAlgebra::random_element(Rng& rng) const {
  if (kind_ == Kind::full) return random_complex_matrix(dim_, dim_, rng);
  return random_complex_vector(dim_, rng).asDiagonal();
}

std::vector<CMatrix> ConcreteAlgebra::basis() const {
  std::vector<CMatrix> out;
  for (Index i = 0; i < dim_; ++i)
    for (Index j = 0; j < dim_; ++j)
      if (kind_ == Kind::full || i == j) out.push_back(matrix_unit(dim_, i, j));
  return out;
}

// ---------------------------------------------------------------------------
// phased permutations

PhasedPermutation PhasedPermutation::identity(Index d) {
  PhasedPermutation u;
  u.perm.resize(d);
  std::iota(u.perm.begin(), u.perm.end(), Index{0});
  u.phase.assign(d, cplx(1.0));
  return u;
}

PhasedPermutation PhasedPermutation::from_matrix(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DomainError("phased permutation must be square");
  const Index d = m.rows();
  PhasedPermutation u;
  u.perm.assign(d, -1);
  u.phase.assign(d, cplx(0.0));
  std::vector<bool> hit(d, false);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      if (m(i, j) == cplx(0.0)) continue;
      if (u.perm[j] >= 0 || hit[i]) throw DomainError("not a phased permutation: two nonzeros in a line");
      if (std::abs(std::abs(m(i, j)) - 1.0) > tol) throw DomainError("not a phased permutation: non-unimodular entry");
      u.perm[j] = i;
      u.phase[j] = m(i, j);
      hit[i] = true;
    }
    if (u.perm[j] < 0) throw DomainError("not a phased permutation: empty column");
  }
  return u;
}

CMatrix PhasedPermutation::matrix() const {
  const Index d = dim();
  CMatrix m = CMatrix::Zero(d, d);
  for (Index j = 0; j < d; ++j) m(perm[j], j) = phase[j];
  return m;
}

PhasedPermutation PhasedPermutation::inverse() const {
  PhasedPermutation u;
  const Index d = dim();
  u.perm.resize(d);
  u.phase.resize(d);
  for (Index j = 0; j < d; ++j) {
    u.perm[perm[j]] = j;
    u.phase[perm[j]] = std::conj(phase[j]);
  }
  return u;
}

CMatrix PhasedPermutation::conjugate(const CMatrix& a) const {
  const Index d = dim();
  CMatrix out(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) out(perm[i], perm[j]) = phase[i] * a(i, j) * std::conj(phase[j]);
  return out;
}

PhasedPermutation PhasedPermutation::then_after(const PhasedPermutation& other) const {
  PhasedPermutation u;
  const Index d = dim();
  u.perm.resize(d);
  u.phase.resize(d);
  for (Index j = 0; j < d; ++j) {
    u.perm[j] = perm[other.perm[j]];
    u.phase[j] = other.phase[j] * phase[other.perm[j]];
  }
  return u;
}

CVector PhasedPermutation::apply(const CVector& x) const {
  CVector y(dim());
  for (Index j = 0; j < dim(); ++j) y(perm[j]) = phase[j] * x(j);
  return y;
}

// ---------------------------------------------------------------------------
// actions

IsometricAction IsometricAction::trivial(Group g, Index d) {
  IsometricAction act(std::move(g), d);
  act.generated_ = true;
  act.generator_ = PhasedPermutation::identity(d);
  act.label_ = "trivial";
  return act;
}

IsometricAction IsometricAction::from_implementers(const Group& g, std::vector<CMatrix> implementers) {
  if (!g.is_finite()) throw DomainError("implementer tables need a finite group");
  const FiniteGroup& fg = g.finite_group();
  if (static_cast<int>(implementers.size()) != fg.order()) throw DomainError("one implementer per group element");
  const Index d = implementers.front().rows();
  IsometricAction act(g, d);
  for (const auto& m : implementers) {
    if (m.rows() != d) throw DomainError("implementers must share one size");
    act.table_.push_back(PhasedPermutation::from_matrix(m));
  }
  constexpr double tol = 1e-12;
  if (max_abs_diff(implementers[fg.identity()], CMatrix::Identity(d, d)) > tol)
    throw DomainError("implementer of the identity must be I");
  for (int s = 0; s < fg.order(); ++s)
    for (int t = 0; t < fg.order(); ++t)
      if (max_abs_diff(implementers[s] * implementers[t], implementers[fg.multiply(s, t)]) > tol)
        throw DomainError("implementers are not a homomorphism: U_s U_t != U_st");
  act.label_ = "table";
  return act;
}

IsometricAction IsometricAction::generated_by(Group g, const CMatrix& generator) {
  IsometricAction act(std::move(g), generator.rows());
  act.generator_ = PhasedPermutation::from_matrix(generator);
  act.generated_ = true;
  act.label_ = "generated";
  if (act.group_.is_finite()) {
    const FiniteGroup& fg = act.group_.finite_group();
    if (!fg.is_cyclic_model()) throw DomainError("a single generator needs the integers or a cyclic group");
    PhasedPermutation pow = PhasedPermutation::identity(act.dim_);
    for (int k = 0; k < fg.order(); ++k) pow = act.generator_.then_after(pow);
    if (max_abs_diff(pow.matrix(), CMatrix::Identity(act.dim_, act.dim_)) > 1e-12)
      throw DomainError("generator order does not divide the group order");
  }
  return act;
}

IsometricAction IsometricAction::coordinate_rotation(Group g, Index d, long long k) {
  CMatrix u = CMatrix::Zero(d, d);
  for (Index j = 0; j < d; ++j) {
    const long long target = (((static_cast<long long>(j) - k) % d) + d) % d;
    u(static_cast<Index>(target), j) = 1.0;
  }
  IsometricAction act = generated_by(std::move(g), u);
  act.label_ = "rotate:" + std::to_string(k);
  return act;
}

PhasedPermutation IsometricAction::implementer(Element s) const {
  if (!group_.contains(s)) throw DomainError("action: element outside the group");
  if (!generated_) return table_[static_cast<std::size_t>(s)];
  // s -> U^s, with negative powers through the inverse.
  PhasedPermutation base = s < 0 ? generator_.inverse() : generator_;
  unsigned long long e = static_cast<unsigned long long>(s < 0 ? -s : s);
  PhasedPermutation out = PhasedPermutation::identity(dim_);
  while (e) {
    if (e & 1ull) out = base.then_after(out);
    base = base.then_after(base);
    e >>= 1;
  }
  return out;
}

CMatrix IsometricAction::apply(Element s, const CMatrix& a) const { return implementer(s).conjugate(a); }

CrossedSystem::CrossedSystem(Group g, ConcreteAlgebra a, IsometricAction act)
    : group(std::move(g)), algebra(std::move(a)), action(std::move(act)) {
  if (action.base_dim() != algebra.base_dim()) throw DomainError("action and algebra sizes differ");
  if (action.group().label() != group.label()) throw DomainError("action is defined on a different group");
}

// ---------------------------------------------------------------------------
// C_c(G, A, alpha)

CcElement::CcElement(Index base_dim) : dim_(base_dim) {
  if (base_dim < 1) throw DomainError("CcElement: base dimension must be positive");
}

CcElement CcElement::delta(Element s, const CMatrix& a) {
  CcElement f(a.rows());
  f.add(s, a);
  return f;
}

CcElement& CcElement::add(Element s, const CMatrix& a) {
  if (a.rows() != dim_ || a.cols() != dim_) throw DomainError("CcElement: mismatched base dimensions");
  auto it = terms_.find(s);
  if (it == terms_.end()) {
    if (a.cwiseAbs().maxCoeff() != 0.0) terms_.emplace(s, a);
    return *this;
  }
  it->second += a;
  if (it->second.cwiseAbs().maxCoeff() == 0.0) terms_.erase(it);
  return *this;
}

CMatrix CcElement::coefficient(Element s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? CMatrix::Zero(dim_, dim_) : it->second;
}

std::vector<Element> CcElement::support() const {
  std::vector<Element> out;
  for (const auto& [s, a] : terms_) out.push_back(s);
  return out;
}

void CcElement::prune(double threshold) {
  std::erase_if(terms_, [threshold](const auto& kv) { return kv.second.cwiseAbs().maxCoeff() <= threshold; });
}

CcElement CcElement::operator+(const CcElement& other) const {
  CcElement out = *this;
  for (const auto& [s, a] : other.terms_) out.add(s, a);
  return out;
}

CcElement CcElement::operator*(cplx scale) const {
  CcElement out(dim_);
  for (const auto& [s, a] : terms_) out.add(s, scale * a);
  return out;
}

CcElement twisted_convolve(const CcElement& f, const CcElement& g, const IsometricAction& alpha) {
  if (f.base_dim() != g.base_dim() || f.base_dim() != alpha.base_dim())
    throw DomainError("twisted_convolve: mismatched base dimensions");
  const Group& grp = alpha.group();
  CcElement out(f.base_dim());
  for (const auto& [s, a] : f.terms())
    for (const auto& [u, b] : g.terms()) out.add(grp.multiply(s, u), a * alpha.apply(s, b));
  out.prune(1e-14);
  return out;
}

CcElement random_cc_element(const CrossedSystem& sys, const std::vector<Element>& support, Rng& rng) {
  CcElement f(sys.base_dim());
  for (Element s : support) f.add(s, sys.algebra.random_element(rng));
  return f;
}

// ---------------------------------------------------------------------------
// covariant representation

CovariantRep::CovariantRep(CrossedSystem sys, PExponent p, std::vector<Element> sites)
    : sys_(std::move(sys)), p_(p), sites_(std::move(sites)) {
  if (sites_.empty()) throw DomainError("covariant representation needs at least one site");
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (!sys_.group.contains(sites_[i])) throw DomainError("site outside the group");
    if (!index_.emplace(sites_[i], static_cast<Index>(i)).second) throw DomainError("duplicate site");
  }
  if (sys_.group.is_finite() && static_cast<int>(sites_.size()) != *sys_.group.order())
    throw DomainError("finite groups are represented on all of l^p(G)");
}

std::optional<Index> CovariantRep::site_index(Element t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CMatrix CovariantRep::pi(const CMatrix& a) const {
  const Index d = base_dim();
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const Index k = static_cast<Index>(i);
    out.block(k * d, k * d, d, d) = sys_.action.apply(sys_.group.inverse(sites_[i]), a);
  }
  return out;
}

CMatrix CovariantRep::v(Element s) const {
  const Index d = base_dim();
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const auto target = site_index(sys_.group.multiply(s, sites_[i]));
    if (!target) continue;
    out.block(*target * d, static_cast<Index>(i) * d, d, d).setIdentity();
  }
  return out;
}

void CovariantRep::add_term(CMatrix& out, const CMatrix& a, Element s, cplx scale) const {
  const Index d = base_dim();
  const Element s_inv = sys_.group.inverse(s);
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const Element r = sites_[i];
    const auto col = site_index(sys_.group.multiply(s_inv, r));
    if (!col) continue;
    out.block(static_cast<Index>(i) * d, *col * d, d, d) += scale * sys_.action.apply(sys_.group.inverse(r), a);
  }
}

CMatrix CovariantRep::site_projection(const std::vector<Element>& set) const {
  const Index d = base_dim();
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (Element t : set) {
    const auto k = site_index(t);
    if (!k) throw DomainError("site_projection: site outside the representation");
    out.block(*k * d, *k * d, d, d).setIdentity();
  }
  return out;
}

CovariantRep build_regular_rep(const CrossedSystem& sys, PExponent p) {
  if (!sys.group.is_finite()) throw DomainError("build_regular_rep: use build_window_rep for the integers");
  std::vector<Element> sites(static_cast<std::size_t>(*sys.group.order()));
  std::iota(sites.begin(), sites.end(), Element{0});
  return CovariantRep(sys, p, std::move(sites));
}

CovariantRep build_window_rep(const CrossedSystem& sys, PExponent p, Element lo, Element hi) {
  if (sys.group.is_finite()) throw DomainError("build_window_rep: windows are for the integers");
  if (hi < lo) throw DomainError("build_window_rep: empty window");
  std::vector<Element> sites;
  for (Element t = lo; t <= hi; ++t) sites.push_back(t);
  return CovariantRep(sys, p, std::move(sites));
}

CMatrix integrated_form(const CovariantRep& rep, const CcElement& f) {
  if (f.base_dim() != rep.base_dim()) throw DomainError("integrated_form: mismatched base dimensions");
  CMatrix out = CMatrix::Zero(rep.dim(), rep.dim());
  for (const auto& [s, a] : f.terms()) rep.add_term(out, a, s);
  return out;
}

double covariance_defect(const CovariantRep& rep, const CMatrix& a, Element t) {
  const Group& g = rep.system().group;
  const CMatrix lhs = rep.v(t) * rep.pi(a) * rep.v(g.inverse(t));
  const CMatrix rhs = rep.pi(rep.system().action.apply(t, a));
  return max_abs_diff(lhs, rhs);
}

PNormEstimate reduced_norm(const CcElement& f, const CovariantRep& rep, const EstimatorOptions& opts) {
  return pnorm_estimate(integrated_form(rep, f), rep.p(), opts);
}

CMatrix conditional_expectation(const CcElement& f, const Group& g) { return f.coefficient(g.identity()); }

CompressionCheck compress_identity_check(const CovariantRep& rep, const CcElement& f) {
  const Group& g = rep.system().group;
  const Element e = g.identity();
  const CMatrix proj = rep.site_projection({e});
  CompressionCheck c;
  c.lhs = proj * integrated_form(rep, f) * proj;
  c.rhs = CMatrix::Zero(rep.dim(), rep.dim());
  const Index k = *rep.site_index(e), d = rep.base_dim();
  c.rhs.block(k * d, k * d, d, d) = f.coefficient(e);
  c.max_abs_diff = max_abs_diff(c.lhs, c.rhs);
  return c;
}

std::vector<Element> sampling_support(const CovariantRep& rep, int radius) {
  const Group& g = rep.system().group;
  std::vector<Element> out;
  if (g.is_finite()) {
    for (int s = 0; s < *g.order(); ++s) out.push_back(s);
  } else {
    for (Element s = -radius; s <= radius; ++s) out.push_back(s);
  }
  return out;
}

LinearMap expectation_map(const CovariantRep& rep, int sample_radius) {
  const CMatrix proj = rep.site_projection({rep.system().group.identity()});
  LinearMap phi(
      rep.dim(), rep.dim(), [proj](const CMatrix& x) { return CMatrix(proj * x * proj); }, "expectation");
  const auto support = sampling_support(rep, sample_radius);
  phi.with_domain([rep, support](Rng& rng) {
    return integrated_form(rep, random_cc_element(rep.system(), support, rng));
  });
  phi.with_backward_lifts({proj});
  phi.with_forward_lifts({proj});
  return phi;
}

LinearMap embedding_map(const CovariantRep& rep) {
  const Index d = rep.base_dim();
  LinearMap phi(d, rep.dim(), [rep](const CMatrix& a) { return rep.pi(a); }, "pi");
  const ConcreteAlgebra alg = rep.system().algebra;
  phi.with_domain([alg](Rng& rng) { return alg.random_element(rng); });
  // Fiber t of pi(a) is U a U* with U = U_{t^-1}; a norming vector w of that
  // fiber gives U* w for a.
  std::vector<CMatrix> back, fwd;
  const Group& g = rep.system().group;
  for (Element t : rep.sites()) {
    const Index k = *rep.site_index(t);
    const CMatrix u = rep.system().action.implementer(g.inverse(t)).matrix();
    CMatrix sel = CMatrix::Zero(d, rep.dim());
    sel.block(0, k * d, d, d) = u.adjoint();
    back.push_back(sel);
    fwd.push_back(sel.adjoint());
  }
  phi.with_backward_lifts(std::move(back));
  phi.with_forward_lifts(std::move(fwd));
  return phi;
}

CbEstimate expectation_cb_certificate(const CovariantRep& rep, const CbOptions& opts) {
  return cb_norm_lower(expectation_map(rep), rep.p(), opts);
}

}  // namespace pnuc
