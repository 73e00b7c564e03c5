#pragma once

// The convolution algebra C_c(G, A, alpha), its regular covariant
// representation on l^p(G) (x) E, integrated forms and reduced norms, and the
// conditional expectation onto the identity coefficient.
//
// Everything is finite: E = l^p(X) with X a finite set under counting
// measure, A a subalgebra of M_d, G finite or the integers seen through a
// finite window of sites. Basis of l^p(sites) (x) E: (site, x) -> site_index * d + x.

#include <pnuc/groups.hpp>
#include <pnuc/lpnorm.hpp>
#include <pnuc/opspace.hpp>

#include <map>
#include <string>
#include <vector>

namespace pnuc {

/// A subalgebra of B(l^p(X)) for |X| = base_dim: all of M_d, or the
/// diagonal (multiplication) operators standing in for C(X).
class ConcreteAlgebra {
 public:
  enum class Kind { full, diagonal };

  static ConcreteAlgebra full(Index d);
  static ConcreteAlgebra diagonal(Index d);

  Index base_dim() const { return dim_; }
  Kind kind() const { return kind_; }
  std::string label() const;

  bool contains(const CMatrix& a, double tol = 0.0) const;
  /// The p-completely contractive idempotent of M_d onto A (identity, or
  /// the diagonal pinching).
  CMatrix project(const CMatrix& a) const;
  CMatrix random_element(Rng& rng) const;
  std::vector<CMatrix> basis() const;

 private:
  ConcreteAlgebra(Index d, Kind k) : dim_(d), kind_(k) {}
  Index dim_;
  Kind kind_;
};

/// U e_j = phase[j] e_{perm[j]}: an isometry of l^p for every p.
struct PhasedPermutation {
  std::vector<Index> perm;
  std::vector<cplx> phase;

  static PhasedPermutation identity(Index d);
  /// Rejects anything that is not exactly one unimodular entry per row and column.
  static PhasedPermutation from_matrix(const CMatrix& u, double tol = 1e-12);

  Index dim() const { return static_cast<Index>(perm.size()); }
  CMatrix matrix() const;
  PhasedPermutation inverse() const;
  /// U a U*.
  CMatrix conjugate(const CMatrix& a) const;
  /// (this * other) e_j = this(other e_j).
  PhasedPermutation then_after(const PhasedPermutation& other) const;
  CVector apply(const CVector& x) const;
};

/// alpha_s(a) = U_s a U_s^{-1} with every U_s a phased permutation, so each
/// alpha_s is p-completely isometric for all p.
class IsometricAction {
 public:
  static IsometricAction trivial(Group g, Index d);
  /// Finite groups: one implementer per element, U_e = I, U_s U_t = U_{st}.
  static IsometricAction from_implementers(const Group& g, std::vector<CMatrix> implementers);
  /// s -> U^s, for the integers or a cyclic group (then U^n must be I).
  static IsometricAction generated_by(Group g, const CMatrix& generator);
  /// U e_j = e_{j - k}: on diagonal operators alpha_1(diag(w))_j = w_{j+k}.
  static IsometricAction coordinate_rotation(Group g, Index d, long long k);

  const Group& group() const { return group_; }
  Index base_dim() const { return dim_; }
  const std::string& label() const { return label_; }

  PhasedPermutation implementer(Element s) const;
  CMatrix apply(Element s, const CMatrix& a) const;

 private:
  IsometricAction(Group g, Index d) : group_(std::move(g)), dim_(d) {}
  Group group_;
  Index dim_;
  std::vector<PhasedPermutation> table_;  // finite groups
  PhasedPermutation generator_;           // generated actions
  bool generated_ = false;
  std::string label_;
};

struct CrossedSystem {
  Group group;
  ConcreteAlgebra algebra;
  IsometricAction action;

  CrossedSystem(Group g, ConcreteAlgebra a, IsometricAction act);
  Index base_dim() const { return algebra.base_dim(); }
};

/// f = sum_s a_s delta_s with finitely many nonzero coefficients.
class CcElement {
 public:
  explicit CcElement(Index base_dim);
  static CcElement delta(Element s, const CMatrix& a);

  Index base_dim() const { return dim_; }
  /// Adds a to the coefficient at s; coefficients that become exactly zero are dropped.
  CcElement& add(Element s, const CMatrix& a);
  CMatrix coefficient(Element s) const;
  std::vector<Element> support() const;
  const std::map<Element, CMatrix>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  /// Drops coefficients whose entries are all at most `threshold` in modulus.
  void prune(double threshold);

  CcElement operator+(const CcElement& other) const;
  CcElement operator*(cplx scale) const;

 private:
  Index dim_;
  std::map<Element, CMatrix> terms_;
};

/// (f*g)(t) = sum_s f(s) alpha_s(g(s^-1 t)), pruned at 1e-14.
CcElement twisted_convolve(const CcElement& f, const CcElement& g, const IsometricAction& alpha);

/// Random element of C_c supported on `support` with coefficients in A.
CcElement random_cc_element(const CrossedSystem& sys, const std::vector<Element>& support, Rng& rng);

/// The regular covariant pair (pi, v) on l^p(sites) (x) E.
class CovariantRep {
 public:
  CovariantRep(CrossedSystem sys, PExponent p, std::vector<Element> sites);

  const CrossedSystem& system() const { return sys_; }
  PExponent p() const { return p_; }
  const std::vector<Element>& sites() const { return sites_; }
  Index base_dim() const { return sys_.base_dim(); }
  Index dim() const { return static_cast<Index>(sites_.size()) * base_dim(); }
  /// True when the group is the integers and the sites are a finite window.
  bool is_window() const { return !sys_.group.is_finite(); }
  std::optional<Index> site_index(Element t) const;

  /// pi(a) = sum_t sigma_{t,t} (x) alpha_{t^-1}(a).
  CMatrix pi(const CMatrix& a) const;
  /// v(s) = lambda_p(s) (x) I_E (compressed to the window on the integers).
  CMatrix v(Element s) const;
  /// out += scale * pi(a) v(s), assembled blockwise: block (r, s^-1 r) = alpha_{r^-1}(a).
  void add_term(CMatrix& out, const CMatrix& a, Element s, cplx scale = 1.0) const;
  /// P_S (x) I_E for a set of sites.
  CMatrix site_projection(const std::vector<Element>& set) const;

 private:
  CrossedSystem sys_;
  PExponent p_;
  std::vector<Element> sites_;
  std::map<Element, Index> index_;
};

/// The regular representation of a finite-group system (sites = all of G).
CovariantRep build_regular_rep(const CrossedSystem& sys, PExponent p);
/// The integers compressed to sites {lo, ..., hi}.
CovariantRep build_window_rep(const CrossedSystem& sys, PExponent p, Element lo, Element hi);

/// sum_t pi(f(t)) v(t).
CMatrix integrated_form(const CovariantRep& rep, const CcElement& f);

/// max |v(t) pi(a) v(t^-1) - pi(alpha_t(a))|.
double covariance_defect(const CovariantRep& rep, const CMatrix& a, Element t);

/// The reduced crossed-product norm of f in this finite model.
PNormEstimate reduced_norm(const CcElement& f, const CovariantRep& rep, const EstimatorOptions& opts = {});

/// f(e), or zero if e is not in the support.
CMatrix conditional_expectation(const CcElement& f, const Group& g);

struct CompressionCheck {
  CMatrix lhs;
  CMatrix rhs;
  double max_abs_diff = 0.0;
};

/// lhs = (P_e (x) I) integrated_form(f) (P_e (x) I), rhs = P_e (x) f(e).
CompressionCheck compress_identity_check(const CovariantRep& rep, const CcElement& f);

/// Supports used when sampling crossed-product elements for certificates:
/// the whole group if finite, {-radius..radius} on the integers.
std::vector<Element> sampling_support(const CovariantRep& rep, int radius = 1);

/// X -> (P_e (x) I) X (P_e (x) I) on the span of integrated forms.
LinearMap expectation_map(const CovariantRep& rep, int sample_radius = 1);

/// a -> pi(a) from A into B(l^p(sites) (x) E).
LinearMap embedding_map(const CovariantRep& rep);

CbEstimate expectation_cb_certificate(const CovariantRep& rep, const CbOptions& opts);

}  // namespace pnuc
