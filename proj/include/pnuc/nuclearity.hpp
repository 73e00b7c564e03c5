#pragma once

// Approximation factorizations x ~ psi(phi(x)) through matrix algebras:
// the Foelner pair for crossed products, the point-evaluation / partition of
// unity pair for C(X), the matrix-stability lifts and the composition step,
// and the assembled witness for finite crossed products.

#include <pnuc/crossed.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pnuc {

struct TestElement {
  std::string id;
  CMatrix x;
};

struct Factorization {
  LinearMap phi;
  LinearMap psi;
  Index target_dim = 0;
  CbEstimate phi_cb;
  CbEstimate psi_cb;
  std::map<std::string, double> roundtrip_errors;

  bool certified(double tol = 1e-6) const { return phi_cb.contractive(tol) && psi_cb.contractive(tol); }
  double max_error() const;
};

/// ||psi(phi(x)) - x||_{p->p}, estimated.
double roundtrip_error(const LinearMap& phi, const LinearMap& psi, const CMatrix& x, PExponent p,
                       const EstimatorOptions& opts = {});
std::map<std::string, double> measure_roundtrip(const LinearMap& phi, const LinearMap& psi,
                                                const std::vector<TestElement>& tests, PExponent p,
                                                const EstimatorOptions& opts = {});

/// Factorization with both maps certified by cb_norm_lower and errors measured on `tests`.
Factorization make_factorization(LinearMap phi, LinearMap psi, PExponent p, const std::vector<TestElement>& tests,
                                 const CbOptions& opts);

// ---------------------------------------------------------------------------
// Foelner pair. F must lie inside the representation's sites; M_F (x) A uses
// the basis (position of r in F) * d + x.

/// S with S xi = xi restricted to the sites of F; |F| d x dim.
CMatrix folner_selection(const FolnerSet& F, const CovariantRep& rep);

/// sum_s sum_{r in F cap sF} sigma_{r, s^-1 r} (x) alpha_{r^-1}(a_s). Throws
/// std::logic_error if it differs from the compression of the integrated form
/// by more than 1e-12.
CMatrix folner_phi(const CcElement& f, const FolnerSet& F, const CovariantRep& rep);

/// X -> S X S* on the span of integrated forms supported in `sample_radius`.
LinearMap folner_phi_map(const FolnerSet& F, const CovariantRep& rep, int sample_radius = 1);

/// sum_{s,t in F} |F|^-1 pi(alpha_s(a_st)) v(s t^-1).
CMatrix folner_psi(const CMatrix& m, const FolnerSet& F, const CovariantRep& rep);

/// folner_psi as a map out of M_F (x) A. Backward lifts are the per-fiber
/// vectors zeta_g(t) = U_{g^-1}^* xi(tg), one for each g with tg a site for some t in F.
LinearMap folner_psi_map(const FolnerSet& F, const CovariantRep& rep);

struct DualityCheck {
  cplx lhs;  ///< < (id_k (x) psi)(T) xi, eta >
  cplx rhs;  ///< < T~ xi~, eta~ > with T~ acting through pi
  double xi_norm = 0.0, xi_tilde_norm = 0.0;
  double eta_norm = 0.0, eta_tilde_norm = 0.0;
};

/// Evaluates both sides of the bilinear identity behind the contractivity of
/// psi, for T in M_k (x) M_F (x) A, xi in l^p^k (x) (l^p(G) (x) E) and eta in
/// the l^q counterpart. Finite groups only.
DualityCheck psi_duality_identity(const CMatrix& t, const CVector& xi, const CVector& eta, const FolnerSet& F,
                                  const CovariantRep& rep, Index k);

CbEstimate psi_contractivity_certificate(const FolnerSet& F, const CovariantRep& rep, const CbOptions& opts);

struct RoundtripBound {
  double error = 0.0;
  double bound = 0.0;
};

/// error = ||psi(phi(f)) - f||, bound = sum_s |1 - |F cap sF|/|F|| ||pi(a_s) v(s)||.
RoundtripBound folner_roundtrip(const CcElement& f, const FolnerSet& F, const CovariantRep& rep,
                                const EstimatorOptions& opts = {});

// ---------------------------------------------------------------------------
// C(X) on a finite model.

struct PartitionOfUnity {
  std::vector<Index> points;              ///< y_i, as model indices
  std::vector<RVector> bumps;             ///< sigma_i over the model
  std::vector<std::vector<Index>> cover;  ///< U_i = support of sigma_i

  Index model_size() const { return bumps.empty() ? 0 : bumps.front().size(); }
  Index size() const { return static_cast<Index>(bumps.size()); }
  /// max_x |sum_i sigma_i(x) - 1|.
  double sum_defect() const;
};

/// Grid of N angles 2 pi j / N; `arcs` hats of half-width 2 pi / arcs centered
/// on every (N / arcs)-th grid point. arcs == 1 is the constant partition.
PartitionOfUnity circle_partition(Index grid, Index arcs);

/// f(z) sampled at the grid angles.
CVector circle_function(Index grid, const std::function<cplx(cplx)>& f);

CVector cx_point_eval_phi(const CVector& f, const std::vector<Index>& points);
CVector cx_partition_psi(const CVector& d, const PartitionOfUnity& pu);

/// max_i sup_{x,y in U_i} |f(x) - f(y)|.
double max_oscillation(const CVector& f, const PartitionOfUnity& pu);

/// diag(f) -> diag(f(y_i)) and diag(d) -> diag(sum d_i sigma_i), with the
/// diagonal algebras as domains.
LinearMap cx_phi_map(const PartitionOfUnity& pu);
LinearMap cx_psi_map(const PartitionOfUnity& pu);

/// Errors are sup norms on the grid, which is the p-norm of a diagonal.
Factorization cx_factorization(const PartitionOfUnity& pu, PExponent p, const std::vector<std::pair<std::string, CVector>>& tests,
                               const CbOptions& opts);

// ---------------------------------------------------------------------------
// Matrix-stability lifts.

/// (id_n (x) phi, id_n (x) psi); errors measured on `tests` (elements of M_n (x) A).
Factorization lift_factorization(const Factorization& fact, Index n, PExponent p,
                                 const std::vector<TestElement>& tests, const CbOptions& opts);

struct LiftMeasurement {
  double lifted_error = 0.0;
  double max_entry_error = 0.0;
  double bound = 0.0;  ///< n^2 * max_entry_error
};

LiftMeasurement measure_lift(const Factorization& fact, Index n, const CMatrix& x, PExponent p,
                             const EstimatorOptions& opts = {});

/// a -> e_11 (x) a and X -> X_11 between A (dim d) and M_n (x) A.
LinearMap corner_embedding(Index n, Index d);
LinearMap corner_map(Index n, Index d);

struct CornerRestriction {
  Factorization fact;
  CbEstimate iota_cb;
  CbEstimate rho_cb;
};

/// (phi o iota, rho o psi) for a factorization of M_n (x) A.
CornerRestriction corner_restrict(const Factorization& fact, Index n, PExponent p,
                                  const std::vector<TestElement>& tests, const CbOptions& opts);

/// (P_N (x) I_E) T (P_N (x) I_E), keeping the first n_keep sites of base dimension d.
CMatrix truncate_stable(const CMatrix& t, Index n_keep, Index d);
LinearMap truncation_map(Index sites, Index n_keep, Index d);

// ---------------------------------------------------------------------------
// Composition.

struct ComposedFactorization {
  Factorization fact;
  CbEstimate bridge_phi_cb;
  CbEstimate bridge_psi_cb;
  std::map<std::string, double> bridge_errors;
  std::map<std::string, double> base_errors;  ///< fact_B on bridge_phi(x)
  bool bookkeeping_ok = true;                 ///< total <= bridge + base + 1e-9 everywhere
};

/// Throws CertificateError if a bridge level exceeds 1 + 1e-6. Without
/// `certify_composite` the composite's cb fields repeat the bridge estimates.
ComposedFactorization compose_factorizations(const LinearMap& bridge_phi, const LinearMap& bridge_psi,
                                             const Factorization& fact_b, const std::vector<TestElement>& tests,
                                             PExponent p, const CbOptions& opts, bool certify_composite = true);

/// Inclusion of M_F (x) A into M_{|F| d} and the pinching back; exact.
Factorization exact_matrix_factorization(Index blocks, const ConcreteAlgebra& alg, PExponent p, const CbOptions& opts);

// ---------------------------------------------------------------------------
// Witnesses.

struct NamedElement {
  std::string id;
  CcElement f;
};

struct CertificateRecord {
  std::string map;
  std::vector<double> levels;
  bool passed = true;
};

struct ElementRecord {
  std::string id;
  double reduced_norm = 0.0;
  double roundtrip_error = 0.0;
  double bound = 0.0;
};

struct WitnessReport {
  std::string group;
  double p = 2.0;
  std::optional<std::pair<Element, Element>> window;  ///< sites used on the integers
  std::vector<Element> folner_members;
  std::map<Element, double> folner_ratios;
  double delta = 0.0;
  std::vector<ElementRecord> elements;
  std::vector<CertificateRecord> certificates;
  double epsilon = 0.0;
  bool bookkeeping_ok = true;
  bool passed = false;
};

struct WitnessOptions {
  CbOptions cb{2, 3, 1, 2024, EstimatorOptions{2, 100, 1e-10, 0x9e3779b97f4a7c15ull}, {}};
  EstimatorOptions norm{};
  int sample_radius = 1;
};

struct Witness {
  Factorization fact;
  WitnessReport report;
};

Witness crossed_nuclearity_witness(const std::vector<NamedElement>& fs, double epsilon, const CrossedSystem& sys,
                                   PExponent p, const WitnessOptions& opts = {});

struct RotationReport {
  Index n = 0;
  long long k = 0;
  double theta_model = 0.0;
  double commutation_defect = 0.0;
  WitnessReport witness;
  Index arcs = 0;
  double partition_defect = 0.0;
  std::map<std::string, double> cx_errors;
  std::map<std::string, double> cx_oscillations;
  std::vector<CertificateRecord> cx_certificates;
  bool passed = false;
};

/// Rational rotation theta = k / n: the diagonal algebra on l^p(Z/n) rotated
/// by k steps, witnessed on u = I delta_1 and z = diag(e^{2 pi i j / n}) delta_0.
RotationReport rotation_demo(Index n, long long k, PExponent p, double epsilon, const WitnessOptions& opts = {});

}  // namespace pnuc
