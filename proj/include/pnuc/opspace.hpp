#pragma once

// Tensor products of l^p-operators, matrix units, amplification of linear
// maps M_d -> M_c, and sampled lower bounds for p-completely-bounded norms.
//
// Tensor index convention (project-wide): lexicographic, outer index major.
// kron(A, B) acts on l^p(X x Y) with basis (x, y) -> x * |Y| + y.

#include <pnuc/lpnorm.hpp>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace pnuc {

template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(const Eigen::MatrixBase<DA>& a,
                                                                       const Eigen::MatrixBase<DB>& b) {
  const Index br = b.rows(), bc = b.cols();
  Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * br, a.cols() * bc);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

/// e_{i,j} in M_n (zero-based indices).
CMatrix matrix_unit(Index n, Index i, Index j);

/// A linear map between square matrix spaces M_d -> M_c.
///
/// The action is held as a callable so that crossed-product sized maps need
/// not be materialized; coefficients() produces the dense (c^2 x d^2) matrix
/// in the row-major matrix-unit basis when one is wanted.
///
/// Optional metadata used by the cb-norm search:
///  - a domain sampler, for maps defined only on a subspace (a subalgebra,
///    the span of crossed-product elements);
///  - backward lifts L: C^c -> C^d turning a norming vector of phi(x) into a
///    starting vector for the norm of x, and forward lifts the other way.
class LinearMap {
 public:
  using Action = std::function<CMatrix(const CMatrix&)>;
  using Sampler = std::function<CMatrix(Rng&)>;

  LinearMap(Index domain_dim, Index codomain_dim, Action action, std::string name = "map");

  static LinearMap identity(Index d);
  static LinearMap from_coefficients(Index domain_dim, Index codomain_dim, CMatrix coefficients,
                                     std::string name = "map");

  Index domain_dim() const { return domain_dim_; }
  Index codomain_dim() const { return codomain_dim_; }
  const std::string& name() const { return name_; }

  CMatrix operator()(const CMatrix& x) const;
  CMatrix coefficients() const;

  LinearMap& with_name(std::string name);
  LinearMap& with_domain(Sampler sampler);
  LinearMap& with_backward_lifts(std::vector<CMatrix> lifts);
  LinearMap& with_forward_lifts(std::vector<CMatrix> lifts);

  bool has_domain_sampler() const { return static_cast<bool>(sampler_); }
  CMatrix sample_domain(Rng& rng) const;
  const std::vector<CMatrix>& backward_lifts() const { return backward_; }
  const std::vector<CMatrix>& forward_lifts() const { return forward_; }

 private:
  Index domain_dim_;
  Index codomain_dim_;
  Action action_;
  Sampler sampler_;
  std::vector<CMatrix> backward_;
  std::vector<CMatrix> forward_;
  std::string name_;
};

/// outer o inner.
LinearMap compose(const LinearMap& outer, const LinearMap& inner);

/// id_{M_n} (x) phi: sum e_ij (x) a_ij -> sum e_ij (x) phi(a_ij).
LinearMap amplify(const LinearMap& phi, Index n);

struct CbLevel {
  int n = 1;
  double lower_bound = 0.0;  ///< running maximum over levels 1..n
  double level_max = 0.0;    ///< best ratio found at this level alone
};

struct CbEstimate {
  std::vector<CbLevel> levels;
  double best = 0.0;

  /// Every sampled level stays at or below 1 + tol.
  bool contractive(double tol = 1e-6) const;
  /// Every sampled level lies in [1 - tol, 1 + tol].
  bool isometric(double tol = 1e-6) const;
};

struct CbOptions {
  int n_max = 4;
  int trials = 16;
  int refine_steps = 4;
  std::uint64_t seed = 2024;
  EstimatorOptions norm{};
  std::vector<CMatrix> probes;  ///< extra level-1 inputs tried verbatim
};

struct RatioEval {
  double ratio = 0.0;
  PNormEstimate input;
  PNormEstimate output;
};

/// ||phi(x)||_{p->p} / ||x||_{p->p}, with both norms estimated and each
/// estimate seeded from the other's witness through the map's lifts.
RatioEval map_ratio(const LinearMap& phi, const CMatrix& x, PExponent p, const EstimatorOptions& opts = {});

/// Lower bound for ||phi||_cb: for n = 1..n_max, maximizes the ratio of
/// amplify(phi, n) over random domain elements refined by local ascent.
CbEstimate cb_norm_lower(const LinearMap& phi, PExponent p, const CbOptions& opts = {});

}  // namespace pnuc
