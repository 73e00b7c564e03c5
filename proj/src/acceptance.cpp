#include <pnuc/acceptance.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>

namespace pnuc {

namespace {

Rng stream(const AcceptanceOptions& o, std::uint64_t tag) { return Rng(o.seed ^ (0x9e3779b97f4a7c15ull * (tag + 1))); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

CMatrix random_phased_permutation(Index d, Rng& rng) {
  std::vector<Index> perm(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  CMatrix u = CMatrix::Zero(d, d);
  for (Index j = 0; j < d; ++j) u(perm[static_cast<std::size_t>(j)], j) = std::polar(1.0, angle(rng));
  return u;
}

/// W R W* with R a coordinate rotation of C^n and W a random diagonal phase,
/// so that U^n = I and U is a phased permutation.
CMatrix cyclic_phased_generator(Index n, Rng& rng) {
  std::uniform_int_distribution<Index> step(1, std::max<Index>(1, n - 1));
  const Index k = step(rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  CMatrix r = CMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) r(((j - k) % n + n) % n, j) = 1.0;
  CVector w(n);
  for (Index j = 0; j < n; ++j) w(j) = std::polar(1.0, angle(rng));
  return w.asDiagonal() * r * w.conjugate().asDiagonal();
}

std::vector<Element> random_subset(const std::vector<Element>& from, Rng& rng) {
  std::vector<Element> out;
  std::bernoulli_distribution keep(0.5);
  for (Element s : from)
    if (keep(rng)) out.push_back(s);
  if (out.empty()) out.push_back(from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)]);
  return out;
}

std::vector<Element> all_elements(const Group& g) {
  std::vector<Element> out;
  for (int s = 0; s < *g.order(); ++s) out.push_back(s);
  return out;
}

/// A cyclic system on C^n (n = |G|) with a random phased action.
CrossedSystem random_cyclic_system(int n, bool full, Rng& rng) {
  const Group g = Group::finite(FiniteGroup::cyclic(n));
  const ConcreteAlgebra alg = full ? ConcreteAlgebra::full(n) : ConcreteAlgebra::diagonal(n);
  return CrossedSystem(g, alg, IsometricAction::generated_by(g, cyclic_phased_generator(n, rng)));
}

FiniteGroup quaternion_group() {
  // (sign, unit) with units 1, i, j, k; element id = 4 * sign + unit.
  const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<std::vector<int>> mult(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const int sa = a / 4, ua = a % 4, sb = b / 4, ub = b % 4;
      mult[a][b] = 4 * ((sa + sb + sign[ua][ub]) % 2) + unit[ua][ub];
    }
  return FiniteGroup::from_table(std::move(mult));
}

CbOptions certificate_options(std::uint64_t seed) {
  CbOptions c;
  c.n_max = 3;
  c.trials = 6;
  c.refine_steps = 2;
  c.seed = seed;
  c.norm = EstimatorOptions{4, 100, 1e-10, seed ^ 0x5bd1e995ull};
  return c;
}

// ---------------------------------------------------------------------------

struct NormCorpus {
  std::vector<CMatrix> matrices;
};

NormCorpus norm_corpus(const AcceptanceOptions& o) {
  Rng rng = stream(o, 1);
  std::uniform_int_distribution<int> dim(2, 4);
  NormCorpus c;
  for (int i = 0; i < 200; ++i) {
    const int r = dim(rng), k = dim(rng);
    c.matrices.push_back(random_complex_matrix(r, k, rng));
  }
  return c;
}

const double kExponents[] = {1.0, 1.5, 2.0, 3.0, kInf};

CriterionResult norm_oracle_agreement(const AcceptanceOptions& o) {
  const NormCorpus c = norm_corpus(o);
  double worst_est = 0.0, worst_exact = 0.0;
  int fails = 0;
  for (std::size_t i = 0; i < c.matrices.size(); ++i)
    for (double pv : kExponents) {
      const PExponent p(pv);
      const double oracle = pnorm_oracle(c.matrices[i], p, 24, o.seed + i);
      const double est = pnorm_estimate(c.matrices[i], p).value;
      const double rel = std::abs(est - oracle) / oracle;
      worst_est = std::max(worst_est, rel);
      if (rel > 1e-5) ++fails;
      if (p.has_closed_form()) {
        const double exact_rel = std::abs(pnorm_exact(c.matrices[i], p) - oracle) / oracle;
        worst_exact = std::max(worst_exact, exact_rel);
        if (exact_rel > 1e-6) ++fails;
      }
    }
  CriterionResult r{1, "norm oracle agreement", fails == 0,
                    "worst estimator rel " + fmt(worst_est) + ", worst exact rel " + fmt(worst_exact), {}};
  r.data = Json{{"matrices", c.matrices.size()}, {"worst_estimator_rel", worst_est}, {"worst_exact_rel", worst_exact}, {"failures", fails}};
  return r;
}

CriterionResult duality(const AcceptanceOptions& o) {
  const NormCorpus c = norm_corpus(o);
  double worst = 0.0;
  int fails = 0;
  for (const auto& a : c.matrices)
    for (double pv : kExponents) {
      const PExponent p(pv);
      const double n = pnorm_estimate(a, p).value;
      const double nd = pnorm_estimate(a.adjoint(), p.conjugate()).value;
      const double scaled = std::abs(n - nd) / std::max(1.0, n);
      worst = std::max(worst, scaled);
      if (scaled > 1e-5) ++fails;
    }
  CriterionResult r{2, "conjugate-exponent duality", fails == 0, "worst scaled gap " + fmt(worst), {}};
  r.data = Json{{"worst_scaled_gap", worst}, {"failures", fails}};
  return r;
}

CriterionResult adjoint_lemma(const AcceptanceOptions&) {
  std::vector<std::pair<std::string, FiniteGroup>> groups;
  for (int n = 1; n <= 12; ++n) groups.emplace_back("cyclic:" + std::to_string(n), FiniteGroup::cyclic(n));
  groups.emplace_back("dihedral:3", FiniteGroup::dihedral(3));
  groups.emplace_back("dihedral:4", FiniteGroup::dihedral(4));
  groups.emplace_back("dihedral:5", FiniteGroup::dihedral(5));
  groups.emplace_back("klein", FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)));
  groups.emplace_back("cyclic:2xcyclic:3", FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)));
  groups.emplace_back("quaternion", quaternion_group());
  int checked = 0, fails = 0;
  for (const auto& [name, g] : groups)
    for (int s = 0; s < g.order(); ++s) {
      ++checked;
      if (!lambda_adjoint_check(g, s)) ++fails;
    }
  CriterionResult r{3, "regular representation adjoint", fails == 0,
                    std::to_string(checked) + " elements over " + std::to_string(groups.size()) + " groups", {}};
  r.data = Json{{"elements", checked}, {"groups", groups.size()}, {"failures", fails}};
  return r;
}

CriterionResult covariance_and_multiplicativity(const AcceptanceOptions& o) {
  Rng rng = stream(o, 4);
  double worst_cov = 0.0, worst_mult = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = i % 2 == 0 ? 4 : 6;
    const CrossedSystem sys = random_cyclic_system(n, (i / 2) % 2 == 0, rng);
    const CovariantRep rep = build_regular_rep(sys, PExponent(i % 3 == 0 ? 1.5 : 3.0));
    const auto elems = all_elements(sys.group);
    const CMatrix a = sys.algebra.random_element(rng);
    const Element t = std::uniform_int_distribution<Element>(0, n - 1)(rng);
    worst_cov = std::max(worst_cov, covariance_defect(rep, a, t));
    const CcElement f = random_cc_element(sys, random_subset(elems, rng), rng);
    const CcElement g = random_cc_element(sys, random_subset(elems, rng), rng);
    const CMatrix lhs = integrated_form(rep, twisted_convolve(f, g, sys.action));
    worst_mult = std::max(worst_mult, max_abs_diff(lhs, integrated_form(rep, f) * integrated_form(rep, g)));
  }
  CriterionResult r{4, "covariance and multiplicativity", worst_cov <= 1e-13 && worst_mult <= 1e-11,
                    "covariance " + fmt(worst_cov) + ", product " + fmt(worst_mult), {}};
  r.data = Json{{"instances", 100}, {"worst_covariance", worst_cov}, {"worst_product", worst_mult}};
  return r;
}

CriterionResult compression_identity(const AcceptanceOptions& o) {
  Rng rng = stream(o, 5);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::optional<CovariantRep> rep;
    std::vector<Element> support;
    switch (i % 4) {
      case 0:
      case 1: {
        const CrossedSystem sys = random_cyclic_system(i % 4 == 0 ? 4 : 6, i % 8 < 4, rng);
        support = random_subset(all_elements(sys.group), rng);
        rep.emplace(build_regular_rep(sys, PExponent(1.5)));
        break;
      }
      case 2: {
        // Dihedral group acting on C^6 through its own regular representation.
        const FiniteGroup d3 = FiniteGroup::dihedral(3);
        const Group g = Group::finite(d3);
        std::vector<CMatrix> us;
        for (int s = 0; s < d3.order(); ++s) us.push_back(regular_rep(d3, s));
        const CrossedSystem sys(g, ConcreteAlgebra::full(6), IsometricAction::from_implementers(g, us));
        support = random_subset(all_elements(g), rng);
        rep.emplace(build_regular_rep(sys, PExponent(3.0)));
        break;
      }
      default: {
        const Group z = Group::integers();
        const CrossedSystem sys(z, ConcreteAlgebra::full(3), IsometricAction::generated_by(z, random_phased_permutation(3, rng)));
        support = random_subset({-2, -1, 0, 1, 2}, rng);
        rep.emplace(build_window_rep(sys, PExponent(1.5), -5, 5));
        break;
      }
    }
    const CcElement f = random_cc_element(rep->system(), support, rng);
    worst = std::max(worst, compress_identity_check(*rep, f).max_abs_diff);
  }
  CriterionResult r{5, "conditional expectation compression", worst <= 1e-12, "worst " + fmt(worst), {}};
  r.data = Json{{"instances", 100}, {"worst", worst}};
  return r;
}

CriterionResult contractivity(const AcceptanceOptions& o) {
  Rng rng = stream(o, 6);
  struct Case {
    std::string name;
    LinearMap map;
    bool isometric;
  };
  std::vector<Case> cases;

  const CrossedSystem z4 = random_cyclic_system(4, true, rng);
  const Group z = Group::integers();
  const CrossedSystem zline(z, ConcreteAlgebra::full(2), IsometricAction::generated_by(z, random_phased_permutation(2, rng)));
  const PartitionOfUnity pu = circle_partition(64, 8);

  Json data = Json::array();
  bool ok = true;
  double worst_contractive = 0.0, worst_isometric_gap = 0.0;
  for (double pv : {1.5, 3.0}) {
    const PExponent p(pv);
    const CovariantRep rep4 = build_regular_rep(z4, p);
    const CovariantRep repz = build_window_rep(zline, p, -4, 4);
    const FolnerSet half(z4.group, {0, 1});
    const FolnerSet whole(z4.group, all_elements(z4.group));
    const FolnerSet interval(z, {0, 1, 2, 3});
    cases.clear();
    cases.push_back({"expectation", expectation_map(rep4), false});
    cases.push_back({"folner_phi", folner_phi_map(half, rep4), false});
    cases.push_back({"folner_phi_window", folner_phi_map(interval, repz), false});
    cases.push_back({"folner_psi", folner_psi_map(whole, rep4), false});
    cases.push_back({"folner_psi_half", folner_psi_map(half, rep4), false});
    cases.push_back({"folner_psi_window", folner_psi_map(interval, repz), false});
    cases.push_back({"truncate_stable", truncation_map(6, 3, 2), false});
    cases.push_back({"corner_rho", corner_map(2, 2), false});
    cases.push_back({"cx_point_eval_phi", cx_phi_map(pu), false});
    cases.push_back({"cx_partition_psi", cx_psi_map(pu), true});
    cases.push_back({"corner_iota", corner_embedding(2, 2), true});
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const CbEstimate cb = cb_norm_lower(cases[i].map, p, certificate_options(o.seed + 97 * i + static_cast<std::uint64_t>(pv * 10)));
      const bool pass = cases[i].isometric ? cb.isometric() : cb.contractive();
      ok = ok && pass && cb.levels.size() == 3;
      Json levels = Json::array();
      for (const auto& l : cb.levels) {
        levels.push_back(l.level_max);
        if (cases[i].isometric)
          worst_isometric_gap = std::max(worst_isometric_gap, std::abs(l.level_max - 1.0));
        else
          worst_contractive = std::max(worst_contractive, l.level_max);
      }
      data.push_back(Json{{"map", cases[i].name}, {"p", pv}, {"levels", std::move(levels)}, {"passed", pass}});
    }
  }
  CriterionResult r{6, "contractivity certificates", ok,
                    "max contractive level " + fmt(worst_contractive) + ", max isometric gap " + fmt(worst_isometric_gap), {}};
  r.data = Json{{"certificates", std::move(data)}};
  return r;
}

CriterionResult folner_arithmetic(const AcceptanceOptions& o) {
  Rng rng = stream(o, 7);
  int identity_fails = 0;
  for (int i = 0; i < 500; ++i) {
    std::optional<FolnerSet> F;
    Element s = 0;
    if (i % 2 == 0) {
      const int n = std::uniform_int_distribution<int>(2, 12)(rng);
      const Group g = Group::finite(FiniteGroup::cyclic(n));
      F.emplace(g, random_subset(all_elements(g), rng));
      s = std::uniform_int_distribution<Element>(0, n - 1)(rng);
    } else {
      std::vector<Element> range;
      for (Element t = -10; t <= 10; ++t) range.push_back(t);
      F.emplace(Group::integers(), random_subset(range, rng));
      s = std::uniform_int_distribution<Element>(-12, 12)(rng);
    }
    // Independent count through the standard set algorithms.
    std::set<Element> shifted;
    for (Element t : F->members) shifted.insert(F->group.multiply(s, t));
    std::vector<Element> common, sym;
    std::set_intersection(F->members.begin(), F->members.end(), shifted.begin(), shifted.end(), std::back_inserter(common));
    std::set_symmetric_difference(F->members.begin(), F->members.end(), shifted.begin(), shifted.end(), std::back_inserter(sym));
    bool ok = 2 * common.size() == 2 * F->size() - sym.size();
    try {
      ok = ok && folner_intersection(*F, s) == common.size() && symmetric_difference_size(*F, s) == sym.size();
    } catch (const std::logic_error&) {
      ok = false;
    }
    if (!ok) ++identity_fails;
  }

  int search_fails = 0, searches = 0;
  Json lengths = Json::array();
  const std::vector<Element> pool = {-2, -1, 1, 2};
  for (double delta : {0.3, 0.1, 0.05})
    for (unsigned mask = 1; mask < 16; ++mask) {
      std::vector<Element> shifts;
      for (unsigned b = 0; b < 4; ++b)
        if (mask & (1u << b)) shifts.push_back(pool[b]);
      const FolnerSet F = folner_search(Group::integers(), shifts, delta);
      ++searches;
      double worst = 0.0, shorter = 0.0;
      for (Element s : shifts) worst = std::max(worst, folner_ratio(F, s));
      if (F.size() > 1) {
        std::vector<Element> m(F.members.begin(), F.members.end() - 1);
        const FolnerSet G(Group::integers(), m);
        for (Element s : shifts) shorter = std::max(shorter, folner_ratio(G, s));
      } else {
        shorter = kInf;
      }
      if (!(worst < delta) || shorter < delta) ++search_fails;
      if (mask == 15) lengths.push_back(Json{{"delta", delta}, {"length", F.size()}});
    }
  CriterionResult r{7, "Foelner arithmetic", identity_fails == 0 && search_fails == 0,
                    "500 intersection pairs, " + std::to_string(searches) + " searches", {}};
  r.data = Json{{"identity_failures", identity_fails}, {"search_failures", search_fails}, {"lengths_for_all_shifts", std::move(lengths)}};
  return r;
}

CriterionResult single_term_equality(const AcceptanceOptions& o) {
  Rng rng = stream(o, 8);
  const Group g12 = Group::finite(FiniteGroup::cyclic(12));
  CMatrix swap = CMatrix::Zero(2, 2);
  swap(0, 1) = std::polar(1.0, 0.7);
  swap(1, 0) = std::polar(1.0, -0.7);
  const CrossedSystem sys12(g12, ConcreteAlgebra::full(2), IsometricAction::generated_by(g12, swap));
  const Group z = Group::integers();
  const CrossedSystem sysz(z, ConcreteAlgebra::full(2), IsometricAction::generated_by(z, random_phased_permutation(2, rng)));
  const FolnerSet f12(g12, {0, 1, 2, 3, 4, 5});
  const FolnerSet fz(z, {-3, -2, -1, 0, 1, 2, 3});

  double worst = 0.0;
  int cases = 0;
  Json samples = Json::array();
  for (double pv : {1.0, 1.5, 3.0}) {
    const PExponent p(pv);
    const CovariantRep rep12 = build_regular_rep(sys12, p);
    const CovariantRep repz = build_window_rep(sysz, p, -8, 8);
    for (Element s : {1, 2, 3, 6, 11}) {
      const CcElement f = CcElement::delta(s, sys12.algebra.random_element(rng));
      const RoundtripBound rb = folner_roundtrip(f, f12, rep12);
      const double c = static_cast<double>(folner_intersection(f12, s)) / 6.0;
      const double expected = std::abs(1.0 - c) * reduced_norm(f, rep12).value;
      worst = std::max(worst, std::abs(rb.error - expected));
      ++cases;
      if (pv == 1.5 && s == 1) samples.push_back(Json{{"group", "cyclic:12"}, {"s", s}, {"error", rb.error}, {"expected", expected}});
    }
    for (Element s : {-2, -1, 1, 2, 3}) {
      const CcElement f = CcElement::delta(s, sysz.algebra.random_element(rng));
      const RoundtripBound rb = folner_roundtrip(f, fz, repz);
      const double c = static_cast<double>(folner_intersection(fz, s)) / 7.0;
      const double expected = std::abs(1.0 - c) * reduced_norm(f, repz).value;
      worst = std::max(worst, std::abs(rb.error - expected));
      ++cases;
      if (pv == 1.5 && s == 1) samples.push_back(Json{{"group", "integers"}, {"s", s}, {"error", rb.error}, {"expected", expected}});
    }
  }
  CriterionResult r{8, "single-term round-trip equality", worst <= 1e-8,
                    std::to_string(cases) + " cases, worst gap " + fmt(worst), {}};
  r.data = Json{{"cases", cases}, {"worst_gap", worst}, {"samples", std::move(samples)}};
  return r;
}

CriterionResult end_to_end_witness(const AcceptanceOptions& o) {
  Rng rng = stream(o, 9);
  Json data = Json::array();
  bool ok = true;
  {
    const Group z = Group::integers();
    const CrossedSystem sys(z, ConcreteAlgebra::full(1), IsometricAction::trivial(z, 1));
    const Witness w = crossed_nuclearity_witness({{"u", CcElement::delta(1, CMatrix::Identity(1, 1))}}, 0.3, sys, PExponent(1.5));
    const double err = w.report.elements.front().roundtrip_error;
    const bool pass = w.report.passed && w.report.folner_members.size() == 21 && std::abs(err - 1.0 / 21.0) <= 1e-8;
    ok = ok && pass;
    data.push_back(Json{{"case", "integers I delta_1"}, {"folner_length", w.report.folner_members.size()}, {"error", err}, {"passed", pass}});
  }
  const auto finite_case = [&](const std::string& name, const CrossedSystem& sys, const std::vector<NamedElement>& fs,
                               double eps, PExponent p) {
    const Witness w = crossed_nuclearity_witness(fs, eps, sys, p);
    double worst = 0.0;
    for (const auto& e : w.report.elements) worst = std::max(worst, e.roundtrip_error);
    const bool whole = static_cast<int>(w.report.folner_members.size()) == *sys.group.order();
    const bool pass = w.report.passed && whole && worst == 0.0;
    ok = ok && pass;
    data.push_back(Json{{"case", name}, {"folner_size", w.report.folner_members.size()}, {"worst_error", worst}, {"passed", pass}});
  };
  {
    const Group g = Group::finite(FiniteGroup::cyclic(12));
    const CrossedSystem sys(g, ConcreteAlgebra::diagonal(12), IsometricAction::coordinate_rotation(g, 12, 1));
    finite_case("cyclic:12 rotation", sys, {{"u", CcElement::delta(1, CMatrix::Identity(12, 12))}}, 0.5, PExponent(1.5));
  }
  {
    const FiniteGroup d3 = FiniteGroup::dihedral(3);
    const Group g = Group::finite(d3);
    std::vector<CMatrix> us;
    for (int s = 0; s < d3.order(); ++s) us.push_back(regular_rep(d3, s));
    const CrossedSystem sys(g, ConcreteAlgebra::full(6), IsometricAction::from_implementers(g, us));
    finite_case("dihedral:3 regular action", sys,
                {{"f0", random_cc_element(sys, {0, 1, 4}, rng)}, {"f1", random_cc_element(sys, {2, 5}, rng)}}, 0.2,
                PExponent(3.0));
  }
  {
    const Group g = Group::finite(FiniteGroup::cyclic(5));
    const CrossedSystem sys(g, ConcreteAlgebra::full(2), IsometricAction::trivial(g, 2));
    finite_case("cyclic:5 trivial action", sys, {{"f0", random_cc_element(sys, {1, 2, 3}, rng)}}, 0.1, PExponent(1.5));
  }
  CriterionResult r{9, "end-to-end witness", ok, std::to_string(data.size()) + " witnesses", {}};
  r.data = Json{{"witnesses", std::move(data)}};
  return r;
}

CriterionResult cx_lemma(const AcceptanceOptions&) {
  const PartitionOfUnity pu = circle_partition(64, 8);
  const std::vector<std::pair<std::string, CVector>> fs = {
      {"one", circle_function(64, [](cplx) { return cplx(1.0); })},
      {"z", circle_function(64, [](cplx x) { return x; })},
      {"z2", circle_function(64, [](cplx x) { return x * x; })},
      {"re_z", circle_function(64, [](cplx x) { return cplx(x.real()); })}};
  bool ok = pu.sum_defect() <= 1e-12;
  Json rows = Json::array();
  for (const auto& [id, f] : fs) {
    const CVector back = cx_partition_psi(cx_point_eval_phi(f, pu.points), pu);
    const double err = (back - f).cwiseAbs().maxCoeff();
    const double osc = max_oscillation(f, pu);
    ok = ok && err <= osc + 1e-12;
    rows.push_back(Json{{"f", id}, {"sup_error", err}, {"oscillation", osc}});
  }
  CriterionResult r{10, "C(X) partition lemma", ok, "partition defect " + fmt(pu.sum_defect()), {}};
  r.data = Json{{"grid", 64}, {"arcs", 8}, {"partition_defect", pu.sum_defect()}, {"functions", std::move(rows)}};
  return r;
}

CriterionResult matrix_lifts(const AcceptanceOptions& o) {
  Rng rng = stream(o, 11);
  CbOptions cb = certificate_options(o.seed);
  cb.n_max = 1;
  cb.trials = 2;
  cb.refine_steps = 0;
  const PExponent p(1.5);

  // Base factorizations: the 8-point circle through 4 arcs, and M_2 through
  // a damped identity.
  std::vector<std::pair<std::string, Factorization>> bases;
  {
    const PartitionOfUnity pu = circle_partition(8, 4);
    bases.emplace_back("cx:8/4", cx_factorization(pu, p, {}, cb));
  }
  {
    LinearMap damp(2, 2, [](const CMatrix& x) { return CMatrix((1.0 - 1e-3) * x); }, "damped");
    bases.emplace_back("damped:2", make_factorization(LinearMap::identity(2), damp, p, {}, cb));
  }

  bool ok = true;
  double worst_lift_slack = -kInf, worst_corner_slack = -kInf;
  Json rows = Json::array();
  for (const auto& [name, fact] : bases) {
    const Index d = fact.phi.domain_dim();
    for (Index n = 1; n <= 3; ++n) {
      CMatrix x(n * d, n * d);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) x.block(i * d, j * d, d, d) = fact.phi.sample_domain(rng);
      const LiftMeasurement m = measure_lift(fact, n, x, p);
      worst_lift_slack = std::max(worst_lift_slack, m.lifted_error - m.bound);
      ok = ok && m.lifted_error <= m.bound;

      // Corner restriction of the lifted factorization, measured on a in A.
      const Factorization lifted = lift_factorization(fact, n, p, {}, cb);
      const CornerRestriction cr = corner_restrict(lifted, n, p, {}, cb);
      const CMatrix a = fact.phi.sample_domain(rng);
      const CMatrix small = cr.fact.psi(cr.fact.phi(a)) - a;
      const PNormEstimate restricted = pnorm_estimate(small, p);
      const CMatrix embedded = corner_embedding(n, d)(a);
      const CMatrix big = lifted.psi(lifted.phi(embedded)) - embedded;
      CVector start = CVector::Zero(n * d);
      start.head(d) = restricted.witness;
      const std::vector<CVector> starts = {start};
      const double block = pnorm_estimate(big, p, {}, starts).value;
      worst_corner_slack = std::max(worst_corner_slack, restricted.value - block);
      ok = ok && restricted.value <= block + 1e-9 && max_abs_diff(corner_map(n, d)(embedded), a) == 0.0;
      rows.push_back(Json{{"base", name},
                          {"n", n},
                          {"lifted_error", m.lifted_error},
                          {"n2_bound", m.bound},
                          {"restricted_error", restricted.value},
                          {"block_error", block}});
    }
  }
  CriterionResult r{11, "matrix-stability lifts", ok,
                    "lift slack " + fmt(worst_lift_slack) + ", corner slack " + fmt(worst_corner_slack), {}};
  r.data = Json{{"rows", std::move(rows)}};
  return r;
}

CriterionResult rotation(const AcceptanceOptions&) {
  bool ok = true;
  Json rows = Json::array();
  const WitnessOptions wo;
  for (double pv : {1.5, 3.0}) {
    const RotationReport rr = rotation_demo(12, 5, PExponent(pv), 0.5, wo);
    double worst = 0.0;
    for (const auto& e : rr.witness.elements) worst = std::max(worst, e.roundtrip_error);
    const bool pass = rr.passed && rr.commutation_defect <= 1e-12 && worst == 0.0;
    ok = ok && pass;
    rows.push_back(Json{{"p", pv}, {"commutation_defect", rr.commutation_defect}, {"worst_error", worst}, {"passed", pass}});
  }
  CriterionResult r{12, "rotation demo", ok, "N=12, k=5", {}};
  r.data = Json{{"runs", std::move(rows)}};
  return r;
}

}  // namespace

const std::vector<std::pair<int, CriterionFn>>& acceptance_criteria() {
  static const std::vector<std::pair<int, CriterionFn>> list = {
      {1, norm_oracle_agreement}, {2, duality},       {3, adjoint_lemma},         {4, covariance_and_multiplicativity},
      {5, compression_identity},  {6, contractivity}, {7, folner_arithmetic},     {8, single_term_equality},
      {9, end_to_end_witness},    {10, cx_lemma},     {11, matrix_lifts},         {12, rotation}};
  return list;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& progress) {
  std::vector<CriterionResult> out;
  for (const auto& [id, fn] : acceptance_criteria()) {
    CriterionResult r;
    try {
      r = fn(opts);
    } catch (const std::exception& e) {
      r = CriterionResult{id, "criterion " + std::to_string(id), false, std::string("threw: ") + e.what(), {}};
    }
    if (progress) progress(r);
    out.push_back(std::move(r));
  }
  return out;
}

Json acceptance_report(const std::vector<CriterionResult>& results, const AcceptanceOptions& opts) {
  Json list = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    list.push_back(Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"data", r.data}});
  }
  return Json{{"seed", opts.seed}, {"criteria", std::move(list)}, {"passed", all}};
}

}  // namespace pnuc
