// Command-line front end. JSON is the canonical output; --format csv prints
// the fixed columns listed in each subcommand's help.
//
// Exit status: 0 success, 1 certificate or assertion failure, 2 input error.

#include <pnuc/acceptance.hpp>
#include <pnuc/io.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace pnuc;

struct Common {
  std::string p = "2";
  std::uint64_t seed = 2024;
  int restarts = 32;
  int trials = 16;
  int n_max = 4;
  int k_max = 1 << 20;
  double epsilon = 0.5;
  std::string out;
  std::string format = "json";
};

struct Inputs {
  std::string matrix;
  std::string map;
  std::string builtin;
  std::string group = "cyclic:12";
  std::string elements;
  std::string action = "trivial";
  std::string algebra = "full";
  Index dim = 2;
  std::vector<long long> shifts{1};
  double delta = 0.25;
  Index rot_n = 12;
  long long rot_k = 5;
};

/// Raised for a completed run whose report did not pass.
struct ReportFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PExponent parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity") return PExponent::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::logic_error&) {
    throw InputError("--p must be a number >= 1 or 'inf': " + text);
  }
  if (used != text.size()) throw InputError("--p must be a number >= 1 or 'inf': " + text);
  return PExponent(v);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  return parts;
}

long long to_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::logic_error&) {
    throw InputError("expected an integer in " + what);
  }
  if (used != s.size()) throw InputError("expected an integer in " + what);
  return v;
}

EstimatorOptions norm_options(const Common& c) {
  EstimatorOptions o;
  o.restarts = c.restarts;
  o.seed = c.seed;
  return o;
}

CbOptions cb_options(const Common& c) {
  CbOptions o;
  o.n_max = c.n_max;
  o.trials = c.trials;
  o.seed = c.seed;
  o.norm = norm_options(c);
  return o;
}

void emit(const Common& c, const std::string& command, const Json& json, const std::string& csv) {
  const bool as_csv = c.format == "csv";
  const std::string text = as_csv ? csv : json.dump(2) + "\n";
  std::cout << text;
  if (!c.out.empty())
    write_text_file(std::filesystem::path(c.out) / (command + (as_csv ? ".csv" : ".json")), text);
}

CrossedSystem make_system(const Group& g, const Inputs& in, Index d) {
  ConcreteAlgebra alg = [&] {
    if (in.algebra == "full") return ConcreteAlgebra::full(d);
    if (in.algebra == "diagonal") return ConcreteAlgebra::diagonal(d);
    throw InputError("--algebra must be full or diagonal");
  }();
  if (in.action == "trivial") return CrossedSystem(g, alg, IsometricAction::trivial(g, d));
  if (in.action.rfind("rotate:", 0) == 0)
    return CrossedSystem(g, alg, IsometricAction::coordinate_rotation(g, d, to_int(in.action.substr(7), "--action")));
  throw InputError("--action must be trivial or rotate:k");
}

struct LoadedElements {
  Group group;
  std::vector<NamedElement> elements;
};

/// Elements from --elements, or two seeded random elements on a small support.
LoadedElements load_elements(const Common& c, const Inputs& in, const std::optional<CrossedSystem>& sys_hint) {
  Group g = parse_group(in.group);
  if (!in.elements.empty()) {
    ElementFile file = elements_from_json(read_json_file(in.elements), g);
    if (file.elements.empty()) throw InputError("no elements in " + in.elements);
    return {*file.group, std::move(file.elements)};
  }
  const CrossedSystem sys = sys_hint ? *sys_hint : make_system(g, in, in.dim);
  std::vector<Element> support;
  if (g.is_finite())
    for (Element s = 0; s < *g.order(); ++s) support.push_back(s);
  else
    support = {-1, 0, 1};
  Rng rng(c.seed);
  std::vector<NamedElement> out;
  for (int i = 0; i < 2; ++i) out.push_back({"r" + std::to_string(i), random_cc_element(sys, support, rng)});
  return {g, std::move(out)};
}

int run_pnorm(const Common& c, const Inputs& in) {
  if (in.matrix.empty()) throw InputError("pnorm needs --matrix");
  const PExponent p = parse_p(c.p);
  const CMatrix a = matrix_from_json(read_json_file(in.matrix));
  const PNormEstimate e = pnorm_estimate(a, p, norm_options(c));
  emit(c, "pnorm", pnorm_to_json(e, p),
       "value,converged,restarts\n" + fmt(e.value) + "," + (e.converged ? "1" : "0") + "," +
           std::to_string(e.restarts_used) + "\n");
  return 0;
}

LinearMap builtin_map(const std::string& desc) {
  const auto parts = split(desc, ':');
  const auto arg = [&](std::size_t i) -> Index {
    if (i >= parts.size()) throw InputError("--builtin " + desc + ": missing parameter");
    return static_cast<Index>(to_int(parts[i], "--builtin"));
  };
  const std::string& kind = parts.empty() ? desc : parts[0];
  if (kind == "identity") return LinearMap::identity(arg(1));
  if (kind == "transpose") {
    const Index d = arg(1);
    if (d < 1) throw InputError("transpose needs d >= 1");
    return LinearMap(d, d, [](const CMatrix& x) -> CMatrix { return x.transpose(); }, "transpose");
  }
  if (kind == "pinch") {
    const Index d = arg(1);
    const ConcreteAlgebra alg = ConcreteAlgebra::diagonal(d);
    return LinearMap(d, d, [alg](const CMatrix& x) { return alg.project(x); }, "pinch");
  }
  if (kind == "corner") return corner_map(arg(1), arg(2));
  if (kind == "embed") return corner_embedding(arg(1), arg(2));
  if (kind == "truncate") return truncation_map(arg(1), arg(2), arg(3));
  if (kind == "cx_phi") return cx_phi_map(circle_partition(arg(1), arg(2)));
  if (kind == "cx_psi") return cx_psi_map(circle_partition(arg(1), arg(2)));
  throw InputError("unknown --builtin map: " + desc);
}

LinearMap file_map(const std::string& path) {
  const Json j = read_json_file(path);
  if (!j.is_object() || !j.contains("domain_dim") || !j.contains("codomain_dim") || !j.contains("coefficients"))
    throw InputError("map file needs domain_dim, codomain_dim and coefficients");
  if (!j["domain_dim"].is_number_integer() || !j["codomain_dim"].is_number_integer())
    throw InputError("map dimensions must be integers");
  const Index d = j["domain_dim"].get<Index>(), cd = j["codomain_dim"].get<Index>();
  if (d < 1 || cd < 1) throw InputError("map dimensions must be positive");
  const CMatrix coeffs = matrix_from_json(j["coefficients"]);
  if (coeffs.rows() != cd * cd || coeffs.cols() != d * d)
    throw InputError("coefficients must be (codomain_dim^2 x domain_dim^2)");
  return LinearMap::from_coefficients(d, cd, coeffs, "file");
}

int run_cbnorm(const Common& c, const Inputs& in) {
  if (in.map.empty() == in.builtin.empty()) throw InputError("cbnorm needs exactly one of --map or --builtin");
  const PExponent p = parse_p(c.p);
  const LinearMap phi = in.map.empty() ? builtin_map(in.builtin) : file_map(in.map);
  const CbEstimate cb = cb_norm_lower(phi, p, cb_options(c));
  Json j = cb_to_json(cb);
  j["map"] = phi.name();
  j["p"] = exponent_to_json(p);
  std::string csv = "n,level_max,lower_bound\n";
  for (const auto& l : cb.levels) csv += std::to_string(l.n) + "," + fmt(l.level_max) + "," + fmt(l.lower_bound) + "\n";
  emit(c, "cbnorm", j, csv);
  return 0;
}

int run_folner(const Common& c, const Inputs& in) {
  const Group g = parse_group(in.group);
  if (!(in.delta > 0.0)) throw InputError("--delta must be positive");
  if (c.k_max < 1) throw InputError("--k-max must be positive");
  for (long long s : in.shifts)
    if (!g.contains(s)) throw InputError("shift " + std::to_string(s) + " is outside the group");
  const FolnerSet F = folner_search(g, in.shifts, in.delta, static_cast<std::size_t>(c.k_max));
  Json ratios = Json::object();
  std::string csv = "s,ratio,intersection\n";
  for (long long s : in.shifts) {
    const double r = folner_ratio(F, s);
    ratios[std::to_string(s)] = r;
    csv += std::to_string(s) + "," + fmt(r) + "," + std::to_string(folner_intersection(F, s)) + "\n";
  }
  emit(c, "folner",
       Json{{"group", g.label()}, {"delta", in.delta}, {"size", F.size()}, {"members", F.members}, {"ratios", ratios}},
       csv);
  return 0;
}

int run_crossed(const Common& c, const Inputs& in) {
  const PExponent p = parse_p(c.p);
  const LoadedElements le = load_elements(c, in, std::nullopt);
  const Index d = le.elements.front().f.base_dim();
  const CrossedSystem sys = make_system(le.group, in, d);
  Element radius = 1;
  for (const auto& e : le.elements) {
    if (e.f.base_dim() != d) throw InputError("elements have different base dimensions");
    for (Element s : e.f.support()) radius = std::max<Element>(radius, std::abs(s));
  }
  const CovariantRep rep = le.group.is_finite()
                               ? build_regular_rep(sys, p)
                               : build_window_rep(sys, p, -std::max<Element>(radius + 1, le.group.window_radius()),
                                                  std::max<Element>(radius + 1, le.group.window_radius()));
  Json rows = Json::array();
  std::string csv = "id,reduced_norm,converged,expectation_norm,compression_defect\n";
  bool ok = true;
  for (const auto& e : le.elements) {
    for (const auto& [s, a] : e.f.terms())
      if (!sys.algebra.contains(a, 1e-12)) throw InputError("element " + e.id + " has a coefficient outside the algebra");
    const PNormEstimate n = reduced_norm(e.f, rep, norm_options(c));
    const double en = pnorm_estimate(conditional_expectation(e.f, le.group), p, norm_options(c)).value;
    const double defect = compress_identity_check(rep, e.f).max_abs_diff;
    ok = ok && defect <= 1e-12;
    rows.push_back(Json{{"id", e.id},
                        {"reduced_norm", n.value},
                        {"converged", n.converged},
                        {"expectation_norm", en},
                        {"compression_defect", defect}});
    csv += e.id + "," + fmt(n.value) + "," + (n.converged ? "1" : "0") + "," + fmt(en) + "," + fmt(defect) + "\n";
  }
  emit(c, "crossed",
       Json{{"group", le.group.label()},
            {"p", exponent_to_json(p)},
            {"action", sys.action.label()},
            {"algebra", sys.algebra.label()},
            {"sites", rep.sites().size()},
            {"elements", rows},
            {"passed", ok}},
       csv);
  if (!ok) throw ReportFailed("compression identity violated");
  return 0;
}

int run_witness(const Common& c, const Inputs& in) {
  const PExponent p = parse_p(c.p);
  if (!(c.epsilon > 0.0)) throw InputError("--epsilon must be positive");
  const LoadedElements le = load_elements(c, in, std::nullopt);
  const Index d = le.elements.front().f.base_dim();
  const CrossedSystem sys = make_system(le.group, in, d);
  WitnessOptions w;
  w.cb.seed = c.seed;
  w.cb.norm.seed = c.seed;
  w.cb.n_max = std::min(c.n_max, w.cb.n_max);
  w.cb.trials = std::min(c.trials, w.cb.trials);
  w.norm = norm_options(c);
  const WitnessReport r = crossed_nuclearity_witness(le.elements, c.epsilon, sys, p, w).report;
  std::string csv = "id,reduced_norm,roundtrip_error,bound\n";
  for (const auto& e : r.elements)
    csv += e.id + "," + fmt(e.reduced_norm) + "," + fmt(e.roundtrip_error) + "," + fmt(e.bound) + "\n";
  emit(c, "witness", witness_to_json(r), csv);
  if (!r.passed) throw ReportFailed("witness did not meet epsilon or a certificate failed");
  return 0;
}

int run_rotation(const Common& c, const Inputs& in) {
  const PExponent p = parse_p(c.p);
  if (!(c.epsilon > 0.0)) throw InputError("--epsilon must be positive");
  if (in.rot_n < 2) throw InputError("-N must be at least 2");
  WitnessOptions w;
  w.cb.seed = c.seed;
  w.cb.norm.seed = c.seed;
  w.norm = norm_options(c);
  const RotationReport r = rotation_demo(in.rot_n, in.rot_k, p, c.epsilon, w);
  std::string csv = "quantity,value\n";
  csv += "theta_model," + fmt(r.theta_model) + "\n";
  csv += "commutation_defect," + fmt(r.commutation_defect) + "\n";
  csv += "partition_defect," + fmt(r.partition_defect) + "\n";
  for (const auto& e : r.witness.elements) csv += "roundtrip_error:" + e.id + "," + fmt(e.roundtrip_error) + "\n";
  for (const auto& [id, v] : r.cx_errors) csv += "cx_error:" + id + "," + fmt(v) + "\n";
  csv += std::string("passed,") + (r.passed ? "1" : "0") + "\n";
  emit(c, "rotation", rotation_to_json(r), csv);
  if (!r.passed) throw ReportFailed("rotation witness failed");
  return 0;
}

int run_suite(const Common& c) {
  AcceptanceOptions opts;
  opts.seed = c.seed;
  const auto results = run_acceptance(opts);
  std::string csv = "id,name,passed\n";
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    std::cerr << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": " << r.detail << "\n";
    csv += std::to_string(r.id) + "," + r.name + "," + (r.passed ? "1" : "0") + "\n";
  }
  emit(c, "suite", acceptance_report(results, opts), csv);
  if (!all) throw ReportFailed("acceptance battery has failures");
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool norm_flags, bool cb_flags) {
  sub->add_option("--seed", c.seed, "Seed for every random draw");
  sub->add_option("--out", c.out, "Also write the output to <dir>/<command>.{json,csv}");
  sub->add_option("--format", c.format, "json (canonical) or csv")->check(CLI::IsMember({"json", "csv"}));
  if (norm_flags) {
    sub->add_option("--p", c.p, "Exponent in [1, inf]; 'inf' accepted");
    sub->add_option("--restarts", c.restarts, "Random restarts of the norm estimator")->check(CLI::NonNegativeNumber);
  }
  if (cb_flags) {
    sub->add_option("--trials", c.trials, "Random inputs per amplification level")->check(CLI::PositiveNumber);
    sub->add_option("--n-max", c.n_max, "Highest amplification level")->check(CLI::PositiveNumber);
  }
}

void add_crossed_inputs(CLI::App* sub, Inputs& in) {
  sub->add_option("--group", in.group, "cyclic:n, dihedral:n, z_window:r or integers");
  sub->add_option("--elements", in.elements, "Element file; default: two seeded random elements");
  sub->add_option("--action", in.action, "trivial or rotate:k (coordinate rotation)");
  sub->add_option("--algebra", in.algebra, "full or diagonal");
  sub->add_option("--dim", in.dim, "Base dimension for random elements")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator norms, cb-norm bounds and nuclearity witnesses for l^p crossed products"};
  app.require_subcommand(1);
  Common c;
  Inputs in;

  auto* pnorm = app.add_subcommand("pnorm", "Operator norm on l^p.\nCSV columns: value,converged,restarts");
  add_common(pnorm, c, true, false);
  pnorm->add_option("--matrix", in.matrix, "Matrix file")->required();

  auto* cbnorm = app.add_subcommand(
      "cbnorm",
      "Lower bound for the p-cb norm of a map.\nBuiltins: identity:d, transpose:d, pinch:d, corner:n:d, embed:n:d, "
      "truncate:sites:keep:d, cx_phi:grid:arcs, cx_psi:grid:arcs.\nCSV columns: n,level_max,lower_bound");
  add_common(cbnorm, c, true, true);
  cbnorm->add_option("--map", in.map, "Map file {domain_dim, codomain_dim, coefficients}");
  cbnorm->add_option("--builtin", in.builtin, "Builtin map");

  auto* folner = app.add_subcommand("folner", "Foelner set search.\nCSV columns: s,ratio,intersection");
  add_common(folner, c, false, false);
  folner->add_option("--group", in.group, "cyclic:n, dihedral:n, z_window:r or integers");
  folner->add_option("--shifts", in.shifts, "Shift set S")->delimiter(',');
  folner->add_option("--delta", in.delta, "Target ratio bound");
  folner->add_option("--k-max", c.k_max, "Longest interval tried on the integers");

  auto* crossed = app.add_subcommand(
      "crossed", "Reduced norms and the expectation compression.\n"
                 "CSV columns: id,reduced_norm,converged,expectation_norm,compression_defect");
  add_common(crossed, c, true, false);
  add_crossed_inputs(crossed, in);

  auto* witness = app.add_subcommand("witness", "Nuclearity witness.\nCSV columns: id,reduced_norm,roundtrip_error,bound");
  add_common(witness, c, true, true);
  add_crossed_inputs(witness, in);
  witness->add_option("--epsilon", c.epsilon, "Target round-trip error");

  auto* rotation = app.add_subcommand("rotation", "Rational rotation demo.\nCSV columns: quantity,value");
  add_common(rotation, c, true, false);
  rotation->add_option("-N", in.rot_n, "Denominator");
  rotation->add_option("-k", in.rot_k, "Numerator");
  rotation->add_option("--epsilon", c.epsilon, "Target round-trip error");

  auto* suite = app.add_subcommand("suite", "Acceptance battery; table on stderr.\nCSV columns: id,name,passed");
  add_common(suite, c, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (pnorm->parsed()) return run_pnorm(c, in);
    if (cbnorm->parsed()) return run_cbnorm(c, in);
    if (folner->parsed()) return run_folner(c, in);
    if (crossed->parsed()) return run_crossed(c, in);
    if (witness->parsed()) return run_witness(c, in);
    if (rotation->parsed()) return run_rotation(c, in);
    if (suite->parsed()) return run_suite(c);
  } catch (const ReportFailed& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  } catch (const CertificateError& e) {
    std::cerr << "certificate violation: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {  // InputError, DomainError, UnsupportedExponent
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const RefusalError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
