#include <pnuc/io.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace pnuc {

namespace {

cplx entry_from_json(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw InputError("matrix entries must be [re, im] pairs");
  return {e[0].get<double>(), e[1].get<double>()};
}

Json entry_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

long long integer_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) throw InputError(std::string("missing integer field '") + key + "'");
  return j[key].get<long long>();
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) entries.push_back(entry_to_json(m(i, j)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

CMatrix matrix_from_json(const Json& j) {
  if (j.is_array()) {
    const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(j.size()))));
    if (n < 1 || static_cast<std::size_t>(n * n) != j.size()) throw InputError("flat matrix lists must hold a square number of entries");
    CMatrix m(n, n);
    for (Index k = 0; k < n * n; ++k) m(k / n, k % n) = entry_from_json(j[static_cast<std::size_t>(k)]);
    return m;
  }
  if (!j.is_object()) throw InputError("matrix must be an object or a list of entries");
  const long long rows = integer_field(j, "rows"), cols = integer_field(j, "cols");
  if (rows < 1 || cols < 1) throw InputError("matrix dimensions must be positive");
  if (!j.contains("entries") || !j["entries"].is_array()) throw InputError("matrix needs an 'entries' list");
  const Json& e = j["entries"];
  if (e.size() != static_cast<std::size_t>(rows * cols)) throw InputError("matrix has the wrong number of entries");
  CMatrix m(rows, cols);
  for (long long k = 0; k < rows * cols; ++k) m(k / cols, k % cols) = entry_from_json(e[static_cast<std::size_t>(k)]);
  return m;
}

Json group_to_json(const Group& g) {
  if (!g.is_finite()) return Json{{"type", "z_window"}, {"radius", g.window_radius()}};
  const FiniteGroup& fg = g.finite_group();
  if (fg.is_cyclic_model()) return Json{{"type", "cyclic"}, {"n", fg.order()}};
  return Json{{"type", "table"}, {"mult", fg.table()}};
}

Group group_from_json(const Json& j) {
  if (j.is_string()) return parse_group(j.get<std::string>());
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) throw InputError("group needs a 'type'");
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "cyclic") return Group::finite(FiniteGroup::cyclic(static_cast<int>(integer_field(j, "n"))));
    if (type == "dihedral") return Group::finite(FiniteGroup::dihedral(static_cast<int>(integer_field(j, "n"))));
    if (type == "z_window") return Group::integers(static_cast<int>(integer_field(j, "radius")));
    if (type == "table") {
      if (!j.contains("mult") || !j["mult"].is_array()) throw InputError("table group needs 'mult'");
      return Group::finite(FiniteGroup::from_table(j["mult"].get<std::vector<std::vector<int>>>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed group: ") + e.what());
  } catch (const DomainError& e) {
    throw InputError(std::string("invalid group: ") + e.what());
  }
  throw InputError("unknown group type '" + type + "'");
}

Group parse_group(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind == "integers" && colon == std::string::npos) return Group::integers();
  if (colon == std::string::npos) throw InputError("group shorthand must look like cyclic:n, dihedral:n or z_window:r");
  long long value = 0;
  try {
    std::size_t used = 0;
    value = std::stoll(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw InputError("trailing characters in group shorthand");
  } catch (const std::logic_error&) {
    throw InputError("group shorthand needs an integer parameter: " + text);
  }
  Json j;
  if (kind == "cyclic") j = Json{{"type", "cyclic"}, {"n", value}};
  else if (kind == "dihedral") j = Json{{"type", "dihedral"}, {"n", value}};
  else if (kind == "z_window") j = Json{{"type", "z_window"}, {"radius", value}};
  else throw InputError("unknown group shorthand: " + text);
  return group_from_json(j);
}

Json cc_to_json(const CcElement& f, const Group& g) {
  Json coeffs = Json::array();
  for (const auto& [s, a] : f.terms()) {
    Json entries = Json::array();
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) entries.push_back(entry_to_json(a(i, j)));
    coeffs.push_back(Json{{"s", s}, {"matrix", std::move(entries)}});
  }
  return Json{{"group", group_to_json(g)}, {"coeffs", std::move(coeffs)}};
}

CcElement cc_from_json(const Json& j, const Group& g) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array()) throw InputError("element needs a 'coeffs' list");
  if (j["coeffs"].empty()) throw InputError("element has no coefficients; its base dimension is unknown");
  std::optional<CcElement> f;
  for (const auto& c : j["coeffs"]) {
    if (!c.is_object() || !c.contains("s") || !c["s"].is_number_integer() || !c.contains("matrix"))
      throw InputError("each coefficient needs an integer 's' and a 'matrix'");
    const Element s = c["s"].get<Element>();
    if (!g.contains(s)) throw InputError("coefficient index " + std::to_string(s) + " is outside the group");
    const CMatrix a = matrix_from_json(c["matrix"]);
    if (a.rows() != a.cols()) throw InputError("coefficients must be square");
    if (!f) f.emplace(a.rows());
    if (a.rows() != f->base_dim()) throw InputError("coefficients have different sizes");
    f->add(s, a);
  }
  return *f;
}

ElementFile elements_from_json(const Json& j, const std::optional<Group>& fallback) {
  ElementFile out;
  const Json* list = &j;
  Json single;
  if (j.is_object() && j.contains("elements")) {
    list = &j["elements"];
    if (j.contains("group")) out.group = group_from_json(j["group"]);
  } else if (j.is_object()) {
    single = Json::array({j});
    list = &single;
  }
  if (!list->is_array()) throw InputError("elements must be an object or a list");
  for (std::size_t i = 0; i < list->size(); ++i) {
    const Json& e = (*list)[i];
    if (e.is_object() && e.contains("group") && !out.group) out.group = group_from_json(e["group"]);
    const std::optional<Group> g = out.group ? out.group : fallback;
    if (!g) throw InputError("no group given for the elements");
    std::string id = "f" + std::to_string(i);
    if (e.is_object() && e.contains("id")) {
      if (!e["id"].is_string()) throw InputError("element ids must be strings");
      id = e["id"].get<std::string>();
    }
    out.elements.push_back({id, cc_from_json(e, *g)});
  }
  if (!out.group) out.group = fallback;
  return out;
}

Json exponent_to_json(PExponent p) {
  if (p.is_infinite()) return "inf";
  return p.p();
}

Json pnorm_to_json(const PNormEstimate& e, PExponent p) {
  Json w = Json::array();
  for (Index i = 0; i < e.witness.size(); ++i) w.push_back(entry_to_json(e.witness(i)));
  return Json{{"p", exponent_to_json(p)},
              {"value", e.value},
              {"method", to_string(e.method)},
              {"converged", e.converged},
              {"restarts", e.restarts_used},
              {"witness", std::move(w)}};
}

Json cb_to_json(const CbEstimate& cb) {
  Json levels = Json::array();
  for (const auto& l : cb.levels) levels.push_back(Json{{"n", l.n}, {"level_max", l.level_max}, {"lower_bound", l.lower_bound}});
  return Json{{"best", cb.best}, {"contractive", cb.contractive()}, {"levels", std::move(levels)}};
}

Json certificate_to_json(const CertificateRecord& c) {
  return Json{{"map", c.map}, {"levels", c.levels}, {"passed", c.passed}};
}

Json witness_to_json(const WitnessReport& r) {
  Json ratios = Json::object();
  for (const auto& [s, v] : r.folner_ratios) ratios[std::to_string(s)] = v;
  Json folner{{"members", r.folner_members}, {"ratios", std::move(ratios)}, {"delta", r.delta}};
  if (r.window) folner["window"] = Json::array({r.window->first, r.window->second});
  Json elements = Json::array();
  for (const auto& e : r.elements)
    elements.push_back(
        Json{{"id", e.id}, {"reduced_norm", e.reduced_norm}, {"roundtrip_error", e.roundtrip_error}, {"bound", e.bound}});
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(certificate_to_json(c));
  return Json{{"group", r.group},
              {"p", r.p == kInf ? Json("inf") : Json(r.p)},
              {"norm", "reduced (regular representation only)"},
              {"folner", std::move(folner)},
              {"elements", std::move(elements)},
              {"certificates", std::move(certs)},
              {"epsilon", r.epsilon},
              {"bookkeeping_ok", r.bookkeeping_ok},
              {"passed", r.passed}};
}

Json rotation_to_json(const RotationReport& r) {
  Json cx_certs = Json::array();
  for (const auto& c : r.cx_certificates) cx_certs.push_back(certificate_to_json(c));
  Json cx{{"arcs", r.arcs},
          {"partition_defect", r.partition_defect},
          {"errors", r.cx_errors},
          {"oscillations", r.cx_oscillations},
          {"certificates", std::move(cx_certs)}};
  return Json{{"N", r.n},
              {"k", r.k},
              {"theta_model", r.theta_model},
              {"commutation_defect", r.commutation_defect},
              {"witness", witness_to_json(r.witness)},
              {"cx", std::move(cx)},
              {"passed", r.passed}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

}  // namespace pnuc
