#pragma once

// JSON formats. Matrices: {"rows", "cols", "entries": [[re, im], ...]}
// row-major. Groups: {"type": "cyclic", "n"}, {"type": "table", "mult"},
// {"type": "z_window", "radius"}, or the shorthand strings "cyclic:n",
// "dihedral:n", "z_window:r". Crossed-product elements:
// {"group", "coeffs": [{"s", "matrix"}]}, "matrix" being either a flat
// row-major [[re, im], ...] list of a square matrix or a matrix object.

#include <pnuc/nuclearity.hpp>

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnuc {

using Json = nlohmann::ordered_json;

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

Json group_to_json(const Group& g);
Group group_from_json(const Json& j);
Group parse_group(const std::string& text);

Json cc_to_json(const CcElement& f, const Group& g);
CcElement cc_from_json(const Json& j, const Group& g);

/// Reads one element, an array of elements, or {"elements": [...]}; ids
/// default to "f<index>". The group comes from the file when present.
struct ElementFile {
  std::optional<Group> group;
  std::vector<NamedElement> elements;
};
ElementFile elements_from_json(const Json& j, const std::optional<Group>& fallback);

Json pnorm_to_json(const PNormEstimate& e, PExponent p);
Json cb_to_json(const CbEstimate& cb);
Json certificate_to_json(const CertificateRecord& c);
Json witness_to_json(const WitnessReport& r);
Json rotation_to_json(const RotationReport& r);

/// p as a JSON value: a number, or the string "inf".
Json exponent_to_json(PExponent p);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pnuc
