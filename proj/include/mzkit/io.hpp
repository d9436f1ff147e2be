#pragma once

// File formats: family/polynomial JSON, certification report JSON and CSV,
// sample and fit CSV tables.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "mzkit/approx.hpp"
#include "mzkit/certifier.hpp"
#include "mzkit/circle_family.hpp"
#include "mzkit/circle_poly.hpp"

namespace mzkit::io {

using nlohmann::json;

/// 17 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);

/// Numbers as-is; non-finite values as the strings "inf", "-inf", "nan".
json number(double v);

/// p as 1, 2 or "inf".
json p_to_json(double p);
/// Parses "1", "2", "inf" (also "infinity").
double parse_p(const std::string& text);

json to_json(const TriangularFamily& family);
/// Strict reader: angles strictly increasing in [0, 2pi), generation indices
/// strictly increasing. Errors carry the JSON pointer of the offending value.
TriangularFamily family_from_json(const json& j);

json to_json(const Polynomial& poly);
Polynomial polynomial_from_json(const json& j);

json to_json(const TrigPolynomial& trig);
TrigPolynomial trig_from_json(const json& j);

json to_json(const DensityEstimate& density);

/// "certified-p2-trend", "certified-density", "refuted" or "inconclusive".
std::string verdict_label(const CertificationReport& report);

json to_json(const CertificationReport& report);
/// One row per generation: n,m,A,B,kappa,arc_count_sup,witness_ratio,witness.
std::string report_csv(const CertificationReport& report);

/// Rows `angle,re,im`; an optional header line starting with "angle" is skipped.
/// Errors are reported as "line:column".
std::vector<Sample> parse_samples_csv(std::istream& in);

/// Header `n,discrete_error,grid_error,iterations`.
std::string fit_csv(const std::vector<ConvergenceRow>& rows);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

TriangularFamily read_family(const std::filesystem::path& path);
void write_family(const std::filesystem::path& path, const TriangularFamily& family);

/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string dump(const json& j);

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace mzkit::io
