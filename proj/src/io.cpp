#include "mzkit/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mzkit/error.hpp"

namespace mzkit::io {

namespace {

std::string ptr(const std::string& base, std::size_t index) { return base + "/" + std::to_string(index); }

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "/" + key, "missing field");
  return *it;
}

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where, "expected a number");
  return j.get<double>();
}

Complex complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where, "expected [re, im]");
  return {require_number(j[0], where + "/0"), require_number(j[1], where + "/1")};
}

json complex_to_json(Complex c) { return json::array({number(c.real()), number(c.imag())}); }

std::vector<Complex> complex_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], ptr(where, i)));
  return out;
}

json trend_json(const Trend& t) {
  return {{"slope", number(t.slope)}, {"r_squared", number(t.r_squared)}, {"diverging", t.diverging}};
}

json witness_json(const Witness& w) {
  return {{"n", w.n}, {"ratio", number(w.ratio)}, {"poly_ref", w.label}, {"poly", to_json(w.poly)}};
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json p_to_json(double p) {
  if (std::isinf(p)) return "inf";
  if (p == std::floor(p)) return static_cast<int>(p);
  return p;
}

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInf;
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse p from '" + text + "'");
  }
  if (used != text.size()) throw InvalidArgument("cannot parse p from '" + text + "'");
  if (p < 1.0) throw InvalidArgument("p must be >= 1");
  return p;
}

json to_json(const TriangularFamily& family) {
  json gens = json::array();
  for (const auto& g : family.generations) gens.push_back({{"n", g.n}, {"angles", g.angles}});
  return {{"name", family.name}, {"generations", gens}};
}

TriangularFamily family_from_json(const json& j) {
  TriangularFamily family;
  const json& name = require(j, "name", "");
  if (!name.is_string()) throw ParseError("/name", "expected a string");
  family.name = name.get<std::string>();
  const json& gens = require(j, "generations", "");
  if (!gens.is_array()) throw ParseError("/generations", "expected an array");
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const std::string where = ptr("/generations", g);
    const json& n = require(gens[g], "n", where);
    if (!n.is_number_integer()) throw ParseError(where + "/n", "expected an integer");
    Generation gen{n.get<int>(), {}};
    if (gen.n < 1) throw ParseError(where + "/n", "generation index must be >= 1");
    if (g > 0 && gen.n <= family.generations.back().n)
      throw ParseError(where + "/n", "generation indices must be strictly increasing");
    const json& angles = require(gens[g], "angles", where);
    if (!angles.is_array()) throw ParseError(where + "/angles", "expected an array");
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const std::string at = ptr(where + "/angles", k);
      const double t = require_number(angles[k], at);
      if (!(t >= 0.0 && t < kTwoPi)) throw ParseError(at, "angle outside [0, 2pi)");
      if (k > 0 && !(t > gen.angles.back())) throw ParseError(at, "angles must be strictly increasing");
      gen.angles.push_back(t);
    }
    family.generations.push_back(std::move(gen));
  }
  return family;
}

json to_json(const Polynomial& poly) {
  json coeffs = json::array();
  for (const auto& c : poly.coeffs()) coeffs.push_back(complex_to_json(c));
  return {{"coeffs", coeffs}};
}

Polynomial polynomial_from_json(const json& j) {
  auto coeffs = complex_list(require(j, "coeffs", ""), "/coeffs");
  if (coeffs.empty()) throw ParseError("/coeffs", "polynomial needs at least one coefficient");
  return Polynomial(std::move(coeffs));
}

json to_json(const TrigPolynomial& trig) {
  json a = json::array();
  json b = json::array();
  for (const auto& c : trig.a) a.push_back(complex_to_json(c));
  for (const auto& c : trig.b) b.push_back(complex_to_json(c));
  return {{"a0", complex_to_json(trig.a0)}, {"a", a}, {"b", b}};
}

TrigPolynomial trig_from_json(const json& j) {
  TrigPolynomial t;
  t.a0 = complex_from_json(require(j, "a0", ""), "/a0");
  t.a = complex_list(require(j, "a", ""), "/a");
  t.b = complex_list(require(j, "b", ""), "/b");
  if (t.a.size() != t.b.size()) throw ParseError("/b", "a and b must have equal length");
  return t;
}

json to_json(const DensityEstimate& d) {
  json matrix = json::array();
  for (const auto& row : d.min_counts) {
    json r = json::array();
    for (double v : row) r.push_back(number(v));
    matrix.push_back(r);
  }
  json tail = json::array();
  for (double v : d.tail_min) tail.push_back(number(v));
  return {{"R_grid", d.R_grid},       {"n_grid", d.n_grid},          {"min_counts", matrix},
          {"tail_min", tail},         {"tail_start", d.tail_start}, {"extrapolated", number(d.extrapolated)},
          {"threshold", 1.0 / kTwoPi}};
}

std::string verdict_label(const CertificationReport& report) {
  if (report.verdict == Verdict::certified) return "certified-" + report.basis;
  return std::string(to_string(report.verdict));
}

json to_json(const CertificationReport& report) {
  json gens = json::array();
  json witnesses = json::array();
  for (const auto& g : report.generations) {
    json row = {{"n", g.n}, {"m", g.m}, {"arc_count_sup", number(g.arc_count_sup)}};
    if (g.frame) {
      row["A"] = number(g.frame->A);
      row["B"] = number(g.frame->B);
      row["kappa"] = number(g.frame->kappa);
      row["numerically_singular"] = g.frame->numerically_singular;
    } else {
      row["A"] = nullptr;
      row["B"] = nullptr;
      row["kappa"] = nullptr;
    }
    gens.push_back(row);
    witnesses.push_back(witness_json(g.witness));
  }
  json out = {{"family", report.family},
              {"p", p_to_json(report.p)},
              {"generations", gens},
              {"witnesses", witnesses},
              {"separation", number(report.separation)},
              {"trends",
               {{"arc_count_sup", trend_json(report.arc_trend)},
                {"kappa", trend_json(report.kappa_trend)},
                {"witness_ratio", trend_json(report.witness_trend)}}},
              {"verdict", verdict_label(report)},
              {"reasons", report.reasons}};
  out["density"] = report.density ? to_json(*report.density) : json(nullptr);
  out["refuting_witness"] = report.refuting_witness ? witness_json(*report.refuting_witness) : json(nullptr);
  return out;
}

std::string report_csv(const CertificationReport& report) {
  std::ostringstream os;
  os << "n,m,A,B,kappa,arc_count_sup,witness_ratio,witness\n";
  for (const auto& g : report.generations) {
    os << g.n << ',' << g.m << ',';
    if (g.frame)
      os << format_double(g.frame->A) << ',' << format_double(g.frame->B) << ',' << format_double(g.frame->kappa);
    else
      os << ",,";
    os << ',' << format_double(g.arc_count_sup) << ',' << format_double(g.witness.ratio) << ',' << g.witness.label
       << '\n';
  }
  return os.str();
}

std::vector<Sample> parse_samples_csv(std::istream& in) {
  std::vector<Sample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("angle", 0) == 0) continue;
    double fields[3];
    std::size_t start = 0;
    for (int f = 0; f < 3; ++f) {
      const std::size_t comma = line.find(',', start);
      const bool last = f == 2;
      if (!last && comma == std::string::npos)
        throw ParseError(std::to_string(line_no) + ":" + std::to_string(start + 1), "expected 3 fields angle,re,im");
      if (last && comma != std::string::npos)
        throw ParseError(std::to_string(line_no) + ":" + std::to_string(comma + 1), "too many fields");
      const std::string token = line.substr(start, last ? std::string::npos : comma - start);
      std::size_t used = 0;
      try {
        fields[f] = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || token.find_first_not_of(" \t", used) != std::string::npos)
        throw ParseError(std::to_string(line_no) + ":" + std::to_string(start + 1), "invalid number '" + token + "'");
      start = comma + 1;
    }
    out.push_back({fields[0], {fields[1], fields[2]}});
  }
  return out;
}

std::string fit_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "n,discrete_error,grid_error,iterations\n";
  for (const auto& r : rows)
    os << r.n << ',' << format_double(r.discrete_error) << ',' << format_double(r.grid_error) << ',' << r.iterations
       << '\n';
  return os.str();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

TriangularFamily read_family(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + " byte " + std::to_string(e.byte), "malformed JSON");
  }
  try {
    return family_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ":" + e.location(), std::string(e.what()).substr(e.location().size() + 2));
  }
}

void write_family(const std::filesystem::path& path, const TriangularFamily& family) {
  family.validate(true);
  write_text(path, dump(to_json(family)));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace mzkit::io
