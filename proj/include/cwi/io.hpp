#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwi/clt.hpp"
#include "cwi/common.hpp"
#include "cwi/kernel.hpp"
#include "cwi/moments.hpp"
#include "cwi/ou.hpp"
#include "cwi/version.hpp"

namespace cwi {

using nlohmann::json;

/// Kernel JSON: { "p", "q", "n", "coeffs": [[re, im], ...] } with coeffs in
/// row-major layout over the p unbarred then q barred indices. The reader
/// symmetrizes only when "symmetrize": true is present.
inline KernelTensor kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("q") || !j.contains("n") ||
      !j.contains("coeffs"))
    throw input_error("kernel JSON: need fields p, q, n, coeffs");
  const int p = j.at("p").get<int>();
  const int q = j.at("q").get<int>();
  const int n = j.at("n").get<int>();
  const auto& arr = j.at("coeffs");
  if (!arr.is_array()) throw input_error("kernel JSON: coeffs must be an array of [re, im] pairs");
  std::vector<cplx> coeffs;
  coeffs.reserve(arr.size());
  for (const auto& entry : arr) {
    if (!entry.is_array() || entry.size() != 2)
      throw input_error("kernel JSON: each coefficient must be a [re, im] pair");
    coeffs.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }
  KernelTensor f(p, q, n, std::move(coeffs));
  if (j.value("symmetrize", false)) f = symmetrize_groups(f);
  return f;
}

inline json kernel_to_json(const KernelTensor& f) {
  json arr = json::array();
  for (std::size_t k = 0; k < f.size(); ++k) arr.push_back({f[k].real(), f[k].imag()});
  return json{{"p", f.p()}, {"q", f.q()}, {"n", f.n()}, {"coeffs", std::move(arr)}};
}

inline KernelTensor read_kernel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open kernel file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw input_error("kernel file " + path + ": " + e.what());
  }
  return kernel_from_json(j);
}

inline json complex_to_json(const cplx& z) { return json{z.real(), z.imag()}; }

/// Every field carrying a derived mathematical quantity names the identity it
/// comes from in its "eq" string.
inline json moment_report_to_json(const MomentReport& r) {
  json j;
  j["p"] = r.p;
  j["q"] = r.q;
  j["n"] = r.n;
  j["sigma_sq"] = {{"value", r.sigma_sq}, {"eq", "E|F|^2 = p! q! <f,f>"}};
  j["ef2"] = {{"value", complex_to_json(r.ef2)}, {"eq", "E F^2 = 1{p=q} p! q! <f,h>"}};
  j["third"] = {{"value", complex_to_json(r.third)}, {"eq", "E F^3 contraction expansion"}};
  j["third_mixed"] = {{"value", complex_to_json(r.third_mixed)},
                      {"eq", "E F^2 conj(F) contraction expansion"}};
  j["kappa"] = {{"value", r.kappa}, {"eq", "E|F|^4 - 2(E|F|^2)^2 - |E F^2|^2"}};
  j["A"] = {{"value", r.A}, {"eq", "||f (x)_{0,1} h||^2 + ||f (x)_{1,0} h||^2 aggregate"}};
  j["c1"] = {{"value", r.c1}, {"eq", "min C(p,i)^2 C(q,j)^2 (p! q!)^2 over 0 < i+j < p+q"}};
  j["lambda1"] = {{"value", r.lambda1}, {"eq", "(sigma^2 + |E F^2|)/2"}};
  j["lambda2"] = {{"value", r.lambda2}, {"eq", "(sigma^2 - |E F^2|)/2"}};
  return j;
}

inline json bound1d_to_json(const Bound1d& b) {
  json j;
  j["upper_moment"] = {{"value", b.upper_moment},
                       {"eq", "4 sqrt(2) sqrt(sum C(2r,r)) sqrt(lambda1)/lambda2 sqrt(kappa)"}};
  j["upper_contraction_raw"] = {{"value", b.upper_contraction_raw}, {"eq", "sqrt(A)"}};
  j["lower_raw"] = {{"value", b.lower_raw}, {"eq", "max(|E F^3|, |E F^2 conj(F)|, kappa)"}};
  return j;
}

inline json bound_multi_to_json(const BoundMulti& b) {
  json j;
  j["upper"] = {{"value", b.upper},
                {"eq", "2 sqrt(d lambda_max)/lambda_min sqrt(E||F||^4 - E||Z||^4)"}};
  j["moment_gap"] = {{"value", b.moment_gap}, {"eq", "sum_{j,r} cross fourth-moment gaps"}};
  j["rhs_contraction_raw"] = {{"value", b.rhs_contraction_raw},
                              {"eq", "contraction aggregate with dominance-gated cross terms"}};
  return j;
}

/// Reproducibility record attached to every emitted artifact. Wall time is
/// reported on stderr only, so reruns with an identical manifest are
/// byte-identical.
struct RunManifest {
  std::string command;
  json parameters = json::object();
  std::uint64_t seed = 0;
  bool seeded = false;
  std::vector<std::string> outputs;

  json to_json() const {
    json j;
    j["command"] = command;
    j["parameters"] = parameters;
    if (seeded) j["seed"] = seed;
    j["version"] = kVersion;
    j["outputs"] = outputs;
    return j;
  }

  std::string hash() const {
    const std::string dump = to_json().dump();
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : dump) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
  }
};

inline json with_manifest(json body, const RunManifest& manifest) {
  body["manifest"] = manifest.to_json();
  body["manifest_hash"] = manifest.hash();
  return body;
}

namespace detail {

inline std::string format_csv_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

inline std::string rate_study_csv(const RateStudy& study) {
  std::ostringstream os;
  os << "T,sigma_sq_exact,A_exact,third_mixed_exact,upper_moment,campese_ref,w1_estimate,"
        "w1_stderr\n";
  for (const RateRow& r : study.rows) {
    os << detail::format_csv_double(r.T) << ',' << detail::format_csv_double(r.sigma_sq_exact)
       << ',' << detail::format_csv_double(r.A_exact) << ','
       << detail::format_csv_double(r.third_mixed_exact) << ','
       << detail::format_csv_double(r.upper_moment) << ','
       << detail::format_csv_double(r.campese_ref) << ','
       << detail::format_csv_double(r.w1_estimate) << ','
       << detail::format_csv_double(r.w1_stderr) << '\n';
  }
  return os.str();
}

/// Two-column x,y CSV without a header, one planar point per line.
inline PlanarSample read_planar_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open CSV file: " + path);
  PlanarSample sample;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double x, y;
    char comma;
    if (!(ls >> x >> comma >> y) || comma != ',')
      throw input_error("CSV " + path + ": expected 'x,y' on every line");
    sample.points.push_back({x, y});
  }
  if (sample.points.empty()) throw input_error("CSV " + path + ": no points");
  return sample;
}

inline CltSpec clt_spec_from_json(const json& j) {
  CltSpec spec;
  if (!j.is_object() || !j.contains("families"))
    throw input_error("clt spec JSON: need a 'families' array");
  for (const auto& fj : j.at("families")) {
    CltFamily fam;
    fam.p = fj.at("p").get<int>();
    fam.q = fj.at("q").get<int>();
    fam.sigma_sq = fj.at("sigma_sq").get<double>();
    fam.kind = fj.value("kind", "spread");
    spec.families.push_back(fam);
  }
  spec.levels = j.value("levels", 5);
  spec.samples = j.value("samples", std::size_t{4096});
  spec.validate();
  return spec;
}

inline json clt_report_to_json(const CltReport& report) {
  json rows = json::array();
  for (const CltLevelRow& r : report.rows) {
    rows.push_back({{"level", r.level},
                    {"w1", r.w1},
                    {"max_contraction", {{"value", r.max_contraction},
                                         {"eq", "max ||f (x)_{i,j} h||, 0 < i+j < p+q"}}},
                    {"max_kappa", r.max_kappa},
                    {"sigma_sq_actual", r.sigma_sq_actual},
                    {"tail_mass", r.tail_mass}});
  }
  return json{{"target_sigma_sq", report.target_sigma_sq}, {"levels", std::move(rows)}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open output file: " + path);
  out << content;
}

}  // namespace cwi
