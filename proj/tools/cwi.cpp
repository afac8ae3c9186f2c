#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "cwi/chaos.hpp"
#include "cwi/clt.hpp"
#include "cwi/contraction.hpp"
#include "cwi/hermite.hpp"
#include "cwi/io.hpp"
#include "cwi/kernel.hpp"
#include "cwi/moments.hpp"
#include "cwi/ou.hpp"
#include "cwi/selftest.hpp"
#include "cwi/version.hpp"
#include "cwi/wasserstein.hpp"

namespace {

using cwi::json;

int run_selftest_cmd(const std::string& filter, const std::string& mutate) {
  const auto results = cwi::run_selftest(filter, mutate);
  if (results.empty()) {
    std::cerr << "selftest: no suite matches filter '" << filter << "'\n";
    return 2;
  }
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << " [" << r.suite << "] " << r.tag
              << " (worst " << r.worst << ", tol " << r.tolerance << ")\n";
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}

json sigma_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cwi::input_error("cannot open covariance file: " + path);
  json j;
  in >> j;
  return j;
}

cwi::ComplexCovariance parse_covariance(const json& j) {
  const int d = j.at("d").get<int>();
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(d) * d)
    throw cwi::input_error("covariance JSON: entries must hold d*d [re, im] pairs, row-major");
  Eigen::MatrixXcd sigma(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const auto& e = entries[static_cast<std::size_t>(r) * d + c];
      sigma(r, c) = cwi::cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return cwi::ComplexCovariance(std::move(sigma));
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("CHAOS_BENCH_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"complex Wiener-Ito chaos toolkit"};
  app.require_subcommand(1);

  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
  std::string st_filter, st_mutate;
  selftest->add_option("--filter", st_filter, "run only suites whose name contains this");
  selftest->add_option("--mutate", st_mutate, "inject a deliberate fault (value: hermite)");

  auto* hermite = app.add_subcommand("hermite", "print a complex Hermite polynomial table");
  double h_re = 0.0, h_im = 0.0;
  int h_pmax = 4, h_qmax = 4;
  hermite->add_option("--z-re", h_re, "Re(z)")->required();
  hermite->add_option("--z-im", h_im, "Im(z)");
  hermite->add_option("--pmax", h_pmax, "max unbarred degree");
  hermite->add_option("--qmax", h_qmax, "max barred degree");

  auto* contract_cmd = app.add_subcommand("contract", "compute f (x)_{i,j} g");
  std::string c_f, c_g, c_out;
  int c_i = 0, c_j = 0;
  bool c_sym = false;
  contract_cmd->add_option("--f", c_f, "kernel JSON file")->required();
  contract_cmd->add_option("--g", c_g, "kernel JSON file")->required();
  contract_cmd->add_option("--i", c_i, "unbarred pairs")->required();
  contract_cmd->add_option("--j", c_j, "barred pairs")->required();
  contract_cmd->add_flag("--sym", c_sym, "group-symmetrize the result");
  contract_cmd->add_option("--out", c_out, "write the result kernel here instead of stdout");

  auto* quantities = app.add_subcommand("quantities", "contraction aggregates A (and B for pairs)");
  std::string q_f, q_f2;
  quantities->add_option("--f", q_f, "kernel JSON file")->required();
  quantities->add_option("--f2", q_f2, "second kernel for the cross aggregates");

  auto* moments = app.add_subcommand("moments", "exact moment report for a kernel");
  std::string m_kernel;
  moments->add_option("--kernel", m_kernel, "kernel JSON file")->required();

  auto* bounds = app.add_subcommand("bounds", "Berry-Esseen bound report");
  std::vector<std::string> b_kernels;
  std::string b_sigma;
  bounds->add_option("--kernel", b_kernels, "kernel JSON file (repeat for the multivariate bound)")
      ->required();
  bounds->add_option("--sigma", b_sigma, "covariance JSON {d, entries} for the multivariate case");

  auto* sample = app.add_subcommand("sample", "Monte Carlo sample moments of I_{p,q}(f)");
  std::string s_kernel;
  std::size_t s_count = 0;
  std::uint64_t s_seed = 0;
  sample->add_option("--kernel", s_kernel, "kernel JSON file")->required();
  sample->add_option("--n-samples", s_count, "sample count")->required();
  sample->add_option("--seed", s_seed, "RNG seed")->required();

  auto* w1 = app.add_subcommand("w1", "exact empirical W1 between two planar CSV samples");
  std::string w_a, w_b;
  w1->add_option("--a", w_a, "CSV file, lines 'x,y'")->required();
  w1->add_option("--b", w_b, "CSV file, lines 'x,y'")->required();

  auto* ou_rate = app.add_subcommand("ou-rate", "Ornstein-Uhlenbeck rate study");
  double o_lambda = 1.0;
  std::vector<double> o_tgrid;
  std::size_t o_paths = 2048;
  int o_reps = 32;
  std::uint64_t o_seed = 0;
  std::string o_out;
  ou_rate->add_option("--lambda", o_lambda, "drift real part")->required();
  ou_rate->add_option("--tgrid", o_tgrid, "increasing horizons")->required()->expected(-4);
  ou_rate->add_option("--paths", o_paths, "paths per replicate")->required();
  ou_rate->add_option("--replicates", o_reps, "replicates per horizon");
  ou_rate->add_option("--seed", o_seed, "RNG seed")->required();
  ou_rate->add_option("--out", o_out, "output CSV path")->required();

  auto* clt = app.add_subcommand("clt-demo", "chaotic central limit theorem demo");
  std::string clt_spec_path, clt_out;
  std::uint64_t clt_seed = 0;
  clt->add_option("--spec", clt_spec_path, "demo spec JSON")->required();
  clt->add_option("--seed", clt_seed, "RNG seed")->required();
  clt->add_option("--out", clt_out, "write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  const auto t0 = std::chrono::steady_clock::now();

  int rc = 0;
  try {
    if (*selftest) {
      rc = run_selftest_cmd(st_filter, st_mutate);
    } else if (*hermite) {
      const cwi::cplx z(h_re, h_im);
      cwi::HermiteTable table(z, h_pmax, h_qmax);
      json rows = json::array();
      for (int p = 0; p <= h_pmax; ++p)
        for (int q = 0; q <= h_qmax; ++q)
          rows.push_back({{"p", p}, {"q", q}, {"value", cwi::complex_to_json(table(p, q))}});
      emit(json{{"z", cwi::complex_to_json(z)}, {"table", std::move(rows)}});
    } else if (*contract_cmd) {
      const cwi::KernelTensor f = cwi::read_kernel_file(c_f);
      const cwi::KernelTensor g = cwi::read_kernel_file(c_g);
      const cwi::KernelTensor r =
          c_sym ? cwi::contract_sym(f, g, c_i, c_j) : cwi::contract(f, g, c_i, c_j);
      json body = cwi::kernel_to_json(r);
      body["norm"] = cwi::norm(r);
      cwi::RunManifest manifest;
      manifest.command = "contract";
      manifest.parameters = {{"f", c_f}, {"g", c_g}, {"i", c_i}, {"j", c_j}, {"sym", c_sym}};
      body = cwi::with_manifest(std::move(body), manifest);
      if (c_out.empty())
        emit(body);
      else
        cwi::write_text_file(c_out, body.dump(2) + "\n");
    } else if (*quantities) {
      const cwi::KernelTensor f = cwi::read_kernel_file(q_f);
      const cwi::KernelTensor h = cwi::reverse_conjugate(f);
      json body;
      body["A"] = {{"value", cwi::quantity_A(f, h)},
                   {"eq", "sum over 0<i+j<p+q of ||f (x)_{i,j} h||^2"}};
      if (!q_f2.empty()) {
        const cwi::KernelTensor f2 = cwi::read_kernel_file(q_f2);
        const cwi::KernelTensor h2 = cwi::reverse_conjugate(f2);
        body["A_pair"] = {{"value", cwi::quantity_A(f, h, f2, h2)},
                          {"eq", "A(f1,h1) + A(f2,h2)"}};
        body["B_pair"] = {{"value", cwi::quantity_B(f, h, f2, h2)},
                          {"eq", "dominance-gated cross contraction terms"}};
      }
      cwi::RunManifest manifest;
      manifest.command = "quantities";
      manifest.parameters = {{"f", q_f}, {"f2", q_f2}};
      emit(cwi::with_manifest(std::move(body), manifest));
    } else if (*moments) {
      const cwi::KernelTensor f = cwi::read_kernel_file(m_kernel);
      json body = cwi::moment_report_to_json(cwi::moment_report(f));
      cwi::RunManifest manifest;
      manifest.command = "moments";
      manifest.parameters = {{"kernel", m_kernel}};
      emit(cwi::with_manifest(std::move(body), manifest));
    } else if (*bounds) {
      json body;
      cwi::RunManifest manifest;
      manifest.command = "bounds";
      manifest.parameters = {{"kernels", b_kernels}, {"sigma", b_sigma}};
      if (b_kernels.size() == 1 && b_sigma.empty()) {
        const cwi::KernelTensor f = cwi::read_kernel_file(b_kernels.front());
        const cwi::MomentReport r = cwi::moment_report(f);
        body["moments"] = cwi::moment_report_to_json(r);
        body["bound"] = cwi::bound1d_to_json(cwi::bound_1d(r));
      } else {
        if (b_sigma.empty())
          throw cwi::input_error("bounds: --sigma is required with multiple kernels");
        std::vector<cwi::KernelTensor> kernels;
        for (const auto& path : b_kernels) kernels.push_back(cwi::read_kernel_file(path));
        body["bound"] =
            cwi::bound_multi_to_json(cwi::bound_multi(kernels, parse_covariance(sigma_from_file(b_sigma))));
      }
      emit(cwi::with_manifest(std::move(body), manifest));
    } else if (*sample) {
      const cwi::KernelTensor f = cwi::read_kernel_file(s_kernel);
      const auto values = cwi::sample_integral_batch(f, s_count, s_seed);
      std::vector<double> abs2(values.size());
      std::vector<cwi::cplx> sq(values.size());
      std::vector<double> abs4(values.size());
      for (std::size_t k = 0; k < values.size(); ++k) {
        abs2[k] = std::norm(values[k]);
        sq[k] = values[k] * values[k];
        abs4[k] = abs2[k] * abs2[k];
      }
      const double inv = 1.0 / static_cast<double>(values.size());
      json body;
      body["count"] = values.size();
      body["mean"] = cwi::complex_to_json(cwi::pairwise_sum(values) * inv);
      body["e_abs2"] = cwi::pairwise_sum<double>(abs2) * inv;
      body["e_sq"] = cwi::complex_to_json(cwi::pairwise_sum(sq) * inv);
      body["e_abs4"] = cwi::pairwise_sum<double>(abs4) * inv;
      cwi::RunManifest manifest;
      manifest.command = "sample";
      manifest.parameters = {{"kernel", s_kernel}, {"n_samples", s_count}};
      manifest.seed = s_seed;
      manifest.seeded = true;
      emit(cwi::with_manifest(std::move(body), manifest));
    } else if (*w1) {
      const cwi::PlanarSample a = cwi::read_planar_csv(w_a);
      const cwi::PlanarSample b = cwi::read_planar_csv(w_b);
      emit(json{{"w1", cwi::w1_exact(a, b)}, {"count", a.points.size()}});
    } else if (*ou_rate) {
      const cwi::RateStudy study = cwi::rate_study(o_lambda, o_tgrid, o_paths, o_reps, o_seed);
      cwi::write_text_file(o_out, cwi::rate_study_csv(study));
      cwi::RunManifest manifest;
      manifest.command = "ou-rate";
      manifest.parameters = {{"lambda", o_lambda},
                             {"tgrid", o_tgrid},
                             {"paths", o_paths},
                             {"replicates", o_reps}};
      manifest.seed = o_seed;
      manifest.seeded = true;
      manifest.outputs = {o_out};
      json body;
      body["out"] = o_out;
      body["slope_upper"] = study.slope_upper;
      body["slope_campese"] = study.slope_campese;
      body["slope_w1"] = study.slope_w1;
      body["slope_w1_stderr"] = study.slope_w1_stderr;
      emit(cwi::with_manifest(std::move(body), manifest));
    } else if (*clt) {
      std::ifstream in(clt_spec_path);
      if (!in) throw cwi::input_error("cannot open clt spec file: " + clt_spec_path);
      json sj;
      try {
        in >> sj;
      } catch (const json::exception& e) {
        throw cwi::input_error(std::string("clt spec: ") + e.what());
      }
      const cwi::CltSpec spec = cwi::clt_spec_from_json(sj);
      const cwi::CltReport report = cwi::run_clt_demo(spec, clt_seed);
      json body = cwi::clt_report_to_json(report);
      cwi::RunManifest manifest;
      manifest.command = "clt-demo";
      manifest.parameters = {{"spec", clt_spec_path}};
      manifest.seed = clt_seed;
      manifest.seeded = true;
      if (!clt_out.empty()) manifest.outputs = {clt_out};
      body = cwi::with_manifest(std::move(body), manifest);
      if (clt_out.empty())
        emit(body);
      else
        cwi::write_text_file(clt_out, body.dump(2) + "\n");
    }
  } catch (const cwi::input_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    rc = 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    rc = 1;
  }

  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  std::cerr << "wall time: " << elapsed.count() << " ms\n";
  return rc;
}
