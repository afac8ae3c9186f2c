#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cwi/io.hpp"

using namespace cwi;

namespace {

struct ToolResult {
  int exit_code;
  std::string out;
};

ToolResult run_tool(const std::string& args) {
  const std::string cmd = std::string(CWI_TOOL_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

const char* kDiagKernel = R"({"p":1,"q":1,"n":2,"coeffs":[[0,0],[0,0],[0,0],[1,0]]})";

}  // namespace

TEST_CASE("kernel JSON round trip") {
  const KernelTensor f = random_kernel(2, 1, 3, 17);
  const KernelTensor back = kernel_from_json(kernel_to_json(f));
  REQUIRE(back.same_shape(f));
  for (std::size_t k = 0; k < f.size(); ++k) REQUIRE(f[k] == back[k]);
}

TEST_CASE("kernel JSON symmetrize flag and validation") {
  json j = json::parse(R"({"p":0,"q":2,"n":2,"symmetrize":true,
                          "coeffs":[[0,0],[1,0],[0,0],[0,0]]})");
  const KernelTensor f = kernel_from_json(j);
  REQUIRE(is_group_symmetric(f, 1e-14));
  REQUIRE(std::abs(f[1] - cplx(0.5)) < 1e-15);
  REQUIRE(std::abs(f[2] - cplx(0.5)) < 1e-15);

  REQUIRE_THROWS_AS(kernel_from_json(json::parse(R"({"p":1,"q":0})")), input_error);
  REQUIRE_THROWS_AS(kernel_from_json(json::parse(R"({"p":1,"q":0,"n":2,"coeffs":[[1,0]]})")),
                    input_error);
}

TEST_CASE("manifest hash is stable and parameter-sensitive") {
  RunManifest m;
  m.command = "moments";
  m.parameters = {{"kernel", "a.json"}};
  const std::string h1 = m.hash();
  REQUIRE(h1 == m.hash());
  m.parameters = {{"kernel", "b.json"}};
  REQUIRE(h1 != m.hash());
}

TEST_CASE("rate CSV header matches the documented columns") {
  RateStudy s;
  s.rows.push_back({1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0});
  const std::string csv = rate_study_csv(s);
  REQUIRE(csv.rfind("T,sigma_sq_exact,A_exact,third_mixed_exact,upper_moment,campese_ref,"
                    "w1_estimate,w1_stderr\n",
                    0) == 0);
  REQUIRE(csv.find("1,2,3,4,5,6,7,8\n") != std::string::npos);
}

TEST_CASE("cli selftest passes and the mutation fixture fails with its tag") {
  REQUIRE(run_tool("selftest").exit_code == 0);
  const ToolResult filtered = run_tool("selftest --filter contraction");
  REQUIRE(filtered.exit_code == 0);
  REQUIRE(filtered.out.find("[contraction]") != std::string::npos);
  REQUIRE(filtered.out.find("[hermite]") == std::string::npos);

  const ToolResult mutated = run_tool("selftest --mutate hermite");
  REQUIRE(mutated.exit_code == 1);
  REQUIRE(mutated.out.find("FAIL [hermite] H_{1,1}(z)=|z|^2-2") != std::string::npos);
}

TEST_CASE("cli moments reports the worked example") {
  const auto path = temp_file("cwi_diag_kernel.json", kDiagKernel);
  const ToolResult r = run_tool("moments --kernel " + path.string());
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.at("kappa").at("value").get<double>() == Catch::Approx(6.0));
  REQUIRE(j.at("sigma_sq").at("value").get<double>() == Catch::Approx(1.0));
  REQUIRE(j.at("kappa").contains("eq"));
  REQUIRE(j.contains("manifest_hash"));
}

TEST_CASE("cli rejects bad input with exit code 2") {
  const auto path = temp_file("cwi_bad_kernel.json", R"({"p":1,"q":1,"n":2,"coeffs":[[1,0]]})");
  REQUIRE(run_tool("moments --kernel " + path.string()).exit_code == 2);
  REQUIRE(run_tool("moments --kernel /nonexistent.json").exit_code == 2);
}

TEST_CASE("cli sample output is byte-identical across reruns") {
  const auto path = temp_file("cwi_sample_kernel.json", kDiagKernel);
  const std::string args = "sample --kernel " + path.string() + " --n-samples 200 --seed 42";
  const ToolResult a = run_tool(args);
  const ToolResult b = run_tool(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.out == b.out);
  const json j = json::parse(a.out);
  REQUIRE(j.at("e_abs2").get<double>() == Catch::Approx(1.0).margin(0.5));
  const ToolResult c = run_tool("sample --kernel " + path.string() + " --n-samples 200 --seed 43");
  REQUIRE(c.out != a.out);
}

TEST_CASE("cli contract matches the library") {
  const auto path = temp_file("cwi_contract_kernel.json", kDiagKernel);
  const ToolResult r =
      run_tool("contract --f " + path.string() + " --g " + path.string() + " --i 0 --j 1");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.at("p").get<int>() == 1);
  REQUIRE(j.at("q").get<int>() == 1);
  REQUIRE(j.at("norm").get<double>() == Catch::Approx(1.0));
}

TEST_CASE("cli w1 on planar CSVs") {
  const auto a = temp_file("cwi_w1_a.csv", "0,0\n1,0\n");
  const auto b = temp_file("cwi_w1_b.csv", "0,1\n1,1\n");
  const ToolResult r = run_tool("w1 --a " + a.string() + " --b " + b.string());
  REQUIRE(r.exit_code == 0);
  REQUIRE(json::parse(r.out).at("w1").get<double>() == Catch::Approx(1.0));
  const auto bad = temp_file("cwi_w1_bad.csv", "0 1\n");
  REQUIRE(run_tool("w1 --a " + a.string() + " --b " + bad.string()).exit_code == 2);
}

TEST_CASE("cli hermite prints the anchor value") {
  const ToolResult r = run_tool("hermite --z-re 2 --z-im 0 --pmax 1 --qmax 1");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  bool found = false;
  for (const auto& row : j.at("table"))
    if (row.at("p") == 1 && row.at("q") == 1) {
      REQUIRE(row.at("value").at(0).get<double>() == Catch::Approx(2.0));  // |2|^2-2
      found = true;
    }
  REQUIRE(found);
}

TEST_CASE("cli clt-demo validates its spec") {
  const auto bad = temp_file("cwi_clt_bad.json", R"({"families":[{"p":1,"q":1,"sigma_sq":-1}]})");
  REQUIRE(run_tool("clt-demo --spec " + bad.string() + " --seed 1").exit_code == 2);
  const auto tiny = temp_file(
      "cwi_clt_tiny.json",
      R"({"families":[{"p":1,"q":1,"sigma_sq":1.0,"kind":"spread"}],"levels":2,"samples":64})");
  const ToolResult r = run_tool("clt-demo --spec " + tiny.string() + " --seed 7");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.at("levels").size() == 2);
  REQUIRE(j.at("target_sigma_sq").get<double>() == Catch::Approx(1.0));
}
