#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(POLYLAT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string temp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("construct writes a vector file") {
  const auto r = run("construct --b 2 --m 4 --d 3 --weights product:j^-2 --criterion K");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  int b, m, p;
  std::vector<long> g;
  in >> b >> m >> p;
  for (long c; in >> c;) g.push_back(c);
  CHECK(p == 19);
  CHECK(g.size() == 3);
  CHECK(g[0] == 1);
  CHECK(run("construct --b 2 --m 2 --d 1 --criterion K").out == "2 2 7 1\n");
}

TEST_CASE("construct result JSON") {
  const auto path = temp("polylat_cli_result.json");
  const auto r = run("construct --b 3 --m 3 --d 4 --out - --json " + path);
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j["b"] == 3);
  CHECK(j["g_enc"].size() == 4);
  CHECK(j["per_step_values"].size() == 4);
  CHECK(j["audit_passed"] == true);
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run("construct --b 2 --m 4 --d 3 --weights product:j^0").code == 0);
  CHECK(run("construct --b 2 --m 4 --d 3 --weights product:0").code == 2);
  CHECK(run("construct --b 4 --m 4 --d 3").code == 2);
  CHECK(run("construct --b 2 --m 4 --d 3 --modulus 21").code == 2);
  CHECK(run("construct --b 2 --m 20 --d 100000 --memory-budget-mb 1").code == 2);
  CHECK(run("construct --bogus").code == 2);
}

TEST_CASE("eval and bound") {
  const auto vec = temp("polylat_cli_vec.txt");
  std::ofstream(vec) << "2 2 7 1\n";
  const auto r = run("eval --vector " + vec + " --weights product:1 --criterion wce --alpha 2");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(j["satisfied"] == true);
  const auto k = nlohmann::json::parse(run("eval --vector " + vec + " --weights product:1 --criterion K").out);
  CHECK(k["value"].get<double>() == -2.0);
  CHECK(std::stod(run("bound --kind cbc_K --b 2 --m 2 --d 1 --weights product:1").out) == 2.0);
  CHECK(run("eval --vector /nonexistent --criterion K").code != 0);
}

TEST_CASE("points export") {
  const auto vec = temp("polylat_cli_vec2.txt");
  std::ofstream(vec) << "2 2 7 1 2\n";
  const auto out = temp("polylat_cli_points.txt");
  CHECK(run("points --vector " + vec + " --format rational --out " + out).code == 0);
  CHECK(slurp(out) == "0/4 0/4\n1/4 3/4\n3/4 2/4\n2/4 1/4\n");
}

TEST_CASE("convergence output is reproducible") {
  const auto a = run("convergence --b 2 --d 10 --m 4:8 --alpha 1.5,2 --weights product:j^-2");
  const auto b = run("convergence --b 2 --d 10 --m 4:8 --alpha 1.5,2 --weights product:j^-2");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("m,N,alg1_alpha1.5,alg1_alpha2\n", 0) == 0);
  const auto j = nlohmann::json::parse(run("convergence --b 2 --d 5 --m 4:6 --alpha 2 --format json").out);
  CHECK(j.is_array());
  CHECK(j[0]["m"] == 4);
  CHECK(j[0]["N"] == 16);
}

TEST_CASE("bench runs") {
  const auto r = run("bench --b 2 --m 4,6 --d 1,2 --reps 1 --min-seconds 0");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("m,d,seconds,ratio_m_plus_2,ratio_2d\n", 0) == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  const auto first = line.find(',');
  const auto second = line.find(',', first + 1);
  CHECK(std::stod(line.substr(second + 1)) > 0.0);
}

TEST_CASE("bench grids accept stepped ranges") {
  const auto r = run("bench --b 2 --m 4:8:2 --d 1 --reps 1 --min-seconds 0");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::vector<std::string> ms;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) ms.push_back(line.substr(0, line.find(',')));
  CHECK(ms == std::vector<std::string>{"4", "6", "8"});
  CHECK(run("bench --m 4:x --d 1").code == 2);
  CHECK(run("convergence --m 4:6:1 --d 3").code == 2);
}
