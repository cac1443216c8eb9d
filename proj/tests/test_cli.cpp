#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hdoa/csv.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HDOA_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hdoa_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

TEST_CASE("configuration errors exit with 2") {
  CHECK(run("crlb --no-such-flag").status == 2);
  CHECK(run("crlb --sweep bits=3,3").status == 2);
  CHECK(run("crlb --kappa 0.3").status == 2);
  CHECK(run("crlb --theta0-deg 90").status == 2);
  CHECK(run("").status == 2);
  CHECK(run("crlb --config /nonexistent/file.ini").status == 2);
}

TEST_CASE("version and help") {
  CHECK(run("--version").status == 0);
  const Run h = run("--help");
  CHECK(h.status == 0);
  CHECK(h.out.find("mc") != std::string::npos);
}

TEST_CASE("ploss in the ideal limit") {
  const Run r = run("ploss --ma 1 --kappa 1 --sweep bits=1:8:1");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("# command=ploss") != std::string::npos);
  const std::string body = hdoa::csv_body(r.out);
  std::istringstream lines(body);
  std::string header;
  std::getline(lines, header);
  CHECK(header.find("eta_pl") != std::string::npos);
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 8);
}

TEST_CASE("config file values are overridden by flags") {
  const auto cfg = scratch("cfg.ini");
  const auto out_a = scratch("a.csv");
  const auto out_b = scratch("b.csv");
  {
    std::ofstream f(cfg);
    f << "m=32\nma=2\nkappa=0.5\nbits=2\n";
  }
  REQUIRE(run("crlb --config " + cfg.string() + " --out " + out_a.string()).status == 0);
  REQUIRE(run("crlb --config " + cfg.string() + " --bits 4 --out " + out_b.string()).status == 0);
  const std::string a = slurp(out_a);
  const std::string b = slurp(out_b);
  CHECK(a.find("# m=32") != std::string::npos);
  CHECK(a.find("# bits=2") != std::string::npos);
  CHECK(b.find("# bits=4") != std::string::npos);
  CHECK(b.find("# kappa=0.5") != std::string::npos);
  std::filesystem::remove(cfg);
  std::filesystem::remove(out_a);
  std::filesystem::remove(out_b);
}

TEST_CASE("ee and validate subcommands") {
  CHECK(run("ee --ma 1 --kappa 0 --sweep bits=1:12:1").status == 0);
  CHECK(run("validate --point --m 32 --ma 2 --kappa 0.5 --bits 2 --snr-db 10 --theta0-deg 45")
            .status == 0);
}

TEST_CASE("mc output is independent of the thread count") {
  const std::string args = "mc --m 16 --ma 2 --kappa 1 --trials 100 --seed 9 --sweep snr_db=0,10";
  const Run one = run(args + " --threads 1");
  const Run four = run(args + " --threads 4");
  REQUIRE(one.status == 0);
  REQUIRE(four.status == 0);
  CHECK(hdoa::csv_body(one.out) == hdoa::csv_body(four.out));
  CHECK(one.out != four.out);  // metadata records the thread count
}
