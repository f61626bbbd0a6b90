// Runs the built command-line tool and inspects its output and exit codes.
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(DESCENTLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("descentlab_cli_test_" + name);
}

}  // namespace

TEST_CASE("pmf output") {
  const Run r = run("pmf --n 3");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "n,d,dprime,prob\n"
        "3,0,0,0.16666666666666666\n3,0,1,0\n3,0,2,0\n"
        "3,1,0,0\n3,1,1,0.66666666666666663\n3,1,2,0\n"
        "3,2,0,0\n3,2,1,0\n3,2,2,0.16666666666666666\n");
  const Run j = run("--format json pmf --n 2");
  CHECK(j.out ==
        "[{\"n\":2,\"d\":0,\"dprime\":0,\"prob\":0.5},{\"n\":2,\"d\":0,\"dprime\":1,\"prob\":0},"
        "{\"n\":2,\"d\":1,\"dprime\":0,\"prob\":0},{\"n\":2,\"d\":1,\"dprime\":1,\"prob\":0.5}]\n");
}

TEST_CASE("rate output") {
  const Run r = run("rate --x 0.5");
  CHECK(r.code == 0);
  CHECK(r.out == "{\"x\":0.5,\"t_x\":0,\"rate\":0,\"sigma2\":0.083333333333333329}\n");
  const Run c = run("rate --curve 0.6:0.8:0.1");
  CHECK(c.code == 0);
  CHECK(c.out.rfind("x,t_x,rate,sigma2\n0.59999999999999998,", 0) == 0);
  CHECK(count_lines(c.out) == 4);
  const Run edge = run("rate --x 1");
  CHECK(edge.code == 0);
  CHECK(edge.out == "{\"x\":1,\"t_x\":null,\"rate\":null,\"sigma2\":null}\n");
  CHECK(run("rate --x 1.5").code == 1);
  CHECK(run("rate").code == 1);
  CHECK(run("rate --curve 0.6:0.8").code == 1);
}

TEST_CASE("laplace output") {
  const Run r = run("laplace --n 3 --t 1 --s -0.5");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("{\"n\":3,\"t\":1,\"s\":-0.5,\"method\":\"closed\",\"value\":", 0) == 0);
  const Run e = run("laplace --n 3 --t 1 --s -0.5 --method exact");
  const auto value = [](const std::string& s) {
    const auto at = s.find("\"value\":") + 8;
    return std::stod(s.substr(at, s.find(',', at) - at));
  };
  CHECK(value(r.out) == doctest::Approx(value(e.out)).epsilon(1e-12));
  CHECK(run("laplace --n 3 --t 1 --s 0.5 --method axis").code == 1);
  CHECK(run("laplace --n 3 --t 1 --method bogus").code == 1);
}

TEST_CASE("tails output") {
  const Run r = run("tails --n 32,64 --x 0.7 --y 0.7");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n,x,y,quadrant,exact,sldp,mc,mc_stderr,ratio_exact_sldp\n32,0.69999999999999996,", 0) == 0);
  CHECK(count_lines(r.out) == 3);
  CHECK(r.out.find(",,,") != std::string::npos);  // mc columns left empty
  CHECK(run("tails --n 32 --x 0.7 --y 0.7 --method mc").code == 1);  // needs --seed
  const Run mc = run("--seed 5 tails --n 16 --x 0.6 --y 0.6 --method mc --mc-reps 2000");
  CHECK(mc.code == 0);
  CHECK(run("tails --n 32 --x 0.3 --y 0.7").code == 1);
  CHECK(run("tails --n 5000 --x 0.7 --y 0.7 --method exact").code == 3);
}

TEST_CASE("simulate output and determinism") {
  const Run a = run("--seed 9 simulate --n 50 --reps 5");
  CHECK(a.code == 0);
  CHECK(a.out.rfind("replica,n,d,dprime\n0,50,", 0) == 0);
  CHECK(count_lines(a.out) == 6);
  CHECK(run("simulate --n 50 --reps 5 --seed 9").out == a.out);
  CHECK(run("--seed 10 simulate --n 50 --reps 5").out != a.out);
  CHECK(run("simulate --n 50").code == 1);
}

TEST_CASE("output is identical across thread counts") {
  CHECK(run("--threads 1 pmf --n 40").out == run("--threads 3 pmf --n 40").out);
  const std::string lim = "--seed 4 limit --check clt --n 200 --reps 2000";
  CHECK(run("--threads 1 " + lim).out == run("--threads 4 " + lim).out);
  CHECK(run(lim, "DESCENTLAB_THREADS=2").out == run("--threads 1 " + lim).out);
  CHECK(run("--threads 0 pmf --n 3").code == 1);
}

TEST_CASE("limit reports") {
  const Run clt = run("--seed 1 limit --check clt --n 300 --reps 3000");
  CHECK(clt.code == 0);
  CHECK(clt.out.find("\"check\":\"clt\"") != std::string::npos);
  CHECK(clt.out.find("\"std_error\":[[") != std::string::npos);
  CHECK(clt.out.find("\"pass\":true") != std::string::npos);
  const Run lil = run("--seed 1 limit --check lil --n 5000");
  CHECK(lil.code == 0);
  CHECK(lil.out.find("\"report_only\":true") != std::string::npos);
  CHECK(lil.out.find("\"reference\":0.16666666666666666") != std::string::npos);
  const Run sum = run("--seed 1 limit --check sumclt --n 300 --reps 3000");
  CHECK(sum.out.find("\"target\":0.16666666666666666") != std::string::npos);
  CHECK(run("limit --check clt").code == 1);
  CHECK(run("--seed 1 limit --check nope").code == 1);
}

TEST_CASE("validate exit codes") {
  const Run ok = run("validate --suite thm21 --max-n 6");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  CHECK(run("validate --suite eulerian --max-n 64").code == 0);
  CHECK(run("validate --suite thm21 --max-n 12").code == 3);
  CHECK(run("validate --suite unknown").code == 1);
}

TEST_CASE("usage errors leave no partial output file") {
  const auto path = temp_path("partial.csv");
  std::filesystem::remove(path);
  CHECK(run("--out " + path.string() + " pmf --n 3 --bogus").code == 1);
  CHECK(!std::filesystem::exists(path));
  CHECK(run("--out " + path.string() + " tails --n 5000 --x 0.7 --y 0.7 --method exact").code == 3);
  CHECK(!std::filesystem::exists(path));
  CHECK(run("--out " + path.string() + " pmf --n 2").code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == run("pmf --n 2").out);
  std::filesystem::remove(path);
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
}
