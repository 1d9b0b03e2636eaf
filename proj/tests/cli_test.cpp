#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FOPKIT_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const char* name) { return std::string(FOPKIT_DATA) + "/" + name; }

std::string temp_file(const char* name, const std::string& text) {
  const std::string path = std::string(FOPKIT_TMP) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("eval") {
  const std::string k3 = temp_file(
      "k3.st", "structure K : graph { size = 3  E = { (0,1) (1,0) (0,2) (2,0) (1,2) (2,1) } }\n");
  const std::string c5 = temp_file(
      "c5.st",
      "structure C : graph { size = 5  E = { (0,1) (1,0) (1,2) (2,1) (2,3) (3,2) (3,4) (4,3) "
      "(0,4) (4,0) } }\n");
  Run r = run("eval " + k3 + " -e 'forall x forall y (x != y -> E(x,y))'");
  CHECK(r.code == 0);
  CHECK(r.out == "true\n");
  r = run("eval " + c5 + " -e 'exists x E(x,x)'");
  CHECK(r.code == 1);
  CHECK(r.out == "false\n");
  CHECK(run("eval " + c5 + " -e 'exists x (E(x,x)'").code == 2);
  CHECK(run("eval " + c5 + " " + data("toy.so")).code <= 1);
}

TEST_CASE("decide") {
  Run r = run("decide 2cc " + data("c5.graph"));
  CHECK(r.code == 1);
  CHECK(r.out == "reject\n");
  r = run("decide qsat2 " + data("reference.qdnf"));
  CHECK(r.code == 0);
  CHECK(r.out.rfind("accept\ntrue_existential {", 0) == 0);
  std::string edges;
  for (int i = 0; i < 25; ++i) edges += "(" + std::to_string(i) + "," + std::to_string((i + 1) % 25) + ") ";
  const std::string c25 = temp_file("c25.graph", "graph C { n = 25 ; edges = { " + edges + "} }\n");
  CHECK(run("decide 2cc " + c25).code == 3);
  CHECK(run("decide 2cc " + c25 + " --search-budget 26").code == 1);
  CHECK(run("decide 3col " + data("c5.graph")).code == 2);
  CHECK(run("decide 2cc /nonexistent").code == 2);
}

TEST_CASE("reduce") {
  Run r = run("reduce qsat2-2cc " + data("reference.qdnf") + " --emit instance");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("graph G { n = 24 ;", 0) == 0);
  r = run("reduce pad-2cc:7 " + data("p3.graph") + " --emit instance");
  CHECK(r.out.rfind("graph G { n = 12 ;", 0) == 0);
  r = run("reduce qsat2-qunsat2 --emit fop");
  CHECK(r.code == 0);
  CHECK(r.out.find("E = E(x1) ;") != std::string::npos);
  CHECK(r.out.find("P = M(x1, y1) ;") != std::string::npos);
  CHECK(r.out.find("N = Q(x1, y1) ;") != std::string::npos);
  r = run("reduce qsat2-2cc " + data("reference.qdnf"));
  CHECK(r.out.find("size = 24") != std::string::npos);
  CHECK(run("reduce qsat2-2cc " + data("c5.graph")).code == 2);
}

TEST_CASE("verify") {
  Run r = run("verify qsat2-qunsat2 --sizes 2");
  CHECK(r.code == 0);
  CHECK(r.out == "reduction=qsat2-qunsat2 sizes=2 instances=1024 agreements=1024 counterexamples=0\n");
  r = run("verify qsat2-qunsat2 --sizes 1 --format tsv");
  CHECK(r.out.rfind("size\tindex\tsource\ttarget\tagree\n1\t0\t", 0) == 0);
  CHECK(r.out.find("# reduction=qsat2-qunsat2 sizes=1 instances=8 agreements=8") != std::string::npos);
  CHECK(run("verify qsat2-qunsat2 --sizes 1 --format tsv").out == r.out);
  r = run("verify qunsat2-unique --fidelity verbatim --projection");
  CHECK(r.code == 1);
  CHECK(r.out.find("exclusivity=fail") != std::string::npos);
  CHECK(run("verify qunsat2-unique --projection").code == 0);
  CHECK(run("verify nope").code == 2);
}

TEST_CASE("compile and universality") {
  Run r = run("compile " + data("toy.so") + " --vocab graph");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("fop compiled : graph -> dnf {", 0) == 0);
  CHECK(r.out.find("# verify sizes=2 instances=16 agreements=16 counterexamples=0\n# pass\n") !=
        std::string::npos);
  r = run("universality --problem 2cc --n 3 --k 1 --mmax 5");
  CHECK(r.code == 0);
  CHECK(r.out.find("\npass\n") != std::string::npos);
  r = run("universality check --problem 2cc-c --n 2 --k 1 --mmax 4");
  CHECK(r.code == 1);
  CHECK(r.out.find("fail m=2 E(0,1)") != std::string::npos);
}

TEST_CASE("witness") {
  Run r = run("witness --problem 2cc --m 3 --conds '!E(0,1)'");
  CHECK(r.code == 0);
  CHECK(r.out == "# red = { 2 }\ngraph W { n = 3 ; edges = { (0,2) (1,2) } }\n");
  r = run("witness --problem 2cc-c --m 5");
  CHECK(r.out == "graph W { n = 5 ; edges = { (0,1) (0,4) (1,2) (2,3) (3,4) } }\n");
  CHECK(run("witness --problem 2cc --m 2 --conds 'E(0,1) !E(0,1)'").code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("--format xml verify qsat2-qunsat2").code == 2);
  CHECK(run("--help").code == 0);
}
