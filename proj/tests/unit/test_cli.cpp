#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "glmev/csv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "glmev_test_cli";

// Runs the CLI with stdout captured to out.txt; returns the exit status.
int run(const std::string& args) {
  const std::string cmd = std::string(GLMEV_CLI_PATH) + " " + args + " > " + (kWork / "out.txt").string() +
                          " 2> " + (kWork / "err.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out() { return glmev::read_text_file(kWork / "out.txt"); }

std::string p(const char* name) { return (kWork / name).string(); }

struct Workspace {
  Workspace() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    REQUIRE(run("simulate --n 120 --p 6 --q-true 2 --seed 3 --out " + p("sim")) == 0);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Workspace, "simulate writes design, response and truth") {
  CHECK(fs::exists(kWork / "sim" / "design.csv"));
  CHECK(fs::exists(kWork / "sim" / "response.csv"));
  const auto truth = json::parse(glmev::read_text_file(kWork / "sim" / "truth.json"));
  CHECK(truth.at("J0") == json::array({1, 2}));
  CHECK(truth.at("seed") == 3);
  CHECK(truth.at("beta0").size() == 6);
}

TEST_CASE_FIXTURE(Workspace, "fit and evidence print JSON") {
  const std::string data = "--data " + p("sim/design.csv") + " --response " + p("sim/response.csv");
  REQUIRE(run("fit " + data + " --model 1,2") == 0);
  const auto fit = json::parse(out());
  CHECK(fit.at("converged") == true);
  CHECK(fit.at("beta_hat").size() == 2);

  REQUIRE(run("evidence " + data + " --model 1,2 --method laplace") == 0);
  const double lap = json::parse(out()).at("log_value");
  REQUIRE(run("evidence " + data + " --model 1,2 --method quad") == 0);
  const double quad = json::parse(out()).at("log_value");
  CHECK(std::abs(lap - quad) < 0.1);
  REQUIRE(run("evidence " + data + " --model 1,2 --method mc --B 5000 --seed 4 --mc-replicates 2") == 0);
  const auto mc = json::parse(out());
  CHECK(mc.at("estimates").size() == 2);
  CHECK(mc.at("spread") >= 0.0);
}

TEST_CASE_FIXTURE(Workspace, "scan writes a scores table") {
  const std::string data = "--data " + p("sim/design.csv") + " --response " + p("sim/response.csv");
  REQUIRE(run("scan " + data + " --q 2 --gamma 1 --out " + p("scores.csv")) == 0);
  CHECK(json::parse(out()).at("best") == "1;2");
  const auto rows = glmev::split_csv(glmev::read_text_file(kWork / "scores.csv"));
  REQUIRE(rows.size() == 23);
  CHECK(rows[0] == std::vector<std::string>{"model", "size", "log_score", "status"});
  CHECK(rows[1][0].empty());
  CHECK(rows[1][1] == "0");
}

TEST_CASE_FIXTURE(Workspace, "check-lemmas succeeds with zero violations") {
  REQUIRE(run("check-lemmas") == 0);
  const auto rep = json::parse(out());
  CHECK(rep.at("chisq_tail").at("violations") == 0);
  CHECK(rep.at("radial_integral").at("violations") == 0);
}

TEST_CASE_FIXTURE(Workspace, "check-assumptions reports estimates") {
  const std::string data = "--data " + p("sim/design.csv") + " --response " + p("sim/response.csv");
  REQUIRE(run("check-assumptions " + data + " --q 1 --radius 3 --seed 2 --truth " + p("sim/truth.json")) == 0);
  const auto rep = json::parse(out());
  CHECK(rep.at("c_lower_hat") > 0.0);
  CHECK(rep.at("c_lower_hat") <= rep.at("c_upper_hat"));
  CHECK(rep.contains("sandwich_ok"));
}

TEST_CASE_FIXTURE(Workspace, "exit codes") {
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("fit --data " + p("missing.csv") + " --response " + p("sim/response.csv")) == 1);
  CHECK(run("fit --data " + p("sim/design.csv") + " --response " + p("sim/response.csv") + " --model 9") == 1);
  glmev::write_text_file(kWork / "bad_y.csv", "2\n0\n1\n");
  glmev::write_text_file(kWork / "small_X.csv", "1\n2\n3\n");
  CHECK(run("fit --data " + p("small_X.csv") + " --response " + p("bad_y.csv")) == 1);
  // Separated data: numeric failure.
  glmev::write_text_file(kWork / "sep_X.csv", "-0.5\n0.5\n-0.5\n0.5\n");
  glmev::write_text_file(kWork / "sep_y.csv", "0\n1\n0\n1\n");
  CHECK(run("fit --data " + p("sep_X.csv") + " --response " + p("sep_y.csv") + " --model 1") == 2);
}

TEST_CASE_FIXTURE(Workspace, "experiments honour config files and flag overrides") {
  glmev::write_text_file(kWork / "le.conf",
                         "n_values = 30\nq_values = 1\nreplicates = 2\nB = 200\np = 4\nseed = 9\n");
  REQUIRE(run("experiment laplace-error --config " + p("le.conf") + " --out " + p("le") + " --svg") == 0);
  const auto rows = glmev::split_csv(glmev::read_text_file(kWork / "le" / "laplace_error.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == "30");
  CHECK(rows[1][1] == "4");
  CHECK(fs::exists(kWork / "le" / "figure1.csv"));
  CHECK(fs::exists(kWork / "le" / "figure1.svg"));
  const auto first = glmev::read_text_file(kWork / "le" / "laplace_error.csv");

  REQUIRE(run("experiment laplace-error --config " + p("le.conf") + " --replicates 3 --workers 2 --out " + p("le2")) == 0);
  const auto second = glmev::read_text_file(kWork / "le2" / "laplace_error.csv");
  CHECK(glmev::split_csv(second).size() == 4);
  // Replicate seeds depend only on (n, q, replicate), so the shorter run is a prefix.
  CHECK(second.rfind(first, 0) == 0);

  glmev::write_text_file(kWork / "co.conf", "n_values = 50\nreplicates = 2\nB = 200\nbayes_n_values = 50\n");
  REQUIRE(run("experiment consistency --config " + p("co.conf") + " --out " + p("co")) == 0);
  CHECK(fs::exists(kWork / "co" / "consistency.csv"));
  CHECK(fs::exists(kWork / "co" / "consistency_bayes.csv"));
  CHECK(fs::exists(kWork / "co" / "recovery.csv"));

  glmev::write_text_file(kWork / "bad.conf", "nonsense = 1\n");
  CHECK(run("experiment laplace-error --config " + p("bad.conf") + " --out " + p("bad")) == 1);
}
