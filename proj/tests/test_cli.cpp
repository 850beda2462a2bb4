#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

std::string tool() {
    const char* t = std::getenv("CEVRP_TOOL");
    REQUIRE_MESSAGE(t != nullptr, "CEVRP_TOOL must point at the cevrp binary");
    return t;
}

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("cevrp_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct CmdResult {
    int exit_code;
    std::string output;
};

CmdResult run_cmd(const std::string& args) {
    const fs::path out_file = work_dir() / "cmd_output.txt";
    const std::string cmd = tool() + " " + args + " >" + out_file.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream buf;
    buf << in.rdbuf();
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, buf.str()};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const std::string kE22 = cevrp_test::instance_path("E-n22-k4");
const std::string kE51 = cevrp_test::instance_path("E-n51-k5");

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run_cmd("--help").exit_code == 0);
    CHECK(run_cmd("solve --help").exit_code == 0);
    CHECK(run_cmd("").exit_code != 0);                           // subcommand required
    CHECK(run_cmd("solve").exit_code != 0);                      // --instance required
    CHECK(run_cmd("solve --instance x --bogus-flag 1").exit_code != 0);
    CHECK(run_cmd("solve --instance x --selector nope").exit_code != 0);
    CHECK(run_cmd("solve --instance /does/not/exist.evrp").exit_code == 1);
}

TEST_CASE("solve writes solution and record files and reports fitness") {
    const fs::path out = work_dir() / "solve";
    CmdResult r = run_cmd("solve --instance " + kE22 +
                          " --seed 3 --budget-scale 0.002 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("FITNESS: ") != std::string::npos);
    CHECK(r.output.find("EVALUATIONS: 1050") != std::string::npos);  // 25000*0.002*21

    const fs::path sol = out / "E-n22-k4_ts_3.sol";
    const fs::path json = out / "E-n22-k4_ts_3.json";
    REQUIRE(fs::exists(sol));
    REQUIRE(fs::exists(json));
    CHECK(read_file(sol).find("FITNESS: ") != std::string::npos);

    SUBCASE("the produced solution validates cleanly") {
        CmdResult v = run_cmd("validate --instance " + kE22 + " --solution " + sol.string());
        CHECK(v.exit_code == 0);
        CHECK(v.output.find("OK") != std::string::npos);
    }
    SUBCASE("a tampered fitness line fails validation") {
        const fs::path bad = work_dir() / "tampered_fitness.sol";
        std::string text = read_file(sol);
        text = text.substr(0, text.find("FITNESS: ")) + "FITNESS: 1.0\n";
        std::ofstream(bad) << text;
        CmdResult v = run_cmd("validate --instance " + kE22 + " --solution " + bad.string());
        CHECK(v.exit_code == 3);
        CHECK(v.output.find("FITNESS MISMATCH") != std::string::npos);
    }
    SUBCASE("a tampered tour fails validation") {
        const fs::path bad = work_dir() / "tampered_tour.sol";
        std::string text = read_file(sol);
        // drop one customer visit: file ids 2.. are customers; remove "2,"
        auto pos = text.find(",2,");
        REQUIRE(pos != std::string::npos);
        text.erase(pos, 2);
        std::ofstream(bad) << text;
        CmdResult v = run_cmd("validate --instance " + kE22 + " --solution " + bad.string());
        CHECK(v.exit_code == 3);
        CHECK(v.output.find("MissingCustomer") != std::string::npos);
    }
    SUBCASE("identical seed reproduces the identical solution file") {
        const fs::path out2 = work_dir() / "solve_again";
        CmdResult r2 = run_cmd("solve --instance " + kE22 +
                               " --seed 3 --budget-scale 0.002 --out " + out2.string());
        REQUIRE(r2.exit_code == 0);
        CHECK(read_file(out2 / "E-n22-k4_ts_3.sol") == read_file(sol));
    }
    SUBCASE("route plot renders every node marker") {
        const fs::path pout = work_dir() / "plot";
        CmdResult p = run_cmd("plot --kind route --instance " + kE22 + " --solution " +
                              sol.string() + " --out " + pout.string());
        REQUIRE(p.exit_code == 0);
        std::string svg = read_file(pout / "route.svg");
        auto count = [&](const std::string& needle) {
            size_t n = 0;
            for (size_t pos = svg.find(needle); pos != std::string::npos;
                 pos = svg.find(needle, pos + 1))
                ++n;
            return n;
        };
        CHECK(count("class=\"customer\"") == 21);
        CHECK(count("class=\"station\"") == 8);
        CHECK(count("class=\"depot\"") == 1);
    }
    SUBCASE("trace plot consumes the run record json") {
        const fs::path pout = work_dir() / "plot_trace";
        CmdResult p = run_cmd("plot --kind trace --record " + json.string() + " --out " +
                              pout.string());
        REQUIRE(p.exit_code == 0);
        CHECK(read_file(pout / "trace.svg").find("<svg") != std::string::npos);
    }
}

TEST_CASE("CEVRP_SEED environment variable is the seed fallback") {
    const fs::path out = work_dir() / "env_seed";
    const std::string prefix = "CEVRP_SEED=77 ";
    const fs::path out_file = work_dir() / "env_out.txt";
    const std::string cmd = prefix + tool() + " solve --instance " + kE22 +
                            " --budget-scale 0.002 --out " + out.string() + " >" +
                            out_file.string() + " 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out / "E-n22-k4_ts_77.sol"));
}

TEST_CASE("config file sets parameters, flags override") {
    const fs::path cfg = work_dir() / "run.cfg";
    std::ofstream(cfg) << "selector=eg\nseed=9\nbudget_scale=0.002\n";
    const fs::path out = work_dir() / "config_run";
    CmdResult r = run_cmd("solve --instance " + kE22 + " --config " + cfg.string() +
                          " --out " + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(out / "E-n22-k4_eg_9.sol"));

    const fs::path out2 = work_dir() / "config_override";
    CmdResult r2 = run_cmd("solve --instance " + kE22 + " --config " + cfg.string() +
                           " --selector ucb1 --out " + out2.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(fs::exists(out2 / "E-n22-k4_ucb1_9.sol"));

    std::ofstream(cfg, std::ios::app) << "nonsense_key=1\n";
    CHECK(run_cmd("solve --instance " + kE22 + " --config " + cfg.string()).exit_code != 0);
}

TEST_CASE("bench aggregates runs into stats.csv and rank consumes it") {
    const fs::path out = work_dir() / "bench";
    CmdResult r = run_cmd("bench --instance " + kE22 + " --runs 3 --jobs 3 --seed 1 " +
                          "--budget-scale 0.002 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(out / "stats.csv"));
    std::string csv = read_file(out / "stats.csv");
    CHECK(csv.rfind("instance,selector,min,mean,std,runs\n", 0) == 0);
    CHECK(csv.find("E-n22-k4,ts,") != std::string::npos);
    CHECK(csv.find(",3\n") != std::string::npos);
    // one record json per run
    CHECK(fs::exists(out / "E-n22-k4_ts_1.json"));
    CHECK(fs::exists(out / "E-n22-k4_ts_3.json"));

    SUBCASE("rank over the bundled reference table") {
        const fs::path rout = work_dir() / "rank";
        CmdResult rr = run_cmd("rank --stats " + cevrp_test::data_path("reference_means.csv") +
                               " --algos HHASA_TS,HHASA_UCB1,HHASA_EG,HHASA --h-rates " +
                               cevrp_test::data_path("h_rates.csv") + " --out " + rout.string());
        REQUIRE(rr.exit_code == 0);
        std::string ranks = read_file(rout / "ranks.csv");
        CHECK(ranks.find("HHASA_TS,1.882352941,control") != std::string::npos);
        CHECK(fs::exists(rout / "energy.csv"));
        CHECK(rr.output.find("friedman_chi2=") != std::string::npos);
    }
    SUBCASE("rank with a subset expression") {
        const fs::path rout = work_dir() / "rank_subset";
        CmdResult rr = run_cmd("rank --stats " + cevrp_test::data_path("reference_means.csv") +
                               " --algos HHASA_TS,HHASA_UCB1,HHASA_EG,BACO,VNS,SA,GRASP,GA" +
                               " --subset \">=E101\" --out " + rout.string());
        REQUIRE(rr.exit_code == 0);
        CHECK(read_file(rout / "ranks.csv").find("HHASA_TS,1.727272727,control") !=
              std::string::npos);
        CHECK(run_cmd("rank --stats " + cevrp_test::data_path("reference_means.csv") +
                      " --subset bad --out " + rout.string())
                  .exit_code == 1);
    }
}
