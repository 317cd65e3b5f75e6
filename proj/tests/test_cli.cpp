#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlrlda/dataset.hpp"
#include "nlrlda/synth.hpp"

using namespace nlrlda;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() / ("nlrlda_cli_" + std::to_string(std::rand()));
        fs::create_directories(dir);
    }
    ~TempDir() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(NLRLDA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_data_rows(const std::string& csv) {
    std::stringstream ss(csv);
    std::string line;
    int rows = 0;
    bool seen_header = false;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            seen_header = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

void write_training_csv(const std::string& path, Eigen::Index p, Eigen::Index per_class) {
    const PopulationModel pop = make_population(CovModel::model1, p, 5.0);
    RngStream rng(2027, 0);
    write_csv(sample_gaussian(pop, per_class, per_class, rng), path);
}

}  // namespace

TEST_CASE("cli: train then predict reproduces in-sample labels deterministically") {
    TempDir tmp;
    const std::string data = tmp.path("train.csv");
    write_training_csv(data, 12, 25);

    const std::string model = tmp.path("model.json");
    REQUIRE(run_cli("train --data " + data + " --model " + model) == 0);
    REQUIRE(fs::exists(model));

    const std::string pred1 = tmp.path("pred1.csv");
    const std::string pred2 = tmp.path("pred2.csv");
    REQUIRE(run_cli("predict --data " + data + " --model " + model + " --out " + pred1) == 0);
    REQUIRE(run_cli("predict --data " + data + " --model " + model + " --out " + pred2) == 0);
    CHECK(slurp(pred1) == slurp(pred2));
    CHECK(count_data_rows(slurp(pred1)) == 50);
    CHECK(slurp(pred1).rfind("index,score,label", 0) == 0);
}

TEST_CASE("cli: predict with mismatched feature count exits nonzero") {
    TempDir tmp;
    const std::string data = tmp.path("train.csv");
    write_training_csv(data, 8, 20);
    const std::string model = tmp.path("model.json");
    REQUIRE(run_cli("train --data " + data + " --model " + model) == 0);

    const std::string other = tmp.path("wrong_dim.csv");
    write_training_csv(other, 9, 4);
    CHECK(run_cli("predict --data " + other + " --model " + model + " --out " +
                  tmp.path("pred.csv")) == 2);
}

TEST_CASE("cli: sweep emits 21 rows on the default grid") {
    TempDir tmp;
    const std::string out = tmp.path("sweep.csv");
    REQUIRE(run_cli("sweep --p 40 --n 50 --nu2 0.5 --seed 3 --out " + out) == 0);
    const std::string csv = slurp(out);
    CHECK(count_data_rows(csv) == 21);
    CHECK(csv.find("gamma,eps_hat,eps0_hat,eps1_hat,degenerate_flag") != std::string::npos);
}

TEST_CASE("cli: missing input file exits 2") {
    TempDir tmp;
    CHECK(run_cli("train --data " + tmp.path("nope.csv") + " --model " + tmp.path("m.json")) == 2);
    CHECK(run_cli("predict --data x --model y") == 2);  // missing required --out
}

TEST_CASE("cli: degenerate training data exits 3") {
    TempDir tmp;
    const std::string data = tmp.path("degenerate.csv");
    {
        std::ofstream out(data);
        out << "f0,f1,label\n";
        // Identical class means: m0 == m1, every grid point degenerates.
        out << "1,0,0\n2,1,0\n3,0,0\n";
        out << "1,0,1\n2,1,1\n3,0,1\n";
    }
    CHECK(run_cli("train --data " + data + " --model " + tmp.path("m.json")) == 3);
}

TEST_CASE("cli: determinism of profile reports across reruns") {
    TempDir tmp;
    const std::string out1 = tmp.path("p1.csv");
    const std::string out2 = tmp.path("p2.csv");
    const std::string args =
        "profile --p 10 --n 20 --nu2 5 --trials 6 --seed 42 --test-size 200 --out ";
    REQUIRE(run_cli(args + out1) == 0);
    REQUIRE(run_cli(args + out2) == 0);
    auto strip = [](const std::string& text) {
        std::stringstream ss(text), kept;
        std::string line;
        while (std::getline(ss, line))
            if (line.rfind("# wall_clock_s=", 0) != 0) kept << line << '\n';
        return kept.str();
    };
    CHECK(strip(slurp(out1)) == strip(slurp(out2)));
}

TEST_CASE("cli: config file supplies flags, command line overrides") {
    TempDir tmp;
    const std::string cfg = tmp.path("run.cfg");
    {
        std::ofstream out(cfg);
        out << "p = 10\n";
        out << "n = 24\n";
        out << "nu2 = 5\n";
        out << "trials = 4\n";
        out << "seed = 9\n";
        out << "test-size = 100\n";
    }
    const std::string out1 = tmp.path("c1.csv");
    const std::string out2 = tmp.path("c2.csv");
    REQUIRE(run_cli("profile --config " + cfg + " --out " + out1) == 0);
    // Same run spelled out fully on the command line.
    REQUIRE(run_cli("profile --p 10 --n 24 --nu2 5 --trials 4 --seed 9 --test-size 100 --out " +
                    out2) == 0);
    auto strip = [](const std::string& text) {
        std::stringstream ss(text), kept;
        std::string line;
        while (std::getline(ss, line))
            if (line.rfind("# wall_clock_s=", 0) != 0) kept << line << '\n';
        return kept.str();
    };
    CHECK(strip(slurp(out1)) == strip(slurp(out2)));

    // CLI --seed beats the config value; the report hash must change.
    const std::string out3 = tmp.path("c3.csv");
    REQUIRE(run_cli("profile --config " + cfg + " --seed 10 --out " + out3) == 0);
    CHECK(strip(slurp(out3)) != strip(slurp(out1)));
}

TEST_CASE("cli: montecarlo and consistency subcommands produce reports") {
    TempDir tmp;
    const std::string mc = tmp.path("mc.csv");
    REQUIRE(run_cli("montecarlo --p 10 --n 30 --nu2 5 --trials 3 --seed 2 --test-size 100 "
                    "--n-grid 30,60 --methods NL,Bayes --out " +
                    mc) == 0);
    CHECK(count_data_rows(slurp(mc)) == 4);  // 2 methods x 2 sizes
    CHECK(slurp(mc).find("method,n,mean_error") != std::string::npos);

    const std::string cons = tmp.path("cons.csv");
    REQUIRE(run_cli("consistency --p 10 --n 24 --nu2 5 --trials 3 --seed 2 --test-size 100 "
                    "--scales 1,2 --out " +
                    cons) == 0);
    CHECK(count_data_rows(slurp(cons)) == 2);
    CHECK(fs::exists(tmp.path("cons_gamma_hist.csv")));
}

TEST_CASE("cli: asymptotic subcommand writes the documented columns") {
    TempDir tmp;
    const std::string out = tmp.path("asym.csv");
    REQUIRE(run_cli("asymptotic --p 30 --n 60 --nu2 5 --gamma-grid 0.1,1,10 --out " + out) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.find("gamma,G_tilde_0,G_tilde_1,D_tilde,eps_bar") != std::string::npos);
    CHECK(count_data_rows(csv) == 3);
}
