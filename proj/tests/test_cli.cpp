#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int col(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("hybridcorr_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(HYBRIDCORR_BIN) + " " + args;
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Csv parse_csv(const fs::path& p) {
    Csv out;
    std::istringstream all(slurp(p));
    std::string line;
    bool first = true;
    while (std::getline(all, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (first) {
            out.header = cells;
            first = false;
        } else {
            std::vector<double> row;
            for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
            out.rows.push_back(row);
        }
    }
    return out;
}

} // namespace

TEST_CASE("correlations point run emits the documented columns") {
    const fs::path out = scratch_dir() / "corr.csv";
    const int rc =
        run("correlations --set p=0.5 --set r_abs=0.5 --set beta_re=4 "
            "--set dim=200 --out " + out.string());
    CHECK(rc == 0);
    const Csv csv = parse_csv(out);
    const std::vector<std::string> want = {
        "p",
        "r_abs",
        "r_arg",
        "beta_re",
        "beta_im",
        "nbar",
        "dim",
        "purity_b0",
        "negativity",
        "negativity_asymptote",
        "geometric_discord",
        "geometric_discord_asymptote",
        "dz_digitalized",
        "trace_deficit",
        "tail_eps",
        "containment_margin",
        "wall_time"};
    CHECK(csv.header == want);
    REQUIRE(csv.rows.size() == 1);
    CHECK(std::abs(csv.rows[0][csv.col("negativity")] - 1.0) < 1e-3);
    CHECK(std::abs(csv.rows[0][csv.col("dz_digitalized")] - 1.0) < 1e-12);
    CHECK(csv.rows[0][csv.col("wall_time")] == 0.0);  // --timing not given
}

TEST_CASE("teleport payoff equals twice the coherence at large beta") {
    const fs::path out = scratch_dir() / "tele.csv";
    const int rc = run("teleport --set r_abs=0.1,0.3,0.5 --out " + out.string());
    CHECK(rc == 0);
    const Csv csv = parse_csv(out);
    REQUIRE(csv.rows.size() == 3);
    for (const auto& row : csv.rows)
        CHECK(std::abs(row[csv.col("payoff")] - 2 * row[csv.col("r_abs")]) <
              1e-2);
}

TEST_CASE("digitalizing preparation payoff tracks the coherence") {
    const fs::path out = scratch_dir() / "rsp.csv";
    const int rc =
        run("rsp --set mode=digitalizing --set r_abs=0.4 --out " + out.string());
    CHECK(rc == 0);
    const Csv csv = parse_csv(out);
    REQUIRE(csv.rows.size() == 1);
    CHECK(std::abs(csv.rows[0][csv.col("payoff")] - 0.8) < 1e-2);
    CHECK(csv.rows[0][csv.col("classical_threshold")] == 0.5);
}

TEST_CASE("grids expand as a cartesian product, leftmost axis slowest") {
    const fs::path out = scratch_dir() / "grid.csv";
    const int rc = run(
        "correlations --set p=0.3,0.5 --set r_abs=0.1,0.2 --set beta_re=1 "
        "--set dim=40 --out " + out.string());
    CHECK(rc == 0);
    const Csv csv = parse_csv(out);
    REQUIRE(csv.rows.size() == 4);
    const int cp = csv.col("p"), cr = csv.col("r_abs");
    CHECK(csv.rows[0][cp] == 0.3);
    CHECK(csv.rows[0][cr] == 0.1);
    CHECK(csv.rows[1][cp] == 0.3);
    CHECK(csv.rows[1][cr] == 0.2);
    CHECK(csv.rows[2][cp] == 0.5);
    CHECK(csv.rows[3][cr] == 0.2);
}

TEST_CASE("parallel figure sweep is byte-identical to the serial one") {
    const fs::path a = scratch_dir() / "fig2_serial.csv";
    const fs::path b = scratch_dir() / "fig2_par.csv";
    CHECK(run("figure2 --set r_points=4 --jobs 1 --out " + a.string()) == 0);
    CHECK(run("figure2 --set r_points=4 --jobs 4 --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    const Csv csv = parse_csv(a);
    REQUIRE(csv.rows.size() == 4);
    // analytic endpoint at r = 1/2
    CHECK(csv.rows[3][csv.col("negativity_limit")] == 1.0);
    CHECK(csv.rows[3][csv.col("dz_limit")] == 1.0);
}

TEST_CASE("json output mirrors the csv columns") {
    const fs::path out = scratch_dir() / "corr.json";
    const int rc =
        run("correlations --format json --set beta_re=2 --set dim=60 --out " +
            out.string());
    CHECK(rc == 0);
    const nlohmann::json doc = nlohmann::json::parse(slurp(out));
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    CHECK(doc[0].contains("negativity"));
    CHECK(doc[0].contains("geometric_discord"));
    CHECK(doc[0]["p"] == 0.5);
}

TEST_CASE("convergence sweep reports a shrinking asymptote gap") {
    const fs::path out = scratch_dir() / "conv.csv";
    const int rc = run("converge --out " + out.string());
    CHECK(rc == 0);
    const Csv csv = parse_csv(out);
    REQUIRE(csv.rows.size() == 4);
    const int cg = csv.col("negativity_gap");
    REQUIRE(cg >= 0);
    for (size_t i = 1; i < csv.rows.size(); ++i)
        CHECK(csv.rows[i][cg] < csv.rows[i - 1][cg]);
    for (const auto& row : csv.rows)
        CHECK(row[csv.col("containment_warning")] == 0.0);
}

TEST_CASE("command-line overrides beat the config file") {
    const fs::path cfg = scratch_dir() / "point.cfg";
    {
        std::ofstream f(cfg);
        f << "# sweep point\n";
        f << "r_abs = 0.1\n";
        f << "beta_re = 2  # overridden below\n";
        f << "dim = 60\n";
    }
    const fs::path out = scratch_dir() / "override.csv";
    const int rc = run("correlations --config " + cfg.string() +
                       " --set r_abs=0.3 --out " + out.string());
    CHECK(rc == 0);
    const Csv csv = parse_csv(out);
    REQUIRE(csv.rows.size() == 1);
    CHECK(csv.rows[0][csv.col("r_abs")] == 0.3);
    CHECK(csv.rows[0][csv.col("beta_re")] == 2.0);
}

TEST_CASE("exit codes distinguish usage errors from runtime failures") {
    const std::string null_out = " > /dev/null 2>&1";
    CHECK(run("correlations --set bogus_key=1" + null_out) == 2);
    CHECK(run("correlations --set p=" + null_out) == 2);
    CHECK(run("nonsense_command" + null_out) == 2);
    // domain violations surface as runtime failures, not usage errors
    CHECK(run("correlations --set r_abs=0.7" + null_out) == 3);
    // oscillator window too small for the requested displacement
    CHECK(run("correlations --set beta_re=4 --set dim=24" + null_out) == 3);
    CHECK(run("--help" + null_out) == 0);
    CHECK(run("teleport --help" + null_out) == 0);
}
