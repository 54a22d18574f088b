#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "demo_dataset.hpp"
#include "doctest.h"
#include "json.hpp"
#include "mfts/io.hpp"
#include "mfts/series.hpp"
#include "mfts/synth.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

// Runs the CLI with the given arguments, capturing stdout and stderr.
Run run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + MFTS_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = mfts::read_text_file(out);
    r.err = mfts::read_text_file(err);
    return r;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("no subcommand or an unknown flag is a usage error") {
    const fs::path dir = oracle::scratch_dir("cli_usage");
    CHECK(run_cli("", dir).code == 1);
    const Run r = run_cli("mfdfa --input x.csv --bogus 3", dir);
    CHECK(r.code == 1);
    CHECK(r.err.find("--bogus") != std::string::npos);
    CHECK(run_cli("--help", dir).code == 0);
}

TEST_CASE("synth is byte-for-byte deterministic") {
    const fs::path dir = oracle::scratch_dir("cli_synth");
    for (const char* name : {"a", "b"}) {
        REQUIRE(run_cli("synth fgn --hurst 0.6 --length 4096 --seed 9 --out " + quoted(dir / (std::string(name) + ".csv")), dir)
                    .code == 0);
        REQUIRE(run_cli("synth cascade --levels 12 --p 0.7 --out " + quoted(dir / (std::string(name) + ".json")), dir)
                    .code == 0);
    }
    CHECK(mfts::read_text_file(dir / "a.csv") == mfts::read_text_file(dir / "b.csv"));
    CHECK(mfts::read_text_file(dir / "a.json") == mfts::read_text_file(dir / "b.json"));
    const auto s = mfts::read_series(dir / "a.json");
    CHECK(s.values == mfts::binomial_cascade({12, 0.7}).values);
}

TEST_CASE("mfdfa on the cascade recovers the analytic h(q)") {
    const fs::path dir = oracle::scratch_dir("cli_mfdfa");
    REQUIRE(run_cli("synth cascade --levels 16 --p 0.75 --out " + quoted(dir / "cascade.json"), dir).code == 0);
    const Run r = run_cli("mfdfa --input " + quoted(dir / "cascade.json") +
                              " --q -4:4:0.2 --m 2 --fit-range 16:4096 --label c --out-dir " + quoted(dir / "out"),
                          dir);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    for (const char* f : {"c_fluctuation.csv", "c_hurst.csv", "c_hurst.json", "c_spectrum.csv", "c_spectrum.json"})
        CHECK_MESSAGE(fs::exists(dir / "out" / f), f);
    const json h = json::parse(mfts::read_text_file(dir / "out" / "c_hurst.json"));
    REQUIRE(h["q"].size() == 41);
    for (std::size_t i = 0; i < h["q"].size(); ++i) {
        const double q = h["q"][i], est = h["h"][i];
        const double tol = q >= 1.0 ? 0.05 : 0.10;
        CHECK_MESSAGE(std::fabs(est - mfts::analytic_cascade_hq(0.75, q)) < tol, "q = " << q);
    }
}

TEST_CASE("an analysis failure exits with 2") {
    const fs::path dir = oracle::scratch_dir("cli_analysis");
    REQUIRE(run_cli("synth fgn --length 4096 --out " + quoted(dir / "x.csv"), dir).code == 0);
    const Run r = run_cli("mfdfa --input " + quoted(dir / "x.csv") + " --fit-range 16:20 --out-dir " + quoted(dir), dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("usable scales") != std::string::npos);
}

TEST_CASE("misaligned series are rejected naming both inputs") {
    const fs::path dir = oracle::scratch_dir("cli_rho");
    REQUIRE(run_cli("synth fgn --length 4096 --seed 1 --out " + quoted(dir / "left.csv"), dir).code == 0);
    REQUIRE(run_cli("synth fgn --length 8192 --seed 2 --out " + quoted(dir / "right.csv"), dir).code == 0);
    const Run r = run_cli("rho --x " + quoted(dir / "left.csv") + " --y " + quoted(dir / "right.csv"), dir);
    CHECK(r.code == 1);
    CHECK(r.err.find("left.csv") != std::string::npos);
    CHECK(r.err.find("right.csv") != std::string::npos);

    const Run self = run_cli("rho --x " + quoted(dir / "left.csv") + " --y " + quoted(dir / "left.csv"), dir);
    REQUIRE(self.code == 0);
    std::istringstream in(self.out);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 's') continue;
        const auto a = line.find(',');
        CHECK(std::stod(line.substr(a + 1)) == 1.0);
        ++rows;
    }
    CHECK(rows > 5);
}

TEST_CASE("negative q values are accepted as option values") {
    const fs::path dir = oracle::scratch_dir("cli_negq");
    REQUIRE(run_cli("synth fgn --length 4096 --out " + quoted(dir / "x.csv"), dir).code == 0);
    const Run r = run_cli("rho --x " + quoted(dir / "x.csv") + " --y " + quoted(dir / "x.csv") + " --q -2", dir);
    CHECK_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("# q=-2") != std::string::npos);

    const Run m = run_cli("mfcca --x " + quoted(dir / "x.csv") + " --y " + quoted(dir / "x.csv") +
                              " --rho-q -2,2 --out-dir " + quoted(dir / "out"),
                          dir);
    CHECK_MESSAGE(m.code == 0, m.err);
    CHECK(fs::exists(dir / "out" / "rho_qm2.csv"));
    CHECK(fs::exists(dir / "out" / "rho_q2.csv"));
}

TEST_CASE("surrogate and the pipeline report") {
    const fs::path dir = oracle::scratch_dir("cli_report");
    REQUIRE(run_cli("synth fgn --length 4096 --out " + quoted(dir / "x.csv"), dir).code == 0);
    REQUIRE(run_cli("surrogate --input " + quoted(dir / "x.csv") + " --kind fourier --seed 3 --out " +
                        quoted(dir / "s.csv"),
                    dir)
                .code == 0);
    CHECK(mfts::read_series(dir / "s.csv").size() == 4096);

    std::ofstream(dir / "study.json") << demo::write_inputs(dir, false).dump(2);
    const Run r = run_cli("report --config " + quoted(dir / "study.json") + " --workers 2", dir);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const json manifest = json::parse(mfts::read_text_file(dir / "out" / "manifest.json"));
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["pairs"].size() == 3);

    std::ofstream(dir / "broken.json") << R"({"pairs": [{"id": "a", "series": "missing.csv"}]})";
    CHECK(run_cli("report --config " + quoted(dir / "broken.json"), dir).code == 1);
}
