#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "shadowlab/complex_matrix.hpp"

#ifndef SHADOWLAB_CLI_PATH
#define SHADOWLAB_CLI_PATH "./shadowlab"
#endif
#ifndef SHADOWLAB_GOLDEN_DIR
#define SHADOWLAB_GOLDEN_DIR "golden"
#endif

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const std::string cmd =
        std::string(SHADOWLAB_CLI_PATH) + " " + args + " > cli_out.txt 2> cli_err.txt";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp("cli_out.txt");
    return r;
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

TEST_CASE("cli usage errors") {
    CHECK(run_cli("").code == 1);
    CHECK(run_cli("bogus-subcommand").code == 1);
    CHECK(run_cli("shadow --builtin A2_0").code == 1);  // missing required --out
    CHECK(run_cli("shadow --builtin A2_0 --bins nonsense --out x").code == 1);
}

TEST_CASE("cli data errors") {
    CHECK(run_cli("normalize --builtin NOT_A_NAME").code == 2);
    CHECK(run_cli("normalize --matrix does_not_exist.json").code == 2);
    {
        std::ofstream bad("cli_bad_matrix.json");
        bad << "{\"n\": 2, \"rows\": [[[0,0],[1,0]]]}";  // wrong row count
    }
    CHECK(run_cli("range --matrix cli_bad_matrix.json").code == 2);
    std::remove("cli_bad_matrix.json");
    // a non-Hermitian Hamiltonian is a data error
    CHECK(run_cli("dynamics --builtin D_A1 --hamiltonian D_A1").code == 2);
    // scalars have no projection plane
    {
        std::ofstream sc("cli_scalar.json");
        sc << "{\"n\": 2, \"rows\": [[[2,0],[0,0]],[[0,0],[2,0]]]}";
    }
    CHECK(run_cli("normalize --matrix cli_scalar.json").code == 2);
    std::remove("cli_scalar.json");
}

TEST_CASE("cli normalize") {
    RunResult r = run_cli("normalize --builtin A4_8");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["alpha"].get<double>() - std::sqrt(2.0)) < 1e-12);

    RunResult r2 = run_cli("normalize --builtin A2_0 --out cli_nrm");
    REQUIRE(r2.code == 0);
    auto j2 = nlohmann::json::parse(r2.out);
    CHECK(std::abs(j2["alpha"].get<double>() - 1.0) < 1e-12);
    CHECK(file_exists("cli_nrm.v1.json"));
    CHECK(file_exists("cli_nrm.v2.json"));
    CHECK(file_exists("cli_nrm.json"));
    for (const char* f : {"cli_nrm.v1.json", "cli_nrm.v2.json", "cli_nrm.json"})
        std::remove(f);
}

TEST_CASE("cli shadow outputs and determinism") {
    const std::string flags =
        "shadow --builtin A3_0 --samples 100000 --bins 64x64 --seed 7 --threads 2";
    REQUIRE(run_cli(flags + " --out cli_s1").code == 0);
    REQUIRE(run_cli(flags + " --out cli_s2").code == 0);
    REQUIRE(file_exists("cli_s1.csv"));
    REQUIRE(file_exists("cli_s1.pgm"));
    REQUIRE(file_exists("cli_s1.json"));

    const std::string csv1 = slurp("cli_s1.csv");
    CHECK(csv1 == slurp("cli_s2.csv"));
    CHECK(slurp("cli_s1.pgm") == slurp("cli_s2.pgm"));

    // regression pin from the first verified run
    CHECK(fnv1a(csv1) == 0xcf95b678f8461aaaull);

    auto j = nlohmann::json::parse(slurp("cli_s1.json"));
    CHECK(j["samples"].get<std::uint64_t>() == 100000);
    CHECK(j["manifest"]["subcommand"] == "shadow");
    CHECK(j["manifest"]["flags"]["threads"].get<int>() == 2);
    const double mean_re = j["moments"]["mean"][0].get<double>();
    const double mean_im = j["moments"]["mean"][1].get<double>();
    CHECK(std::abs(shadowlab::cplx(mean_re, mean_im)) < 0.02);  // traceless observable

    const std::string pgm = slurp("cli_s1.pgm");
    CHECK(pgm.substr(0, 3) == "P5\n");
    CHECK(pgm.find("65535") != std::string::npos);

    for (const char* f : {"cli_s1.csv", "cli_s1.pgm", "cli_s1.json", "cli_s2.csv",
                          "cli_s2.pgm", "cli_s2.json"})
        std::remove(f);
}

TEST_CASE("cli mixed shadow") {
    REQUIRE(run_cli("mixed-shadow --builtin A2_0 --samples 50000 --bins 32x32 --seed 3 "
                    "--threads 2 --ancilla 2 --out cli_mx")
                .code == 0);
    auto j = nlohmann::json::parse(slurp("cli_mx.json"));
    CHECK(j["manifest"]["flags"]["ancilla"].get<int>() == 2);
    for (const char* f : {"cli_mx.csv", "cli_mx.pgm", "cli_mx.json"}) std::remove(f);
}

TEST_CASE("cli range summary") {
    RunResult r = run_cli("range --builtin A3_2 --resolution 2048 --out cli_rg");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["flat_parts"].get<int>() == 2);
    CHECK(std::abs(j["barycenter"][0].get<double>()) < 1e-12);
    CHECK(file_exists("cli_rg.csv"));
    const std::string csv = slurp("cli_rg.csv");
    CHECK(csv.substr(0, 14) == "theta,h,re,im\n");
    for (const char* f : {"cli_rg.csv", "cli_rg.json"}) std::remove(f);
}

TEST_CASE("cli dynamics matches the golden trajectories") {
    for (const std::string name : {"da1", "da2", "da3"}) {
        const std::string builtin = name == "da1" ? "D_A1" : name == "da2" ? "D_A2" : "D_A3";
        REQUIRE(run_cli("dynamics --builtin " + builtin +
                        " --hamiltonian H21 --tmax 10 --steps 256 --out cli_" + name)
                    .code == 0);
        const std::string got = slurp("cli_" + name + ".csv");
        const std::string want =
            slurp(std::string(SHADOWLAB_GOLDEN_DIR) + "/traj_" + name + ".csv");
        REQUIRE(!want.empty());
        CHECK(got == want);
        for (const std::string f : {"cli_" + name + ".csv", "cli_" + name + ".json"})
            std::remove(f.c_str());
    }
}

TEST_CASE("cli shadow cross-section matches the golden run and is unimodal") {
    REQUIRE(run_cli("shadow --builtin A3_0 --samples 1000000 --bins 64x64 --seed 11 "
                    "--threads 2 --format none --section 0,0,1,0,0.02 --section-bins 48 "
                    "--out cli_sec")
                .code == 0);
    const std::string got = slurp("cli_sec.section.csv");
    const std::string want = slurp(std::string(SHADOWLAB_GOLDEN_DIR) + "/a30_section.csv");
    REQUIRE(!want.empty());
    CHECK(got == want);

    // unimodal up to counting noise: the peak is interior and both ends are
    // far below it
    std::vector<double> dens;
    std::stringstream ss(got);
    std::string line;
    std::getline(ss, line);  // header
    while (std::getline(ss, line)) {
        const auto comma = line.find(',');
        dens.push_back(std::atof(line.substr(comma + 1).c_str()));
    }
    REQUIRE(dens.size() == 48);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < dens.size(); ++i)
        if (dens[i] > dens[peak]) peak = i;
    CHECK(peak > 4);
    CHECK(peak < 43);
    CHECK(dens.front() < 0.2 * dens[peak]);
    CHECK(dens.back() < 0.2 * dens[peak]);

    for (const char* f : {"cli_sec.section.csv", "cli_sec.json"}) std::remove(f);
}

TEST_CASE("cli spaces") {
    RunResult r = run_cli("spaces --builtin D_A1");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["dim_xa"].get<int>() == 6);
    CHECK(j["dim_ha"].get<int>() == 2);
    CHECK(j["d_a"].get<int>() == 2);
}

TEST_CASE("cli thread-count fallback from the environment") {
    setenv("SHADOWLAB_THREADS", "3", 1);
    REQUIRE(run_cli("shadow --builtin A2_0 --samples 1000 --bins 8x8 --seed 1 --out cli_env")
                .code == 0);
    unsetenv("SHADOWLAB_THREADS");
    auto j = nlohmann::json::parse(slurp("cli_env.json"));
    CHECK(j["manifest"]["flags"]["threads"].get<int>() == 3);
    for (const char* f : {"cli_env.csv", "cli_env.pgm", "cli_env.json"}) std::remove(f);
}

TEST_CASE("cli rand-law") {
    RunResult r = run_cli("rand-law --which density --n 3 --k 3 --samples 100000 --seed 5 "
                          "--threads 2");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["law"]["a"].get<double>() == 3.0);
    CHECK(j["law"]["b"].get<double>() == 6.0);
    CHECK(j["pass"].get<bool>());
}
