#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "ebz/analysis.hpp"
#include "ebz/generators.hpp"
#include "jobs.hpp"

using namespace ebz;
using namespace ebz::cli;

namespace {

fs::path scratch(const std::string &name) {
    auto dir = fs::temp_directory_path() / ("ebzip_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(const std::string &args) {
    std::string cmd = std::string(EBZIP_BINARY) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string> &header, const std::string &name) {
    auto it = std::find(header.begin(), header.end(), name);
    REQUIRE(it != header.end());
    return std::size_t(it - header.begin());
}

}  // namespace

TEST_CASE("dims parsing") {
    CHECK(parse_dims("512x512") == std::vector<std::size_t>{512, 512});
    CHECK(parse_dims("3,4,5") == std::vector<std::size_t>{3, 4, 5});
    CHECK(parse_dims("7") == std::vector<std::size_t>{7});
    CHECK_THROWS_AS(parse_dims(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_dims("4xx4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dims("0x4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dims("ax4"), std::invalid_argument);
}

TEST_CASE("raw files and sidecars") {
    auto dir = scratch("raw");
    auto g = generate("noise", {10, 3}, 4, ElementWidth::f64);
    write_raw(dir / "a.raw", g);
    CHECK(fs::file_size(dir / "a.raw") == 240);
    CHECK(std::ranges::equal(read_raw(dir / "a.raw", {10, 3}, ElementWidth::f64).values(), g.values()));
    CHECK_THROWS(read_raw(dir / "a.raw", {10, 4}, ElementWidth::f64));

    std::ofstream(dir / "a.raw.json") << R"({"dims": [10, 3], "width": 64})";
    auto [dims, width] = read_sidecar(dir / "a.raw");
    CHECK(dims == std::vector<std::size_t>{10, 3});
    CHECK(width == ElementWidth::f64);
}

TEST_CASE("job validation") {
    JobSpec job;
    CHECK_THROWS_AS(validate_job(job), std::invalid_argument);
    job.inputs = {"/nonexistent/file.raw"};
    CHECK_THROWS_AS(validate_job(job), std::invalid_argument);
}

TEST_CASE("compress and decompress one file") {
    auto dir = scratch("single");
    write_raw(dir / "f.raw", generate("sines", {100, 100}, 2, ElementWidth::f32));
    auto cmd = "compress " + (dir / "f.raw").string() + " --dims 100x100 --rel-bound 1e-4 --out " + dir.string() +
               " --csv " + (dir / "c.csv").string();
    REQUIRE(run(cmd) == 0);
    auto rows = read_csv(dir / "c.csv");
    REQUIRE(rows.size() == 2);
    auto br = std::stod(rows[1][column(rows[0], "bit_rate")]);
    auto cf = std::stod(rows[1][column(rows[0], "compression_factor")]);
    CHECK(std::fabs(br * cf - 32.0) <= 32e-9);
    CHECK(rows[1][column(rows[0], "status")] == "ok");
    CHECK(std::stoul(rows[1][column(rows[0], "compressed_bytes")]) == fs::file_size(dir / "f.raw.ebz"));

    REQUIRE(run("decompress " + (dir / "f.raw.ebz").string() + " --out " + dir.string() + " --csv " +
                (dir / "d.csv").string()) == 0);
    CHECK(fs::file_size(dir / "f.raw.dec") == 40000);

    REQUIRE(run("analyze metrics " + (dir / "f.raw").string() + " " + (dir / "f.raw.ebz").string() +
                " --dims 100x100 --csv " + (dir / "m.csv").string() + " --autocorr " + (dir / "ac.csv").string()) == 0);
    auto m = read_csv(dir / "m.csv");
    REQUIRE(m.size() == 2);
    CHECK(std::stod(m[1][column(m[0], "compression_factor")]) == doctest::Approx(cf).epsilon(1e-12));
    CHECK(std::stod(m[1][column(m[0], "pearson_rho")]) >= 0.99999);
    CHECK(read_csv(dir / "ac.csv").size() == 102);

    REQUIRE(run("analyze metrics " + (dir / "f.raw").string() + " " + (dir / "f.raw.dec").string() +
                " --dims 100x100 --compressed-bytes 5000 --csv " + (dir / "m2.csv").string()) == 0);
    auto m2 = read_csv(dir / "m2.csv");
    CHECK(m2[1][column(m2[0], "compression_factor")] == "8");
}

TEST_CASE("worker count does not change output") {
    auto dir = scratch("workers");
    std::vector<std::string> files;
    std::string list;
    for (int i = 0; i < 8; ++i) {
        auto p = dir / ("in" + std::to_string(i) + ".raw");
        write_raw(p, generate(i % 2 ? "sines" : "spiky", {64, 48}, std::uint64_t(i), ElementWidth::f32));
        list += " " + p.string();
    }
    fs::create_directories(dir / "w1");
    fs::create_directories(dir / "w4");
    REQUIRE(run("compress" + list + " --dims 64x48 --rel-bound 1e-4 --workers 1 --out " + (dir / "w1").string() +
                " --csv " + (dir / "s1.csv").string()) == 0);
    REQUIRE(run("compress" + list + " --dims 64x48 --rel-bound 1e-4 --workers 4 --out " + (dir / "w4").string() +
                " --csv " + (dir / "s4.csv").string()) == 0);
    for (int i = 0; i < 8; ++i) {
        auto name = "in" + std::to_string(i) + ".raw.ebz";
        CHECK(slurp(dir / "w1" / name) == slurp(dir / "w4" / name));
    }
    auto s1 = read_csv(dir / "s1.csv"), s4 = read_csv(dir / "s4.csv");
    REQUIRE(s1.size() == 9);
    REQUIRE(s4.size() == 9);
    for (std::size_t r = 1; r < 9; ++r) CHECK(s1[r][0] == s4[r][0]);
}

TEST_CASE("exit codes") {
    auto dir = scratch("exit");
    write_raw(dir / "ok.raw", generate("noise", {50}, 1, ElementWidth::f32));
    std::ofstream(dir / "short.raw") << "abc";
    CHECK(run("compress " + (dir / "ok.raw").string() + " --dims 50 --abs-bound 0.1 --out " + dir.string()) == 0);
    CHECK(run("compress " + (dir / "ok.raw").string() + " " + (dir / "short.raw").string() +
              " --dims 50 --abs-bound 0.1 --out " + dir.string()) == 1);
    CHECK(run("compress " + (dir / "ok.raw").string() + " --dims 50 --out " + dir.string()) == 2);
    CHECK(run("compress " + (dir / "missing.raw").string() + " --dims 50 --abs-bound 0.1") == 2);
    CHECK(run("compress " + (dir / "ok.raw").string() + " --dims 50 --abs-bound 0.1 --workers 0") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("") == 2);
    CHECK(run("compress " + (dir / "ok.raw").string() + " --dims 50 --abs-bound 0.1 --intervals-exp 40") == 2);
}

TEST_CASE("auto-m retries with wider interval sets") {
    auto g = generate("noise", {4096}, 5, ElementWidth::f64);
    CompressorConfig c;
    c.bound.relative = 1e-5;
    c.interval_exponent = 4;
    auto plain = compress_with_policy(g, c, false);
    CHECK(plain.stream.interval_exponent == 4);
    CHECK(plain.warning);
    auto adapted = compress_with_policy(g, c, true);
    CHECK(adapted.stream.interval_exponent > 4);
    CHECK((adapted.hitting_rate >= 0.9 || adapted.stream.interval_exponent == 16));
    CHECK(adapted.hitting_rate > plain.hitting_rate);
}

TEST_CASE("generate") {
    auto dir = scratch("gen");
    REQUIRE(run("generate constant --dims 10x10 --out " + (dir / "c.raw").string()) == 0);
    auto c = slurp(dir / "c.raw");
    REQUIRE(c.size() == 400);
    for (std::size_t i = 4; i < 400; i += 4) CHECK(c.compare(i, 4, c, 0, 4) == 0);

    REQUIRE(run("generate noise --dims 32x32 --seed 9 --out " + (dir / "n1.raw").string()) == 0);
    REQUIRE(run("generate noise --dims 32x32 --seed 9 --out " + (dir / "n2.raw").string()) == 0);
    REQUIRE(run("generate noise --dims 32x32 --seed 10 --out " + (dir / "n3.raw").string()) == 0);
    CHECK(slurp(dir / "n1.raw") == slurp(dir / "n2.raw"));
    CHECK(slurp(dir / "n1.raw") != slurp(dir / "n3.raw"));
    CHECK(run("generate nosuch --dims 4 --out " + (dir / "x.raw").string()) == 2);

    // Sum-of-sines field written out directly from its definition.
    REQUIRE(run("generate sines --dims 64x32 --seed 21 --width 64 --out " + (dir / "s.raw").string()) == 0);
    auto s = read_raw(dir / "s.raw", {64, 32}, ElementWidth::f64);
    std::mt19937_64 rng(21);
    auto u01 = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    const double tau = 2 * std::numbers::pi;
    double f[2], phi[2], psi[2];
    for (int j = 0; j < 2; ++j) {
        f[j] = 1 + std::floor(3 * u01());
        phi[j] = tau * u01();
        psi[j] = tau * u01();
    }
    double mean = 0, sq = 0, ref_mean = 0, ref_sq = 0;
    for (std::size_t y = 0; y < 32; ++y) {
        for (std::size_t x = 0; x < 64; ++x) {
            double u[2] = {double(x) / 64, double(y) / 32};
            double v = std::sin(tau * f[0] * u[0] + phi[0]) + std::sin(tau * f[1] * u[1] + phi[1]) +
                       0.5 * std::sin(tau * u[0] + psi[0]) * std::sin(tau * u[1] + psi[1]);
            double got = s[x + 64 * y];
            CHECK(got == doctest::Approx(v).epsilon(1e-12));
            mean += got;
            sq += got * got;
            ref_mean += v;
            ref_sq += v * v;
        }
    }
    CHECK(mean / 2048 == doctest::Approx(ref_mean / 2048).epsilon(1e-12));
    CHECK(std::sqrt(sq / 2048) == doctest::Approx(std::sqrt(ref_sq / 2048)).epsilon(1e-12));
}

TEST_CASE("analyze sweeps") {
    auto dir = scratch("analyze");
    REQUIRE(run("analyze rate-distortion --generator sines --dims 64x64 --seed 3 --bounds 1e-3,1e-4,1e-5,1e-6 --csv " +
                (dir / "rd.csv").string()) == 0);
    auto rd = read_csv(dir / "rd.csv");
    REQUIRE(rd.size() == 5);
    for (std::size_t r = 2; r < 5; ++r)
        CHECK(std::stod(rd[r][column(rd[0], "bit_rate")]) >= std::stod(rd[r - 1][column(rd[0], "bit_rate")]));

    REQUIRE(run("analyze best-layer --generator poly --dims 64x64 --seed 3 --rel-bound 1e-5 --csv " +
                (dir / "bl.csv").string()) == 0);
    auto bl = read_csv(dir / "bl.csv");
    REQUIRE(bl.size() == 5);
    auto g = generate("poly", {64, 64}, 3, ElementWidth::f32);
    CompressorConfig c;
    c.bound.relative = 1e-5;
    std::vector<int> layers{1, 2, 3, 4};
    std::ostringstream direct;
    write_layer_csv(direct, best_layer_scan(g, c, layers));
    CHECK(slurp(dir / "bl.csv") == direct.str());

    REQUIRE(run("analyze interval-sweep --generator noise --dims 32x32 --ms 4,8 --bounds 1e-2,1e-4 --csv " +
                (dir / "is.csv").string()) == 0);
    CHECK(read_csv(dir / "is.csv").size() == 5);
    CHECK(run("analyze best-layer") == 2);
    CHECK(run("analyze nonsense --generator noise --dims 8") == 2);
}
