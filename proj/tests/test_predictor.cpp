#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "ebz/predictor.hpp"
#include "oracles.hpp"
#include "layer_formulas.hpp"

using namespace ebz;

namespace {

std::map<std::vector<int>, std::int64_t> as_map(const PredictorStencil &s) {
    std::map<std::vector<int>, std::int64_t> out;
    for (const auto &t : s.terms) out[std::vector<int>(t.offset.begin(), t.offset.begin() + s.rank)] = t.coefficient;
    return out;
}

// Row-major lookup into a flat buffer with dimension 0 fastest.
struct FlatLookup {
    const std::vector<double> *values;
    std::vector<std::size_t> dims;
    double operator()(std::span<const std::size_t> c) const {
        std::size_t idx = 0, stride = 1;
        for (std::size_t j = 0; j < dims.size(); ++j) {
            idx += c[j] * stride;
            stride *= dims[j];
        }
        return (*values)[idx];
    }
};

}  // namespace

TEST_CASE("binomial rows") {
    CHECK(binomial_row(0) == std::vector<std::int64_t>{1});
    CHECK(binomial_row(4) == std::vector<std::int64_t>{1, 4, 6, 4, 1});
    CHECK(binomial_row(16)[8] == 12870);
}

TEST_CASE("build_stencil examples") {
    auto s12 = as_map(build_stencil(1, 2));
    CHECK(s12.size() == 3);
    CHECK(s12[{0, 1}] == 1);
    CHECK(s12[{1, 0}] == 1);
    CHECK(s12[{1, 1}] == -1);

    auto s22 = as_map(build_stencil(2, 2));
    CHECK(s22.size() == 8);
    CHECK(s22[{1, 0}] == 2);
    CHECK(s22[{1, 1}] == -4);
    CHECK(s22[{2, 2}] == -1);

    auto s13 = as_map(build_stencil(1, 3));
    CHECK(s13.size() == 7);
    for (auto &[off, c] : s13) {
        int ones = std::count(off.begin(), off.end(), 1);
        CHECK(c == (ones % 2 == 1 ? 1 : -1));
    }
    CHECK(s13[{1, 1, 1}] == 1);
}

TEST_CASE("build_stencil rejects out-of-range arguments") {
    CHECK_THROWS_AS(build_stencil(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_stencil(17, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_stencil(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_stencil(1, 5), std::invalid_argument);
}

TEST_CASE("stencil invariants") {
    for (int n = 1; n <= 4; ++n) {
        for (int d = 1; d <= 4; ++d) {
            auto s = build_stencil(n, d);
            CAPTURE(n);
            CAPTURE(d);
            std::size_t expected = 1;
            for (int j = 0; j < d; ++j) expected *= std::size_t(n + 1);
            CHECK(s.terms.size() == expected - 1);

            std::int64_t sum = 0;
            for (const auto &t : s.terms) sum += t.coefficient;
            CHECK(sum == 1);

            CHECK(std::is_sorted(s.terms.begin(), s.terms.end(),
                                 [](const auto &a, const auto &b) { return a.offset < b.offset; }));

            // Coefficient depends only on the multiset of offsets.
            auto m = as_map(s);
            for (const auto &[off, c] : m) {
                auto perm = off;
                std::sort(perm.begin(), perm.end());
                do {
                    CHECK(m.at(perm) == c);
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
        }
    }
}

TEST_CASE("2D stencils reproduce the four-layer formula table") {
    for (int n = 1; n <= 4; ++n) {
        auto s = as_map(build_stencil(n, 2));
        const auto &rows = layer_formulas::rows(n);
        CHECK(s.size() == rows.size());
        for (const auto &r : rows) {
            // Table entries are V(i0 - a, j0 - b); j is the fastest dimension.
            CHECK(s.at({r.b, r.a}) == r.coefficient);
        }
        for (const auto &[off, c] : s) CHECK(c == oracle::table_coefficient_2d(n, off[0], off[1]));
    }
}

TEST_CASE("predict examples") {
    SUBCASE("constant neighbourhood") {
        std::vector<double> v(6 * 6 * 6, 5.0);
        for (int n = 1; n <= 4; ++n) {
            for (std::size_t d = 1; d <= 3; ++d) {
                std::vector<std::size_t> dims(d, 6);
                std::vector<std::size_t> c(d, 5);
                CHECK(predict(build_stencil(n, int(d)), FlatLookup{&v, dims}, c) == doctest::Approx(5.0));
            }
        }
    }
    SUBCASE("one-layer 2D") {
        // dims {2, 2}: index = c0 + 2 c1. V(i0, j0-1) = 1, V(i0-1, j0) = 2, V(i0-1, j0-1) = 3.
        std::vector<double> v{3, 2, 1, 0};
        std::vector<std::size_t> c{1, 1};
        CHECK(predict(build_stencil(1, 2), FlatLookup{&v, {2, 2}}, c) == 0.0);
    }
    SUBCASE("two-layer 2D on a linear field") {
        std::vector<std::size_t> dims{8, 8};
        std::vector<double> v(64);
        for (std::size_t j = 0; j < 8; ++j)
            for (std::size_t i = 0; i < 8; ++i) v[i + 8 * j] = 3.0 * double(j) + 2.0 * double(i) + 1.0;
        for (std::size_t j = 2; j < 8; ++j) {
            for (std::size_t i = 2; i < 8; ++i) {
                std::vector<std::size_t> c{i, j};
                double truth = v[i + 8 * j];
                CHECK(std::fabs(predict(build_stencil(2, 2), FlatLookup{&v, dims}, c) - truth) <= 1e-9 * truth);
            }
        }
    }
    SUBCASE("first point predicts zero") {
        std::vector<double> v(4, 7.0);
        std::vector<std::size_t> c{0, 0};
        CHECK(predict(build_stencil(3, 2), FlatLookup{&v, {2, 2}}, c) == 0.0);
    }
}

TEST_CASE("boundary rule") {
    using detail::boundary_state;
    std::vector<std::size_t> c{0, 5, 2};
    auto [n, mask] = boundary_state(4, c);
    CHECK(n == 2);
    CHECK(mask == 0b110u);
    std::vector<std::size_t> origin{0, 0, 0};
    CHECK(boundary_state(3, origin).first == 0);

    // Constant fields stay exact at every non-first point, edges included.
    std::vector<std::size_t> dims{5, 4, 3};
    std::vector<double> v(60, -2.5);
    for (int layers = 1; layers <= 4; ++layers) {
        auto s = build_stencil(layers, 3);
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t i = 0; i < 5; ++i) {
                    if (i + j + k == 0) continue;
                    std::vector<std::size_t> at{i, j, k};
                    CHECK(predict(s, FlatLookup{&v, dims}, at) == doctest::Approx(-2.5));
                }
    }
}

TEST_CASE("polynomial reproduction") {
    // 2D: every monomial x^a y^b with a + b <= 2n - 1.
    const std::size_t size = 24;
    for (int n = 1; n <= 3; ++n) {
        auto s = build_stencil(n, 2);
        for (int a = 0; a <= 2 * n - 1; ++a) {
            for (int b = 0; a + b <= 2 * n - 1; ++b) {
                std::vector<double> v(size * size);
                auto f = [&](std::size_t i, std::size_t j) {
                    return std::pow(double(i) + 3.0, a) * std::pow(double(j) + 5.0, b);
                };
                for (std::size_t j = 0; j < size; ++j)
                    for (std::size_t i = 0; i < size; ++i) v[i + size * j] = f(i, j);
                for (std::size_t j = std::size_t(n); j < size; j += 3) {
                    for (std::size_t i = std::size_t(n); i < size; i += 3) {
                        std::vector<std::size_t> c{i, j};
                        double truth = f(i, j);
                        double got = predict(s, FlatLookup{&v, {size, size}}, c);
                        CAPTURE(n);
                        CAPTURE(a);
                        CAPTURE(b);
                        CHECK(std::fabs(got - truth) <= 1e-6 * std::fabs(truth));
                    }
                }
            }
        }
    }
    // 3D: same degree limit, checked empirically.
    const std::size_t s3 = 10;
    for (int n = 1; n <= 3; ++n) {
        auto s = build_stencil(n, 3);
        for (int a = 0; a <= 2 * n - 1; ++a)
            for (int b = 0; a + b <= 2 * n - 1; ++b)
                for (int c = 0; a + b + c <= 2 * n - 1; ++c) {
                    auto f = [&](std::size_t i, std::size_t j, std::size_t k) {
                        return std::pow(double(i) + 2, a) * std::pow(double(j) + 3, b) * std::pow(double(k) + 4, c);
                    };
                    std::vector<double> v(s3 * s3 * s3);
                    for (std::size_t k = 0; k < s3; ++k)
                        for (std::size_t j = 0; j < s3; ++j)
                            for (std::size_t i = 0; i < s3; ++i) v[i + s3 * (j + s3 * k)] = f(i, j, k);
                    std::vector<std::size_t> at{s3 - 1, s3 - 2, s3 - 1};
                    double truth = f(at[0], at[1], at[2]);
                    CHECK(std::fabs(predict(s, FlatLookup{&v, {s3, s3, s3}}, at) - truth) <= 1e-6 * std::fabs(truth));
                }
    }
}

TEST_CASE("one-layer prediction equals a hand-coded Lorenzo predictor bit for bit") {
    std::mt19937_64 rng(17);
    for (std::size_t d = 1; d <= 3; ++d) {
        std::vector<std::size_t> dims(d);
        for (auto &x : dims) x = 3 + rng() % 6;
        std::size_t n = element_count(dims);
        auto values = oracle::gaussian(n, rng(), 100.0);
        std::vector<float> fv(values.begin(), values.end());

        GridPredictor<double> gp(dims, 1);
        GridPredictor<float> gpf(dims, 1);
        auto stencil = build_stencil(1, int(d));
        std::vector<std::size_t> c(d, 0);
        for (std::size_t i = 0; i < n; ++i) {
            double expect = oracle::lorenzo(values, dims, c);
            CHECK(gp.predict(values.data(), i, c) == expect);
            CHECK(predict(stencil, FlatLookup{&values, dims}, c) == expect);
            CHECK(gpf.predict(fv.data(), i, c) == oracle::lorenzo(fv, dims, c));
            for (std::size_t j = 0; j < d; ++j) {
                if (++c[j] < dims[j]) break;
                c[j] = 0;
            }
        }
    }
}

TEST_CASE("table-driven predictor matches the reference at every point") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t d = 1 + rng() % 4;
        int layers = 1 + int(rng() % 4);
        std::vector<std::size_t> dims(d);
        for (auto &x : dims) x = 1 + rng() % 6;
        std::size_t n = element_count(dims);
        auto values = oracle::gaussian(n, rng());
        GridPredictor<double> gp(dims, layers);
        auto stencil = build_stencil(layers, int(d));
        std::vector<std::size_t> c(d, 0);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(gp.predict(values.data(), i, c) == predict(stencil, FlatLookup{&values, dims}, c));
            for (std::size_t j = 0; j < d; ++j) {
                if (++c[j] < dims[j]) break;
                c[j] = 0;
            }
        }
    }
}
