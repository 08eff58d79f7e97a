#include "ebz/generators.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ebz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class Fn>
std::vector<double> fill(const std::vector<std::size_t> &dims, Fn &&fn) {
    std::vector<double> out(element_count(dims));
    std::array<double, kMaxDims> u{};
    std::array<std::size_t, kMaxDims> c{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = 0; j < dims.size(); ++j) u[j] = static_cast<double>(c[j]) / static_cast<double>(dims[j]);
        out[i] = fn(std::span<const double>(u.data(), dims.size()));
        for (std::size_t j = 0; j < dims.size(); ++j) {
            if (++c[j] < dims[j]) break;
            c[j] = 0;
        }
    }
    return out;
}

struct Sines {
    std::array<double, kMaxDims> freq{}, phase{}, cross_phase{};
    std::size_t rank;

    Sines(std::size_t r, std::mt19937_64 &rng) : rank(r) {
        for (std::size_t j = 0; j < rank; ++j) {
            freq[j] = 1.0 + std::floor(3.0 * uniform01(rng));
            phase[j] = kTwoPi * uniform01(rng);
            cross_phase[j] = kTwoPi * uniform01(rng);
        }
    }

    double operator()(std::span<const double> u) const {
        double sum = 0, prod = 0.5;
        for (std::size_t j = 0; j < rank; ++j) {
            sum += std::sin(kTwoPi * freq[j] * u[j] + phase[j]);
            prod *= std::sin(kTwoPi * u[j] + cross_phase[j]);
        }
        return sum + prod;
    }
};

std::vector<double> poly(const std::vector<std::size_t> &dims, std::mt19937_64 &rng) {
    const std::size_t d = dims.size();
    std::array<double, kMaxDims> a{}, c{};
    std::array<std::array<double, kMaxDims>, kMaxDims> b{};
    for (std::size_t j = 0; j < d; ++j) a[j] = 2 * uniform01(rng) - 1;
    for (std::size_t j = 0; j < d; ++j) c[j] = 2 * uniform01(rng) - 1;
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = j + 1; k < d; ++k) b[j][k] = 2 * uniform01(rng) - 1;
    return fill(dims, [&](std::span<const double> u) {
        double v = 0;
        for (std::size_t j = 0; j < d; ++j) v += a[j] * u[j] + c[j] * u[j] * u[j] * u[j];
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = j + 1; k < d; ++k) v += b[j][k] * u[j] * u[j] * u[k] * u[k];
        return v;
    });
}

std::vector<double> noise(std::size_t n, std::mt19937_64 &rng) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; i += 2) {
        double u1 = 1.0 - uniform01(rng);  // (0, 1]
        double u2 = uniform01(rng);
        double r = std::sqrt(-2.0 * std::log(u1));
        out[i] = r * std::cos(kTwoPi * u2);
        if (i + 1 < n) out[i + 1] = r * std::sin(kTwoPi * u2);
    }
    return out;
}

}  // namespace

const std::vector<std::string> &generator_names() {
    static const std::vector<std::string> names{"constant", "sines", "poly", "noise", "spiky"};
    return names;
}

DataGrid generate(std::string_view name, std::vector<std::size_t> dims, std::uint64_t seed, ElementWidth width) {
    if (dims.empty() || dims.size() > kMaxDims) throw std::invalid_argument("grid rank must be in [1, 4]");
    std::mt19937_64 rng(seed);
    std::vector<double> values;
    if (name == "constant") {
        values.assign(element_count(dims), 1.0);
    } else if (name == "sines") {
        Sines field(dims.size(), rng);
        values = fill(dims, field);
    } else if (name == "poly") {
        values = poly(dims, rng);
    } else if (name == "noise") {
        values = noise(element_count(dims), rng);
    } else if (name == "spiky") {
        Sines field(dims.size(), rng);
        values = fill(dims, [&](std::span<const double> u) { return field(u) + (u[0] >= 0.5 ? 2.0 : 0.0); });
        for (auto &v : values) {
            double draw = uniform01(rng);
            if (draw < 0.001)
                v += 5.0;
            else if (draw < 0.002)
                v -= 5.0;
        }
    } else {
        throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
    }
    return DataGrid(std::move(dims), std::move(values), width);
}

}  // namespace ebz
