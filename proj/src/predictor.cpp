#include "ebz/predictor.hpp"

#include <bit>
#include <limits>

namespace ebz {

std::vector<std::int64_t> binomial_row(int n) {
    if (n < 0) throw std::invalid_argument("negative binomial row");
    std::vector<std::int64_t> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<std::int64_t> next(static_cast<std::size_t>(i) + 1, 1);
        for (int k = 1; k < i; ++k) next[k] = row[k - 1] + row[k];
        row = std::move(next);
    }
    return row;
}

PredictorStencil build_stencil(int layers, int rank) {
    if (layers < 1 || layers > kMaxLayers) throw std::invalid_argument("layer count must be in [1, 16]");
    if (rank < 1 || rank > static_cast<int>(kMaxDims)) throw std::invalid_argument("rank must be in [1, 4]");

    const auto binom = binomial_row(layers);
    PredictorStencil stencil{layers, rank, {}};

    // Odometer over offsets with offset[0] most significant, giving lexicographic order.
    Offset k{};
    for (;;) {
        bool origin = true;
        std::int64_t product = 1;
        int parity = 0;
        for (int j = 0; j < rank; ++j) {
            if (k[j] != 0) origin = false;
            product *= binom[k[j]];
            parity += k[j];
        }
        if (!origin) stencil.terms.push_back({k, (parity % 2 == 0) ? -product : product});

        int j = rank - 1;
        while (j >= 0 && k[j] == layers) k[j--] = 0;
        if (j < 0) break;
        ++k[j];
    }
    return stencil;
}

namespace detail {

PredictorStencil masked_stencil(int layers, unsigned mask, std::size_t rank) {
    int active = std::popcount(mask);
    PredictorStencil reduced = build_stencil(layers, active);
    PredictorStencil out{layers, static_cast<int>(rank), {}};
    out.terms.reserve(reduced.terms.size());
    for (const auto &term : reduced.terms) {
        StencilTerm placed{{}, term.coefficient};
        int r = 0;
        for (std::size_t j = 0; j < rank; ++j)
            if (mask & (1u << j)) placed.offset[j] = term.offset[r++];
        out.terms.push_back(placed);
    }
    return out;
}

std::pair<int, unsigned> boundary_state(int layers, std::span<const std::size_t> coord) {
    unsigned mask = 0;
    std::size_t reach = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < coord.size(); ++j) {
        if (coord[j] == 0) continue;
        mask |= 1u << j;
        reach = std::min(reach, coord[j]);
    }
    if (mask == 0) return {0, 0};
    return {static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(layers), reach)), mask};
}

}  // namespace detail

}  // namespace ebz
