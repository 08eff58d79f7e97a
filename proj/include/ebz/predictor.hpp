#ifndef EBZ_PREDICTOR_HPP
#define EBZ_PREDICTOR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "ebz/core.hpp"

namespace ebz {

using Offset = std::array<int, kMaxDims>;

struct StencilTerm {
    Offset offset{};  // backward distance per dimension; entries past rank are 0
    std::int64_t coefficient = 0;

    bool operator==(const StencilTerm &) const = default;
};

/// Multilayer prediction stencil over the n-layer neighborhood of a point.
///
/// Every offset (k_1..k_d) with 0 <= k_j <= n, not all zero, carries the
/// coefficient -prod_j (-1)^{k_j} C(n, k_j). Terms are in lexicographic
/// offset order, which is also the summation order used by prediction.
/// For n = 1 this is the Lorenzo predictor.
struct PredictorStencil {
    int layers = 0;
    int rank = 0;
    std::vector<StencilTerm> terms;
};

/// Row n of Pascal's triangle.
std::vector<std::int64_t> binomial_row(int n);

/// n in [1, 16], d in [1, 4].
PredictorStencil build_stencil(int layers, int rank);

/// Reference prediction at `coord` for a grid of extent `dims`.
///
/// `value_at(coord)` must return the (already reconstructed) value at any
/// coordinate preceding `coord` in scan order. Dimensions where the point sits
/// at coordinate 0 are dropped and the layer count is clamped to the smallest
/// remaining coordinate; the very first point predicts 0. Terms are accumulated
/// in T.
template <class T = double, class Lookup>
T predict(const PredictorStencil &stencil, Lookup &&value_at, std::span<const std::size_t> coord);

/// Table-driven predictor for a fixed grid shape, used by the codec.
///
/// Holds one flattened stencil per (clamped layer count, active-dimension
/// mask) so every point, including boundary points, is a single dot product
/// over the reconstructed buffer in the same order as the reference predict().
template <class T>
class GridPredictor {
public:
    GridPredictor(std::span<const std::size_t> dims, int layers);

    /// `coord` must be the coordinates of flat index `index`.
    T predict(const T *buffer, std::size_t index, std::span<const std::size_t> coord) const;

    std::size_t rank() const { return rank_; }

private:
    struct FlatTerm {
        std::ptrdiff_t back;  // distance to subtract from the flat index
        T coefficient;
    };
    std::span<const FlatTerm> stencil_for(std::span<const std::size_t> coord) const;

    std::size_t rank_;
    int layers_;
    std::vector<std::vector<FlatTerm>> table_;  // [(n_eff - 1) << rank | mask]
};

// ---------------------------------------------------------------------------

namespace detail {
// Stencil for (n_eff, popcount(mask)) with offsets scattered onto the set bits of mask.
PredictorStencil masked_stencil(int layers, unsigned mask, std::size_t rank);
// n_eff and active-dimension mask for a point; n_eff == 0 means the first point.
std::pair<int, unsigned> boundary_state(int layers, std::span<const std::size_t> coord);
}  // namespace detail

template <class T, class Lookup>
T predict(const PredictorStencil &stencil, Lookup &&value_at, std::span<const std::size_t> coord) {
    auto [n_eff, mask] = detail::boundary_state(stencil.layers, coord);
    if (n_eff == 0) return T(0);
    PredictorStencil local = detail::masked_stencil(n_eff, mask, coord.size());
    std::array<std::size_t, kMaxDims> at{};
    T sum = 0;
    for (const auto &term : local.terms) {
        for (std::size_t j = 0; j < coord.size(); ++j) at[j] = coord[j] - static_cast<std::size_t>(term.offset[j]);
        sum += static_cast<T>(term.coefficient) *
               static_cast<T>(value_at(std::span<const std::size_t>(at.data(), coord.size())));
    }
    return sum;
}

template <class T>
GridPredictor<T>::GridPredictor(std::span<const std::size_t> dims, int layers)
    : rank_(dims.size()), layers_(layers) {
    if (rank_ < 1 || rank_ > kMaxDims) throw std::invalid_argument("grid rank must be in [1, 4]");
    if (layers < 1 || layers > kMaxLayers) throw std::invalid_argument("layer count must be in [1, 16]");
    std::array<std::ptrdiff_t, kMaxDims> stride{};
    std::ptrdiff_t s = 1;
    for (std::size_t j = 0; j < rank_; ++j) {
        stride[j] = s;
        s *= static_cast<std::ptrdiff_t>(dims[j]);
    }
    // Layer counts above the largest coordinate are never reached.
    std::size_t reach = 0;
    for (auto d : dims) reach = std::max(reach, d - 1);
    int max_layers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(layers), std::max<std::size_t>(reach, 1)));

    table_.resize(static_cast<std::size_t>(layers) << rank_);
    for (int n = 1; n <= max_layers; ++n) {
        for (unsigned mask = 1; mask < (1u << rank_); ++mask) {
            auto stencil = detail::masked_stencil(n, mask, rank_);
            auto &flat = table_[(static_cast<std::size_t>(n - 1) << rank_) | mask];
            flat.reserve(stencil.terms.size());
            for (const auto &term : stencil.terms) {
                std::ptrdiff_t back = 0;
                for (std::size_t j = 0; j < rank_; ++j) back += term.offset[j] * stride[j];
                flat.push_back({back, static_cast<T>(term.coefficient)});
            }
        }
    }
}

template <class T>
std::span<const typename GridPredictor<T>::FlatTerm> GridPredictor<T>::stencil_for(
    std::span<const std::size_t> coord) const {
    auto [n_eff, mask] = detail::boundary_state(layers_, coord);
    if (n_eff == 0) return {};
    return table_[(static_cast<std::size_t>(n_eff - 1) << rank_) | mask];
}

template <class T>
T GridPredictor<T>::predict(const T *buffer, std::size_t index, std::span<const std::size_t> coord) const {
    auto terms = stencil_for(coord);
    T sum = 0;
    for (const auto &t : terms) sum += t.coefficient * buffer[static_cast<std::ptrdiff_t>(index) - t.back];
    return sum;
}

}  // namespace ebz

#endif
