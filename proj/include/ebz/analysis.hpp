#ifndef EBZ_ANALYSIS_HPP
#define EBZ_ANALYSIS_HPP

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "ebz/core.hpp"

namespace ebz {

inline constexpr int kMaxScanLayers = 4;

struct LayerRow {
    int layers = 0;
    double hitting_rate_original = 0;      // prediction from original values, |x - pred| <= eb
    double hitting_rate_decompressed = 0;  // the codec's own hitting rate
};

struct LayerReport {
    double error_bound = 0;
    std::vector<LayerRow> rows;
    int recommended_layers = 0;  // argmax of the decompressed rate, ties to fewer layers
};

/// Fraction of points with |x - pred| <= eb when every prediction reads
/// original values (no reconstruction feedback).
double original_hitting_rate(const DataGrid &grid, int layers, double error_bound);

/// `layers` must be a nonempty subset of {1..4}; config.layers is ignored.
LayerReport best_layer_scan(const DataGrid &grid, const CompressorConfig &config, std::span<const int> layers);

struct SweepCell {
    double relative_bound = 0;
    int interval_exponent = 0;
    double hitting_rate = 0;
};

struct IntervalSweep {
    std::vector<double> relative_bounds;
    std::vector<int> interval_exponents;  // sorted ascending
    std::vector<SweepCell> cells;         // bound-major, exponent-minor
    /// Per bound, the smallest exponent whose rate reaches the threshold.
    std::vector<std::optional<int>> smallest_adequate;

    double rate(std::size_t bound_index, std::size_t exponent_index) const {
        return cells[bound_index * interval_exponents.size() + exponent_index].hitting_rate;
    }
};

/// Hitting rate for every (relative bound, m) pair. Layers, threshold and any
/// absolute bound come from `config`.
IntervalSweep interval_sweep(const DataGrid &grid, const CompressorConfig &config, std::span<const double> relative_bounds,
                             std::span<const int> interval_exponents);

struct RatePoint {
    double relative_bound = 0;
    double error_bound = 0;
    std::size_t compressed_bytes = 0;
    double bit_rate = 0;
    double compression_factor = 0;
    double psnr = 0;
    double max_abs_error = 0;
    double pearson_rho = 0;
    double hitting_rate = 0;
};

/// One compress/decompress/measure cycle per relative bound, sorted by bit rate.
std::vector<RatePoint> rate_distortion_sweep(const DataGrid &grid, const CompressorConfig &config,
                                             std::span<const double> relative_bounds);

// CSV writers; column lists are documented in README.md.
void write_layer_csv(std::ostream &out, const LayerReport &report);
void write_sweep_csv(std::ostream &out, const IntervalSweep &sweep);
void write_rate_distortion_csv(std::ostream &out, std::span<const RatePoint> curve);

}  // namespace ebz

#endif
