#include "ebz/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "ebz/codec.hpp"
#include "ebz/metrics.hpp"
#include "ebz/predictor.hpp"

namespace ebz {

namespace {

template <class T>
double original_rate(const DataGrid &grid, int layers, double eb) {
    std::vector<T> x(grid.values().begin(), grid.values().end());
    GridPredictor<T> predictor(grid.dims(), layers);
    const auto &dims = grid.dims();
    std::array<std::size_t, kMaxDims> coord{};
    std::size_t hits = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        T pred = predictor.predict(x.data(), i, std::span<const std::size_t>(coord.data(), dims.size()));
        if (std::fabs(static_cast<double>(x[i]) - static_cast<double>(pred)) <= eb) ++hits;
        for (std::size_t j = 0; j < dims.size(); ++j) {
            if (++coord[j] < dims[j]) break;
            coord[j] = 0;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(x.size());
}

}  // namespace

double original_hitting_rate(const DataGrid &grid, int layers, double eb) {
    return grid.width() == ElementWidth::f32 ? original_rate<float>(grid, layers, eb)
                                             : original_rate<double>(grid, layers, eb);
}

LayerReport best_layer_scan(const DataGrid &grid, const CompressorConfig &config, std::span<const int> layers) {
    if (layers.empty()) throw std::invalid_argument("no layers to scan");
    for (int n : layers)
        if (n < 1 || n > kMaxScanLayers) throw std::invalid_argument("layer scan is limited to 1..4");

    LayerReport report;
    report.error_bound = config.bound.effective_bound(grid);
    std::vector<int> sorted(layers.begin(), layers.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    double best = -1;
    for (int n : sorted) {
        CompressorConfig c = config;
        c.layers = n;
        LayerRow row{n, original_hitting_rate(grid, n, report.error_bound), compress(grid, c).hitting_rate};
        if (row.hitting_rate_decompressed > best) {
            best = row.hitting_rate_decompressed;
            report.recommended_layers = n;
        }
        report.rows.push_back(row);
    }
    return report;
}

IntervalSweep interval_sweep(const DataGrid &grid, const CompressorConfig &config, std::span<const double> bounds,
                             std::span<const int> exponents) {
    if (bounds.empty() || exponents.empty()) throw std::invalid_argument("sweep needs bounds and exponents");
    IntervalSweep sweep;
    sweep.relative_bounds.assign(bounds.begin(), bounds.end());
    sweep.interval_exponents.assign(exponents.begin(), exponents.end());
    std::sort(sweep.interval_exponents.begin(), sweep.interval_exponents.end());

    for (double b : sweep.relative_bounds) {
        std::optional<int> adequate;
        for (int m : sweep.interval_exponents) {
            CompressorConfig c = config;
            c.bound.relative = b;
            c.interval_exponent = m;
            auto outcome = compress(grid, c);
            sweep.cells.push_back({b, m, outcome.hitting_rate});
            if (!adequate && outcome.hitting_rate >= config.hitting_rate_threshold) adequate = m;
        }
        sweep.smallest_adequate.push_back(adequate);
    }
    return sweep;
}

std::vector<RatePoint> rate_distortion_sweep(const DataGrid &grid, const CompressorConfig &config,
                                             std::span<const double> bounds) {
    if (bounds.empty()) throw std::invalid_argument("rate-distortion sweep needs at least one bound");
    std::vector<RatePoint> curve;
    for (double b : bounds) {
        CompressorConfig c = config;
        c.bound.relative = b;
        auto outcome = compress(grid, c);
        auto bytes = serialize(outcome.stream);
        auto recon = decompress(outcome.stream);
        auto m = compute_metrics(grid, recon, bytes.size(), 0);
        curve.push_back({b, outcome.stream.error_bound, bytes.size(), m.bit_rate, m.compression_factor, m.psnr,
                         m.max_abs_error, m.pearson_rho, outcome.hitting_rate});
    }
    std::stable_sort(curve.begin(), curve.end(),
                     [](const RatePoint &a, const RatePoint &b) { return a.bit_rate < b.bit_rate; });
    return curve;
}

void write_layer_csv(std::ostream &out, const LayerReport &report) {
    out << "layers,error_bound,hitting_rate_original,hitting_rate_decompressed,recommended\n";
    for (const auto &row : report.rows) {
        out << row.layers << ',' << csv_number(report.error_bound) << ',' << csv_number(row.hitting_rate_original)
            << ',' << csv_number(row.hitting_rate_decompressed) << ','
            << (row.layers == report.recommended_layers ? 1 : 0) << '\n';
    }
}

void write_sweep_csv(std::ostream &out, const IntervalSweep &sweep) {
    out << "relative_bound,interval_exponent,intervals,hitting_rate,smallest_adequate\n";
    const std::size_t per = sweep.interval_exponents.size();
    for (std::size_t i = 0; i < sweep.cells.size(); ++i) {
        const auto &cell = sweep.cells[i];
        const auto &adequate = sweep.smallest_adequate[i / per];
        out << csv_number(cell.relative_bound) << ',' << cell.interval_exponent << ','
            << ((1 << cell.interval_exponent) - 1) << ',' << csv_number(cell.hitting_rate) << ','
            << (adequate && *adequate == cell.interval_exponent ? 1 : 0) << '\n';
    }
}

void write_rate_distortion_csv(std::ostream &out, std::span<const RatePoint> curve) {
    out << "relative_bound,error_bound,compressed_bytes,bit_rate,compression_factor,psnr,max_abs_error,pearson_rho,"
           "hitting_rate\n";
    for (const auto &p : curve) {
        out << csv_number(p.relative_bound) << ',' << csv_number(p.error_bound) << ',' << p.compressed_bytes << ','
            << csv_number(p.bit_rate) << ',' << csv_number(p.compression_factor) << ',' << csv_number(p.psnr) << ','
            << csv_number(p.max_abs_error) << ',' << csv_number(p.pearson_rho) << ',' << csv_number(p.hitting_rate)
            << '\n';
    }
}

}  // namespace ebz
