#include <fstream>
#include <stdexcept>

#include "ebz/analysis.hpp"
#include "ebz/generators.hpp"
#include "ebz/metrics.hpp"
#include "jobs.hpp"

namespace ebz::cli {

namespace {

DataGrid load_raw_input(const AnalyzeSpec &spec, const fs::path &path) {
    auto [dims, width] = spec.dims.empty() ? read_sidecar(path) : std::pair{spec.dims, spec.width};
    return read_raw(path, dims, width);
}

void run_metrics(const AnalyzeSpec &spec, std::ostream &out) {
    if (spec.inputs.size() != 2) throw std::invalid_argument("metrics needs an original and a reconstructed input");
    DataGrid original = load_raw_input(spec, spec.inputs[0]);
    const auto &second = spec.inputs[1];
    std::size_t compressed_bytes = 0;
    std::optional<DataGrid> recon;
    if (second.extension() == ".ebz") {
        auto bytes = read_file(second);
        recon = decompress_bytes(bytes);
        compressed_bytes = spec.compressed_bytes.value_or(bytes.size());
    } else {
        if (!spec.compressed_bytes) throw std::invalid_argument("--compressed-bytes is required with a raw reconstruction");
        recon = read_raw(second, original.dims(), original.width());
        compressed_bytes = *spec.compressed_bytes;
    }
    auto report = compute_metrics(original, *recon, compressed_bytes);
    write_metrics_csv_header(out);
    write_metrics_csv_row(out, spec.inputs[0].filename().string(), report);
    if (spec.autocorr_out) {
        std::ofstream ac(*spec.autocorr_out);
        if (!ac) throw std::runtime_error("cannot create " + spec.autocorr_out->string());
        write_autocorr_csv(ac, report);
    }
}

}  // namespace

DataGrid load_analysis_grid(const AnalyzeSpec &spec) {
    if (spec.generator) {
        if (spec.dims.empty()) throw std::invalid_argument("--dims is required with --generator");
        return generate(*spec.generator, spec.dims, spec.seed, spec.width);
    }
    if (spec.inputs.empty()) throw std::invalid_argument("no input file or generator");
    return load_raw_input(spec, spec.inputs[0]);
}

void run_analyze(const AnalyzeSpec &spec, std::ostream &out) {
    if (spec.mode == "metrics") return run_metrics(spec, out);

    DataGrid grid = load_analysis_grid(spec);
    if (spec.mode == "best-layer") {
        write_layer_csv(out, best_layer_scan(grid, spec.config, spec.layer_set));
    } else if (spec.mode == "interval-sweep") {
        write_sweep_csv(out, interval_sweep(grid, spec.config, spec.bounds, spec.exponents));
    } else if (spec.mode == "rate-distortion") {
        auto curve = rate_distortion_sweep(grid, spec.config, spec.bounds);
        write_rate_distortion_csv(out, curve);
    } else {
        throw std::invalid_argument("unknown analysis mode '" + spec.mode + "'");
    }
}

}  // namespace ebz::cli
