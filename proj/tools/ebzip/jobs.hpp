#ifndef EBZIP_JOBS_HPP
#define EBZIP_JOBS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ebz/codec.hpp"
#include "ebz/core.hpp"

namespace ebz::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kSuccess = 0, kPartialFailure = 1, kUsageError = 2 };

struct JobSpec {
    std::vector<fs::path> inputs;
    std::vector<std::size_t> dims;  // empty: read a <input>.json sidecar per file
    ElementWidth width = ElementWidth::f32;
    CompressorConfig config;
    unsigned workers = 1;
    fs::path output_dir = ".";
    bool auto_m = false;
};

struct FileOutcome {
    fs::path input;
    fs::path output;
    bool ok = false;
    std::string error;
    std::size_t value_count = 0;
    std::size_t input_bytes = 0;
    std::size_t output_bytes = 0;
    double compression_factor = 0;
    double bit_rate = 0;
    double hitting_rate = 0;
    int interval_exponent = 0;
    std::optional<IntervalSuggestion> warning;
    double seconds = 0;

    double throughput_mb_s() const { return seconds > 0 ? static_cast<double>(input_bytes) / seconds / 1e6 : 0; }
};

/// "512x512", "512,512" or "512" -> {512, 512}; dimension 1 first.
std::vector<std::size_t> parse_dims(const std::string &text);

/// EBZIP_WORKERS if set to a positive integer, else 1.
unsigned default_workers();

/// Headerless little-endian array of the given width.
DataGrid read_raw(const fs::path &path, const std::vector<std::size_t> &dims, ElementWidth width);
void write_raw(const fs::path &path, const DataGrid &grid);

std::vector<std::uint8_t> read_file(const fs::path &path);
void write_file(const fs::path &path, const std::vector<std::uint8_t> &bytes);

/// Dims and width from `<input>.json`: {"dims": [n1, ...], "width": 32}.
std::pair<std::vector<std::size_t>, ElementWidth> read_sidecar(const fs::path &input);

/// Throws std::invalid_argument when the job is unusable before any work starts
/// (no inputs, a missing input, workers == 0).
void validate_job(const JobSpec &job);

/// Compresses every input into <output_dir>/<filename>.ebz on a pool of
/// job.workers threads. Outcomes are returned in input order.
std::vector<FileOutcome> run_compress(const JobSpec &job);

/// Decompresses every container into <output_dir>/<name without .ebz>.dec.
std::vector<FileOutcome> run_decompress(const JobSpec &job);

/// Compresses one grid, retrying at m + 2 while the hitting rate is below the
/// threshold and m < 16 when auto_m is set.
CompressionOutcome compress_with_policy(const DataGrid &grid, CompressorConfig config, bool auto_m);

void write_compress_summary(std::ostream &out, const std::vector<FileOutcome> &outcomes);
void write_decompress_summary(std::ostream &out, const std::vector<FileOutcome> &outcomes);

int exit_code_for(const std::vector<FileOutcome> &outcomes);

struct AnalyzeSpec {
    std::string mode;  // metrics | best-layer | interval-sweep | rate-distortion
    std::vector<fs::path> inputs;
    std::vector<std::size_t> dims;
    ElementWidth width = ElementWidth::f32;
    std::optional<std::string> generator;  // replaces the input file for sweeps
    std::uint64_t seed = 1;
    CompressorConfig config;
    std::vector<double> bounds{1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<int> exponents{4, 6, 8, 10, 12};
    std::vector<int> layer_set{1, 2, 3, 4};
    std::optional<std::size_t> compressed_bytes;
    std::optional<fs::path> autocorr_out;
};

/// The generator field if set, else inputs[0] read as raw data.
DataGrid load_analysis_grid(const AnalyzeSpec &spec);

/// Writes the CSV for spec.mode to `out`.
///
/// metrics takes two inputs: the original raw file and either a .ebz container
/// (decompressed here, its file size is the compressed size) or a reconstructed
/// raw file together with compressed_bytes.
void run_analyze(const AnalyzeSpec &spec, std::ostream &out);

}  // namespace ebz::cli

#endif
