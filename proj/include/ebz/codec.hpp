#ifndef EBZ_CODEC_HPP
#define EBZ_CODEC_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebz/core.hpp"

namespace ebz {

/// Raised when the hitting rate falls below the configured threshold.
struct IntervalSuggestion {
    int current_exponent;
    int suggested_exponent;  // m + 2, capped at 16
    double hitting_rate;
    double threshold;

    std::string message() const;
};

struct CompressionOutcome {
    CompressedStream stream;
    double hitting_rate = 0.0;  // (N - #code 0) / N
    std::optional<IntervalSuggestion> warning;
    std::uint64_t reconstruction_hash = 0;  // hash of the compressor's reconstructed buffer
};

/// Predict-quantize-encode over the grid in scan order (dimension 1 fastest).
/// Predictions always read previously reconstructed values, so the
/// decompressor replays the same sequence bit for bit.
CompressionOutcome compress(const DataGrid &grid, const CompressorConfig &config);

DataGrid decompress(const CompressedStream &stream);

inline std::vector<std::uint8_t> compress_to_bytes(const DataGrid &grid, const CompressorConfig &config) {
    return serialize(compress(grid, config).stream);
}
inline DataGrid decompress_bytes(std::span<const std::uint8_t> bytes) { return decompress(deserialize(bytes)); }

/// FNV-1a over the element-width bit patterns of the grid, in scan order.
std::uint64_t reconstruction_hash(const DataGrid &grid);

/// Codes and unpredictable values of the quantization pass, before entropy coding.
struct QuantizationScan {
    std::vector<std::uint32_t> codes;
    std::vector<double> unpredictable;
    std::vector<double> reconstructed;
};

QuantizationScan quantization_scan(const DataGrid &grid, int layers, double error_bound, int interval_exponent);

}  // namespace ebz

#endif
