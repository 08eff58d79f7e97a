#ifndef EBZ_CORE_HPP
#define EBZ_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebz {

inline constexpr std::size_t kMaxDims = 4;
inline constexpr int kMaxLayers = 16;
inline constexpr int kMinIntervalExponent = 2;
inline constexpr int kMaxIntervalExponent = 16;

enum class ElementWidth : std::uint8_t { f32 = 0, f64 = 1 };

inline constexpr std::size_t element_bytes(ElementWidth w) { return w == ElementWidth::f32 ? 4 : 8; }
inline constexpr std::size_t element_bits(ElementWidth w) { return element_bytes(w) * 8; }

/// A d-dimensional floating-point array (1 <= d <= 4).
///
/// dims[0] is the fastest-varying dimension. Values are held as double; a
/// 32-bit grid only ever holds values exactly representable as float, so the
/// width flag is lossless metadata rather than a conversion request.
class DataGrid {
public:
    DataGrid(std::vector<std::size_t> dims, std::vector<double> values, ElementWidth width);

    static DataGrid from_floats(std::vector<std::size_t> dims, std::span<const float> values);

    const std::vector<std::size_t> &dims() const { return dims_; }
    std::size_t rank() const { return dims_.size(); }
    std::size_t size() const { return values_.size(); }
    ElementWidth width() const { return width_; }
    std::size_t byte_size() const { return size() * element_bytes(width_); }

    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    bool operator==(const DataGrid &) const = default;

private:
    std::vector<std::size_t> dims_;
    std::vector<double> values_;
    ElementWidth width_;
};

std::size_t element_count(std::span<const std::size_t> dims);

/// max(X) - min(X). Throws on an empty sequence.
double grid_range(std::span<const double> values);
inline double grid_range(const DataGrid &grid) { return grid_range(grid.values()); }

struct ErrorBoundSpec {
    std::optional<double> absolute;
    std::optional<double> relative;

    /// min over the provided members, with the relative member scaled by the
    /// value range. A relative member contributes only when the range is
    /// positive. Throws if the result is not strictly positive.
    double effective_bound(double value_range) const;
    double effective_bound(const DataGrid &grid) const { return effective_bound(grid_range(grid)); }

    void validate() const;
};

struct CompressorConfig {
    int layers = 1;
    int interval_exponent = 8;
    ErrorBoundSpec bound;
    double hitting_rate_threshold = 0.9;

    void validate() const;
};

/// Container contents. Codes are Huffman-coded against a canonical table
/// stored as one length byte per symbol of the 2^m alphabet.
struct CompressedStream {
    ElementWidth width = ElementWidth::f32;
    int interval_exponent = 8;
    int layers = 1;
    std::vector<std::size_t> dims;
    double error_bound = 0.0;
    std::vector<std::uint8_t> code_lengths;
    std::uint64_t code_bit_length = 0;
    std::vector<std::uint8_t> code_bits;
    std::vector<double> unpredictable;

    std::size_t element_count() const { return ebz::element_count(dims); }
    bool operator==(const CompressedStream &) const = default;
};

enum class FormatErrc {
    bad_magic,
    unsupported_version,
    truncated,
    count_mismatch,
    invalid_header,
    corrupt_payload,
};

const char *to_string(FormatErrc e);

class FormatError : public std::runtime_error {
public:
    FormatError(FormatErrc code, const std::string &what);
    FormatErrc code() const { return code_; }

private:
    FormatErrc code_;
};

inline constexpr char kMagic[4] = {'E', 'B', 'Z', '1'};
inline constexpr std::uint8_t kFormatVersion = 1;

/// Bytes occupied by everything before the code-length table.
std::size_t header_size(std::size_t rank);
/// Exact serialized size of a stream.
std::size_t serialized_size(const CompressedStream &stream);

std::vector<std::uint8_t> serialize(const CompressedStream &stream);
CompressedStream deserialize(std::span<const std::uint8_t> bytes);

}  // namespace ebz

#endif
