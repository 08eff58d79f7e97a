#include "ebz/codec.hpp"

#include <array>
#include <bit>
#include <cstdio>

#include "ebz/entropy.hpp"
#include "ebz/predictor.hpp"
#include "ebz/quantizer.hpp"

namespace ebz {

std::string IntervalSuggestion::message() const {
    char buf[192];
    std::snprintf(buf, sizeof buf, "hitting rate %.4f below threshold %.4f with m=%d; try m=%d (%d intervals)",
                  hitting_rate, threshold, current_exponent, suggested_exponent, (1 << suggested_exponent) - 1);
    return buf;
}

namespace {

class ScanCursor {
public:
    explicit ScanCursor(std::span<const std::size_t> dims) : dims_(dims) {}

    std::span<const std::size_t> coord() const { return {coord_.data(), dims_.size()}; }

    void advance() {
        for (std::size_t j = 0; j < dims_.size(); ++j) {
            if (++coord_[j] < dims_[j]) return;
            coord_[j] = 0;
        }
    }

private:
    std::span<const std::size_t> dims_;
    std::array<std::size_t, kMaxDims> coord_{};
};

template <class T>
struct Scan {
    std::vector<std::uint32_t> codes;
    std::vector<double> unpredictable;
    std::vector<T> reconstructed;
};

template <class T>
Scan<T> forward_scan(const DataGrid &grid, int layers, double eb, int m) {
    const std::size_t n = grid.size();
    GridPredictor<T> predictor(grid.dims(), layers);
    Scan<T> out;
    out.codes.resize(n);
    out.reconstructed.resize(n);
    ScanCursor cursor(grid.dims());
    T *recon = out.reconstructed.data();
    for (std::size_t i = 0; i < n; ++i, cursor.advance()) {
        const T real = static_cast<T>(grid[i]);
        const T pred = predictor.predict(recon, i, cursor.coord());
        const auto q = quantize<T>(real, pred, eb, m);
        out.codes[i] = q.code;
        recon[i] = q.reconstructed;
        if (q.code == kUnpredictable) out.unpredictable.push_back(static_cast<double>(real));
    }
    return out;
}

template <class T>
std::vector<T> inverse_scan(const CompressedStream &s, std::span<const std::uint32_t> codes) {
    const std::size_t n = codes.size();
    GridPredictor<T> predictor(s.dims, s.layers);
    std::vector<T> recon(n);
    ScanCursor cursor(s.dims);
    std::size_t next_unpred = 0;
    for (std::size_t i = 0; i < n; ++i, cursor.advance()) {
        if (codes[i] == kUnpredictable) {
            if (next_unpred == s.unpredictable.size())
                throw FormatError(FormatErrc::count_mismatch, "unpredictable block underrun");
            recon[i] = static_cast<T>(s.unpredictable[next_unpred++]);
        } else {
            const T pred = predictor.predict(recon.data(), i, cursor.coord());
            recon[i] = dequantize<T>(codes[i], pred, s.error_bound, s.interval_exponent);
        }
    }
    if (next_unpred != s.unpredictable.size())
        throw FormatError(FormatErrc::count_mismatch, "unused unpredictable values");
    return recon;
}

template <class T>
std::vector<double> widen(const std::vector<T> &v) {
    return {v.begin(), v.end()};
}

template <class T>
void hash_values(std::uint64_t &h, std::span<const double> values) {
    using Bits = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    for (double v : values) {
        Bits bits = std::bit_cast<Bits>(static_cast<T>(v));
        for (std::size_t b = 0; b < sizeof(Bits); ++b) {
            h ^= static_cast<std::uint8_t>(bits >> (8 * b));
            h *= 0x100000001b3ull;
        }
    }
}

}  // namespace

QuantizationScan quantization_scan(const DataGrid &grid, int layers, double eb, int m) {
    if (grid.width() == ElementWidth::f32) {
        auto s = forward_scan<float>(grid, layers, eb, m);
        return {std::move(s.codes), std::move(s.unpredictable), widen(s.reconstructed)};
    }
    auto s = forward_scan<double>(grid, layers, eb, m);
    return {std::move(s.codes), std::move(s.unpredictable), std::move(s.reconstructed)};
}

CompressionOutcome compress(const DataGrid &grid, const CompressorConfig &config) {
    config.validate();
    const double eb = config.bound.effective_bound(grid);
    const int m = config.interval_exponent;

    auto scan = quantization_scan(grid, config.layers, eb, m);

    std::vector<std::uint64_t> histogram(std::size_t{1} << m, 0);
    for (auto c : scan.codes) ++histogram[c];
    auto table = build_code(histogram);
    auto bits = encode(scan.codes, table);

    CompressionOutcome out;
    auto &s = out.stream;
    s.width = grid.width();
    s.interval_exponent = m;
    s.layers = config.layers;
    s.dims = grid.dims();
    s.error_bound = eb;
    s.code_lengths = table.lengths();
    s.code_bit_length = bits.bit_length;
    s.code_bits = std::move(bits.bytes);
    s.unpredictable = std::move(scan.unpredictable);

    const double n = static_cast<double>(grid.size());
    out.hitting_rate = (n - static_cast<double>(histogram[kUnpredictable])) / n;
    if (out.hitting_rate < config.hitting_rate_threshold) {
        out.warning = IntervalSuggestion{m, std::min(m + 2, kMaxIntervalExponent), out.hitting_rate,
                                         config.hitting_rate_threshold};
    }
    out.reconstruction_hash = 0xcbf29ce484222325ull;
    if (grid.width() == ElementWidth::f32)
        hash_values<float>(out.reconstruction_hash, scan.reconstructed);
    else
        hash_values<double>(out.reconstruction_hash, scan.reconstructed);
    return out;
}

DataGrid decompress(const CompressedStream &s) {
    if (s.dims.empty() || s.dims.size() > kMaxDims) throw FormatError(FormatErrc::invalid_header, "rank");
    if (s.layers < 1 || s.layers > kMaxLayers) throw FormatError(FormatErrc::invalid_header, "layer count");
    if (s.code_lengths.size() != (std::size_t{1} << s.interval_exponent))
        throw FormatError(FormatErrc::invalid_header, "code-length table size");
    if (auto why = check_code_lengths(s.code_lengths)) throw FormatError(FormatErrc::invalid_header, *why);

    const std::size_t n = s.element_count();
    auto codes = decode(s.code_bits, s.code_bit_length, CodeLengthTable(s.code_lengths), n);

    if (s.width == ElementWidth::f32) return DataGrid(s.dims, widen(inverse_scan<float>(s, codes)), s.width);
    return DataGrid(s.dims, inverse_scan<double>(s, codes), s.width);
}

std::uint64_t reconstruction_hash(const DataGrid &grid) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    if (grid.width() == ElementWidth::f32)
        hash_values<float>(h, grid.values());
    else
        hash_values<double>(h, grid.values());
    return h;
}

}  // namespace ebz
