#include "ebz/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "ebz/entropy.hpp"

namespace ebz {

std::size_t element_count(std::span<const std::size_t> dims) {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return dims.empty() ? 0 : n;
}

DataGrid::DataGrid(std::vector<std::size_t> dims, std::vector<double> values, ElementWidth width)
    : dims_(std::move(dims)), values_(std::move(values)), width_(width) {
    if (dims_.empty() || dims_.size() > kMaxDims)
        throw std::invalid_argument("grid rank must be in [1, 4]");
    if (std::any_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 0; }))
        throw std::invalid_argument("grid dimensions must be positive");
    if (values_.size() != element_count(dims_))
        throw std::invalid_argument("value count does not match dimensions");
    for (double &v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("grid contains a non-finite value");
        if (width_ == ElementWidth::f32) {
            float f = static_cast<float>(v);
            if (!std::isfinite(f)) throw std::invalid_argument("value overflows 32-bit float");
            v = f;
        }
    }
}

DataGrid DataGrid::from_floats(std::vector<std::size_t> dims, std::span<const float> values) {
    return DataGrid(std::move(dims), std::vector<double>(values.begin(), values.end()), ElementWidth::f32);
}

double grid_range(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("range of an empty grid");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

void ErrorBoundSpec::validate() const {
    if (!absolute && !relative) throw std::invalid_argument("no error bound given");
    if (absolute && !(*absolute >= 0.0 && std::isfinite(*absolute)))
        throw std::invalid_argument("absolute bound must be a finite nonnegative number");
    if (relative && !(*relative >= 0.0 && std::isfinite(*relative)))
        throw std::invalid_argument("relative bound must be a finite nonnegative number");
}

double ErrorBoundSpec::effective_bound(double value_range) const {
    validate();
    std::optional<double> eb;
    if (absolute) eb = *absolute;
    if (relative && value_range > 0.0) {
        double r = *relative * value_range;
        eb = eb ? std::min(*eb, r) : r;
    }
    if (!eb) throw std::invalid_argument("relative-only bound on a constant grid");
    if (!(*eb > 0.0)) throw std::invalid_argument("effective error bound must be positive");
    return *eb;
}

void CompressorConfig::validate() const {
    if (layers < 1 || layers > kMaxLayers) throw std::invalid_argument("layer count must be in [1, 16]");
    if (interval_exponent < kMinIntervalExponent || interval_exponent > kMaxIntervalExponent)
        throw std::invalid_argument("interval exponent must be in [2, 16]");
    if (!(hitting_rate_threshold > 0.0 && hitting_rate_threshold <= 1.0))
        throw std::invalid_argument("hitting rate threshold must be in (0, 1]");
    bound.validate();
}

const char *to_string(FormatErrc e) {
    switch (e) {
    case FormatErrc::bad_magic: return "bad magic";
    case FormatErrc::unsupported_version: return "unsupported version";
    case FormatErrc::truncated: return "truncated payload";
    case FormatErrc::count_mismatch: return "count mismatch";
    case FormatErrc::invalid_header: return "invalid header";
    case FormatErrc::corrupt_payload: return "corrupt payload";
    }
    return "unknown";
}

FormatError::FormatError(FormatErrc code, const std::string &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {

// magic, version, width, d, m, n, 3 reserved
constexpr std::size_t kFixedHeader = 4 + 1 + 1 + 1 + 1 + 1 + 3;

class ByteWriter {
public:
    explicit ByteWriter(std::size_t reserve) { out_.reserve(reserve); }

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

    std::size_t remaining() const { return in_.size() - pos_; }

    void need(std::size_t n, const char *what) const {
        if (remaining() < n) throw FormatError(FormatErrc::truncated, what);
    }
    std::uint8_t u8() { return in_[pos_++]; }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(in_[pos_++]) << (8 * i);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(in_[pos_++]) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    float f32() { return std::bit_cast<float>(u32()); }
    std::span<const std::uint8_t> bytes(std::size_t n) {
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::size_t header_size(std::size_t rank) { return kFixedHeader + 8 * rank + 8 + 8 + 8; }

std::size_t serialized_size(const CompressedStream &s) {
    return header_size(s.dims.size()) + (std::size_t{1} << s.interval_exponent) + (s.code_bit_length + 7) / 8 +
           element_bytes(s.width) * s.unpredictable.size();
}

std::vector<std::uint8_t> serialize(const CompressedStream &s) {
    if (s.dims.empty() || s.dims.size() > kMaxDims) throw std::invalid_argument("stream rank must be in [1, 4]");
    if (s.interval_exponent < kMinIntervalExponent || s.interval_exponent > kMaxIntervalExponent)
        throw std::invalid_argument("stream interval exponent out of range");
    if (s.layers < 1 || s.layers > kMaxLayers) throw std::invalid_argument("stream layer count out of range");
    if (s.code_lengths.size() != (std::size_t{1} << s.interval_exponent))
        throw std::invalid_argument("code-length table size must be 2^m");
    if (s.code_bits.size() != (s.code_bit_length + 7) / 8)
        throw std::invalid_argument("code bit buffer does not match its bit length");

    ByteWriter w(serialized_size(s));
    for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
    w.u8(kFormatVersion);
    w.u8(static_cast<std::uint8_t>(s.width));
    w.u8(static_cast<std::uint8_t>(s.dims.size()));
    w.u8(static_cast<std::uint8_t>(s.interval_exponent));
    w.u8(static_cast<std::uint8_t>(s.layers));
    w.u8(0);
    w.u8(0);
    w.u8(0);
    for (auto d : s.dims) w.u64(d);
    w.f64(s.error_bound);
    w.u64(s.unpredictable.size());
    w.u64(s.code_bit_length);
    w.bytes(s.code_lengths);
    w.bytes(s.code_bits);
    for (double v : s.unpredictable) {
        if (s.width == ElementWidth::f32)
            w.f32(static_cast<float>(v));
        else
            w.f64(v);
    }
    return w.take();
}

CompressedStream deserialize(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.need(4, "magic");
    for (char c : kMagic)
        if (r.u8() != static_cast<std::uint8_t>(c)) throw FormatError(FormatErrc::bad_magic, "expected EBZ1");
    r.need(kFixedHeader - 4, "header");
    if (auto v = r.u8(); v != kFormatVersion)
        throw FormatError(FormatErrc::unsupported_version, "version " + std::to_string(v));

    CompressedStream s;
    auto width = r.u8();
    if (width > 1) throw FormatError(FormatErrc::invalid_header, "element width flag");
    s.width = static_cast<ElementWidth>(width);
    std::size_t rank = r.u8();
    if (rank < 1 || rank > kMaxDims) throw FormatError(FormatErrc::invalid_header, "rank");
    s.interval_exponent = r.u8();
    if (s.interval_exponent < kMinIntervalExponent || s.interval_exponent > kMaxIntervalExponent)
        throw FormatError(FormatErrc::invalid_header, "interval exponent");
    s.layers = r.u8();
    if (s.layers < 1 || s.layers > kMaxLayers) throw FormatError(FormatErrc::invalid_header, "layer count");
    for (int i = 0; i < 3; ++i)
        if (r.u8() != 0) throw FormatError(FormatErrc::invalid_header, "reserved bytes must be zero");

    r.need(8 * rank + 24, "header");
    std::size_t n = 1;
    for (std::size_t i = 0; i < rank; ++i) {
        auto d = r.u64();
        if (d == 0) throw FormatError(FormatErrc::invalid_header, "zero dimension");
        if (n > (std::uint64_t(1) << 56) / d) throw FormatError(FormatErrc::invalid_header, "grid too large");
        n *= d;
        s.dims.push_back(d);
    }
    s.error_bound = r.f64();
    if (!(s.error_bound > 0.0) || !std::isfinite(s.error_bound))
        throw FormatError(FormatErrc::invalid_header, "error bound");
    std::uint64_t n_unpred = r.u64();
    s.code_bit_length = r.u64();
    if (n_unpred > n) throw FormatError(FormatErrc::count_mismatch, "more unpredictable values than points");
    // Every code occupies between 1 and 64 bits.
    if (s.code_bit_length < n || s.code_bit_length / 64 > n)
        throw FormatError(FormatErrc::count_mismatch, "code bit length inconsistent with point count");

    std::size_t table = std::size_t{1} << s.interval_exponent;
    r.need(table, "code-length table");
    auto lengths = r.bytes(table);
    s.code_lengths.assign(lengths.begin(), lengths.end());
    if (auto why = check_code_lengths(s.code_lengths)) throw FormatError(FormatErrc::invalid_header, *why);

    std::size_t code_bytes = (s.code_bit_length + 7) / 8;
    r.need(code_bytes, "code bits");
    auto bits = r.bytes(code_bytes);
    s.code_bits.assign(bits.begin(), bits.end());

    std::size_t eb = element_bytes(s.width);
    r.need(n_unpred * eb, "unpredictable values");
    s.unpredictable.reserve(n_unpred);
    for (std::uint64_t i = 0; i < n_unpred; ++i) {
        double v = s.width == ElementWidth::f32 ? double(r.f32()) : r.f64();
        if (!std::isfinite(v)) throw FormatError(FormatErrc::corrupt_payload, "non-finite unpredictable value");
        s.unpredictable.push_back(v);
    }
    if (r.remaining() != 0) throw FormatError(FormatErrc::count_mismatch, "trailing bytes after payload");
    return s;
}

}  // namespace ebz
