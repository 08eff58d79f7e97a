#include "ebz/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "ebz/bitstream.hpp"
#include "ebz/core.hpp"

namespace ebz {

CodeLengthTable::CodeLengthTable(std::vector<std::uint8_t> lengths) : lengths_(std::move(lengths)) {
    if (auto why = check_code_lengths(lengths_)) throw std::invalid_argument("invalid code lengths: " + *why);
}

std::size_t CodeLengthTable::used_symbols() const {
    return static_cast<std::size_t>(std::count_if(lengths_.begin(), lengths_.end(), [](auto l) { return l != 0; }));
}

std::vector<std::uint64_t> CodeLengthTable::canonical_codes() const {
    std::vector<std::uint32_t> order;
    for (std::uint32_t s = 0; s < lengths_.size(); ++s)
        if (lengths_[s] != 0) order.push_back(s);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return lengths_[a] < lengths_[b]; });

    std::vector<std::uint64_t> codes(lengths_.size(), 0);
    std::uint64_t code = 0;
    unsigned prev = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        unsigned len = lengths_[order[i]];
        if (i > 0) ++code;
        code <<= (len - prev);
        prev = len;
        codes[order[i]] = code;
    }
    return codes;
}

std::optional<std::string> check_code_lengths(std::span<const std::uint8_t> lengths) {
    unsigned __int128 kraft = 0;
    std::size_t used = 0;
    unsigned single = 0;
    for (auto l : lengths) {
        if (l == 0) continue;
        if (l > kMaxCodeLength) return "code length above 64";
        ++used;
        single = l;
        kraft += static_cast<unsigned __int128>(1) << (kMaxCodeLength - l);
    }
    const unsigned __int128 one = static_cast<unsigned __int128>(1) << kMaxCodeLength;
    if (used == 0) return "no symbol has a code";
    if (used == 1) return single == 1 ? std::nullopt : std::optional<std::string>("lone symbol must have length 1");
    if (kraft > one) return "Kraft sum exceeds 1";
    if (kraft < one) return "incomplete prefix code";
    return std::nullopt;
}

namespace {

// Code lengths of a Huffman tree over `weights` (all > 0, at least two).
std::vector<unsigned> huffman_depths(const std::vector<std::uint64_t> &weights) {
    const std::size_t leaves = weights.size();
    using Node = std::pair<std::uint64_t, std::size_t>;  // (weight, id)
    std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
    std::vector<std::size_t> parent(2 * leaves - 1, 0);
    for (std::size_t i = 0; i < leaves; ++i) heap.emplace(weights[i], i);

    std::size_t next = leaves;
    while (heap.size() > 1) {
        auto [wa, a] = heap.top();
        heap.pop();
        auto [wb, b] = heap.top();
        heap.pop();
        parent[a] = parent[b] = next;
        heap.emplace(wa + wb, next);
        ++next;
    }

    // Parents are always created after their children, so one reverse sweep suffices.
    std::vector<unsigned> depth(2 * leaves - 1, 0);
    for (std::size_t id = 2 * leaves - 2; id-- > 0;) depth[id] = depth[parent[id]] + 1;
    return {depth.begin(), depth.begin() + static_cast<std::ptrdiff_t>(leaves)};
}

}  // namespace

CodeLengthTable build_code(std::span<const std::uint64_t> histogram) {
    std::vector<std::uint32_t> symbols;
    std::vector<std::uint64_t> weights;
    for (std::uint32_t s = 0; s < histogram.size(); ++s) {
        if (histogram[s] == 0) continue;
        symbols.push_back(s);
        weights.push_back(histogram[s]);
    }
    if (symbols.empty()) throw std::invalid_argument("cannot build a code for an empty histogram");

    std::vector<std::uint8_t> lengths(histogram.size(), 0);
    if (symbols.size() == 1) {
        lengths[symbols[0]] = 1;
        return CodeLengthTable(std::move(lengths));
    }

    // Depth above 64 needs Fibonacci-like counts beyond ~1e13 points; flatten and retry.
    for (;;) {
        auto depths = huffman_depths(weights);
        if (*std::max_element(depths.begin(), depths.end()) <= kMaxCodeLength) {
            for (std::size_t i = 0; i < symbols.size(); ++i) lengths[symbols[i]] = static_cast<std::uint8_t>(depths[i]);
            return CodeLengthTable(std::move(lengths));
        }
        for (auto &w : weights) w = std::max<std::uint64_t>(1, w >> 1);
    }
}

EncodedBits encode(std::span<const std::uint32_t> symbols, const CodeLengthTable &table) {
    auto codes = table.canonical_codes();
    std::uint64_t total = 0;
    for (auto s : symbols) {
        if (s >= table.alphabet_size() || table.length(s) == 0)
            throw std::invalid_argument("symbol " + std::to_string(s) + " has no code");
        total += table.length(s);
    }
    BitWriter w;
    w.reserve_bits(total);
    for (auto s : symbols) w.write(codes[s], table.length(s));
    EncodedBits out;
    out.bit_length = w.bit_length();
    out.bytes = w.finish();
    return out;
}

namespace {

class CanonicalDecoder {
public:
    static constexpr unsigned kLookupBits = 11;

    explicit CanonicalDecoder(const CodeLengthTable &table) {
        const auto &lengths = table.lengths();
        for (std::uint32_t s = 0; s < lengths.size(); ++s)
            if (lengths[s] != 0) sorted_.push_back(s);
        std::stable_sort(sorted_.begin(), sorted_.end(), [&](auto a, auto b) { return lengths[a] < lengths[b]; });

        std::uint64_t code = 0;
        std::size_t index = 0;
        for (unsigned len = 1; len <= kMaxCodeLength; ++len) {
            first_code_[len] = code;
            first_index_[len] = index;
            while (index < sorted_.size() && lengths[sorted_[index]] == len) {
                ++count_[len];
                ++index;
                ++code;
            }
            code <<= 1;
        }

        lookup_.assign(std::size_t{1} << kLookupBits, Entry{0, 0});
        auto codes = table.canonical_codes();
        for (auto s : sorted_) {
            unsigned len = lengths[s];
            if (len > kLookupBits) break;
            std::uint64_t lo = codes[s] << (kLookupBits - len);
            std::uint64_t hi = lo + (std::uint64_t{1} << (kLookupBits - len));
            for (auto i = lo; i < hi; ++i) lookup_[i] = Entry{s, static_cast<std::uint8_t>(len)};
        }
    }

    std::uint32_t next(BitReader &in) const {
        std::size_t remaining = in.remaining();
        if (remaining == 0) throw FormatError(FormatErrc::corrupt_payload, "code bits exhausted");
        const Entry &e = lookup_[in.peek(kLookupBits)];
        if (e.length != 0) {
            if (e.length > remaining) throw FormatError(FormatErrc::corrupt_payload, "code bits exhausted");
            in.skip(e.length);
            return e.symbol;
        }
        std::uint64_t code = 0;
        for (unsigned len = 1; len <= kMaxCodeLength; ++len) {
            if (in.remaining() == 0) throw FormatError(FormatErrc::corrupt_payload, "code bits exhausted");
            code = (code << 1) | in.read_bit();
            if (count_[len] != 0 && code - first_code_[len] < count_[len])
                return sorted_[first_index_[len] + (code - first_code_[len])];
        }
        throw FormatError(FormatErrc::corrupt_payload, "invalid prefix");
    }

private:
    struct Entry {
        std::uint32_t symbol;
        std::uint8_t length;
    };

    std::vector<std::uint32_t> sorted_;
    std::uint64_t first_code_[kMaxCodeLength + 1] = {};
    std::size_t first_index_[kMaxCodeLength + 1] = {};
    std::uint64_t count_[kMaxCodeLength + 1] = {};
    std::vector<Entry> lookup_;
};

}  // namespace

std::vector<std::uint32_t> decode(std::span<const std::uint8_t> bytes, std::uint64_t bit_length,
                                  const CodeLengthTable &table, std::size_t count) {
    if (bytes.size() != (bit_length + 7) / 8)
        throw FormatError(FormatErrc::corrupt_payload, "bit length does not match buffer size");
    std::vector<std::uint32_t> out;
    out.reserve(count);
    if (count == 0) {
        if (bit_length != 0) throw FormatError(FormatErrc::corrupt_payload, "unconsumed code bits");
        return out;
    }
    CanonicalDecoder decoder(table);
    BitReader in(bytes, bit_length);
    for (std::size_t i = 0; i < count; ++i) out.push_back(decoder.next(in));
    if (in.remaining() != 0) throw FormatError(FormatErrc::corrupt_payload, "unconsumed code bits");
    return out;
}

double expected_code_length(std::span<const std::uint64_t> histogram, const CodeLengthTable &table) {
    long double bits = 0, total = 0;
    for (std::size_t s = 0; s < histogram.size(); ++s) {
        bits += static_cast<long double>(histogram[s]) * table.length(s);
        total += histogram[s];
    }
    return total == 0 ? 0.0 : static_cast<double>(bits / total);
}

double entropy_bits(std::span<const std::uint64_t> histogram) {
    long double total = std::accumulate(histogram.begin(), histogram.end(), 0.0L);
    long double h = 0;
    for (auto c : histogram) {
        if (c == 0) continue;
        long double p = c / total;
        h -= p * std::log2(p);
    }
    return static_cast<double>(h);
}

}  // namespace ebz
