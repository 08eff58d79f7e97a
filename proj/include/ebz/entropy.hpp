#ifndef EBZ_ENTROPY_HPP
#define EBZ_ENTROPY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ebz {

inline constexpr unsigned kMaxCodeLength = 64;

/// Canonical Huffman code described only by per-symbol code lengths.
/// Codes are assigned in (length, symbol) order; length 0 marks an unused symbol.
class CodeLengthTable {
public:
    CodeLengthTable() = default;
    explicit CodeLengthTable(std::vector<std::uint8_t> lengths);

    std::size_t alphabet_size() const { return lengths_.size(); }
    unsigned length(std::size_t symbol) const { return lengths_[symbol]; }
    const std::vector<std::uint8_t> &lengths() const { return lengths_; }
    std::size_t used_symbols() const;

    /// Canonical codeword for each symbol (meaningless where length is 0).
    std::vector<std::uint64_t> canonical_codes() const;

    bool operator==(const CodeLengthTable &) const = default;

private:
    std::vector<std::uint8_t> lengths_;
};

/// Returns a reason string if the lengths cannot describe a usable canonical
/// code: lengths above 64, no used symbol, a single symbol not at length 1,
/// Kraft sum above 1, or an incomplete code over two or more symbols.
std::optional<std::string> check_code_lengths(std::span<const std::uint8_t> lengths);

/// Optimal prefix-code lengths for `histogram` (alphabet size = histogram.size()).
/// Merge ties are broken by (count, node id) with leaves ordered by symbol and
/// internal nodes after all leaves in creation order.
CodeLengthTable build_code(std::span<const std::uint64_t> histogram);

struct EncodedBits {
    std::vector<std::uint8_t> bytes;
    std::uint64_t bit_length = 0;
};

EncodedBits encode(std::span<const std::uint32_t> symbols, const CodeLengthTable &table);

/// Decodes exactly `count` symbols. Throws FormatError(corrupt_payload) on
/// bit exhaustion, an unassigned prefix, or unconsumed trailing bits.
std::vector<std::uint32_t> decode(std::span<const std::uint8_t> bytes, std::uint64_t bit_length,
                                  const CodeLengthTable &table, std::size_t count);

/// Σ count(s) * length(s) / Σ count(s).
double expected_code_length(std::span<const std::uint64_t> histogram, const CodeLengthTable &table);

/// Shannon entropy of the histogram in bits/symbol.
double entropy_bits(std::span<const std::uint64_t> histogram);

}  // namespace ebz

#endif
