#ifndef EBZ_BITSTREAM_HPP
#define EBZ_BITSTREAM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ebz {

// MSB-first bit packing: the first bit written lands in bit 7 of byte 0.
class BitWriter {
public:
    void reserve_bits(std::size_t bits) { bytes_.reserve((bits + 7) / 8); }

    // Appends the low `count` bits of `value`, most significant first. count <= 64.
    void write(std::uint64_t value, unsigned count) {
        while (count > 0) {
            unsigned room = 64 - fill_;
            unsigned take = count < room ? count : room;
            std::uint64_t chunk = (take == 64) ? value : (value >> (count - take)) & ((std::uint64_t{1} << take) - 1);
            acc_ = (take == 64) ? chunk : (acc_ << take) | chunk;
            fill_ += take;
            count -= take;
            if (fill_ == 64) flush_word();
        }
    }

    std::size_t bit_length() const { return bytes_.size() * 8 + fill_; }

    // Pads the final partial byte with zero bits and returns the buffer.
    std::vector<std::uint8_t> finish() {
        while (fill_ >= 8) {
            fill_ -= 8;
            bytes_.push_back(static_cast<std::uint8_t>(acc_ >> fill_));
        }
        if (fill_ > 0) bytes_.push_back(static_cast<std::uint8_t>(acc_ << (8 - fill_)));
        acc_ = 0;
        fill_ = 0;
        return std::move(bytes_);
    }

private:
    void flush_word() {
        for (int i = 7; i >= 0; --i) bytes_.push_back(static_cast<std::uint8_t>(acc_ >> (8 * i)));
        acc_ = 0;
        fill_ = 0;
    }

    std::vector<std::uint8_t> bytes_;
    std::uint64_t acc_ = 0;
    unsigned fill_ = 0;
};

class BitReader {
public:
    BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_length) : bytes_(bytes), bit_length_(bit_length) {}

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bit_length_ - pos_; }

    unsigned read_bit() {
        unsigned bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
        ++pos_;
        return bit;
    }

    // Next `count` (<= 57) bits without consuming them; bits past the end read as zero.
    std::uint64_t peek(unsigned count) const {
        if (count == 0) return 0;
        std::size_t byte = pos_ >> 3;
        std::uint64_t window = 0;
        for (int i = 0; i < 8; ++i) {
            window <<= 8;
            if (byte + i < bytes_.size()) window |= bytes_[byte + i];
        }
        window <<= (pos_ & 7);
        return window >> (64 - count);
    }

    void skip(std::size_t count) { pos_ += count; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t bit_length_;
    std::size_t pos_ = 0;
};

}  // namespace ebz

#endif
