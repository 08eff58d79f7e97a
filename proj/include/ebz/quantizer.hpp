#ifndef EBZ_QUANTIZER_HPP
#define EBZ_QUANTIZER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ebz {

// Error-controlled quantization with 2^m - 1 intervals of width 2*eb centred on
// predicted + k*2*eb, |k| <= 2^{m-1} - 1. Code 2^{m-1} + k names interval k;
// code 0 marks an unpredictable value.

inline constexpr std::uint32_t kUnpredictable = 0;

inline std::uint32_t center_code(int m) { return std::uint32_t{1} << (m - 1); }
inline std::int64_t max_interval_index(int m) { return (std::int64_t{1} << (m - 1)) - 1; }

template <class T>
struct Quantized {
    std::uint32_t code;
    T reconstructed;  // equals the real value when code == 0
};

namespace detail {
inline void check_quantizer_args(double eb, int m) {
    if (!(eb > 0.0) || !std::isfinite(eb)) throw std::invalid_argument("error bound must be positive and finite");
    if (m < 2 || m > 16) throw std::invalid_argument("interval exponent must be in [2, 16]");
}
}  // namespace detail

/// Midpoint of interval k, rounded once to T.
template <class T>
inline T interval_value(T predicted, std::int64_t k, double eb) {
    return static_cast<T>(static_cast<double>(predicted) + static_cast<double>(k) * 2.0 * eb);
}

/// Quantizes `real` against `predicted`. Ties round away from zero, except on
/// the outer edge of the outermost interval. A value is unpredictable when no
/// interval holds it, when the prediction is not finite, or when rounding to T
/// pushes the reconstruction outside eb.
template <class T>
Quantized<T> quantize(T real, T predicted, double eb, int m) {
    detail::check_quantizer_args(eb, m);
    if (!std::isfinite(real)) throw std::invalid_argument("cannot quantize a non-finite value");
    if (!std::isfinite(predicted)) return {kUnpredictable, real};

    const double diff = static_cast<double>(real) - static_cast<double>(predicted);
    const double scaled = std::round(diff / (2.0 * eb));
    const auto radius = static_cast<double>(max_interval_index(m));
    if (!(std::fabs(scaled) <= radius + 1.0)) return {kUnpredictable, real};

    // A tie on the outer edge of the last interval still belongs to it.
    const auto k = static_cast<std::int64_t>(std::clamp(scaled, -radius, radius));
    const T recon = interval_value(predicted, k, eb);
    if (!(std::fabs(static_cast<double>(real) - static_cast<double>(recon)) <= eb)) return {kUnpredictable, real};
    return {static_cast<std::uint32_t>(static_cast<std::int64_t>(center_code(m)) + k), recon};
}

template <class T>
T dequantize(std::uint32_t code, T predicted, double eb, int m) {
    detail::check_quantizer_args(eb, m);
    if (code == kUnpredictable) throw std::invalid_argument("code 0 has no interval; read the unpredictable block");
    if (code >= (std::uint32_t{1} << m)) throw std::invalid_argument("code outside the 2^m alphabet");
    const std::int64_t k = static_cast<std::int64_t>(code) - static_cast<std::int64_t>(center_code(m));
    return interval_value(predicted, k, eb);
}

}  // namespace ebz

#endif
