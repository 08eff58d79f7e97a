#ifndef EBZ_GENERATORS_HPP
#define EBZ_GENERATORS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ebz/core.hpp"

namespace ebz {

/// Seeded synthetic fields. All draws come from std::mt19937_64, whose output
/// sequence is fixed by the standard, so the random parameters do not depend
/// on the standard library in use.
/// u_j = c_j / dims_j is the normalized coordinate along dimension j.
///
///   constant  1.0 everywhere
///   sines     Σ_j sin(2π f_j u_j + φ_j) + 0.5 Π_j sin(2π u_j + ψ_j)
///             draws, in order, for each j: f_j = 1 + ⌊3U⌋, φ_j = 2πU, ψ_j = 2πU
///   poly      Σ_j a_j u_j + Σ_j c_j u_j³ + Σ_{j<k} b_jk u_j² u_k²
///             draws: all a_j, then all c_j, then b_jk in (j, k) order; each 2U - 1
///   noise     i.i.d. standard normal (Box-Muller, both outputs used)
///   spiky     sines, plus a step of +2 for u_1 >= 0.5, plus spikes of ±5 at
///             roughly 0.2% of points (Bernoulli draw per point after the sines draws)
///
/// U is (x >> 11) * 2^-53 for the next engine output x.
DataGrid generate(std::string_view name, std::vector<std::size_t> dims, std::uint64_t seed,
                  ElementWidth width = ElementWidth::f32);

const std::vector<std::string> &generator_names();

/// Uniform [0, 1) draw with 53 random bits.
inline double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

}  // namespace ebz

#endif
