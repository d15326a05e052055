#pragma once
// Synthetic two-class benchmarks in the style of the classic Breiman sets.
//
//   twonorm   20-d, N(-a*1, I) vs N(+a*1, I), a = 2/sqrt(20)
//   ringnorm  20-d, N(0, 4I) vs N(a*1, I),   a = 2/sqrt(20)
//   waveform  21-d, u*h1 + (1-u)*h2 vs u*h1 + (1-u)*h3 plus N(0,1) noise,
//             with triangular base waves h1, h2 = h1 shifted right by 4,
//             h3 = h1 shifted left by 4, u ~ U(0,1)
//
// Classes are balanced exactly (the first class gets floor(n/2) samples) and
// appear in random order. Output is a deterministic function of (name, n, seed).

#include <cstdint>
#include <string>

#include "wmr/core_types.hpp"

namespace wmr {

enum class GeneratorKind : std::uint8_t { Twonorm, Ringnorm, Waveform };

const char* to_string(GeneratorKind kind) noexcept;
GeneratorKind generator_kind_from_string(const std::string& text);
std::size_t generator_dimension(GeneratorKind kind) noexcept;

Dataset generate_dataset(GeneratorKind kind, std::size_t n, std::uint64_t seed);

}  // namespace wmr
