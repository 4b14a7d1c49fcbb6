#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bornless {

inline constexpr std::size_t kPiDigits = 1'000'000;

/// First kPiDigits binary digits of pi, most significant first (1,1,0,0,1,...).
/// Computed once with MPFR and cached.
const std::vector<std::uint8_t>& pi_binary_digits();

}  // namespace bornless
