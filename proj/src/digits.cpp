#include "bornless/digits.hpp"

#include <mpfr.h>

#include <cstring>
#include <stdexcept>

namespace bornless {

const std::vector<std::uint8_t>& pi_binary_digits() {
  static const std::vector<std::uint8_t> digits = [] {
    mpfr_t pi;
    mpfr_init2(pi, static_cast<mpfr_prec_t>(kPiDigits + 64));
    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_exp_t exponent = 0;
    char* text = mpfr_get_str(nullptr, &exponent, 2, kPiDigits, pi, MPFR_RNDZ);
    std::vector<std::uint8_t> out;
    out.reserve(kPiDigits);
    for (const char* c = text; *c != '\0'; ++c) out.push_back(static_cast<std::uint8_t>(*c - '0'));
    mpfr_free_str(text);
    mpfr_clear(pi);
    if (exponent != 2 || out.size() != kPiDigits) throw std::runtime_error("pi digit generation failed");
    return out;
  }();
  return digits;
}

}  // namespace bornless
