#include "bornless/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bornless {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("not an integer");
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

BigInt pow10(long e) {
  BigInt v = 1;
  for (long i = 0; i < e; ++i) v *= 10;
  return v;
}

Rational parse_decimal(std::string_view s) {
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = s.substr(e + 1);
    BigInt ev = parse_integer(exp_text);
    if (ev > 4000 || ev < -4000) throw std::invalid_argument("exponent out of range");
    exponent = static_cast<long>(ev);
    s = s.substr(0, e);
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("empty number");
  if (!int_part.empty() && !all_digits(int_part)) throw std::invalid_argument("bad digits");
  if (!frac_part.empty() && !all_digits(frac_part)) throw std::invalid_argument("bad digits");

  std::string digits = std::string(int_part) + std::string(frac_part);
  BigInt mantissa(digits.empty() ? std::string("0") : digits);
  exponent -= static_cast<long>(frac_part.size());
  Rational q = exponent >= 0 ? Rational(mantissa * pow10(exponent))
                             : Rational(mantissa, pow10(-exponent));
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");
  try {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      BigInt num = parse_integer(text.substr(0, slash));
      BigInt den = parse_integer(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Rational(num, den);
    }
    return parse_decimal(text);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
}

std::string to_string(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

BigInt ceil(const Rational& q) {
  BigInt num = numerator(q);
  BigInt den = denominator(q);
  BigInt quot = num / den;  // truncates toward zero
  if (quot * den != num && num > 0) quot += 1;
  return quot;
}

Rational rational_between(double lo, const Rational& hi) {
  const Rational lo_q(lo);
  if (!(lo_q < hi)) throw std::invalid_argument("rational_between: empty interval");
  for (std::int64_t d = 1; d <= 1'000'000; ++d) {
    // smallest k/d strictly above lo: floor(lo*d) + 1
    Rational scaled = lo_q * d;
    BigInt k = numerator(scaled) / denominator(scaled);
    if (k * denominator(scaled) > numerator(scaled)) k -= 1;
    k += 1;
    Rational cand(k, d);
    if (cand < hi) return cand;
  }
  return (lo_q + hi) / 2;
}

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

}  // namespace bornless
