#include "cantor/rational.hpp"

#include "cantor/error.hpp"

#include <cctype>
#include <limits>

namespace cantor {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotInV: return "NotInV";
    case ErrorCode::SumMismatch: return "SumMismatch";
    case ErrorCode::NotGroupLike: return "NotGroupLike";
    case ErrorCode::InvalidChallenge: return "InvalidChallenge";
    case ErrorCode::NotSmaller: return "NotSmaller";
    case ErrorCode::WeightMismatch: return "WeightMismatch";
    case ErrorCode::NotEquiSummed: return "NotEquiSummed";
    case ErrorCode::NotCycleObject: return "NotCycleObject";
    case ErrorCode::DepthTooShallow: return "DepthTooShallow";
    case ErrorCode::NonRationalScale: return "NonRationalScale";
    case ErrorCode::MassOverflow: return "MassOverflow";
    case ErrorCode::MassMismatch: return "MassMismatch";
    case ErrorCode::NotRingLike: return "NotRingLike";
    case ErrorCode::NotQLike: return "NotQLike";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::NotAValue: return "NotAValue";
    case ErrorCode::ComponentMixing: return "ComponentMixing";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
  }
  return "Unknown";
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

namespace {

Integer parse_integer(const std::string& text, const std::string& whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) {
    throw Error(ErrorCode::InvalidInput, "malformed rational '" + whole + "'");
  }
  Integer n = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw Error(ErrorCode::InvalidInput, "malformed rational '" + whole + "'");
    }
    n = n * 10 + (text[i] - '0');
  }
  return negative ? Integer(-n) : n;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(text, text));
  const Integer num = parse_integer(text.substr(0, slash), text);
  const Integer den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) {
    throw Error(ErrorCode::InvalidInput, "zero denominator in '" + text + "'");
  }
  return Rational(num, den);
}

unsigned valuation(Integer n, std::uint64_t p) {
  if (n < 0) n = -n;
  unsigned v = 0;
  if (n == 0 || p < 2) return 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(Integer n) {
  if (n < 0) n = -n;
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (n > std::numeric_limits<std::uint64_t>::max()) {
    throw Error(ErrorCode::InvalidInput, "prime factor exceeds 64 bits");
  }
  if (n > 1) out.emplace_back(static_cast<std::uint64_t>(n), 1);
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Integer floor(const Rational& q) {
  const Integer num = numerator(q);
  const Integer den = denominator(q);
  Integer f = num / den;  // truncates toward zero
  if (num < 0 && f * den != num) f -= 1;
  return f;
}

}  // namespace cantor
