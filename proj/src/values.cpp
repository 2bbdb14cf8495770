#include "cantor/values.hpp"

#include "cantor/error.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace cantor {

namespace {

constexpr unsigned kStartBits = 16;
constexpr unsigned kMaxBits = 4096;

Integer pow2(unsigned bits) { return Integer(1) << bits; }

int rational_sign(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

}  // namespace

// ---------------------------------------------------------------------------
// IrrationalSymbol

SymbolRef IrrationalSymbol::make(std::string name, Source source) {
  if (name.empty()) {
    throw Error(ErrorCode::InvalidInput, "irrational symbol needs a name");
  }
  if (const auto* s = std::get_if<SqrtEnclosure>(&source)) {
    if (s->radicand < 2) {
      throw Error(ErrorCode::InvalidInput, "radicand must be at least 2");
    }
    const Integer root = boost::multiprecision::sqrt(s->radicand);
    if (root * root == s->radicand) {
      throw Error(ErrorCode::InvalidInput,
                  "sqrt(" + s->radicand.str() + ") is rational");
    }
  } else {
    const auto& d = std::get<DigitsEnclosure>(source);
    if (d.base < 2 || d.base > 36) {
      throw Error(ErrorCode::InvalidInput, "digit base must be in [2, 36]");
    }
    if (d.digits.empty()) {
      throw Error(ErrorCode::InvalidInput, "digit expansion is empty");
    }
    bool nonzero = false;
    bool below_one = false;
    for (char c : d.digits) {
      unsigned digit = 0;
      if (c >= '0' && c <= '9') {
        digit = static_cast<unsigned>(c - '0');
      } else if (c >= 'a' && c <= 'z') {
        digit = static_cast<unsigned>(c - 'a') + 10;
      } else {
        throw Error(ErrorCode::InvalidInput, "bad digit in expansion");
      }
      if (digit >= d.base) {
        throw Error(ErrorCode::InvalidInput, "digit exceeds base");
      }
      nonzero = nonzero || digit != 0;
      below_one = below_one || digit + 1 != d.base;
    }
    if (!nonzero || !below_one) {
      throw Error(ErrorCode::InvalidInput,
                  "digit expansion must lie strictly inside (0, 1)");
    }
  }
  SymbolRef sym(new IrrationalSymbol(std::move(name), std::move(source)));
  const Interval box = sym->enclose(32);
  if (box.lo <= 0 || box.hi >= 1) {
    throw Error(ErrorCode::InvalidInput,
                "symbol '" + sym->name() + "' is not inside (0, 1)");
  }
  return sym;
}

Interval IrrationalSymbol::enclose(unsigned bits) const {
  if (const auto* s = std::get_if<SqrtEnclosure>(&source_)) {
    // floor(sqrt(r) * 2^bits) gives nested dyadic intervals of width 2^-bits.
    const Integer scale = pow2(bits);
    const Integer a = boost::multiprecision::sqrt(Integer(s->radicand * scale * scale));
    Interval out{Rational(a, scale), Rational(a + 1, scale)};
    out.lo += s->shift;
    out.hi += s->shift;
    return out;
  }
  const auto& d = std::get<DigitsEnclosure>(source_);
  const Integer target = pow2(bits);
  Integer place = 1;
  std::size_t k = 0;
  while (place < target) {
    place *= d.base;
    ++k;
  }
  if (k > d.digits.size()) {
    throw Error(ErrorCode::PrecisionExhausted,
                "digit expansion of '" + name_ + "' too short for 2^-" +
                    std::to_string(bits));
  }
  Integer num = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const char c = d.digits[i];
    const unsigned digit =
        (c >= '0' && c <= '9') ? static_cast<unsigned>(c - '0')
                               : static_cast<unsigned>(c - 'a') + 10;
    num = num * d.base + digit;
  }
  return {Rational(num, place), Rational(num + 1, place)};
}

// ---------------------------------------------------------------------------
// ExactValue

ExactValue ExactValue::symbol(SymbolRef s, Rational coeff) {
  ExactValue v;
  if (coeff != 0) v.terms_.push_back({std::move(s), std::move(coeff)});
  return v;
}

Rational ExactValue::coefficient(std::string_view name) const {
  for (const auto& t : terms_) {
    if (t.symbol->name() == name) return t.coeff;
  }
  return 0;
}

void ExactValue::combine(const ExactValue& other, const Rational& factor) {
  rational_ += other.rational_ * factor;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() ||
        (a != terms_.end() && a->symbol->name() < b->symbol->name())) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->symbol->name() < a->symbol->name()) {
      merged.push_back({b->symbol, b->coeff * factor});
      ++b;
    } else {
      Rational c = a->coeff + b->coeff * factor;
      if (c != 0) merged.push_back({a->symbol, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
}

ExactValue ExactValue::operator-() const {
  ExactValue v = *this;
  v *= Rational(-1);
  return v;
}

ExactValue& ExactValue::operator+=(const ExactValue& other) {
  combine(other, 1);
  return *this;
}

ExactValue& ExactValue::operator-=(const ExactValue& other) {
  combine(other, -1);
  return *this;
}

ExactValue& ExactValue::operator*=(const Rational& k) {
  if (k == 0) {
    rational_ = 0;
    terms_.clear();
    return *this;
  }
  rational_ *= k;
  for (auto& t : terms_) t.coeff *= k;
  return *this;
}

ExactValue& ExactValue::operator/=(const Rational& k) {
  if (k == 0) throw Error(ErrorCode::InvalidInput, "division by zero");
  return *this *= Rational(1) / k;
}

ExactValue operator*(const ExactValue& a, const ExactValue& b) {
  if (b.is_rational()) return a * b.rational_part();
  if (a.is_rational()) return b * a.rational_part();
  throw Error(ErrorCode::InvalidInput,
              "product of two irrational values is not representable");
}

Interval ExactValue::enclose(unsigned bits) const {
  Interval out{rational_, rational_};
  for (const auto& t : terms_) {
    const Interval s = t.symbol->enclose(bits);
    if (t.coeff > 0) {
      out.lo += t.coeff * s.lo;
      out.hi += t.coeff * s.hi;
    } else {
      out.lo += t.coeff * s.hi;
      out.hi += t.coeff * s.lo;
    }
  }
  return out;
}

int ExactValue::sign() const {
  if (terms_.empty()) return rational_sign(rational_);
  for (unsigned bits = kStartBits; bits <= kMaxBits; ++bits) {
    const Interval box = enclose(bits);
    if (box.lo > 0) return 1;
    if (box.hi < 0) return -1;
  }
  throw Error(ErrorCode::PrecisionExhausted,
              "could not decide the sign of " + to_string());
}

Integer ExactValue::floor() const {
  if (terms_.empty()) return cantor::floor(rational_);
  for (unsigned bits = kStartBits; bits <= kMaxBits; ++bits) {
    const Interval box = enclose(bits);
    const Integer lo = cantor::floor(box.lo);
    if (lo == cantor::floor(box.hi)) return lo;
  }
  throw Error(ErrorCode::PrecisionExhausted,
              "could not decide the floor of " + to_string());
}

bool operator==(const ExactValue& a, const ExactValue& b) {
  if (a.rational_ != b.rational_ || a.terms_.size() != b.terms_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].symbol->name() != b.terms_[i].symbol->name() ||
        a.terms_[i].coeff != b.terms_[i].coeff) {
      return false;
    }
  }
  return true;
}

std::strong_ordering operator<=>(const ExactValue& a, const ExactValue& b) {
  const int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string ExactValue::to_string() const {
  std::string out;
  if (rational_ != 0 || terms_.empty()) out = cantor::to_string(rational_);
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    if (!out.empty()) {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    } else if (c < 0) {
      out += "-";
      c = -c;
    }
    if (c != 1) out += cantor::to_string(c) + "*";
    out += t.symbol->name();
  }
  return out;
}

bool structural_less(const ExactValue& a, const ExactValue& b) {
  if (a.rational_part() != b.rational_part()) {
    return a.rational_part() < b.rational_part();
  }
  const auto& x = a.terms();
  const auto& y = b.terms();
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i].symbol->name() != y[i].symbol->name()) {
      return x[i].symbol->name() < y[i].symbol->name();
    }
    if (x[i].coeff != y[i].coeff) return x[i].coeff < y[i].coeff;
  }
  return x.size() < y.size();
}

Integer height(const ExactValue& v) {
  auto h = [](const Rational& q) {
    Integer n = numerator(q);
    if (n < 0) n = -n;
    return std::max(n, denominator(q));
  };
  Integer out = h(v.rational_part());
  for (const auto& t : v.terms()) out = std::max(out, h(t.coeff));
  return out;
}

ExactValue sum(const std::vector<ExactValue>& values) {
  ExactValue total;
  for (const auto& v : values) total += v;
  return total;
}

// ---------------------------------------------------------------------------
// RationalGroup / GroupDescriptor

std::string Exponent::to_string() const {
  return infinite_ ? "inf" : std::to_string(value_);
}

RationalGroup::RationalGroup(Exponent default_exponent,
                             std::map<std::uint64_t, Exponent> exceptions)
    : default_(default_exponent) {
  if (!default_.is_infinite() && default_.value() != 0) {
    throw Error(ErrorCode::InvalidInput, "default exponent must be 0 or inf");
  }
  for (const auto& [p, e] : exceptions) {
    if (!is_prime(p)) {
      throw Error(ErrorCode::InvalidInput,
                  std::to_string(p) + " is not a prime");
    }
    if (!(e == default_)) exceptions_.emplace(p, e);
  }
}

Exponent RationalGroup::exponent(std::uint64_t p) const {
  const auto it = exceptions_.find(p);
  return it == exceptions_.end() ? default_ : it->second;
}

bool RationalGroup::contains(const Rational& q) const {
  Integer den = denominator(q);
  if (den == 1) return true;
  if (default_.is_infinite()) {
    for (const auto& [p, e] : exceptions_) {
      if (valuation(den, p) > e.value()) return false;
    }
    return true;
  }
  for (const auto& [p, e] : exceptions_) {
    unsigned v = 0;
    while (den % p == 0) {
      den /= p;
      ++v;
    }
    if (!e.is_infinite() && v > e.value()) return false;
  }
  return den == 1;
}

GroupDescriptor::GroupDescriptor(RationalGroup rational,
                                 std::vector<IrrationalComponent> irrationals)
    : rational_(std::move(rational)), irrationals_(std::move(irrationals)) {
  std::sort(irrationals_.begin(), irrationals_.end(),
            [](const auto& a, const auto& b) {
              return a.symbol->name() < b.symbol->name();
            });
  for (std::size_t i = 1; i < irrationals_.size(); ++i) {
    if (irrationals_[i].symbol->name() == irrationals_[i - 1].symbol->name()) {
      throw Error(ErrorCode::InvalidInput,
                  "duplicate symbol '" + irrationals_[i].symbol->name() + "'");
    }
  }
}

const IrrationalComponent* GroupDescriptor::find(std::string_view name) const {
  for (const auto& c : irrationals_) {
    if (c.symbol->name() == name) return &c;
  }
  return nullptr;
}

std::map<std::string, SymbolRef> GroupDescriptor::symbols() const {
  std::map<std::string, SymbolRef> out;
  for (const auto& c : irrationals_) out.emplace(c.symbol->name(), c.symbol);
  return out;
}

bool in_group(const ExactValue& v, const GroupDescriptor& V) {
  if (!V.rational_component().contains(v.rational_part())) return false;
  for (const auto& t : v.terms()) {
    const auto* comp = V.find(t.symbol->name());
    if (comp == nullptr || !comp->coefficients.contains(t.coeff)) return false;
  }
  return true;
}

bool member(const ExactValue& v, const GroupDescriptor& V) {
  return in_group(v, V) && v.sign() >= 0 && (ExactValue(1) - v).sign() >= 0;
}

std::string_view to_string(Tri t) noexcept {
  switch (t) {
    case Tri::no: return "no";
    case Tri::yes: return "yes";
    case Tri::undecided: return "undecided";
  }
  return "undecided";
}

bool RationalGroup::is_cyclic() const noexcept {
  if (default_.is_infinite()) return false;
  for (const auto& [p, e] : exceptions_) {
    if (e.is_infinite()) return false;
  }
  return true;
}

Classification classify(const GroupDescriptor& V) {
  Classification c;
  c.group_like = V.infinite() ? Tri::yes : Tri::no;

  bool all_q = V.rational_component().is_rationals();
  for (const auto& comp : V.irrational_components()) {
    all_q = all_q && comp.coefficients.is_rationals();
  }
  c.q_like = all_q ? Tri::yes : Tri::no;

  if (!V.purely_rational()) {
    c.ring_like = Tri::undecided;
  } else {
    // Every n_p must be 0 or inf; exceptions already differ from the default.
    bool ring = true;
    for (const auto& [p, e] : V.rational_component().exceptions()) {
      ring = ring && (e.is_infinite() || e.value() == 0);
    }
    c.ring_like = ring ? Tri::yes : Tri::no;
  }
  return c;
}

namespace {

using SortKey = std::tuple<Integer, Integer,
                           std::vector<std::tuple<std::string, Integer, Integer>>>;

SortKey sort_key(const ExactValue& v) {
  std::vector<std::tuple<std::string, Integer, Integer>> terms;
  for (const auto& t : v.terms()) {
    terms.emplace_back(t.symbol->name(), numerator(t.coeff),
                       denominator(t.coeff));
  }
  return {numerator(v.rational_part()), denominator(v.rational_part()),
          std::move(terms)};
}

std::vector<ExactValue> enumerate_rational(const RationalGroup& G,
                                           std::size_t budget) {
  std::vector<ExactValue> out;
  for (std::size_t den = 1; den <= budget; ++den) {
    for (std::size_t num = 1; num <= den; ++num) {
      if (std::gcd(num, den) != 1) continue;
      Rational q(static_cast<long long>(num), static_cast<long long>(den));
      if (G.contains(q)) out.emplace_back(std::move(q));
    }
  }
  return out;
}

}  // namespace

std::vector<ExactValue> enumerate(const GroupDescriptor& V, std::size_t budget) {
  if (budget == 0) {
    throw Error(ErrorCode::PreconditionFailed, "enumerate budget must be >= 1");
  }
  if (V.purely_rational()) return enumerate_rational(V.rational_component(), budget);

  // All rationals of height <= budget, zero included.
  std::vector<Rational> small{Rational(0)};
  for (std::size_t den = 1; den <= budget; ++den) {
    for (std::size_t num = 1; num <= budget; ++num) {
      if (std::gcd(num, den) != 1) continue;
      Rational q(static_cast<long long>(num), static_cast<long long>(den));
      small.push_back(q);
      small.push_back(-q);
    }
  }

  std::vector<std::pair<Integer, ExactValue>> found;
  const auto& comps = V.irrational_components();
  std::vector<std::vector<Rational>> coeff_choices;
  for (const auto& comp : comps) {
    std::vector<Rational> choices;
    for (const auto& q : small) {
      if (comp.coefficients.contains(q)) choices.push_back(q);
    }
    coeff_choices.push_back(std::move(choices));
  }
  std::vector<Rational> rational_choices;
  for (const auto& q : small) {
    if (V.rational_component().contains(q)) rational_choices.push_back(q);
  }

  std::vector<std::size_t> pick(comps.size(), 0);
  for (const auto& q : rational_choices) {
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      ExactValue v(q);
      for (std::size_t i = 0; i < comps.size(); ++i) {
        v += ExactValue::symbol(comps[i].symbol, coeff_choices[i][pick[i]]);
      }
      if (v.sign() > 0 && (ExactValue(1) - v).sign() >= 0) {
        found.emplace_back(height(v), std::move(v));
      }
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == coeff_choices[i].size()) {
        pick[i++] = 0;
      }
      if (i == pick.size()) break;
    }
  }

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return sort_key(a.second) < sort_key(b.second);
  });
  std::vector<ExactValue> out;
  out.reserve(found.size());
  for (auto& [h, v] : found) out.push_back(std::move(v));
  return out;
}

GroupDescriptor scale_value_set(const GroupDescriptor& V, const ExactValue& a) {
  if (!V.purely_rational() || !a.is_rational()) {
    throw Error(ErrorCode::NonRationalScale,
                "scaling needs a rational descriptor and a rational scale");
  }
  if (a.sign() <= 0 || !member(a, V)) {
    throw Error(ErrorCode::NotInV, "scale " + a.to_string() +
                                       " must be a positive element of V");
  }
  const RationalGroup& G = V.rational_component();
  const Integer r = numerator(a.rational_part());
  const Integer s = denominator(a.rational_part());

  std::map<std::uint64_t, int> shift;  // v_p(r) - v_p(s)
  for (const auto& [p, e] : factorize(r)) shift[p] += static_cast<int>(e);
  for (const auto& [p, e] : factorize(s)) shift[p] -= static_cast<int>(e);

  std::map<std::uint64_t, Exponent> exceptions = G.exceptions();
  for (const auto& [p, d] : shift) exceptions.emplace(p, G.exponent(p));
  for (auto& [p, e] : exceptions) {
    if (e.is_infinite()) continue;
    const auto it = shift.find(p);
    const int n = static_cast<int>(e.value()) + (it == shift.end() ? 0 : it->second);
    // a in V guarantees v_p(s) <= n_p, so n stays non-negative.
    e = Exponent::finite(static_cast<unsigned>(n));
  }
  return GroupDescriptor(RationalGroup(G.default_exponent(), std::move(exceptions)));
}

}  // namespace cantor
