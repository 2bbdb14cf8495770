#pragma once

#include "cantor/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cantor {

/// Closed rational interval [lo, hi].
struct Interval {
  Rational lo;
  Rational hi;
};

/// sqrt(radicand) + shift.
struct SqrtEnclosure {
  Integer radicand;
  Rational shift;
};

/// 0.d1 d2 d3 ... written in `base`.
struct DigitsEnclosure {
  unsigned base = 10;
  std::string digits;
};

/// A named real number in (0, 1) known through nested rational intervals.
///
/// The declared symbols of a descriptor, together with 1, are trusted to be
/// linearly independent over Q; nothing here tries to verify that.
class IrrationalSymbol {
 public:
  using Source = std::variant<SqrtEnclosure, DigitsEnclosure>;

  /// Validates the source (non-square radicand, digits in range, value
  /// strictly inside (0, 1)). Throws InvalidInput.
  static std::shared_ptr<const IrrationalSymbol> make(std::string name,
                                                      Source source);

  const std::string& name() const noexcept { return name_; }
  const Source& source() const noexcept { return source_; }

  /// Interval of width at most 2^-bits containing the value. Intervals for
  /// increasing `bits` are nested. Throws PrecisionExhausted when a digit
  /// expansion is too short.
  Interval enclose(unsigned bits) const;

 private:
  IrrationalSymbol(std::string name, Source source)
      : name_(std::move(name)), source_(std::move(source)) {}

  std::string name_;
  Source source_;
};

using SymbolRef = std::shared_ptr<const IrrationalSymbol>;

/// q + sum_s c_s * s over declared irrational symbols, all coefficients
/// rational. Terms are kept sorted by symbol name with no zero coefficient,
/// so structural equality is numeric equality.
class ExactValue {
 public:
  struct Term {
    SymbolRef symbol;
    Rational coeff;
  };

  ExactValue() = default;
  ExactValue(Rational q) : rational_(std::move(q)) {}  // NOLINT(implicit)
  ExactValue(int q) : rational_(q) {}                  // NOLINT(implicit)

  static ExactValue symbol(SymbolRef s, Rational coeff = 1);
  static ExactValue ratio(long long num, long long den) {
    return ExactValue(Rational(num, den));
  }

  const Rational& rational_part() const noexcept { return rational_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  Rational coefficient(std::string_view name) const;

  bool is_rational() const noexcept { return terms_.empty(); }
  bool is_zero() const noexcept { return terms_.empty() && rational_ == 0; }

  /// Sign of the real value; refines symbol enclosures from 2^-16 until the
  /// interval excludes zero.
  int sign() const;

  Interval enclose(unsigned bits) const;
  Integer floor() const;

  ExactValue operator-() const;
  ExactValue& operator+=(const ExactValue& other);
  ExactValue& operator-=(const ExactValue& other);
  ExactValue& operator*=(const Rational& k);
  ExactValue& operator/=(const Rational& k);

  friend ExactValue operator+(ExactValue a, const ExactValue& b) { return a += b; }
  friend ExactValue operator-(ExactValue a, const ExactValue& b) { return a -= b; }
  friend ExactValue operator*(ExactValue a, const Rational& k) { return a *= k; }
  friend ExactValue operator*(const Rational& k, ExactValue a) { return a *= k; }
  friend ExactValue operator/(ExactValue a, const Rational& k) { return a /= k; }

  /// Product of two values; only defined when one factor is rational.
  friend ExactValue operator*(const ExactValue& a, const ExactValue& b);

  friend bool operator==(const ExactValue& a, const ExactValue& b);
  friend std::strong_ordering operator<=>(const ExactValue& a,
                                          const ExactValue& b);

  std::string to_string() const;

 private:
  void combine(const ExactValue& other, const Rational& factor);

  Rational rational_;
  std::vector<Term> terms_;
};

/// Total order on representations (rational part, then terms). Cheap and
/// exact; used for canonical sorting where numeric order is not required.
bool structural_less(const ExactValue& a, const ExactValue& b);

/// max(|numerator|, denominator) over the rational part and every coefficient.
Integer height(const ExactValue& v);

ExactValue sum(const std::vector<ExactValue>& values);

/// p-adic exponent n_p in N u {inf}.
class Exponent {
 public:
  constexpr Exponent() = default;
  static constexpr Exponent infinite() { return Exponent(true, 0); }
  static constexpr Exponent finite(unsigned n) { return Exponent(false, n); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr unsigned value() const noexcept { return value_; }

  friend constexpr bool operator==(Exponent a, Exponent b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

  std::string to_string() const;

 private:
  constexpr Exponent(bool inf, unsigned n) : infinite_(inf), value_(n) {}
  bool infinite_ = false;
  unsigned value_ = 0;
};

/// A subgroup G0 of Q containing Z, given by its exponents n_p: a/b in lowest
/// terms lies in G0 iff v_p(b) <= n_p for every prime p.
class RationalGroup {
 public:
  RationalGroup() = default;  // Z
  /// `default_exponent` must be 0 or inf; keys of `exceptions` must be prime.
  /// Exceptions equal to the default are dropped.
  RationalGroup(Exponent default_exponent,
                std::map<std::uint64_t, Exponent> exceptions);

  static RationalGroup integers() { return {}; }
  static RationalGroup rationals() { return {Exponent::infinite(), {}}; }

  Exponent default_exponent() const noexcept { return default_; }
  const std::map<std::uint64_t, Exponent>& exceptions() const noexcept {
    return exceptions_;
  }
  Exponent exponent(std::uint64_t p) const;

  bool contains(const Rational& q) const;
  bool is_integers() const noexcept {
    return !default_.is_infinite() && exceptions_.empty();
  }
  bool is_rationals() const noexcept {
    return default_.is_infinite() && exceptions_.empty();
  }
  /// (1/N) Z for some N: no exponent is infinite.
  bool is_cyclic() const noexcept;

  friend bool operator==(const RationalGroup&, const RationalGroup&) = default;

 private:
  Exponent default_ = Exponent::finite(0);
  std::map<std::uint64_t, Exponent> exceptions_;
};

struct IrrationalComponent {
  SymbolRef symbol;
  RationalGroup coefficients;
};

/// G = G0 + sum_s G_s * s and V = G n [0, 1].
class GroupDescriptor {
 public:
  GroupDescriptor() = default;
  explicit GroupDescriptor(RationalGroup rational,
                           std::vector<IrrationalComponent> irrationals = {});

  const RationalGroup& rational_component() const noexcept { return rational_; }
  const std::vector<IrrationalComponent>& irrational_components() const noexcept {
    return irrationals_;
  }

  /// V is infinite iff G0 is not cyclic or a symbol is declared.
  bool infinite() const noexcept {
    return !rational_.is_cyclic() || !irrationals_.empty();
  }
  bool purely_rational() const noexcept { return irrationals_.empty(); }

  const IrrationalComponent* find(std::string_view name) const;
  std::map<std::string, SymbolRef> symbols() const;

 private:
  RationalGroup rational_;
  std::vector<IrrationalComponent> irrationals_;
};

/// v in G (no range restriction).
bool in_group(const ExactValue& v, const GroupDescriptor& V);
/// v in V = G n [0, 1].
bool member(const ExactValue& v, const GroupDescriptor& V);

enum class Tri { no, yes, undecided };
std::string_view to_string(Tri t) noexcept;

struct Classification {
  Tri group_like = Tri::no;
  Tri q_like = Tri::no;
  Tri ring_like = Tri::no;
};

Classification classify(const GroupDescriptor& V);

/// Elements of V n (0, 1] of height <= budget, ordered by height and then by
/// (numerator, denominator, symbol, coefficient). Prefix-stable in budget.
std::vector<ExactValue> enumerate(const GroupDescriptor& V, std::size_t budget);

/// Descriptor of V_a = {v / a : v in V} n [0, 1] for rational a in V, a > 0.
/// With a = r/s in lowest terms, n'_p = n_p + v_p(r) - v_p(s).
GroupDescriptor scale_value_set(const GroupDescriptor& V, const ExactValue& a);

}  // namespace cantor
