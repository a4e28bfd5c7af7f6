#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace multirew {

// All probabilities, rewards and values in this library are exact rationals.
// mpq_class keeps the canonical form we require (gcd(|num|, den) = 1,
// den >= 1, zero is 0/1) as long as values are built through its arithmetic
// or canonicalized after raw construction.
using Int = mpz_class;
using Rational = mpq_class;

struct invalid_operand_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct precondition_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline Rational make_rational(long num, long den = 1) {
    if (den == 0)
        throw invalid_operand_error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p", "-p" and "p/q" with integer p, q (q > 0 after normalization).
// Decimal notation is rejected: the file format is exact by construction.
inline Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw parse_error("empty rational literal");
    for (char c : text) {
        bool ok = (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '/';
        if (!ok)
            throw parse_error("invalid rational literal: " + text);
    }
    Rational q;
    if (q.set_str(text, 10) != 0)
        throw parse_error("invalid rational literal: " + text);
    if (q.get_den() == 0)
        throw parse_error("zero denominator in rational literal: " + text);
    q.canonicalize();
    return q;
}

inline std::string format_rational(const Rational& q) {
    return q.get_str();
}

inline int sign_of(const Rational& q) { return sgn(q); }

// Finite(non-negative rational) or positive infinity; the codomain of all
// expected multiplicative rewards.
class ExtendedValue {
  public:
    static ExtendedValue infinite() { return ExtendedValue(true, Rational(0)); }
    static ExtendedValue finite(Rational v) {
        if (sgn(v) < 0)
            throw invalid_operand_error("negative finite value");
        return ExtendedValue(false, std::move(v));
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }
    const Rational& value() const {
        if (infinite_)
            throw precondition_error("value() on infinite");
        return value_;
    }

    friend bool operator==(const ExtendedValue& a, const ExtendedValue& b) {
        if (a.infinite_ != b.infinite_) return false;
        return a.infinite_ || a.value_ == b.value_;
    }
    friend bool operator!=(const ExtendedValue& a, const ExtendedValue& b) { return !(a == b); }
    // Total order with infinity on top.
    friend bool operator<(const ExtendedValue& a, const ExtendedValue& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator<=(const ExtendedValue& a, const ExtendedValue& b) { return !(b < a); }
    friend bool operator>(const ExtendedValue& a, const ExtendedValue& b) { return b < a; }
    friend bool operator>=(const ExtendedValue& a, const ExtendedValue& b) { return !(a < b); }

    std::string str() const { return infinite_ ? "inf" : value_.get_str(); }

  private:
    ExtendedValue(bool inf, Rational v) : infinite_(inf), value_(std::move(v)) {}
    bool infinite_;
    Rational value_;
};

}  // namespace multirew
