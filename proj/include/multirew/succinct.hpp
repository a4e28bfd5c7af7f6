#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "multirew/rational.hpp"

namespace multirew {

enum class Sign { negative, zero, positive };
enum class Ordering { less, equal, greater };

inline Sign sign_from_int(int s) {
    return s < 0 ? Sign::negative : (s > 0 ? Sign::positive : Sign::zero);
}

inline Ordering ordering_from_sign(Sign s) {
    switch (s) {
        case Sign::negative: return Ordering::less;
        case Sign::positive: return Ordering::greater;
        default: return Ordering::equal;
    }
}

inline const char* to_string(Sign s) {
    switch (s) {
        case Sign::negative: return "negative";
        case Sign::zero: return "zero";
        default: return "positive";
    }
}

inline const char* to_string(Ordering o) {
    switch (o) {
        case Ordering::less: return "less";
        case Ordering::equal: return "equal";
        default: return "greater";
    }
}

// A product of integer bases raised to signed integer exponents. Bases need
// not be distinct or prime; the represented value is a positive rational.
struct SuccinctProduct {
    std::vector<std::pair<Int, Int>> factors;  // (base >= 1, exponent)

    SuccinctProduct() = default;
    SuccinctProduct(std::initializer_list<std::pair<Int, Int>> fs) : factors(fs) {}

    void push(Int base, Int exponent) {
        factors.emplace_back(std::move(base), std::move(exponent));
    }

    // Drops base-1 and exponent-0 factors and merges equal bases.
    SuccinctProduct normalized() const {
        std::map<Int, Int> merged;
        for (const auto& [base, exp] : factors) {
            if (exp == 0) continue;
            if (base == 0)
                throw invalid_operand_error("succinct product with base 0");
            if (base < 0)
                throw invalid_operand_error("succinct product with negative base");
            if (base == 1) continue;
            merged[base] += exp;
        }
        SuccinctProduct out;
        for (auto& [base, exp] : merged)
            if (exp != 0) out.push(base, exp);
        return out;
    }
};

struct CsriOptions {
    // Interval-logarithm filter precision schedule (bits).
    mpfr_prec_t filter_start_bits = 64;
    mpfr_prec_t filter_max_bits = 512;
    // Cap on the bit size of exactly evaluated integers.
    unsigned long exact_bit_budget = 1ul << 24;
};

// Which stage of csri_compare produced the answer; used by the test suite
// to certify that the filter never returns a wrong strict sign.
struct CsriTrace {
    bool cancelled_to_equal = false;
    bool filter_decided = false;
    mpfr_prec_t filter_bits = 0;
    bool exact_used = false;
};

namespace detail {

// Merges both sides into one signed-exponent list and refines the bases into
// a pairwise coprime (gcd-free) set using only gcd computations. Over such a
// set, equality of products is equality of exponent vectors.
inline std::vector<std::pair<Int, Int>> gcd_free_difference(const SuccinctProduct& lhs,
                                                            const SuccinctProduct& rhs) {
    std::map<Int, Int> work;
    for (const auto& [b, e] : lhs.normalized().factors) work[b] += e;
    for (const auto& [b, e] : rhs.normalized().factors) work[b] -= e;

    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::pair<Int, Int>> items(work.begin(), work.end());
        for (size_t i = 0; i < items.size() && !changed; ++i) {
            for (size_t j = i + 1; j < items.size() && !changed; ++j) {
                Int g = gcd(items[i].first, items[j].first);
                if (g == 1) continue;
                Int a = items[i].first / g;
                Int b = items[j].first / g;
                work.erase(items[i].first);
                work.erase(items[j].first);
                if (a != 1) work[a] += items[i].second;
                work[g] += items[i].second + items[j].second;
                if (b != 1) work[b] += items[j].second;
                for (auto it = work.begin(); it != work.end();) {
                    if (it->second == 0)
                        it = work.erase(it);
                    else
                        ++it;
                }
                changed = true;
            }
        }
    }

    std::vector<std::pair<Int, Int>> out;
    for (auto& [b, e] : work)
        if (e != 0) out.emplace_back(b, e);
    return out;
}

// Sign of sum d_i * ln(b_i) via interval arithmetic with directed rounding,
// or nullopt when the interval straddles zero at this precision.
inline std::optional<Sign> log_filter(const std::vector<std::pair<Int, Int>>& diff,
                                      mpfr_prec_t prec) {
    mpfr_t lo, hi, ln_lo, ln_hi, term;
    mpfr_inits2(prec, lo, hi, ln_lo, ln_hi, term, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(lo, 1);
    mpfr_set_zero(hi, 1);
    for (const auto& [base, exp] : diff) {
        mpfr_set_z(ln_lo, base.get_mpz_t(), MPFR_RNDD);
        mpfr_log(ln_lo, ln_lo, MPFR_RNDD);
        mpfr_set_z(ln_hi, base.get_mpz_t(), MPFR_RNDU);
        mpfr_log(ln_hi, ln_hi, MPFR_RNDU);
        // ln(base) >= 0 since base >= 2 here.
        if (sgn(exp) > 0) {
            mpfr_mul_z(term, ln_lo, exp.get_mpz_t(), MPFR_RNDD);
            mpfr_add(lo, lo, term, MPFR_RNDD);
            mpfr_mul_z(term, ln_hi, exp.get_mpz_t(), MPFR_RNDU);
            mpfr_add(hi, hi, term, MPFR_RNDU);
        } else {
            mpfr_mul_z(term, ln_hi, exp.get_mpz_t(), MPFR_RNDD);
            mpfr_add(lo, lo, term, MPFR_RNDD);
            mpfr_mul_z(term, ln_lo, exp.get_mpz_t(), MPFR_RNDU);
            mpfr_add(hi, hi, term, MPFR_RNDU);
        }
    }
    std::optional<Sign> result;
    if (mpfr_sgn(lo) > 0)
        result = Sign::positive;
    else if (mpfr_sgn(hi) < 0)
        result = Sign::negative;
    mpfr_clears(lo, hi, ln_lo, ln_hi, term, static_cast<mpfr_ptr>(nullptr));
    return result;
}

// Exact evaluation of one side (all exponents positive) by exponentiation by
// squaring, guarded by the bit budget.
inline Int evaluate_side(const std::vector<std::pair<Int, Int>>& side,
                         unsigned long bit_budget) {
    unsigned long estimate = 1;
    for (const auto& [base, exp] : side) {
        if (!exp.fits_ulong_p())
            throw resource_error("succinct product exponent exceeds bit budget");
        unsigned long bits = mpz_sizeinbase(base.get_mpz_t(), 2);
        unsigned long e = exp.get_ui();
        if (e != 0 && bits > bit_budget / e)
            throw resource_error("succinct product evaluation exceeds bit budget");
        estimate += bits * e;
        if (estimate > bit_budget)
            throw resource_error("succinct product evaluation exceeds bit budget");
    }
    Int out = 1;
    for (const auto& [base, exp] : side) {
        Int p;
        mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), exp.get_ui());
        out *= p;
    }
    return out;
}

}  // namespace detail

// Exact order of two succinctly represented positive rationals. Common
// factors are cancelled first (this decides equality outright), then an
// interval-logarithm filter with doubling precision handles clear cases,
// and exact big-integer evaluation settles the rest.
inline Ordering csri_compare(const SuccinctProduct& lhs, const SuccinctProduct& rhs,
                             const CsriOptions& opts = {}, CsriTrace* trace = nullptr) {
    auto diff = detail::gcd_free_difference(lhs, rhs);
    if (diff.empty()) {
        if (trace) trace->cancelled_to_equal = true;
        return Ordering::equal;
    }

    for (mpfr_prec_t prec = opts.filter_start_bits; prec <= opts.filter_max_bits; prec *= 2) {
        if (auto s = detail::log_filter(diff, prec)) {
            if (trace) {
                trace->filter_decided = true;
                trace->filter_bits = prec;
            }
            return ordering_from_sign(*s);
        }
    }

    if (trace) trace->exact_used = true;
    std::vector<std::pair<Int, Int>> left, right;
    for (const auto& [base, exp] : diff) {
        if (sgn(exp) > 0)
            left.emplace_back(base, exp);
        else
            right.emplace_back(base, -exp);
    }
    Int lv = detail::evaluate_side(left, opts.exact_bit_budget);
    Int rv = detail::evaluate_side(right, opts.exact_bit_budget);
    int c = cmp(lv, rv);
    return c < 0 ? Ordering::less : (c > 0 ? Ordering::greater : Ordering::equal);
}

// Exact sign of sum_i weight_i * log(value_i) for rational weights and
// strictly positive rational values. Weight denominators are cleared by
// their common denominator, each value is split into numerator and
// denominator, and the negative contributions move to the opposite side of
// a succinct-product comparison.
inline Sign weighted_log_sign(const std::vector<std::pair<Rational, Rational>>& terms,
                              const CsriOptions& opts = {}, CsriTrace* trace = nullptr) {
    Int common_den = 1;
    for (const auto& [weight, value] : terms) {
        if (sgn(value) <= 0)
            throw invalid_operand_error("weighted_log_sign requires positive values");
        common_den = lcm(common_den, weight.get_den());
    }
    SuccinctProduct lhs, rhs;
    for (const auto& [weight, value] : terms) {
        Int w = weight.get_num() * (common_den / weight.get_den());
        if (w == 0) continue;
        const Int& num = value.get_num();
        const Int& den = value.get_den();
        if (w > 0) {
            lhs.push(num, w);
            rhs.push(den, w);
        } else {
            lhs.push(den, -w);
            rhs.push(num, -w);
        }
    }
    switch (csri_compare(lhs, rhs, opts, trace)) {
        case Ordering::less: return Sign::negative;
        case Ordering::greater: return Sign::positive;
        default: return Sign::zero;
    }
}

}  // namespace multirew
