#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hld {

/// Every matrix entry is an exact rational. Over the integers only integral
/// values occur; over F_p the value is the integer representative in [0, p).
using Scalar = mpq_class;

enum class RingKind { integers, rationals, prime_field };

/// Coefficient ring of a computation. Value type, cheap to copy.
///
/// All three rings are Euclidean. Over a field every nonzero element is a
/// unit, so the Euclidean algorithms below degrade to Gaussian elimination.
class Ring {
public:
    static Ring integers() { return Ring(RingKind::integers, 0); }
    static Ring rationals() { return Ring(RingKind::rationals, 0); }
    /// Throws std::invalid_argument unless p is prime.
    static Ring prime_field(unsigned long p);

    RingKind kind() const noexcept { return kind_; }
    unsigned long characteristic() const noexcept { return characteristic_; }
    bool is_field() const noexcept { return kind_ != RingKind::integers; }
    /// True when arithmetic results need a reduction step.
    bool needs_reduction() const noexcept { return kind_ == RingKind::prime_field; }

    void normalize(Scalar& x) const;
    Scalar from_integer(long v) const;
    Scalar from_integer(const mpz_class& v) const;

    Scalar add(const Scalar& a, const Scalar& b) const;
    Scalar sub(const Scalar& a, const Scalar& b) const;
    Scalar mul(const Scalar& a, const Scalar& b) const;
    Scalar neg(const Scalar& a) const;

    bool is_unit(const Scalar& a) const;
    Scalar inverse(const Scalar& unit) const;

    /// Euclidean size: |a| over the integers, 0 or 1 over a field.
    mpz_class norm(const Scalar& a) const;
    /// q such that a - q*b is zero or has smaller norm than b (b nonzero).
    /// Over the integers this is floor division, so the remainder is
    /// nonnegative when b > 0.
    Scalar quotient(const Scalar& a, const Scalar& b) const;
    /// True when b = q*a for some ring element q.
    bool divides(const Scalar& a, const Scalar& b) const;
    /// Unit u making u*a the canonical associate (positive, or 1 over a field).
    Scalar canonical_unit(const Scalar& a) const;

    std::string format(const Scalar& a) const;
    /// Accepts decimal integers and "num/den" (optionally prefixed "p:").
    /// Throws std::invalid_argument on malformed text or a value not in the ring.
    Scalar parse(std::string_view text) const;

    std::string name() const;

    friend bool operator==(const Ring&, const Ring&) = default;

private:
    Ring(RingKind kind, unsigned long characteristic)
        : kind_(kind), characteristic_(characteristic) {}

    RingKind kind_;
    unsigned long characteristic_;
};

} // namespace hld
