#include "hld/ring.hpp"

#include <stdexcept>

namespace hld {

namespace {

bool is_prime(unsigned long p) {
    if (p < 2) return false;
    for (unsigned long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

mpz_class parse_integer(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty number");
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (start == text.size()) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    for (std::size_t i = start; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    std::string digits(text[0] == '+' ? text.substr(1) : text);
    return mpz_class(digits, 10);
}

} // namespace

Ring Ring::prime_field(unsigned long p) {
    if (!is_prime(p)) throw std::invalid_argument("characteristic " + std::to_string(p) + " is not prime");
    return Ring(RingKind::prime_field, p);
}

void Ring::normalize(Scalar& x) const {
    if (kind_ != RingKind::prime_field) return;
    mpz_class p(characteristic_);
    if (x.get_den() != 1) {
        mpz_class inv;
        mpz_class den = x.get_den();
        if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
            throw std::invalid_argument("denominator not invertible mod " + std::to_string(characteristic_));
        mpz_class num = x.get_num() * inv;
        mpz_fdiv_r(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
        x = Scalar(num);
        return;
    }
    mpz_class num = x.get_num();
    mpz_fdiv_r(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
    x = Scalar(num);
}

Scalar Ring::from_integer(long v) const {
    Scalar x(v);
    normalize(x);
    return x;
}

Scalar Ring::from_integer(const mpz_class& v) const {
    Scalar x(v);
    normalize(x);
    return x;
}

Scalar Ring::add(const Scalar& a, const Scalar& b) const {
    Scalar r = a + b;
    normalize(r);
    return r;
}

Scalar Ring::sub(const Scalar& a, const Scalar& b) const {
    Scalar r = a - b;
    normalize(r);
    return r;
}

Scalar Ring::mul(const Scalar& a, const Scalar& b) const {
    Scalar r = a * b;
    normalize(r);
    return r;
}

Scalar Ring::neg(const Scalar& a) const {
    Scalar r = -a;
    normalize(r);
    return r;
}

bool Ring::is_unit(const Scalar& a) const {
    if (kind_ == RingKind::integers) return a == 1 || a == -1;
    return sgn(a) != 0;
}

Scalar Ring::inverse(const Scalar& unit) const {
    if (!is_unit(unit)) throw std::domain_error("inverse of a non-unit");
    switch (kind_) {
    case RingKind::integers:
        return unit;
    case RingKind::rationals:
        return Scalar(1) / unit;
    case RingKind::prime_field: {
        mpz_class inv;
        mpz_class p(characteristic_);
        mpz_class num = unit.get_num();
        mpz_invert(inv.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
        return Scalar(inv);
    }
    }
    return unit;
}

mpz_class Ring::norm(const Scalar& a) const {
    if (kind_ == RingKind::integers) return abs(a.get_num());
    return sgn(a) == 0 ? 0 : 1;
}

Scalar Ring::quotient(const Scalar& a, const Scalar& b) const {
    if (kind_ == RingKind::integers) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
        return Scalar(q);
    }
    return mul(a, inverse(b));
}

bool Ring::divides(const Scalar& a, const Scalar& b) const {
    if (sgn(a) == 0) return sgn(b) == 0;
    if (kind_ != RingKind::integers) return true;
    return mpz_divisible_p(b.get_num_mpz_t(), a.get_num_mpz_t()) != 0;
}

Scalar Ring::canonical_unit(const Scalar& a) const {
    if (sgn(a) == 0) return Scalar(1);
    if (kind_ == RingKind::integers) return Scalar(sgn(a) < 0 ? -1 : 1);
    return inverse(a);
}

std::string Ring::format(const Scalar& a) const {
    if (a.get_den() == 1) return a.get_num().get_str();
    return a.get_num().get_str() + "/" + a.get_den().get_str();
}

Scalar Ring::parse(std::string_view text) const {
    if (text.starts_with("p:")) text.remove_prefix(2);
    auto slash = text.find('/');
    Scalar x;
    if (slash == std::string_view::npos) {
        x = Scalar(parse_integer(text));
    } else {
        mpz_class num = parse_integer(text.substr(0, slash));
        mpz_class den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        x = Scalar(num, den);
        x.canonicalize();
        if (kind_ == RingKind::integers && x.get_den() != 1)
            throw std::invalid_argument("non-integral entry '" + std::string(text) + "' over the integers");
    }
    normalize(x);
    return x;
}

std::string Ring::name() const {
    switch (kind_) {
    case RingKind::integers:
        return "integers";
    case RingKind::rationals:
        return "rationals";
    case RingKind::prime_field:
        return "F_" + std::to_string(characteristic_);
    }
    return "?";
}

} // namespace hld
