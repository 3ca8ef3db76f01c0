#include "mfkit/field.hpp"

namespace mfkit {

std::uint64_t RootedField::pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::uint64_t RootedField::inv(std::uint64_t a) const {
    if (a % p == 0) throw FieldError("division by zero in F_" + std::to_string(p));
    return pow(a, p - 2);
}

std::uint64_t RootedField::reduce_signed(long long v) const {
    long long m = static_cast<long long>(p);
    long long r = v % m;
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

namespace {

// order of a divides p-1; exact order via the divisors of 2d is enough here
bool has_order_exactly(const RootedField& F, std::uint64_t a, std::uint64_t m) {
    if (F.pow(a, m) != 1) return false;
    for (std::uint64_t k = 1; k < m; ++k)
        if (m % k == 0 && F.pow(a, k) == 1) return false;
    return true;
}

}  // namespace

RootedField make_field(std::uint32_t d, std::optional<std::uint64_t> p_override) {
    if (d < 2) throw FieldError("arity d must be at least 2");
    const std::uint64_t m = 2ull * d;
    std::uint64_t p;
    if (p_override) {
        p = *p_override;
        if (p >= (1ull << 31)) throw FieldError("prime override too large (need p < 2^31)");
        if (!is_prime(p)) throw FieldError("field characteristic override " + std::to_string(p) + " is not prime");
        if (p % m != 1)
            throw FieldError("prime " + std::to_string(p) + " is not congruent to 1 mod " + std::to_string(m));
    } else {
        p = m + 1;
        while (!is_prime(p)) p += m;
    }
    RootedField F;
    F.p = p;
    F.d = d;
    for (std::uint64_t a = 2; a < p; ++a) {
        if (has_order_exactly(F, a, m)) {
            F.zeta = a;
            break;
        }
    }
    if (F.zeta == 0) throw FieldError("no element of order " + std::to_string(m) + " in F_" + std::to_string(p));
    F.omega = F.mul(F.zeta, F.zeta);
    F.mu = F.zeta;
    return F;
}

}  // namespace mfkit
