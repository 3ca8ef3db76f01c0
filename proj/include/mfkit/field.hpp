#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace mfkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldError : Error {
    using Error::Error;
};

// Prime field F_p with a distinguished root zeta of order exactly 2d,
// so that mu = zeta is a d-th root of -1 and omega = zeta^2 is a
// primitive d-th root of 1. Requires p == 1 (mod 2d).
struct RootedField {
    std::uint64_t p = 0;
    std::uint32_t d = 0;
    std::uint64_t zeta = 0;
    std::uint64_t omega = 0;
    std::uint64_t mu = 0;

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % p; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p - a; }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    std::uint64_t inv(std::uint64_t a) const;
    // a/b
    std::uint64_t div(std::uint64_t a, std::uint64_t b) const { return mul(a, inv(b)); }
    std::uint64_t reduce_signed(long long v) const;

    bool operator==(const RootedField& o) const { return p == o.p && d == o.d && zeta == o.zeta; }
};

bool is_prime(std::uint64_t n);

// Smallest prime p == 1 (mod 2d) unless p_override is given; zeta is the
// smallest element of multiplicative order exactly 2d.
RootedField make_field(std::uint32_t d, std::optional<std::uint64_t> p_override = std::nullopt);

}  // namespace mfkit
