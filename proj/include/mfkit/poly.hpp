#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfkit/field.hpp"

namespace mfkit {

struct VariableMismatchError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

// Ambient polynomial ring: a rooted prime field plus an ordered variable list.
// All Poly values in a computation share one ring (compared by content).
struct PolyRing {
    RootedField field;
    std::vector<std::string> vars;

    bool operator==(const PolyRing& o) const { return field == o.field && vars == o.vars; }
};

using RingPtr = std::shared_ptr<const PolyRing>;

RingPtr make_ring(const RootedField& field, std::vector<std::string> vars);

using Exps = std::vector<std::uint32_t>;

struct Term {
    Exps exps;
    std::uint64_t coeff;  // canonical residue in [1, p)
};

// graded lex: total degree first, then lex with earlier variables bigger
int compare_monomials(const Exps& a, const Exps& b);

// Sparse exact multivariate polynomial. Terms are kept sorted in graded-lex
// descending order with no zero coefficients.
class Poly {
public:
    Poly() = default;

    static Poly zero(RingPtr ring);
    static Poly constant(RingPtr ring, std::uint64_t c);
    static Poly constant_signed(RingPtr ring, long long c);
    static Poly variable(RingPtr ring, std::size_t index);
    static Poly monomial(RingPtr ring, Exps exps, std::uint64_t c);
    static Poly from_terms(RingPtr ring, std::vector<Term> terms);  // normalizes
    // e.g. "y^4", "x^3 + y^3", "3*x^2*y + 6"
    static Poly parse(RingPtr ring, std::string_view text);

    const RingPtr& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::uint64_t constant_term() const;  // coefficient of the degree-0 monomial
    // minimum total degree among terms; nullopt for the zero polynomial
    std::optional<int> ord() const;
    int total_degree() const;  // -1 for zero

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly scaled(std::uint64_t c) const;
    Poly truncated(int degree_bound) const;  // drops terms of total degree >= bound
    // exact long division by a single divisor; nullopt if not divisible
    std::optional<Poly> divided_exactly_by(const Poly& divisor) const;
    // scale so the graded-lex leading coefficient is 1
    Poly monic() const;

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }
    // canonical total order (for dedup/display lists)
    static int compare(const Poly& a, const Poly& b);

    std::string str() const;

private:
    RingPtr ring_;
    std::vector<Term> terms_;

    void check_same_ring(const Poly& o) const;
};

}  // namespace mfkit
