#pragma once

#include "mfkit/mf.hpp"

namespace mfkit {

struct PowerMismatchError : Error {
    using Error::Error;
};
struct NotPurePowerError : Error {
    using Error::Error;
};
struct RankMismatchError : Error {
    using Error::Error;
};
struct UnequalEigenspaceDimsError : Error {
    using Error::Error;
};

// MCM module over the d-fold branched cover S[[z]]/(f+z^d), presented by the
// z-multiplication matrix phi on a free S-module: phi^d = -f * I exactly.
// The arity d is the one carried by the ring's rooted field.
class CoverModule {
public:
    static CoverModule make(Poly f, PolyMatrix phi);

    const RingPtr& ring() const { return ring_; }
    const Poly& f() const { return f_; }
    std::uint32_t arity() const { return ring_->field.d; }
    std::size_t rank_S() const { return phi_.rows(); }
    const PolyMatrix& phi() const { return phi_; }

    bool operator==(const CoverModule& o) const { return f_ == o.f_ && phi_ == o.phi_; }
    bool operator!=(const CoverModule& o) const { return !(*this == o); }

private:
    RingPtr ring_;
    Poly f_;
    PolyMatrix phi_;
};

// CoverModule with an exact sigma-action: sigma^d = I, sigma*phi = omega*(phi*sigma)
class SigmaModule {
public:
    static SigmaModule make(CoverModule base, PolyMatrix sigma);

    const CoverModule& base() const { return base_; }
    const PolyMatrix& sigma() const { return sigma_; }

private:
    CoverModule base_;
    PolyMatrix sigma_;
};

// splitting data for sharp(flat(N)): g*s = I and g intertwines the
// z-actions exactly
struct SplitCertificate {
    PolyMatrix g;
    PolyMatrix s;
};

// N-flat = (mu*phi, ..., mu*phi); mu defaults to the field's canonical root
MatrixFactorization flat(const CoverModule& n);
MatrixFactorization flat_with_mu(const CoverModule& n, std::uint64_t mu);

// X-sharp: rank d*n module with z-action mu^{-1} * CyclicBlock(phi_d,...,phi_1)
CoverModule sharp(const MatrixFactorization& x);

// restriction of scalars along sigma^k: phi -> omega^k * phi
CoverModule sigma_twist(const CoverModule& n, long long k);

// constant block-permutation tuple conjugating flat(sharp(X)) onto the
// blockwise direct sum T^0 X + T^1 X + ... + T^(d-1) X, verified exactly
std::vector<PolyMatrix> sharp_flat_certificate(const MatrixFactorization& x);

// the direct sum of the d sigma-twists of N, in twist order 0..d-1
MatrixFactorization sharp_flat_target(const MatrixFactorization& x);

SplitCertificate flat_sharp_certificate(const CoverModule& n);

// mu_{R#}(N) = rank_S - constant_rank(phi)
std::size_t num_generators(const CoverModule& n);

// the k with det(phi) = unit * f^k; asserts rank_S = d*k.
// Caller asserts that f + z^d is irreducible.
std::size_t rank_over_cover(const CoverModule& n);

enum class UlrichStatus { Ulrich, NotUlrich, NotApplicable };

struct UlrichVerdict {
    UlrichStatus status;
    bool applicable;      // d <= ord(f)
    bool reduced;         // constant_rank(phi) == 0, i.e. flat(N) reduced
    bool mu_equals_rank;  // num_generators == rank_S
};

UlrichVerdict is_ulrich(const CoverModule& n);

// B(X): sharp(X) with sigma = diag(I, omega*I, ..., omega^(d-1)*I)
SigmaModule equivariant_B(const MatrixFactorization& x);

// A(M): eigenspace chain of mu*z through the projectors
// e_k = (1/d) sum_j omega^{-jk} sigma^j
MatrixFactorization equivariant_A(const SigmaModule& m);

// the projectors e_k themselves, k = 0..d-1 (exact idempotents summing to I)
std::vector<PolyMatrix> sigma_projectors(const SigmaModule& m);

}  // namespace mfkit
