#pragma once

#include <cstdint>
#include <vector>

#include "mfkit/polymatrix.hpp"

namespace mfkit {

struct ProductMismatchError : Error {
    using Error::Error;
};

// A d-tuple of square matrices over S with phi_1 phi_2 ... phi_d = f * I.
// Validation is eager: no unverified factorization exists.
class MatrixFactorization {
public:
    static MatrixFactorization make(Poly f, std::vector<PolyMatrix> factors);

    const RingPtr& ring() const { return ring_; }
    const Poly& f() const { return f_; }
    std::uint32_t arity() const { return d_; }
    std::size_t size() const { return n_; }
    const std::vector<PolyMatrix>& factors() const { return factors_; }
    const PolyMatrix& factor(std::size_t k) const { return factors_.at(k); }  // 0-based

    bool operator==(const MatrixFactorization& o) const;
    bool operator!=(const MatrixFactorization& o) const { return !(*this == o); }

private:
    RingPtr ring_;
    Poly f_;
    std::uint32_t d_ = 0;
    std::size_t n_ = 0;
    std::vector<PolyMatrix> factors_;
};

// T^k: cyclic rotation of the factor tuple; shift(X, d) == X literally
MatrixFactorization shift(const MatrixFactorization& x, long long k);

// factor-wise block diagonal
MatrixFactorization direct_sum(const MatrixFactorization& x, const MatrixFactorization& y);

// append an identity factor: (phi_1,...,phi_d) -> (phi_1,...,phi_d, I)
MatrixFactorization pad(const MatrixFactorization& x);

// all entries of all factors lie in the maximal ideal
bool is_reduced(const MatrixFactorization& x);

// deduplicated, canonically ordered generators of I(X): the monic-normalized
// nonzero entries of all factors (no ideal arithmetic)
std::vector<Poly> entry_ideal(const MatrixFactorization& x);

}  // namespace mfkit
