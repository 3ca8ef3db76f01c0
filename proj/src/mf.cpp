#include "mfkit/mf.hpp"

#include <algorithm>

namespace mfkit {

MatrixFactorization MatrixFactorization::make(Poly f, std::vector<PolyMatrix> factors) {
    if (factors.size() < 2) throw ShapeMismatchError("a matrix factorization needs at least 2 factors");
    if (f.is_zero()) throw ProductMismatchError("f must be nonzero");
    MatrixFactorization x;
    x.ring_ = f.ring();
    x.f_ = std::move(f);
    x.d_ = static_cast<std::uint32_t>(factors.size());
    x.n_ = factors[0].rows();
    if (x.n_ == 0) throw ShapeMismatchError("size-0 factorizations are rejected");
    for (const auto& m : factors) {
        if (!m.is_square() || m.rows() != x.n_) throw ShapeMismatchError("factors must be square of equal size");
        if (!(*m.ring() == *x.ring_)) throw VariableMismatchError("factor ring differs from the ring of f");
    }
    PolyMatrix prod = factors[0];
    for (std::size_t k = 1; k < factors.size(); ++k) prod = prod * factors[k];
    PolyMatrix expect = PolyMatrix::identity(x.ring_, x.n_).scaled_by(x.f_);
    if (prod != expect) {
        for (std::size_t r = 0; r < x.n_; ++r)
            for (std::size_t c = 0; c < x.n_; ++c)
                if (!(prod.at(r, c) == expect.at(r, c)))
                    throw ProductMismatchError("factor product differs from f*I at entry (" + std::to_string(r + 1) +
                                               "," + std::to_string(c + 1) + "): got " + prod.at(r, c).str() +
                                               ", expected " + expect.at(r, c).str());
    }
    x.factors_ = std::move(factors);
    return x;
}

bool MatrixFactorization::operator==(const MatrixFactorization& o) const {
    return d_ == o.d_ && n_ == o.n_ && f_ == o.f_ && factors_ == o.factors_;
}

MatrixFactorization shift(const MatrixFactorization& x, long long k) {
    const long long d = x.arity();
    long long r = ((k % d) + d) % d;
    std::vector<PolyMatrix> rotated;
    rotated.reserve(x.arity());
    for (std::size_t i = 0; i < x.arity(); ++i) rotated.push_back(x.factor((i + static_cast<std::size_t>(r)) % x.arity()));
    return MatrixFactorization::make(x.f(), std::move(rotated));
}

MatrixFactorization direct_sum(const MatrixFactorization& x, const MatrixFactorization& y) {
    if (x.arity() != y.arity()) throw ShapeMismatchError("direct sum needs equal arity");
    if (!(x.f() == y.f())) throw ProductMismatchError("direct sum needs the same f");
    std::vector<PolyMatrix> factors;
    factors.reserve(x.arity());
    for (std::size_t k = 0; k < x.arity(); ++k) factors.push_back(PolyMatrix::block_diag(x.factor(k), y.factor(k)));
    return MatrixFactorization::make(x.f(), std::move(factors));
}

MatrixFactorization pad(const MatrixFactorization& x) {
    std::vector<PolyMatrix> factors = x.factors();
    factors.push_back(PolyMatrix::identity(x.ring(), x.size()));
    return MatrixFactorization::make(x.f(), std::move(factors));
}

bool is_reduced(const MatrixFactorization& x) {
    return std::all_of(x.factors().begin(), x.factors().end(), [](const PolyMatrix& m) { return m.is_reduced(); });
}

std::vector<Poly> entry_ideal(const MatrixFactorization& x) {
    std::vector<Poly> gens;
    for (const auto& m : x.factors())
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (!m.at(r, c).is_zero()) gens.push_back(m.at(r, c).monic());
    // ascending total degree; within a degree, graded-lex larger first
    std::sort(gens.begin(), gens.end(), [](const Poly& a, const Poly& b) {
        if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
        return Poly::compare(a, b) > 0;
    });
    gens.erase(std::unique(gens.begin(), gens.end(), [](const Poly& a, const Poly& b) { return a == b; }),
               gens.end());
    return gens;
}

}  // namespace mfkit
