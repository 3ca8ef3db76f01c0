#include "mfkit/cover.hpp"

#include <algorithm>

namespace mfkit {

CoverModule CoverModule::make(Poly f, PolyMatrix phi) {
    if (!phi.is_square()) throw ShapeMismatchError("the z-action must be a square matrix");
    if (phi.rows() == 0) throw ShapeMismatchError("rank-0 modules are rejected");
    if (f.is_zero()) throw PowerMismatchError("f must be nonzero");
    CoverModule n;
    n.ring_ = f.ring();
    if (!(*phi.ring() == *n.ring_)) throw VariableMismatchError("phi ring differs from the ring of f");
    const std::uint32_t d = n.ring_->field.d;
    PolyMatrix expect = PolyMatrix::identity(n.ring_, phi.rows()).scaled_by(-f);
    if (phi.power(d) != expect)
        throw PowerMismatchError("phi^" + std::to_string(d) + " != -f*I; not a module over the " +
                                 std::to_string(d) + "-fold cover");
    n.f_ = std::move(f);
    n.phi_ = std::move(phi);
    return n;
}

SigmaModule SigmaModule::make(CoverModule base, PolyMatrix sigma) {
    const auto& ring = base.ring();
    const std::uint32_t d = ring->field.d;
    if (!sigma.is_square() || sigma.rows() != base.rank_S())
        throw ShapeMismatchError("sigma must be square of the module's rank");
    if (sigma.power(d) != PolyMatrix::identity(ring, sigma.rows()))
        throw PowerMismatchError("sigma^d != I");
    if (sigma * base.phi() != (base.phi() * sigma).scaled(ring->field.omega))
        throw PowerMismatchError("sigma does not skew-commute with the z-action: sigma*phi != omega*phi*sigma");
    SigmaModule m;
    m.base_ = std::move(base);
    m.sigma_ = std::move(sigma);
    return m;
}

MatrixFactorization flat(const CoverModule& n) { return flat_with_mu(n, n.ring()->field.mu); }

MatrixFactorization flat_with_mu(const CoverModule& n, std::uint64_t mu) {
    const auto& F = n.ring()->field;
    if (F.pow(mu, F.d) != F.p - 1)
        throw FieldError("mu^" + std::to_string(F.d) + " != -1 for mu = " + std::to_string(mu));
    std::vector<PolyMatrix> factors(F.d, n.phi().scaled(mu));
    return MatrixFactorization::make(n.f(), std::move(factors));
}

CoverModule sharp(const MatrixFactorization& x) {
    const auto& F = x.ring()->field;
    if (x.arity() != F.d)
        throw ShapeMismatchError("sharp needs a factorization whose arity matches the field's d");
    const std::size_t n = x.size();
    const std::uint32_t d = F.d;
    PolyMatrix big(x.ring(), d * n, d * n);
    auto put_block = [&](std::size_t br, std::size_t bc, const PolyMatrix& m) {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) big.set(br * n + r, bc * n + c, m.at(r, c));
    };
    // top-right block phi_d, subdiagonal blocks phi_{d-1}, ..., phi_1
    put_block(0, d - 1, x.factor(d - 1));
    for (std::size_t t = 1; t < d; ++t) put_block(t, t - 1, x.factor(d - 1 - t));
    return CoverModule::make(x.f(), big.scaled(F.inv(F.mu)));
}

CoverModule sigma_twist(const CoverModule& n, long long k) {
    const auto& F = n.ring()->field;
    const long long d = F.d;
    const std::uint64_t w = F.pow(F.omega, static_cast<std::uint64_t>(((k % d) + d) % d));
    return CoverModule::make(n.f(), n.phi().scaled(w));
}

MatrixFactorization sharp_flat_target(const MatrixFactorization& x) {
    MatrixFactorization acc = x;
    for (std::uint32_t k = 1; k < x.arity(); ++k) acc = direct_sum(acc, shift(x, k));
    return acc;
}

std::vector<PolyMatrix> sharp_flat_certificate(const MatrixFactorization& x) {
    const auto& F = x.ring()->field;
    if (x.arity() != F.d)
        throw ShapeMismatchError("certificate needs a factorization whose arity matches the field's d");
    const std::size_t n = x.size();
    const std::uint32_t d = F.d;
    const MatrixFactorization lhs = flat(sharp(x));
    const MatrixFactorization rhs = sharp_flat_target(x);
    std::vector<PolyMatrix> us;
    us.reserve(d);
    for (std::uint32_t i = 0; i < d; ++i) {
        PolyMatrix u(x.ring(), d * n, d * n);
        for (std::uint32_t j = 0; j < d; ++j) {
            const std::uint32_t t = (2 * d - (i + j + 1) % d) % d;  // (-(i+j+1)) mod d
            for (std::size_t r = 0; r < n; ++r) u.set(t * n + r, j * n + r, Poly::constant(x.ring(), 1));
        }
        us.push_back(std::move(u));
    }
    for (std::uint32_t i = 0; i < d; ++i) {
        if (us[i] * lhs.factor(i) != rhs.factor(i) * us[(i + 1) % d])
            throw Error("internal: sharp-flat certificate failed exact verification");
    }
    return us;
}

SplitCertificate flat_sharp_certificate(const CoverModule& n) {
    const auto& F = n.ring()->field;
    const std::uint32_t d = F.d;
    const std::size_t r = n.rank_S();
    const std::uint64_t dinv = F.inv(F.d % F.p);
    PolyMatrix g(n.ring(), d * r, d * r);
    PolyMatrix s(n.ring(), d * r, d * r);
    for (std::uint32_t k = 0; k < d; ++k) {
        for (std::uint32_t j = 0; j < d; ++j) {
            const std::uint64_t gk = F.mul(dinv, F.pow(F.omega, static_cast<std::uint64_t>(j) * k % (F.p - 1)));
            const std::uint64_t sk = F.pow(F.inv(F.omega), static_cast<std::uint64_t>(j) * k % (F.p - 1));
            for (std::size_t t = 0; t < r; ++t) {
                g.set(k * r + t, j * r + t, Poly::constant(n.ring(), gk));
                s.set(j * r + t, k * r + t, Poly::constant(n.ring(), sk));
            }
        }
    }
    if (g * s != PolyMatrix::identity(n.ring(), d * r))
        throw Error("internal: flat-sharp certificate g*s != I");
    const CoverModule both = sharp(flat(n));
    PolyMatrix delta(n.ring(), d * r, d * r);
    for (std::uint32_t k = 0; k < d; ++k) {
        const PolyMatrix tw = n.phi().scaled(F.pow(F.omega, k));
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) delta.set(k * r + a, k * r + b, tw.at(a, b));
    }
    if (g * both.phi() != delta * g)
        throw Error("internal: flat-sharp certificate does not intertwine the z-actions");
    return SplitCertificate{std::move(g), std::move(s)};
}

std::size_t num_generators(const CoverModule& n) { return n.rank_S() - n.phi().constant_rank(); }

std::size_t rank_over_cover(const CoverModule& n) {
    if (n.rank_S() > PolyMatrix::kDetSizeCap) throw ShapeMismatchError("rank_over_cover: determinant size cap");
    Poly det = n.phi().det();
    if (det.is_zero()) throw NotPurePowerError("det(phi) = 0");
    std::size_t k = 0;
    for (;;) {
        auto q = det.divided_exactly_by(n.f());
        if (!q) break;
        det = *q;
        ++k;
    }
    if (det.constant_term() == 0)
        throw NotPurePowerError("det(phi) is not a unit multiple of a power of f (residual " + det.str() + ")");
    if (n.rank_S() != static_cast<std::size_t>(n.arity()) * k)
        throw RankMismatchError("rank_S != d * rank: " + std::to_string(n.rank_S()) +
                                " != " + std::to_string(n.arity()) + " * " + std::to_string(k));
    return k;
}

UlrichVerdict is_ulrich(const CoverModule& n) {
    UlrichVerdict v{};
    const auto of = n.f().ord();
    v.applicable = of && static_cast<int>(n.arity()) <= *of;
    v.reduced = n.phi().is_reduced();
    v.mu_equals_rank = num_generators(n) == n.rank_S();
    if (!v.applicable)
        v.status = UlrichStatus::NotApplicable;
    else
        v.status = v.reduced ? UlrichStatus::Ulrich : UlrichStatus::NotUlrich;
    return v;
}

SigmaModule equivariant_B(const MatrixFactorization& x) {
    CoverModule n = sharp(x);
    const auto& F = x.ring()->field;
    const std::size_t sz = x.size();
    PolyMatrix sigma(x.ring(), n.rank_S(), n.rank_S());
    for (std::uint32_t j = 0; j < F.d; ++j) {
        const std::uint64_t w = F.pow(F.omega, j);
        for (std::size_t t = 0; t < sz; ++t) sigma.set(j * sz + t, j * sz + t, Poly::constant(x.ring(), w));
    }
    return SigmaModule::make(std::move(n), std::move(sigma));
}

// E_k projects onto the omega^{-k} eigenspace of sigma, so that
// phi * E_k = E_{k-1} * phi follows from sigma phi = omega phi sigma
std::vector<PolyMatrix> sigma_projectors(const SigmaModule& m) {
    const auto& ring = m.base().ring();
    const auto& F = ring->field;
    const std::size_t r = m.base().rank_S();
    const std::uint64_t dinv = F.inv(F.d % F.p);
    std::vector<PolyMatrix> powers;
    powers.push_back(PolyMatrix::identity(ring, r));
    for (std::uint32_t j = 1; j < F.d; ++j) powers.push_back(powers.back() * m.sigma());
    std::vector<PolyMatrix> es;
    for (std::uint32_t k = 0; k < F.d; ++k) {
        PolyMatrix e(ring, r, r);
        for (std::uint32_t j = 0; j < F.d; ++j)
            e = e + powers[j].scaled(F.pow(F.omega, static_cast<std::uint64_t>(j) * k % (F.p - 1)));
        es.push_back(e.scaled(dinv));
    }
    return es;
}

namespace {

// columns of e at the leftmost pivot positions of its constant part
std::vector<std::size_t> pivot_columns(const PolyMatrix& e) {
    const auto& F = e.ring()->field;
    std::vector<std::uint64_t> m = e.constant_part();
    const std::size_t rows = e.rows(), cols = e.cols();
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv * cols + c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap_ranges(m.begin() + piv * cols, m.begin() + (piv + 1) * cols, m.begin() + rank * cols);
        const std::uint64_t inv = F.inv(m[rank * cols + c]);
        for (std::size_t j = c; j < cols; ++j) m[rank * cols + j] = F.mul(m[rank * cols + j], inv);
        for (std::size_t rr = 0; rr < rows; ++rr) {
            if (rr == rank) continue;
            const std::uint64_t f = m[rr * cols + c];
            if (f == 0) continue;
            for (std::size_t j = c; j < cols; ++j)
                m[rr * cols + j] = F.sub(m[rr * cols + j], F.mul(f, m[rank * cols + j]));
        }
        pivots.push_back(c);
        ++rank;
    }
    return pivots;
}

PolyMatrix select_columns(const PolyMatrix& m, const std::vector<std::size_t>& cols) {
    PolyMatrix out(m.ring(), m.rows(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < m.rows(); ++r) out.set(r, c, m.at(r, cols[c]));
    return out;
}

// exact solve of C * A = M for A, using the rows where C's constant part
// pivots; verified exactly, so a stale truncation cannot leak through
PolyMatrix solve_through_basis(const PolyMatrix& c, const PolyMatrix& m) {
    std::vector<std::size_t> pivot_rows;
    {
        PolyMatrix ct = c.transposed();
        pivot_rows = pivot_columns(ct);
    }
    if (pivot_rows.size() != c.cols()) throw UnequalEigenspaceDimsError("eigenspace basis is degenerate");
    PolyMatrix chat(c.ring(), c.cols(), c.cols());
    PolyMatrix mhat(c.ring(), c.cols(), m.cols());
    for (std::size_t i = 0; i < pivot_rows.size(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) chat.set(i, j, c.at(pivot_rows[i], j));
        for (std::size_t j = 0; j < m.cols(); ++j) mhat.set(i, j, m.at(pivot_rows[i], j));
    }
    const int bound = std::max(0, m.max_entry_degree()) + std::max(0, c.max_entry_degree()) + 8;
    PolyMatrix a = (chat.inverse_mod(bound) * mhat).truncated(bound);
    if (c * a != m) throw Error("eigenspace chain map is not polynomial within the degree bound");
    return a;
}

}  // namespace

MatrixFactorization equivariant_A(const SigmaModule& m) {
    const auto& ring = m.base().ring();
    const auto& F = ring->field;
    const std::uint32_t d = F.d;
    const std::vector<PolyMatrix> es = sigma_projectors(m);
    std::vector<PolyMatrix> bases;  // bases[j] spans the omega^j eigenspace
    bases.reserve(d);
    std::size_t dim = 0;
    for (std::uint32_t j = 0; j < d; ++j) {
        const PolyMatrix& e = es[(d - j) % d];
        const auto piv = pivot_columns(e);
        if (j == 0)
            dim = piv.size();
        else if (piv.size() != dim)
            throw UnequalEigenspaceDimsError("sigma eigenspaces have unequal dimensions (" + std::to_string(dim) +
                                             " vs " + std::to_string(piv.size()) + ")");
        bases.push_back(select_columns(e, piv));
    }
    if (dim == 0) throw UnequalEigenspaceDimsError("sigma eigenspaces are zero");
    const PolyMatrix muz = m.base().phi().scaled(F.mu);
    // chain map V_j -> V_{j+1} induced by mu*z
    std::vector<PolyMatrix> chain;
    chain.reserve(d);
    for (std::uint32_t j = 0; j < d; ++j) chain.push_back(solve_through_basis(bases[(j + 1) % d], muz * bases[j]));
    std::vector<PolyMatrix> factors;
    factors.reserve(d);
    for (std::uint32_t t = 0; t < d; ++t) factors.push_back(chain[(2 * d - t - 2) % d]);
    return MatrixFactorization::make(m.base().f(), std::move(factors));
}

}  // namespace mfkit
