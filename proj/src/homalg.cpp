#include "mfkit/homalg.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>

namespace mfkit {

int default_truncation(const Poly& f) { return 2 * std::max(0, f.total_degree()) + 2; }

namespace {

bool decomp_trace() {
    static const bool on = std::getenv("MFKIT_DEBUG_DECOMP") != nullptr;
    return on;
}

#define MFKIT_TRACE(...)                          \
    do {                                          \
        if (decomp_trace()) {                     \
            std::fprintf(stderr, __VA_ARGS__);    \
            std::fputc('\n', stderr);             \
        }                                         \
    } while (0)

// ---------------------------------------------------------------------------
// monomial tables

struct MonoTable {
    std::vector<Exps> list;  // graded-lex ascending
    std::map<Exps, int> index;
};

void enumerate_monomials(std::size_t vars, int bound, Exps& cur, std::size_t pos, int used, std::vector<Exps>& out) {
    if (pos == vars) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; used + e < bound; ++e) {
        cur[pos] = static_cast<std::uint32_t>(e);
        enumerate_monomials(vars, bound, cur, pos + 1, used + e, out);
    }
    cur[pos] = 0;
}

MonoTable make_mono_table(std::size_t vars, int bound) {
    MonoTable t;
    Exps cur(vars, 0);
    enumerate_monomials(vars, bound, cur, 0, 0, t.list);
    std::sort(t.list.begin(), t.list.end(), [](const Exps& a, const Exps& b) { return compare_monomials(a, b) < 0; });
    for (std::size_t i = 0; i < t.list.size(); ++i) t.index.emplace(t.list[i], static_cast<int>(i));
    return t;
}

// ---------------------------------------------------------------------------
// dense GF(p) linear algebra

using Vec = std::vector<std::uint64_t>;

// reduced row echelon form in place; returns pivot column per row
std::vector<std::size_t> gf_rref(const RootedField& F, std::vector<Vec>& rows, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < ncols && rank < rows.size(); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        const std::uint64_t inv = F.inv(rows[rank][c]);
        for (std::size_t j = c; j < ncols; ++j) rows[rank][j] = F.mul(rows[rank][j], inv);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            const std::uint64_t f = rows[r][c];
            for (std::size_t j = c; j < ncols; ++j) rows[r][j] = F.sub(rows[r][j], F.mul(f, rows[rank][j]));
        }
        pivots.push_back(c);
        ++rank;
    }
    rows.resize(rank);
    return pivots;
}

std::vector<Vec> gf_nullspace(const RootedField& F, std::vector<Vec>& rows, std::size_t ncols) {
    const std::vector<std::size_t> pivots = gf_rref(F, rows, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t c = 0; c < ncols; ++c) {
        if (is_pivot[c]) continue;
        Vec v(ncols, 0);
        v[c] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = F.neg(rows[r][c]);
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// raw cyclic chains: the common shape of MF morphisms (length d) and cover
// module morphisms (length 1)

struct RawChain {
    RingPtr ring;
    std::vector<PolyMatrix> mats;

    std::size_t len() const { return mats.size(); }
    std::size_t size() const { return mats[0].rows(); }
};

RawChain chain_of(const MatrixFactorization& x) { return RawChain{x.ring(), x.factors()}; }
RawChain chain_of(const CoverModule& n) { return RawChain{n.ring(), {n.phi()}}; }

int chain_max_degree(const RawChain& x) {
    int d = 0;
    for (const auto& m : x.mats) d = std::max(d, m.max_entry_degree());
    return d;
}

// Solve alpha_i * A_i = B_i * alpha_{i+1} for tuples alpha of m x n matrices.
// Truncated mode: unknown entries of degree < bound, equation i enforced
// modulo n^(bound + m_i); raw chains (data only valid mod n^bound) cap every
// equation at n^bound instead. Exact mode: unknown degree <= bound, full identity.
std::vector<std::vector<PolyMatrix>> chain_hom_basis(const RawChain& x, const RawChain& y, int bound, bool exact,
                                                     bool raw = false) {
    if (x.len() != y.len()) throw ShapeMismatchError("chain length mismatch");
    const auto& ring = x.ring;
    const auto& F = ring->field;
    const std::size_t L = x.len();
    const std::size_t n = x.size(), m = y.size();
    const int udeg = exact ? bound + 1 : bound;  // exclusive bound on unknown entry degree
    if (udeg < 1) throw Error("truncation degree must be at least 1");
    const MonoTable unknowns = make_mono_table(ring->vars.size(), udeg);
    const int maxdeg = std::max(chain_max_degree(x), chain_max_degree(y));
    const MonoTable eqmono = make_mono_table(ring->vars.size(), udeg + maxdeg);
    const std::size_t M = unknowns.list.size();
    const std::size_t ncols = L * m * n * M;

    std::vector<int> modulus(L);
    for (std::size_t i = 0; i < L; ++i) {
        if (exact) {
            modulus[i] = udeg + maxdeg;
        } else if (raw) {
            modulus[i] = bound;
        } else {
            const int ma = x.mats[i].min_entry_ord();
            const int mb = y.mats[i].min_entry_ord();
            int mi;
            if (ma < 0 && mb < 0)
                mi = 0;  // both zero: equation vacuous anyway
            else if (ma < 0)
                mi = mb;
            else if (mb < 0)
                mi = ma;
            else
                mi = std::min(ma, mb);
            modulus[i] = bound + mi;
        }
    }

    auto unknown_index = [&](std::size_t i, std::size_t r, std::size_t c, int mono) {
        return ((i * m + r) * n + c) * M + static_cast<std::size_t>(mono);
    };

    // sparse accumulation keyed by equation id, densified on first touch
    std::map<std::uint64_t, std::size_t> eqrow;
    std::vector<Vec> rows;
    auto row_for = [&](std::size_t i, std::size_t r, std::size_t c, int mono) -> Vec& {
        const std::uint64_t key = ((static_cast<std::uint64_t>(i) * m + r) * n + c) * eqmono.list.size() +
                                  static_cast<std::uint64_t>(mono);
        auto [it, inserted] = eqrow.try_emplace(key, rows.size());
        if (inserted) rows.emplace_back(ncols, 0);
        return rows[it->second];
    };
    auto mono_degree = [](const Exps& e) {
        return static_cast<int>(std::accumulate(e.begin(), e.end(), std::uint64_t{0}));
    };

    for (std::size_t i = 0; i < L; ++i) {
        const PolyMatrix& A = x.mats[i];
        const PolyMatrix& B = y.mats[i];
        const std::size_t inext = (i + 1) % L;
        // alpha_i * A_i contributions  (entry (r,c) of the product, r<m, c<n)
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t t = 0; t < n; ++t) {
                for (std::size_t c = 0; c < n; ++c) {
                    const Poly& a = A.at(t, c);
                    for (const auto& term : a.terms()) {
                        for (std::size_t mu = 0; mu < M; ++mu) {
                            Exps e = unknowns.list[mu];
                            for (std::size_t v = 0; v < e.size(); ++v) e[v] += term.exps[v];
                            if (mono_degree(e) >= modulus[i]) continue;
                            const int idx = eqmono.index.at(e);
                            Vec& row = row_for(i, r, c, idx);
                            const std::size_t u = unknown_index(i, r, t, static_cast<int>(mu));
                            row[u] = F.add(row[u], term.coeff);
                        }
                    }
                }
            }
        }
        // -B_i * alpha_{i+1} contributions
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t t = 0; t < m; ++t) {
                const Poly& b = B.at(r, t);
                for (const auto& term : b.terms()) {
                    for (std::size_t c = 0; c < n; ++c) {
                        for (std::size_t mu = 0; mu < M; ++mu) {
                            Exps e = unknowns.list[mu];
                            for (std::size_t v = 0; v < e.size(); ++v) e[v] += term.exps[v];
                            if (mono_degree(e) >= modulus[i]) continue;
                            const int idx = eqmono.index.at(e);
                            Vec& row = row_for(i, r, c, idx);
                            const std::size_t u = unknown_index(inext, t, c, static_cast<int>(mu));
                            row[u] = F.sub(row[u], term.coeff);
                        }
                    }
                }
            }
        }
    }

    std::vector<Vec> sol = gf_nullspace(F, rows, ncols);
    std::vector<std::vector<PolyMatrix>> basis;
    basis.reserve(sol.size());
    for (const auto& v : sol) {
        std::vector<PolyMatrix> tuple;
        tuple.reserve(L);
        for (std::size_t i = 0; i < L; ++i) {
            PolyMatrix mat(ring, m, n);
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t c = 0; c < n; ++c) {
                    std::vector<Term> terms;
                    for (std::size_t mu = 0; mu < M; ++mu) {
                        const std::uint64_t cv = v[unknown_index(i, r, c, static_cast<int>(mu))];
                        if (cv != 0) terms.push_back({unknowns.list[mu], cv});
                    }
                    if (!terms.empty()) mat.set(r, c, Poly::from_terms(ring, std::move(terms)));
                }
            }
            tuple.push_back(std::move(mat));
        }
        basis.push_back(std::move(tuple));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// constant-part search space

struct ConstSpace {
    const RootedField* F = nullptr;
    std::size_t L = 0, m = 0, n = 0;
    std::vector<Vec> rows;     // RREF basis of the constant tuples, flattened
    std::vector<Vec> recipes;  // combo over the originating hom basis per row

    std::size_t dim() const { return rows.size(); }
};

Vec const_flatten(const std::vector<PolyMatrix>& tuple) {
    Vec out;
    for (const auto& mat : tuple) {
        const Vec c = mat.constant_part();
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

ConstSpace const_space(const RootedField& F, const std::vector<std::vector<PolyMatrix>>& basis, std::size_t L,
                       std::size_t m, std::size_t n) {
    ConstSpace s;
    s.F = &F;
    s.L = L;
    s.m = m;
    s.n = n;
    if (basis.empty()) return s;
    const std::size_t w = L * m * n;
    std::vector<Vec> aug;  // [constants | combo coords]
    for (std::size_t b = 0; b < basis.size(); ++b) {
        Vec row = const_flatten(basis[b]);
        row.resize(w + basis.size(), 0);
        row[w + b] = 1;
        aug.push_back(std::move(row));
    }
    // eliminate on the constant part only
    std::size_t rank = 0;
    for (std::size_t c = 0; c < w && rank < aug.size(); ++c) {
        std::size_t piv = rank;
        while (piv < aug.size() && aug[piv][c] == 0) ++piv;
        if (piv == aug.size()) continue;
        std::swap(aug[rank], aug[piv]);
        const std::uint64_t inv = F.inv(aug[rank][c]);
        for (auto& x : aug[rank]) x = F.mul(x, inv);
        for (std::size_t r = 0; r < aug.size(); ++r) {
            if (r == rank || aug[r][c] == 0) continue;
            const std::uint64_t f = aug[r][c];
            for (std::size_t j = 0; j < aug[r].size(); ++j) aug[r][j] = F.sub(aug[r][j], F.mul(f, aug[rank][j]));
        }
        ++rank;
    }
    for (std::size_t r = 0; r < rank; ++r) {
        s.rows.push_back(Vec(aug[r].begin(), aug[r].begin() + w));
        s.recipes.push_back(Vec(aug[r].begin() + w, aug[r].end()));
    }
    return s;
}

bool all_slots_invertible(const ConstSpace& s, const Vec& w) {
    if (s.m != s.n) return false;
    std::vector<std::uint64_t> slot(s.n * s.n);
    std::vector<std::uint64_t> scratch;
    for (std::size_t i = 0; i < s.L; ++i) {
        std::copy(w.begin() + i * s.n * s.n, w.begin() + (i + 1) * s.n * s.n, slot.begin());
        if (!constant_matrix_inverse(*s.F, slot, s.n, scratch)) return false;
    }
    return true;
}

Vec combine(const RootedField& F, const std::vector<Vec>& rows, const Vec& coeffs) {
    Vec out(rows.empty() ? 0 : rows[0].size(), 0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (coeffs[k] == 0) continue;
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = F.add(out[j], F.mul(coeffs[k], rows[k][j]));
    }
    return out;
}

// search coefficients over the ConstSpace basis giving an all-invertible
// tuple. Outcome: found coefficients, or certified absence, or out of budget.
enum class SearchOutcome { Found, Absent, OutOfBudget };

SearchOutcome search_invertible(const ConstSpace& s, std::mt19937_64& rng, int random_tries, std::uint64_t scan_cap,
                                Vec& out_coeffs) {
    const auto& F = *s.F;
    if (s.dim() == 0) return SearchOutcome::Absent;
    // a slot that is identically zero on the space rules everything out
    for (std::size_t i = 0; i < s.L; ++i) {
        bool all_zero = true;
        for (const auto& row : s.rows) {
            for (std::size_t j = i * s.m * s.n; j < (i + 1) * s.m * s.n && all_zero; ++j)
                if (row[j] != 0) all_zero = false;
            if (!all_zero) break;
        }
        if (all_zero) return SearchOutcome::Absent;
    }
    std::uniform_int_distribution<std::uint64_t> dist(0, F.p - 1);
    for (int t = 0; t < random_tries; ++t) {
        Vec coeffs(s.dim());
        bool nonzero = false;
        for (auto& c : coeffs) {
            c = dist(rng);
            nonzero |= (c != 0);
        }
        if (!nonzero) continue;
        if (all_slots_invertible(s, combine(F, s.rows, coeffs))) {
            out_coeffs = std::move(coeffs);
            return SearchOutcome::Found;
        }
    }
    // exhaustive projective scan
    std::uint64_t count = 1;
    bool overflow = false;
    for (std::size_t k = 1; k < s.dim(); ++k) {
        count = count * F.p + 1;
        if (count > scan_cap) {
            overflow = true;
            break;
        }
    }
    if (overflow) return SearchOutcome::OutOfBudget;
    Vec coeffs(s.dim(), 0);
    for (std::size_t lead = 0; lead < s.dim(); ++lead) {
        std::fill(coeffs.begin(), coeffs.end(), 0);
        coeffs[lead] = 1;
        const std::size_t tail = s.dim() - lead - 1;
        std::vector<std::uint64_t> counter(tail, 0);
        for (;;) {
            for (std::size_t j = 0; j < tail; ++j) coeffs[lead + 1 + j] = counter[j];
            if (all_slots_invertible(s, combine(F, s.rows, coeffs))) {
                out_coeffs = coeffs;
                return SearchOutcome::Found;
            }
            std::size_t j = 0;
            while (j < tail && ++counter[j] == F.p) counter[j++] = 0;
            if (j == tail) break;
        }
    }
    return SearchOutcome::Absent;
}

std::vector<PolyMatrix> tuple_from_coeffs(const RootedField&, const std::vector<std::vector<PolyMatrix>>& basis,
                                          const Vec& coeffs) {
    std::vector<PolyMatrix> out;
    const std::size_t L = basis[0].size();
    for (std::size_t i = 0; i < L; ++i) {
        PolyMatrix acc = PolyMatrix::zeros(basis[0][i].ring(), basis[0][i].rows(), basis[0][i].cols());
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (coeffs[k] != 0) acc = acc + basis[k][i].scaled(coeffs[k]);
        out.push_back(std::move(acc));
    }
    return out;
}

bool is_exact_chain_morphism(const RawChain& x, const RawChain& y, const std::vector<PolyMatrix>& alpha) {
    const std::size_t L = x.len();
    for (std::size_t i = 0; i < L; ++i)
        if (alpha[i] * x.mats[i] != y.mats[i] * alpha[(i + 1) % L]) return false;
    return true;
}

// exact polynomial adjugate-based inverse; exists iff det is a unit constant
std::optional<PolyMatrix> exact_polynomial_inverse(const PolyMatrix& a) {
    if (!a.is_square() || a.rows() > PolyMatrix::kDetSizeCap) return std::nullopt;
    const Poly det = a.det();
    if (!det.is_constant() || det.constant_term() == 0) return std::nullopt;
    const auto& ring = a.ring();
    const auto& F = ring->field;
    const std::size_t n = a.rows();
    PolyMatrix adj(ring, n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            PolyMatrix minor(ring, n - 1, n - 1);
            for (std::size_t i = 0, ii = 0; i < n; ++i) {
                if (i == r) continue;
                for (std::size_t j = 0, jj = 0; j < n; ++j) {
                    if (j == c) continue;
                    minor.set(ii, jj, a.at(i, j));
                    ++jj;
                }
                ++ii;
            }
            Poly cof = (n == 1) ? Poly::constant(ring, 1) : minor.det();
            if ((r + c) % 2 == 1) cof = cof.scaled(F.p - 1);
            adj.set(c, r, std::move(cof));
        }
    }
    return adj.scaled(F.inv(det.constant_term()));
}

}  // namespace

// ---------------------------------------------------------------------------
// hom spaces

HomSpace hom_space(const MatrixFactorization& x, const MatrixFactorization& y, int N) {
    if (!(*x.ring() == *y.ring())) throw VariableMismatchError("hom space needs a common ring");
    if (x.arity() != y.arity()) throw ShapeMismatchError("hom space needs equal arity");
    if (!(x.f() == y.f())) throw ProductMismatchError("hom space needs the same f");
    if (N < 1) throw Error("truncation degree must be at least 1");
    HomSpace h;
    h.truncation = N;
    h.basis = chain_hom_basis(chain_of(x), chain_of(y), N, false);
    return h;
}

HomSpace module_end_space(const CoverModule& n, int N) {
    if (N < 1) throw Error("truncation degree must be at least 1");
    HomSpace h;
    h.truncation = N;
    h.basis = chain_hom_basis(chain_of(n), chain_of(n), N, false);
    return h;
}

// ---------------------------------------------------------------------------
// isomorphism testing

namespace {

// defined with the decomposition machinery below
std::optional<bool> krs_iso_decision(const RawChain& x, const RawChain& y, int N, std::mt19937_64& rng, int tries,
                                     std::uint64_t scan_cap);

std::optional<IsoCertificate> upgrade_to_exact(const RawChain& cx, const RawChain& cy, int degree_cap,
                                               std::mt19937_64& rng, int random_tries, std::uint64_t scan_cap) {
    const auto& F = cx.ring->field;
    for (int t = 0; t <= degree_cap; ++t) {
        const auto basis = chain_hom_basis(cx, cy, t, true);
        if (basis.empty()) continue;
        const ConstSpace s = const_space(F, basis, cx.len(), cy.size(), cx.size());
        Vec coeffs;
        if (search_invertible(s, rng, random_tries, scan_cap, coeffs) != SearchOutcome::Found) continue;
        // recover the full element whose constant part was found
        Vec combo(basis.size(), 0);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k] == 0) continue;
            for (std::size_t j = 0; j < basis.size(); ++j)
                combo[j] = F.add(combo[j], F.mul(coeffs[k], s.recipes[k][j]));
        }
        std::vector<PolyMatrix> alpha = tuple_from_coeffs(F, basis, combo);
        if (!is_exact_chain_morphism(cx, cy, alpha)) continue;
        std::vector<PolyMatrix> beta;
        bool ok = true;
        for (const auto& a : alpha) {
            auto inv = exact_polynomial_inverse(a);
            if (!inv) {
                ok = false;
                break;
            }
            beta.push_back(std::move(*inv));
        }
        if (!ok) continue;
        if (!is_exact_chain_morphism(cy, cx, beta)) continue;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            const auto id = PolyMatrix::identity(cx.ring, cx.size());
            if (alpha[i] * beta[i] != id || beta[i] * alpha[i] != id) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        return IsoCertificate{std::move(alpha), std::move(beta)};
    }
    return std::nullopt;
}

}  // namespace

IsoVerdict is_isomorphic(const MatrixFactorization& x, const MatrixFactorization& y, int N, IsoOptions opt) {
    if (!(*x.ring() == *y.ring())) throw VariableMismatchError("isomorphism test needs a common ring");
    if (x.arity() != y.arity()) throw ShapeMismatchError("isomorphism test needs equal arity");
    if (!(x.f() == y.f())) throw ProductMismatchError("isomorphism test needs the same f");
    IsoVerdict v;
    v.truncation = N;
    if (x.size() != y.size()) {
        // free modules of different rank are never isomorphic
        v.status = IsoStatus::NotIsoModN;
        return v;
    }
    const RawChain cx = chain_of(x), cy = chain_of(y);
    std::mt19937_64 rng(opt.seed);
    if (x == y) {
        std::vector<PolyMatrix> id(x.arity(), PolyMatrix::identity(x.ring(), x.size()));
        v.status = IsoStatus::CertifiedIso;
        v.certificate = IsoCertificate{id, id};
        return v;
    }
    const HomSpace h = hom_space(x, y, N);
    const ConstSpace s = const_space(x.ring()->field, h.basis, x.arity(), y.size(), x.size());
    Vec coeffs;
    const SearchOutcome out = search_invertible(s, rng, opt.random_tries, opt.scan_cap, coeffs);
    if (out == SearchOutcome::Absent) {
        v.status = IsoStatus::NotIsoModN;
        return v;
    }
    if (out == SearchOutcome::OutOfBudget) {
        // the direct scan is out of reach; decide through the Krull-Schmidt
        // structure of the truncated category instead
        const auto krs = krs_iso_decision(chain_of(x), chain_of(y), N, rng, 10, opt.scan_cap);
        if (krs) {
            v.status = *krs ? IsoStatus::IsoModN : IsoStatus::NotIsoModN;
            return v;
        }
        v.status = IsoStatus::Undecided;
        return v;
    }
    const auto& F = x.ring()->field;
    Vec combo(h.basis.size(), 0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == 0) continue;
        for (std::size_t j = 0; j < h.basis.size(); ++j) combo[j] = F.add(combo[j], F.mul(coeffs[k], s.recipes[k][j]));
    }
    std::vector<PolyMatrix> witness = tuple_from_coeffs(F, h.basis, combo);
    auto cert = upgrade_to_exact(cx, cy, std::min(opt.exact_degree_cap, N - 1), rng, opt.random_tries, opt.scan_cap);
    if (cert) {
        v.status = IsoStatus::CertifiedIso;
        v.certificate = std::move(*cert);
        return v;
    }
    v.status = IsoStatus::IsoModN;
    v.mod_witness = std::move(witness);
    return v;
}

int order_of(const MatrixFactorization& x, int N, IsoOptions opt) {
    const int d = static_cast<int>(x.arity());
    for (int k = 1; k <= d; ++k) {
        if (d % k != 0) continue;
        if (k == d) return d;  // shift(x, d) == x literally
        const IsoVerdict v = is_isomorphic(x, shift(x, k), N, opt);
        if (v.status == IsoStatus::Undecided)
            throw UndecidedError("order_of: isomorphism test inconclusive for k=" + std::to_string(k));
        if (v.status != IsoStatus::NotIsoModN) return k;
    }
    return d;
}

int order_bound_check(const MatrixFactorization& x, int N, IsoOptions opt) {
    const int k = order_of(x, N, opt);
    if (static_cast<int>(x.arity()) % k != 0) throw Error("order bound violated: order does not divide d");
    return k;
}

// ---------------------------------------------------------------------------
// decomposition

namespace {

// connected components of the union of entry-support graphs
std::vector<std::vector<std::size_t>> support_components(const RawChain& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
    for (const auto& m : x.mats)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (!m.at(r, c).is_zero()) unite(r, c);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, idx] : groups) out.push_back(std::move(idx));
    return out;
}

RawChain restrict_chain(const RawChain& x, const std::vector<std::size_t>& idx) {
    RawChain out;
    out.ring = x.ring;
    for (const auto& m : x.mats) {
        PolyMatrix sub(x.ring, idx.size(), idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c) sub.set(r, c, m.at(idx[r], idx[c]));
        out.mats.push_back(std::move(sub));
    }
    return out;
}

// --- F_p[t] helpers for minimal polynomials -------------------------------

Vec poly_trim(Vec a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

Vec poly_mul_fp(const RootedField& F, const Vec& a, const Vec& b) {
    if (a.empty() || b.empty()) return {};
    Vec out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
    return poly_trim(std::move(out));
}

// division with remainder
std::pair<Vec, Vec> poly_divmod_fp(const RootedField& F, Vec a, const Vec& b) {
    if (b.empty()) throw Error("division by zero polynomial");
    if (a.size() < b.size()) return {Vec{}, poly_trim(std::move(a))};
    Vec q(a.size() - b.size() + 1, 0);
    const std::uint64_t lead_inv = F.inv(b.back());
    for (std::size_t sh = q.size(); sh-- > 0;) {
        const std::uint64_t c = F.mul(a[sh + b.size() - 1], lead_inv);
        if (c != 0) {
            q[sh] = c;
            for (std::size_t j = 0; j < b.size(); ++j) a[sh + j] = F.sub(a[sh + j], F.mul(c, b[j]));
        }
    }
    return {poly_trim(std::move(q)), poly_trim(std::move(a))};
}

Vec poly_gcd_fp(const RootedField& F, Vec a, Vec b) {
    a = poly_trim(std::move(a));
    b = poly_trim(std::move(b));
    while (!b.empty()) {
        auto [q, r] = poly_divmod_fp(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const std::uint64_t inv = F.inv(a.back());
        for (auto& c : a) c = F.mul(c, inv);
    }
    return a;
}

// constant tuples: flattened per-slot square matrices
struct ConstTupleOps {
    const RootedField* F;
    std::size_t L, n;

    Vec identity() const {
        Vec v(L * n * n, 0);
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = 0; j < n; ++j) v[i * n * n + j * n + j] = 1;
        return v;
    }
    Vec mul(const Vec& a, const Vec& b) const {
        Vec out(L * n * n, 0);
        for (std::size_t i = 0; i < L; ++i) {
            const std::size_t off = i * n * n;
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t k = 0; k < n; ++k) {
                    const std::uint64_t v = a[off + r * n + k];
                    if (v == 0) continue;
                    for (std::size_t c = 0; c < n; ++c)
                        out[off + r * n + c] = F->add(out[off + r * n + c], F->mul(v, b[off + k * n + c]));
                }
        }
        return out;
    }
    Vec add_scaled(Vec a, const Vec& b, std::uint64_t s) const {
        for (std::size_t j = 0; j < a.size(); ++j) a[j] = F->add(a[j], F->mul(s, b[j]));
        return a;
    }
    bool is_zero(const Vec& a) const {
        return std::all_of(a.begin(), a.end(), [](std::uint64_t v) { return v == 0; });
    }
    // evaluate a polynomial with F_p coefficients on the tuple
    Vec eval_poly(const Vec& coeffs, const Vec& x) const {
        Vec acc(L * n * n, 0);
        for (std::size_t i = coeffs.size(); i-- > 0;) {
            acc = mul(acc, x);
            if (coeffs[i] != 0) acc = add_scaled(std::move(acc), identity(), coeffs[i]);
            if (i == 0) break;
        }
        return acc;
    }
};

// minimal polynomial of a constant tuple by iterating powers
Vec tuple_min_poly(const ConstTupleOps& ops, const Vec& x) {
    const auto& F = *ops.F;
    std::vector<Vec> powers;
    powers.push_back(ops.identity());
    const std::size_t w = x.size();
    for (std::size_t k = 1;; ++k) {
        powers.push_back(ops.mul(powers.back(), x));
        // test dependence of powers[0..k] via elimination snapshot
        std::vector<Vec> mat;
        for (std::size_t j = 0; j <= k; ++j) {
            Vec row = powers[j];
            row.resize(w + k + 1, 0);
            row[w + j] = 1;
            mat.push_back(std::move(row));
        }
        // eliminate on the first w columns
        std::size_t rank = 0;
        for (std::size_t c = 0; c < w && rank < mat.size(); ++c) {
            std::size_t piv = rank;
            while (piv < mat.size() && mat[piv][c] == 0) ++piv;
            if (piv == mat.size()) continue;
            std::swap(mat[rank], mat[piv]);
            const std::uint64_t inv = F.inv(mat[rank][c]);
            for (auto& v : mat[rank]) v = F.mul(v, inv);
            for (std::size_t r = 0; r < mat.size(); ++r) {
                if (r == rank || mat[r][c] == 0) continue;
                const std::uint64_t f = mat[r][c];
                for (std::size_t j2 = 0; j2 < mat[r].size(); ++j2)
                    mat[r][j2] = F.sub(mat[r][j2], F.mul(f, mat[rank][j2]));
            }
            ++rank;
        }
        if (rank <= k) {
            // some row is now zero on the power part; its combo is the min poly
            for (const auto& row : mat) {
                bool zero = true;
                for (std::size_t j = 0; j < w; ++j)
                    if (row[j] != 0) {
                        zero = false;
                        break;
                    }
                if (zero) {
                    Vec coeffs(row.begin() + w, row.end());
                    return poly_trim(std::move(coeffs));
                }
            }
        }
        if (k > w + 1) throw Error("internal: minimal polynomial search did not terminate");
    }
}

// nontrivial idempotent from a root-based primary splitting of the min poly
std::optional<Vec> idempotent_from_element(const ConstTupleOps& ops, const Vec& x) {
    const auto& F = *ops.F;
    Vec m = tuple_min_poly(ops, x);
    if (decomp_trace()) {
        std::fprintf(stderr, "  minpoly deg %zu coeffs:", m.empty() ? 0 : m.size() - 1);
        for (auto c : m) std::fprintf(stderr, " %llu", (unsigned long long)c);
        std::fputc('\n', stderr);
    }
    if (m.size() <= 1) return std::nullopt;
    for (std::uint64_t c = 0; c < F.p; ++c) {
        // multiplicity of root c
        Vec lin{F.neg(c), 1};
        Vec rest = m;
        Vec primary{1};
        for (;;) {
            auto [q, r] = poly_divmod_fp(F, rest, lin);
            if (!r.empty()) break;
            rest = std::move(q);
            primary = poly_mul_fp(F, primary, lin);
        }
        if (primary.size() <= 1 || rest.size() <= 1) continue;  // no root, or m = (t-c)^k
        MFKIT_TRACE("  root %llu: primary deg %zu rest deg %zu", (unsigned long long)c, primary.size() - 1,
                    rest.size() - 1);
        // Bezout: u*primary + v*rest = 1; idempotent e = (v*rest)(x)
        Vec g = primary, h = rest;
        // extended euclid
        Vec s0{1}, s1{};
        Vec t0{}, t1{1};
        Vec a = g, b = h;
        while (!b.empty()) {
            auto [q, r] = poly_divmod_fp(F, a, b);
            Vec s2 = s0;
            {
                Vec qs = poly_mul_fp(F, q, s1);
                s2.resize(std::max(s2.size(), qs.size()), 0);
                for (std::size_t j = 0; j < qs.size(); ++j) s2[j] = F.sub(j < s2.size() ? s2[j] : 0, qs[j]);
                s2 = poly_trim(std::move(s2));
            }
            Vec t2 = t0;
            {
                Vec qt = poly_mul_fp(F, q, t1);
                t2.resize(std::max(t2.size(), qt.size()), 0);
                for (std::size_t j = 0; j < qt.size(); ++j) t2[j] = F.sub(j < t2.size() ? t2[j] : 0, qt[j]);
                t2 = poly_trim(std::move(t2));
            }
            a = std::move(b);
            b = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (a.size() != 1) continue;  // gcd not a unit: shouldn't happen for coprime parts
        const std::uint64_t ginv = F.inv(a[0]);
        Vec v = t0;  // u*primary + v*rest = gcd
        for (auto& cv : v) cv = F.mul(cv, ginv);
        const Vec e = ops.eval_poly(poly_mul_fp(F, v, rest), x);
        if (ops.is_zero(e)) continue;
        Vec diff = e;
        const Vec id = ops.identity();
        bool is_id = true;
        for (std::size_t j = 0; j < diff.size(); ++j)
            if (diff[j] != id[j]) {
                is_id = false;
                break;
            }
        if (is_id) continue;
        // sanity: e^2 == e
        const Vec e2 = ops.mul(e, e);
        if (e2 != e) continue;
        return e;
    }
    return std::nullopt;
}

std::vector<std::size_t> const_pivot_columns(const RootedField& F, Vec m, std::size_t n) {
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < n; ++c) {
        std::size_t piv = rank;
        while (piv < n && m[piv * n + c] == 0) ++piv;
        if (piv == n) continue;
        for (std::size_t j = 0; j < n; ++j) std::swap(m[piv * n + j], m[rank * n + j]);
        const std::uint64_t inv = F.inv(m[rank * n + c]);
        for (std::size_t j = 0; j < n; ++j) m[rank * n + j] = F.mul(m[rank * n + j], inv);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == rank || m[r * n + c] == 0) continue;
            const std::uint64_t f = m[r * n + c];
            for (std::size_t j = 0; j < n; ++j) m[r * n + j] = F.sub(m[r * n + j], F.mul(f, m[rank * n + j]));
        }
        pivots.push_back(c);
        ++rank;
    }
    return pivots;
}

struct MeataxeResult {
    RawChain left, right;
    bool exact_split = false;
};

std::optional<MeataxeResult> meataxe_split(const RawChain& x, int N, bool raw, std::mt19937_64& rng, int tries) {
    const auto& ring = x.ring;
    const auto& F = ring->field;
    const std::size_t L = x.len(), n = x.size();
    const auto basis = chain_hom_basis(x, x, N, false, raw);
    MFKIT_TRACE("meataxe: size=%zu end_dim=%zu", n, basis.size());
    if (basis.size() <= 1) return std::nullopt;
    const ConstSpace s = const_space(F, basis, L, n, n);
    MFKIT_TRACE("meataxe: const_dim=%zu", s.dim());
    if (s.dim() <= 1) return std::nullopt;
    const ConstTupleOps ops{&F, L, n};
    std::uniform_int_distribution<std::uint64_t> dist(0, F.p - 1);

    for (int attempt = 0; attempt < tries; ++attempt) {
        Vec coeffs(s.dim());
        for (auto& c : coeffs) c = dist(rng);
        const Vec xbar = combine(F, s.rows, coeffs);
        if (ops.is_zero(xbar)) continue;
        const auto ebar_opt = idempotent_from_element(ops, xbar);
        if (!ebar_opt) {
            MFKIT_TRACE("meataxe attempt %d: no idempotent from element", attempt);
            continue;
        }
        const Vec& ebar = *ebar_opt;
        // equal slot ranks are forced for a genuine summand
        std::vector<std::vector<std::size_t>> piv_e(L), piv_c(L);
        bool ranks_ok = true;
        const Vec id = ops.identity();
        for (std::size_t i = 0; i < L; ++i) {
            Vec slot(ebar.begin() + i * n * n, ebar.begin() + (i + 1) * n * n);
            Vec cslot(n * n);
            for (std::size_t j = 0; j < n * n; ++j) cslot[j] = F.sub(id[i * n * n + j], slot[j]);
            piv_e[i] = const_pivot_columns(F, slot, n);
            piv_c[i] = const_pivot_columns(F, cslot, n);
            if (piv_e[i].size() != piv_e[0].size() || piv_e[i].size() + piv_c[i].size() != n) ranks_ok = false;
        }
        const std::size_t r = piv_e[0].size();
        MFKIT_TRACE("meataxe attempt %d: idempotent ranks_ok=%d r=%zu", attempt, int(ranks_ok), r);
        if (!ranks_ok || r == 0 || r == n) continue;

        // fast path: the constant idempotent may already be an exact morphism
        std::vector<PolyMatrix> e_tuple;
        for (std::size_t i = 0; i < L; ++i) {
            PolyMatrix m(ring, n, n);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    m.set(a, b, Poly::constant(ring, ebar[i * n * n + a * n + b]));
            e_tuple.push_back(std::move(m));
        }
        bool exact_const = is_exact_chain_morphism(x, x, e_tuple);
        MFKIT_TRACE("meataxe attempt %d: exact_const=%d", attempt, int(exact_const));
        if (!exact_const) {
            // lift through the hom space and Newton-iterate to an idempotent mod n^N
            // express ebar over the ConstSpace basis
            Vec w = ebar;
            Vec coords(s.dim(), 0);
            for (std::size_t k = 0; k < s.dim(); ++k) {
                // rows are in RREF: find the leading column of row k
                std::size_t lead = 0;
                while (lead < w.size() && s.rows[k][lead] == 0) ++lead;
                if (lead == w.size()) continue;
                const std::uint64_t c = w[lead];
                if (c == 0) continue;
                coords[k] = c;
                for (std::size_t j = 0; j < w.size(); ++j) w[j] = F.sub(w[j], F.mul(c, s.rows[k][j]));
            }
            if (!ops.is_zero(w)) continue;  // not in the constant space (unexpected)
            Vec combo(basis.size(), 0);
            for (std::size_t k = 0; k < s.dim(); ++k) {
                if (coords[k] == 0) continue;
                for (std::size_t j = 0; j < basis.size(); ++j)
                    combo[j] = F.add(combo[j], F.mul(coords[k], s.recipes[k][j]));
            }
            e_tuple = tuple_from_coeffs(F, basis, combo);
            // Newton: e <- 3e^2 - 2e^3, doubling idempotency precision
            bool converged = false;
            for (int it = 0; it < 12; ++it) {
                std::vector<PolyMatrix> e2(L, PolyMatrix(ring, n, n)), e3(L, PolyMatrix(ring, n, n));
                bool idem = true;
                for (std::size_t i = 0; i < L; ++i) {
                    e2[i] = (e_tuple[i] * e_tuple[i]).truncated(N);
                    if (e2[i] != e_tuple[i]) idem = false;
                }
                if (idem) {
                    converged = true;
                    break;
                }
                for (std::size_t i = 0; i < L; ++i) {
                    e3[i] = (e2[i] * e_tuple[i]).truncated(N);
                    e_tuple[i] = (e2[i].scaled(3 % F.p) - e3[i].scaled(2 % F.p)).truncated(N);
                }
            }
            if (!converged) {
                MFKIT_TRACE("meataxe attempt %d: newton failed", attempt);
                continue;
            }
        }

        // base change from image columns of e and 1-e
        std::vector<PolyMatrix> us, us_inv;
        bool built = true;
        for (std::size_t i = 0; i < L; ++i) {
            PolyMatrix comp = PolyMatrix::identity(ring, n) - e_tuple[i];
            PolyMatrix u(ring, n, n);
            for (std::size_t k = 0; k < r; ++k)
                for (std::size_t a = 0; a < n; ++a) u.set(a, k, e_tuple[i].at(a, piv_e[i][k]));
            for (std::size_t k = 0; k < n - r; ++k)
                for (std::size_t a = 0; a < n; ++a) u.set(a, r + k, comp.at(a, piv_c[i][k]));
            std::vector<std::uint64_t> scratch;
            if (!constant_matrix_inverse(F, u.constant_part(), n, scratch)) {
                built = false;
                break;
            }
            us.push_back(u);
            us_inv.push_back(exact_const ? *exact_polynomial_inverse(u) : u.inverse_mod(N));
        }
        if (!built) {
            MFKIT_TRACE("meataxe attempt %d: base-change constants singular", attempt);
            continue;
        }

        RawChain left{ring, {}}, right{ring, {}};
        bool clean = true;
        for (std::size_t i = 0; i < L; ++i) {
            PolyMatrix conj = us_inv[i] * x.mats[i] * us[(i + 1) % L];
            if (!exact_const) conj = conj.truncated(N);
            // off-diagonal blocks must vanish (exactly on the fast path)
            for (std::size_t a = 0; a < n && clean; ++a)
                for (std::size_t b = 0; b < n && clean; ++b) {
                    const bool in_left = a < r && b < r, in_right = a >= r && b >= r;
                    if (!in_left && !in_right && !conj.at(a, b).is_zero()) clean = false;
                }
            if (!clean) break;
            left.mats.push_back(conj.submatrix(0, 0, r, r));
            right.mats.push_back(conj.submatrix(r, r, n - r, n - r));
        }
        if (!clean) {
            MFKIT_TRACE("meataxe attempt %d: off-diagonal blocks did not vanish", attempt);
            continue;
        }
        MFKIT_TRACE("meataxe attempt %d: split %zu = %zu + %zu (exact=%d)", attempt, n, r, n - r,
                    int(exact_const));
        return MeataxeResult{std::move(left), std::move(right), exact_const};
    }
    return std::nullopt;
}

void split_recursive(const RawChain& x, int N, bool raw, std::mt19937_64& rng, int tries,
                     std::vector<RawChain>& leaves, int depth) {
    if (depth > 16) {
        leaves.push_back(x);
        return;
    }
    const auto comps = support_components(x);
    if (comps.size() >= 2) {
        for (const auto& idx : comps) split_recursive(restrict_chain(x, idx), N, raw, rng, tries, leaves, depth + 1);
        return;
    }
    if (x.size() == 1) {
        leaves.push_back(x);
        return;
    }
    auto split = meataxe_split(x, N, raw, rng, tries);
    if (split) {
        const bool child_raw = raw || !split->exact_split;
        split_recursive(split->left, N, child_raw, rng, tries, leaves, depth + 1);
        split_recursive(split->right, N, child_raw, rng, tries, leaves, depth + 1);
        return;
    }
    leaves.push_back(x);
}

// ---------------------------------------------------------------------------
// Krull-Schmidt decision layer for the plain truncated category: objects are
// chains modulo n^N, morphisms are tuples modulo n^N. End algebras are finite
// dimensional and idempotents split by pivot-column base changes, so the
// category is Krull-Schmidt; once every leaf has a certified-local End
// algebra, Azumaya matching decides isomorphism in both directions.

// locality of the truncated End algebra, decided on the constant-part
// algebra: an idempotent reduces to a constant idempotent and vice versa
std::optional<bool> end_algebra_local(const RawChain& leaf, int N, std::uint64_t element_cap) {
    const auto& F = leaf.ring->field;
    const auto basis = chain_hom_basis(leaf, leaf, N, false, true);
    const ConstSpace s = const_space(F, basis, leaf.len(), leaf.size(), leaf.size());
    if (s.dim() <= 1) return true;  // scalars only
    std::uint64_t count = 1;
    for (std::size_t k = 0; k < s.dim(); ++k) {
        count *= F.p;
        if (count > element_cap) return std::nullopt;
    }
    const ConstTupleOps ops{&F, leaf.len(), leaf.size()};
    const Vec id = ops.identity();
    Vec coeffs(s.dim(), 0);
    for (;;) {
        std::size_t j = 0;
        while (j < s.dim() && ++coeffs[j] == F.p) coeffs[j++] = 0;
        if (j == s.dim()) break;
        const Vec e = combine(F, s.rows, coeffs);
        if (ops.is_zero(e) || e == id) continue;
        if (ops.mul(e, e) == e) return false;  // nontrivial idempotent
    }
    return true;
}

// mod-N isomorphism decision between two leaves (plain category)
std::optional<bool> leaf_iso(const RawChain& a, const RawChain& b, int N, std::mt19937_64& rng, int random_tries,
                             std::uint64_t scan_cap) {
    if (a.size() != b.size()) return false;
    const auto& F = a.ring->field;
    const auto basis = chain_hom_basis(a, b, N, false, true);
    if (basis.empty()) return false;
    const ConstSpace s = const_space(F, basis, a.len(), b.size(), a.size());
    Vec coeffs;
    switch (search_invertible(s, rng, random_tries, scan_cap, coeffs)) {
        case SearchOutcome::Found: return true;
        case SearchOutcome::Absent: return false;
        case SearchOutcome::OutOfBudget: return std::nullopt;
    }
    return std::nullopt;
}

// full decision: split both sides, certify leaf locality, match multisets
std::optional<bool> krs_iso_decision(const RawChain& x, const RawChain& y, int N, std::mt19937_64& rng, int tries,
                                     std::uint64_t scan_cap) {
    std::vector<RawChain> lx, ly;
    split_recursive(x, N, true, rng, tries, lx, 0);
    split_recursive(y, N, true, rng, tries, ly, 0);
    for (const auto& leaf : lx) {
        const auto local = end_algebra_local(leaf, N, 2'000'000);
        if (!local || !*local) return std::nullopt;
    }
    for (const auto& leaf : ly) {
        const auto local = end_algebra_local(leaf, N, 2'000'000);
        if (!local || !*local) return std::nullopt;
    }
    if (lx.size() != ly.size()) return false;
    // bipartite matching over the leaf iso relation
    const std::size_t n = lx.size();
    std::vector<std::vector<int>> iso(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto v = leaf_iso(lx[i], ly[j], N, rng, 32, scan_cap);
            if (!v) return std::nullopt;
            iso[i][j] = *v ? 1 : 0;
        }
    std::vector<int> match(n, -1);
    std::vector<char> used(n, 0);
    auto augment = [&](auto&& rec, std::size_t i) -> bool {
        for (std::size_t j = 0; j < n; ++j) {
            if (!iso[i][j] || used[j]) continue;
            used[j] = 1;
            if (match[j] < 0 || rec(rec, static_cast<std::size_t>(match[j]))) {
                match[j] = static_cast<int>(i);
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(used.begin(), used.end(), 0);
        if (!augment(augment, i)) return false;
    }
    return true;
}

// snap a raw (mod-n^N) chain to an exactly valid one; validity is checked by
// the supplied predicate
template <typename Valid>
std::optional<RawChain> snap_chain(const RawChain& x, int N, Valid&& valid) {
    if (valid(x)) return x;
    MFKIT_TRACE("snap: size-%zu leaf not exact as-is", x.size());
    if (x.size() == 1) {
        // lowest-degree terms: for a genuine split these multiply exactly
        RawChain low{x.ring, {}};
        for (const auto& m : x.mats) {
            const Poly& p = m.at(0, 0);
            PolyMatrix out(x.ring, 1, 1);
            if (!p.is_zero()) {
                const Term& t = p.terms().back();
                out.set(0, 0, Poly::monomial(x.ring, t.exps, t.coeff));
            }
            low.mats.push_back(std::move(out));
        }
        if (valid(low)) return low;
        MFKIT_TRACE("snap: lowest-term snap failed");
    }
    for (int t = N - 1; t >= 1; --t) {
        RawChain cut{x.ring, {}};
        for (const auto& m : x.mats) cut.mats.push_back(m.truncated(t));
        if (valid(cut)) return cut;
    }
    return std::nullopt;
}

// exact invertible base change blockdiag(summands) -> X of entry degree <= D
std::optional<std::vector<PolyMatrix>> exact_base_change(const RawChain& target, const RawChain& x, int D,
                                                         std::mt19937_64& rng, int random_tries,
                                                         std::uint64_t scan_cap) {
    const auto& F = x.ring->field;
    for (int t = 0; t <= D; ++t) {
        const auto basis = chain_hom_basis(target, x, t, true);
        MFKIT_TRACE("base-change: degree %d exact hom dim %zu", t, basis.size());
        if (basis.empty()) continue;
        const ConstSpace s = const_space(F, basis, x.len(), x.size(), target.size());
        Vec coeffs;
        const SearchOutcome sout = search_invertible(s, rng, random_tries, scan_cap, coeffs);
        MFKIT_TRACE("base-change: degree %d const dim %zu outcome %d", t, s.dim(), int(sout));
        if (sout != SearchOutcome::Found) continue;
        Vec combo(basis.size(), 0);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k] == 0) continue;
            for (std::size_t j = 0; j < basis.size(); ++j)
                combo[j] = F.add(combo[j], F.mul(coeffs[k], s.recipes[k][j]));
        }
        std::vector<PolyMatrix> v = tuple_from_coeffs(F, basis, combo);
        if (!is_exact_chain_morphism(target, x, v)) continue;
        return v;
    }
    return std::nullopt;
}

}  // namespace

DecompositionResult decompose(const MatrixFactorization& x, int N, int D, DecomposeOptions opt) {
    if (N < 2) throw Error("decompose needs N >= 2");
    if (D < 0) throw Error("decompose needs D >= 0");
    DecompositionResult res;
    res.N = N;
    res.D = D;
    std::mt19937_64 rng(opt.seed);
    const RawChain cx = chain_of(x);
    std::vector<RawChain> leaves;
    split_recursive(cx, N, false, rng, opt.random_elements, leaves, 0);

    auto valid_mf = [&](const RawChain& c) {
        PolyMatrix prod = c.mats[0];
        for (std::size_t k = 1; k < c.mats.size(); ++k) prod = prod * c.mats[k];
        return prod == PolyMatrix::identity(c.ring, c.size()).scaled_by(x.f());
    };

    if (leaves.size() == 1) {
        res.summands = {x};
        res.base_change.assign(x.arity(), PolyMatrix::identity(x.ring(), x.size()));
        res.status = x.size() == 1 ? SplitStatus::CertifiedSplit : SplitStatus::NoSplitFoundAtLevel;
        return res;
    }

    std::vector<MatrixFactorization> summands;
    RawChain target{x.ring(), {}};
    bool first = true;
    for (const auto& leaf : leaves) {
        auto snapped = snap_chain(leaf, N, valid_mf);
        if (!snapped) {
            res.summands = {x};
            res.base_change.assign(x.arity(), PolyMatrix::identity(x.ring(), x.size()));
            res.status = SplitStatus::NoSplitFoundAtLevel;
            return res;
        }
        summands.push_back(MatrixFactorization::make(x.f(), snapped->mats));
        if (first) {
            target.mats = snapped->mats;
            first = false;
        } else {
            for (std::size_t i = 0; i < target.mats.size(); ++i)
                target.mats[i] = PolyMatrix::block_diag(target.mats[i], snapped->mats[i]);
        }
    }
    auto v = exact_base_change(target, cx, D, rng, 64, 4'000'000);
    if (!v) {
        res.summands = {x};
        res.base_change.assign(x.arity(), PolyMatrix::identity(x.ring(), x.size()));
        res.status = SplitStatus::NoSplitFoundAtLevel;
        return res;
    }
    res.summands = std::move(summands);
    res.base_change = std::move(*v);
    res.status = SplitStatus::CertifiedSplit;
    return res;
}

ModuleDecompositionResult decompose_module(const CoverModule& n, int N, int D, DecomposeOptions opt) {
    if (N < 2) throw Error("decompose needs N >= 2");
    ModuleDecompositionResult res;
    res.N = N;
    res.D = D;
    std::mt19937_64 rng(opt.seed);
    const RawChain cn = chain_of(n);
    std::vector<RawChain> leaves;
    split_recursive(cn, N, false, rng, opt.random_elements, leaves, 0);

    const std::uint32_t d = n.arity();
    auto valid_mod = [&](const RawChain& c) {
        return c.mats[0].power(d) == PolyMatrix::identity(c.ring, c.size()).scaled_by(-n.f());
    };

    if (leaves.size() == 1) {
        res.summands = {n};
        res.base_change = {PolyMatrix::identity(n.ring(), n.rank_S())};
        res.status = n.rank_S() == 1 ? SplitStatus::CertifiedSplit : SplitStatus::NoSplitFoundAtLevel;
        return res;
    }

    std::vector<CoverModule> summands;
    RawChain target{n.ring(), {}};
    bool first = true;
    for (const auto& leaf : leaves) {
        auto snapped = snap_chain(leaf, N, valid_mod);
        if (!snapped) {
            res.summands = {n};
            res.base_change = {PolyMatrix::identity(n.ring(), n.rank_S())};
            res.status = SplitStatus::NoSplitFoundAtLevel;
            return res;
        }
        summands.push_back(CoverModule::make(n.f(), snapped->mats[0]));
        if (first) {
            target.mats = snapped->mats;
            first = false;
        } else {
            target.mats[0] = PolyMatrix::block_diag(target.mats[0], snapped->mats[0]);
        }
    }
    auto v = exact_base_change(target, cn, D, rng, 64, 4'000'000);
    if (!v) {
        res.summands = {n};
        res.base_change = {PolyMatrix::identity(n.ring(), n.rank_S())};
        res.status = SplitStatus::NoSplitFoundAtLevel;
        return res;
    }
    res.summands = std::move(summands);
    res.base_change = std::move(*v);
    res.status = SplitStatus::CertifiedSplit;
    return res;
}

// ---------------------------------------------------------------------------
// periodic normal forms

namespace {

// dense power series over F_p modulo x^M
Vec series_mul(const RootedField& F, const Vec& a, const Vec& b, std::size_t M) {
    Vec out(M, 0);
    for (std::size_t i = 0; i < a.size() && i < M; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j + i < M && j < b.size(); ++j) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
    }
    return out;
}

Vec series_inverse(const RootedField& F, const Vec& a, std::size_t M) {
    if (a.empty() || a[0] == 0) throw Error("series inverse needs a unit constant term");
    Vec x{F.inv(a[0])};
    for (std::size_t prec = 1; prec < M; prec *= 2) {
        const std::size_t next = std::min(prec * 2, M);
        Vec ax = series_mul(F, a, x, next);
        Vec two_minus(next, 0);
        two_minus[0] = F.add(2 % F.p, 0);
        for (std::size_t j = 0; j < next; ++j) two_minus[j] = F.sub(j == 0 ? two_minus[0] : 0, ax[j]);
        x = series_mul(F, x, two_minus, next);
    }
    x.resize(M, 0);
    return x;
}

// coefficients of (1+x)^(-1/r) with constant term 1, via Hensel lifting of
// the r-th root (valid for any p not dividing r)
Vec inv_root_series(const RootedField& F, std::uint32_t r, std::size_t M) {
    Vec one_plus{1, 1};
    const Vec target = series_inverse(F, one_plus, M);  // (1+x)^{-1}
    Vec g{1};
    for (std::size_t prec = 1; prec < M; prec *= 2) {
        const std::size_t next = std::min(prec * 2, M);
        // g <- g - (g^r - target) / (r g^(r-1))
        Vec gpow{1};
        for (std::uint32_t k = 0; k + 1 < r; ++k) gpow = series_mul(F, gpow, g, next);  // g^(r-1)
        Vec gr = series_mul(F, gpow, g, next);
        Vec num(next, 0);
        for (std::size_t j = 0; j < next; ++j)
            num[j] = F.sub(j < gr.size() ? gr[j] : 0, j < target.size() ? target[j] : 0);
        Vec den(next, 0);
        for (std::size_t j = 0; j < next && j < gpow.size(); ++j) den[j] = F.mul(r % F.p, gpow[j]);
        Vec corr = series_mul(F, num, series_inverse(F, den, next), next);
        g.resize(next, 0);
        for (std::size_t j = 0; j < next; ++j) g[j] = F.sub(g[j], corr[j]);
    }
    g.resize(M, 0);
    return g;
}

bool constant_nilpotent(const RootedField& F, std::vector<std::uint64_t> m, std::size_t n) {
    // m^n == 0 decides nilpotency for an n x n matrix
    std::vector<std::uint64_t> acc = m;
    for (std::size_t step = 1; step < n; ++step) {
        std::vector<std::uint64_t> nxt(n * n, 0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < n; ++k) {
                if (acc[r * n + k] == 0) continue;
                for (std::size_t c = 0; c < n; ++c)
                    nxt[r * n + c] = F.add(nxt[r * n + c], F.mul(acc[r * n + k], m[k * n + c]));
            }
        acc = std::move(nxt);
    }
    return std::all_of(acc.begin(), acc.end(), [](std::uint64_t v) { return v == 0; });
}

}  // namespace

PeriodicNormalForm periodic_normal_form(const MatrixFactorization& x, std::uint32_t k,
                                        const std::vector<PolyMatrix>& alpha, int N) {
    const std::uint32_t d = x.arity();
    const auto& ring = x.ring();
    const auto& F = ring->field;
    const std::size_t n = x.size();
    if (k == 0 || d % k != 0) throw Error("k must be a positive divisor of d");
    if (alpha.size() != d) throw NotMorphismError("alpha must be a d-tuple");
    for (std::size_t i = 0; i < d; ++i)
        if (alpha[i] * x.factor(i) != x.factor((i + k) % d) * alpha[(i + 1) % d])
            throw NotMorphismError("alpha is not a morphism X -> T^k X (fails at slot " + std::to_string(i + 1) +
                                   ")");
    PeriodicNormalForm out;
    if (k == d) {
        out.factors = x.factors();
        out.certificate.assign(d, PolyMatrix::identity(ring, n));
        out.cert_level = N;
        return out;
    }
    const std::uint32_t r = d / k;
    // alpha-tilde_i = alpha_{i+(r-1)k} ... alpha_{i+k} alpha_i
    auto compose_tilde = [&](const std::vector<PolyMatrix>& a) {
        std::vector<PolyMatrix> tilde;
        for (std::uint32_t i = 0; i < d; ++i) {
            PolyMatrix acc = a[i];
            for (std::uint32_t s = 1; s < r; ++s) acc = a[(i + s * k) % d] * acc;
            tilde.push_back(std::move(acc));
        }
        return tilde;
    };
    std::vector<PolyMatrix> tilde = compose_tilde(alpha);
    // scalar c: the eigenvalue whose removal leaves nilpotent constant parts
    std::optional<std::uint64_t> c;
    for (std::uint64_t cand = 0; cand < F.p && !c; ++cand) {
        bool ok = true;
        for (std::uint32_t i = 0; i < d && ok; ++i) {
            std::vector<std::uint64_t> m = tilde[i].constant_part();
            for (std::size_t j = 0; j < n; ++j) m[j * n + j] = F.sub(m[j * n + j], cand);
            if (!constant_nilpotent(F, std::move(m), n)) ok = false;
        }
        if (ok) c = cand;
    }
    if (!c) throw NoScalarPartError("no eigenvalue in F_p makes alpha-tilde - c nilpotent");
    if (*c == 0) throw NoScalarPartError("scalar part of alpha-tilde is zero: alpha is not an isomorphism");
    // scale alpha by c^{-1/r}
    std::optional<std::uint64_t> root;
    const std::uint64_t cinv = F.inv(*c);
    for (std::uint64_t t = 1; t < F.p && !root; ++t)
        if (F.pow(t, r) == cinv) root = t;
    if (!root)
        throw RootMissingError("c has no r-th root in F_p (c^((p-1)/r) = " +
                               std::to_string(F.pow(*c, (F.p - 1) / r)) + " != 1)");
    std::vector<PolyMatrix> beta_src;
    beta_src.reserve(d);
    for (const auto& a : alpha) beta_src.push_back(a.scaled(*root));
    tilde = compose_tilde(beta_src);
    // rho_i = alpha-tilde_i - I, radical part; g(rho) with g = (1+x)^{-1/r}
    const std::size_t series_len = static_cast<std::size_t>(N) * (n + 1) + 4;
    const Vec g = inv_root_series(F, r, series_len);
    std::vector<PolyMatrix> beta;
    beta.reserve(d);
    for (std::uint32_t i = 0; i < d; ++i) {
        PolyMatrix rho = tilde[i] - PolyMatrix::identity(ring, n);
        PolyMatrix acc = PolyMatrix::identity(ring, n);  // g_0 = 1
        PolyMatrix pw = PolyMatrix::identity(ring, n);
        for (std::size_t m = 1; m < series_len; ++m) {
            pw = (pw * rho).truncated(N);
            if (pw.is_zero()) break;
            if (g[m] != 0) acc = acc + pw.scaled(g[m]);
        }
        beta.push_back((beta_src[i] * acc).truncated(N));
    }
    // candidate factors (beta_1 phi_1, phi_2, ..., phi_k), exactified by a
    // truncation scan on the first factor
    std::vector<PolyMatrix> factors;
    factors.push_back(beta[0] * x.factor(0));
    for (std::uint32_t t = 1; t < k; ++t) factors.push_back(x.factor(t));
    auto power_ok = [&](const std::vector<PolyMatrix>& fs) {
        PolyMatrix prod = fs[0];
        for (std::uint32_t t = 1; t < k; ++t) prod = prod * fs[t];
        return prod.power(r) == PolyMatrix::identity(ring, n).scaled_by(x.f());
    };
    bool exact = power_ok(factors);
    if (!exact) {
        for (int t = N; t >= 1 && !exact; --t) {
            std::vector<PolyMatrix> cut = factors;
            cut[0] = cut[0].truncated(t);
            if (power_ok(cut)) {
                factors = std::move(cut);
                exact = true;
            }
        }
    }
    if (!exact) throw Error("no exact periodic factor tuple within the truncation level; raise N");
    // gamma certificate: compositions of beta along the k-strides
    std::vector<PolyMatrix> gamma(d, PolyMatrix::identity(ring, n));
    for (std::uint32_t i0 = 0; i0 < d; ++i0) {
        const std::uint32_t i1 = i0 + 1;
        const std::uint32_t t = ((i1 + 2 * k - 2) % k) + 2;  // in [2, k+1]
        const long long jnum = static_cast<long long>(i1) - static_cast<long long>(t);
        const std::uint32_t j = static_cast<std::uint32_t>(((jnum / static_cast<long long>(k)) % r + r) % r);
        PolyMatrix acc = PolyMatrix::identity(ring, n);
        bool first = true;
        for (std::uint32_t s = r - 1;; --s) {
            const std::uint32_t idx = (t - 1 + s * k) % d;  // 0-based index of beta_{t+sk}
            if (first) {
                acc = beta[idx];
                first = false;
            } else {
                acc = (acc * beta[idx]).truncated(N);
            }
            if (s == j) break;
        }
        gamma[i0] = acc;
    }
    // measure the congruence level of the certificate against the k-periodic tuple
    int level = N;
    for (std::uint32_t i = 0; i < d; ++i) {
        const PolyMatrix lhs = gamma[i] * x.factor(i);
        const PolyMatrix rhs = factors[i % k] * gamma[(i + 1) % d];
        const PolyMatrix diff = lhs - rhs;
        if (diff.is_zero()) continue;
        const int o = diff.min_entry_ord();
        level = std::min(level, o < 0 ? N : o);
    }
    if (level < 1) throw Error("periodic certificate failed even modulo the maximal ideal");
    out.factors = std::move(factors);
    out.certificate = std::move(gamma);
    out.cert_level = level;
    return out;
}

PolyMatrix symmetric_form(const MatrixFactorization& x, const std::vector<PolyMatrix>& alpha, int N) {
    PeriodicNormalForm pnf = periodic_normal_form(x, 1, alpha, N);
    return pnf.factors[0];
}

}  // namespace mfkit
