#include "mfkit/polymatrix.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace mfkit {

PolyMatrix::PolyMatrix(RingPtr ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), entries_(rows * cols, Poly::zero(ring_)) {}

PolyMatrix PolyMatrix::identity(RingPtr ring, std::size_t n) { return scalar(std::move(ring), n, 1); }

PolyMatrix PolyMatrix::scalar(RingPtr ring, std::size_t n, std::uint64_t c) {
    PolyMatrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, Poly::constant(ring, c));
    return m;
}

PolyMatrix PolyMatrix::zeros(RingPtr ring, std::size_t rows, std::size_t cols) {
    return PolyMatrix(std::move(ring), rows, cols);
}

PolyMatrix PolyMatrix::from_rows(RingPtr ring, std::vector<std::vector<Poly>> rows) {
    if (rows.empty()) throw ShapeMismatchError("matrix needs at least one row");
    const std::size_t nc = rows[0].size();
    PolyMatrix m(std::move(ring), rows.size(), nc);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != nc) throw ShapeMismatchError("ragged matrix rows");
        for (std::size_t c = 0; c < nc; ++c) m.set(r, c, std::move(rows[r][c]));
    }
    return m;
}

PolyMatrix PolyMatrix::parse(RingPtr ring, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<Poly>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<Poly> r;
        r.reserve(row.size());
        for (const auto& s : row) r.push_back(Poly::parse(ring, s));
        out.push_back(std::move(r));
    }
    return from_rows(std::move(ring), std::move(out));
}

PolyMatrix PolyMatrix::block_diag(const PolyMatrix& a, const PolyMatrix& b) {
    a.check_same_ring(b);
    PolyMatrix m(a.ring_, a.rows_ + b.rows_, a.cols_ + b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
        for (std::size_t c = 0; c < a.cols_; ++c) m.set(r, c, a.at(r, c));
    for (std::size_t r = 0; r < b.rows_; ++r)
        for (std::size_t c = 0; c < b.cols_; ++c) m.set(a.rows_ + r, a.cols_ + c, b.at(r, c));
    return m;
}

const Poly& PolyMatrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw ShapeMismatchError("matrix index out of range");
    return entries_[r * cols_ + c];
}

void PolyMatrix::set(std::size_t r, std::size_t c, Poly v) {
    if (r >= rows_ || c >= cols_) throw ShapeMismatchError("matrix index out of range");
    entries_[r * cols_ + c] = std::move(v);
}

void PolyMatrix::check_same_ring(const PolyMatrix& o) const {
    if (!ring_ || !o.ring_) throw ShapeMismatchError("operation on uninitialized matrix");
    if (ring_ != o.ring_ && !(*ring_ == *o.ring_)) throw VariableMismatchError("matrices live in different rings");
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
    check_same_ring(o);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatchError("matrix addition shape mismatch");
    PolyMatrix m(ring_, rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i) m.entries_[i] = entries_[i] + o.entries_[i];
    return m;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& o) const { return *this + (-o); }

PolyMatrix PolyMatrix::operator-() const {
    PolyMatrix m = *this;
    for (auto& e : m.entries_) e = -e;
    return m;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
    check_same_ring(o);
    if (cols_ != o.rows_) throw ShapeMismatchError("matrix product shape mismatch");
    PolyMatrix m(ring_, rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Poly& a = entries_[r * cols_ + k];
            if (a.is_zero()) continue;
            for (std::size_t c = 0; c < o.cols_; ++c) {
                const Poly& b = o.entries_[k * o.cols_ + c];
                if (b.is_zero()) continue;
                m.entries_[r * o.cols_ + c] = m.entries_[r * o.cols_ + c] + a * b;
            }
        }
    }
    return m;
}

PolyMatrix PolyMatrix::scaled(std::uint64_t c) const {
    PolyMatrix m = *this;
    for (auto& e : m.entries_) e = e.scaled(c);
    return m;
}

PolyMatrix PolyMatrix::scaled_by(const Poly& p) const {
    PolyMatrix m = *this;
    for (auto& e : m.entries_) e = e * p;
    return m;
}

PolyMatrix PolyMatrix::truncated(int degree_bound) const {
    PolyMatrix m = *this;
    for (auto& e : m.entries_) e = e.truncated(degree_bound);
    return m;
}

PolyMatrix PolyMatrix::transposed() const {
    PolyMatrix m(ring_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m.set(c, r, at(r, c));
    return m;
}

PolyMatrix PolyMatrix::power(std::uint32_t e) const {
    if (!is_square()) throw ShapeMismatchError("powers need a square matrix");
    PolyMatrix acc = identity(ring_, rows_);
    for (std::uint32_t i = 0; i < e; ++i) acc = acc * *this;
    return acc;
}

PolyMatrix PolyMatrix::submatrix(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
    if (r0 + nrows > rows_ || c0 + ncols > cols_) throw ShapeMismatchError("submatrix out of range");
    PolyMatrix m(ring_, nrows, ncols);
    for (std::size_t r = 0; r < nrows; ++r)
        for (std::size_t c = 0; c < ncols; ++c) m.set(r, c, at(r0 + r, c0 + c));
    return m;
}

bool PolyMatrix::operator==(const PolyMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    check_same_ring(o);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (!(entries_[i] == o.entries_[i])) return false;
    return true;
}

bool PolyMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Poly& p) { return p.is_zero(); });
}

bool PolyMatrix::is_identity() const {
    if (!is_square()) return false;
    return *this == identity(ring_, rows_);
}

bool PolyMatrix::is_reduced() const {
    for (const auto& e : entries_) {
        const auto o = e.ord();
        if (o && *o == 0) return false;
    }
    return true;
}

std::vector<std::uint64_t> PolyMatrix::constant_part() const {
    std::vector<std::uint64_t> m(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) m[i] = entries_[i].constant_term();
    return m;
}

std::size_t PolyMatrix::constant_rank() const {
    return constant_matrix_rank(ring_->field, constant_part(), rows_, cols_);
}

int PolyMatrix::max_entry_degree() const {
    int d = -1;
    for (const auto& e : entries_) d = std::max(d, e.total_degree());
    return d;
}

int PolyMatrix::min_entry_ord() const {
    int m = -1;
    for (const auto& e : entries_) {
        const auto o = e.ord();
        if (!o) continue;
        if (m < 0 || *o < m) m = *o;
    }
    return m;
}

Poly PolyMatrix::det() const {
    if (!is_square()) throw ShapeMismatchError("determinant of a non-square matrix");
    const std::size_t n = rows_;
    if (n > kDetSizeCap) throw ShapeMismatchError("determinant size cap exceeded (n <= 12)");
    if (n == 0) return Poly::constant(ring_, 1);
    // minors indexed by the column subset, expanded along successive rows
    std::unordered_map<std::uint32_t, Poly> memo;
    memo.reserve(1u << n);
    auto self = [&](auto&& rec, std::uint32_t colmask, std::size_t row) -> Poly {
        if (colmask == 0) return Poly::constant(ring_, 1);
        auto it = memo.find(colmask);
        if (it != memo.end()) return it->second;
        Poly acc = Poly::zero(ring_);
        std::size_t idx = 0;
        const auto& F = ring_->field;
        for (std::size_t c = 0; c < n; ++c) {
            if (!(colmask & (1u << c))) continue;
            const Poly& e = at(row, c);
            if (!e.is_zero()) {
                Poly minor = rec(rec, colmask & ~(1u << c), row + 1);
                Poly term = e * minor;
                if (idx % 2 == 1) term = term.scaled(F.p - 1);
                acc = acc + term;
            }
            ++idx;
        }
        memo.emplace(colmask, acc);
        return acc;
    };
    return self(self, (n == 32 ? ~0u : ((1u << n) - 1)), 0);
}

PolyMatrix PolyMatrix::inverse_mod(int degree_bound) const {
    if (!is_square()) throw ShapeMismatchError("inverse of a non-square matrix");
    const auto& F = ring_->field;
    std::vector<std::uint64_t> c0inv;
    if (!constant_matrix_inverse(F, constant_part(), rows_, c0inv))
        throw Error("matrix has a singular constant part; no inverse over the local ring");
    PolyMatrix x(ring_, rows_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < rows_; ++c) x.set(r, c, Poly::constant(ring_, c0inv[r * rows_ + c]));
    const PolyMatrix id = identity(ring_, rows_);
    // Newton iteration doubles the valid precision each step
    for (int prec = 1; prec < degree_bound; prec *= 2) {
        const int next = std::min(prec * 2, degree_bound);
        PolyMatrix r = (id - (*this * x).truncated(next)).truncated(next);
        x = (x + (x * r).truncated(next)).truncated(next);
    }
    return x.truncated(degree_bound);
}

std::string PolyMatrix::str() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_; ++r) {
        os << "[ ";
        for (std::size_t c = 0; c < cols_; ++c) {
            if (c) os << ", ";
            os << at(r, c).str();
        }
        os << " ]\n";
    }
    return os.str();
}

std::size_t constant_matrix_rank(const RootedField& F, std::vector<std::uint64_t> m, std::size_t rows,
                                 std::size_t cols) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv * cols + c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap_ranges(m.begin() + piv * cols, m.begin() + (piv + 1) * cols, m.begin() + rank * cols);
        const std::uint64_t inv = F.inv(m[rank * cols + c]);
        for (std::size_t j = c; j < cols; ++j) m[rank * cols + j] = F.mul(m[rank * cols + j], inv);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank) continue;
            const std::uint64_t f = m[r * cols + c];
            if (f == 0) continue;
            for (std::size_t j = c; j < cols; ++j)
                m[r * cols + j] = F.sub(m[r * cols + j], F.mul(f, m[rank * cols + j]));
        }
        ++rank;
    }
    return rank;
}

bool constant_matrix_inverse(const RootedField& F, const std::vector<std::uint64_t>& m, std::size_t n,
                             std::vector<std::uint64_t>& out) {
    std::vector<std::uint64_t> a(m);
    out.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) out[i * n + i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv * n + c] == 0) ++piv;
        if (piv == n) return false;
        if (piv != c) {
            std::swap_ranges(a.begin() + piv * n, a.begin() + (piv + 1) * n, a.begin() + c * n);
            std::swap_ranges(out.begin() + piv * n, out.begin() + (piv + 1) * n, out.begin() + c * n);
        }
        const std::uint64_t inv = F.inv(a[c * n + c]);
        for (std::size_t j = 0; j < n; ++j) {
            a[c * n + j] = F.mul(a[c * n + j], inv);
            out[c * n + j] = F.mul(out[c * n + j], inv);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const std::uint64_t f = a[r * n + c];
            if (f == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r * n + j] = F.sub(a[r * n + j], F.mul(f, a[c * n + j]));
                out[r * n + j] = F.sub(out[r * n + j], F.mul(f, out[c * n + j]));
            }
        }
    }
    return true;
}

}  // namespace mfkit
