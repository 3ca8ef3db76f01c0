#pragma once

#include <cstddef>
#include <vector>

#include "mfkit/poly.hpp"

namespace mfkit {

struct ShapeMismatchError : Error {
    using Error::Error;
};

// Dense matrix of exact polynomials. Matrix factorizations only use square
// matrices; rectangular shapes appear in hom-space and eigenspace plumbing.
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(RingPtr ring, std::size_t rows, std::size_t cols);

    static PolyMatrix identity(RingPtr ring, std::size_t n);
    static PolyMatrix zeros(RingPtr ring, std::size_t rows, std::size_t cols);
    static PolyMatrix from_rows(RingPtr ring, std::vector<std::vector<Poly>> rows);
    // entries parsed from strings, row-major
    static PolyMatrix parse(RingPtr ring, const std::vector<std::vector<std::string>>& rows);
    static PolyMatrix block_diag(const PolyMatrix& a, const PolyMatrix& b);
    static PolyMatrix scalar(RingPtr ring, std::size_t n, std::uint64_t c);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    const RingPtr& ring() const { return ring_; }

    const Poly& at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, Poly v);

    PolyMatrix operator+(const PolyMatrix& o) const;
    PolyMatrix operator-(const PolyMatrix& o) const;
    PolyMatrix operator*(const PolyMatrix& o) const;
    PolyMatrix operator-() const;
    PolyMatrix scaled(std::uint64_t c) const;
    PolyMatrix scaled_by(const Poly& p) const;
    PolyMatrix truncated(int degree_bound) const;
    PolyMatrix transposed() const;
    PolyMatrix power(std::uint32_t e) const;
    PolyMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;

    bool operator==(const PolyMatrix& o) const;
    bool operator!=(const PolyMatrix& o) const { return !(*this == o); }
    bool is_zero() const;
    bool is_identity() const;

    // every entry has ord >= 1 (no unit constant terms)
    bool is_reduced() const;
    // constant-term matrix, row-major, over F_p
    std::vector<std::uint64_t> constant_part() const;
    // rank over F_p of the constant-term matrix
    std::size_t constant_rank() const;
    int max_entry_degree() const;  // -1 for the zero matrix
    int min_entry_ord() const;     // minimum ord over nonzero entries; -1 if all zero

    // exact determinant by fraction-free cofactor expansion, memoized over
    // column subsets; corpus matrices stay small so n is capped
    Poly det() const;
    static constexpr std::size_t kDetSizeCap = 12;

    // inverse modulo n^degree_bound for a matrix with invertible constant part
    PolyMatrix inverse_mod(int degree_bound) const;

    std::string str() const;

private:
    RingPtr ring_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Poly> entries_;

    void check_same_ring(const PolyMatrix& o) const;
};

// rank over F_p of a dense constant matrix (row-major)
std::size_t constant_matrix_rank(const RootedField& F, std::vector<std::uint64_t> m, std::size_t rows,
                                 std::size_t cols);

// solve the constant system by Gauss-Jordan; returns true iff invertible,
// writing the inverse into `out` (row-major)
bool constant_matrix_inverse(const RootedField& F, const std::vector<std::uint64_t>& m, std::size_t n,
                             std::vector<std::uint64_t>& out);

}  // namespace mfkit
