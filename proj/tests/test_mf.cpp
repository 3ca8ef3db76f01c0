#include <doctest.h>

#include "mfkit/corpus.hpp"
#include "mfkit/mf.hpp"

using namespace mfkit;

namespace {

RingPtr e6_ring() { return make_ring(make_field(3), {"y"}); }

MatrixFactorization triple(const RingPtr& ring, const std::string& a, const std::string& b, const std::string& c,
                           const std::string& f) {
    return MatrixFactorization::make(
        Poly::parse(ring, f),
        {PolyMatrix::parse(ring, {{a}}), PolyMatrix::parse(ring, {{b}}), PolyMatrix::parse(ring, {{c}})});
}

}  // namespace

TEST_CASE("make_mf validates the product") {
    RingPtr ring = e6_ring();
    CHECK_NOTHROW(triple(ring, "y^3", "y", "1", "y^4"));
    CHECK_NOTHROW(triple(ring, "y^4", "1", "1", "y^4"));
    CHECK_THROWS_AS(triple(ring, "y^2", "y", "1", "y^4"), ProductMismatchError);
    CHECK_THROWS_AS(MatrixFactorization::make(Poly::parse(ring, "y^4"),
                                              {PolyMatrix::parse(ring, {{"y^3"}}),
                                               PolyMatrix::parse(ring, {{"y", "0"}, {"0", "y"}})}),
                    ShapeMismatchError);
}

TEST_CASE("all cyclic rotations of corpus entries multiply to f*I") {
    const E6Corpus e = e6_d3();
    for (const auto& [name, x] : e.list()) {
        for (std::uint32_t k = 0; k < 3; ++k) {
            const MatrixFactorization rotated = shift(*x, k);
            PolyMatrix prod = rotated.factor(0);
            for (std::uint32_t j = 1; j < 3; ++j) prod = prod * rotated.factor(j);
            CHECK(prod == PolyMatrix::identity(rotated.ring(), rotated.size()).scaled_by(rotated.f()));
        }
    }
}

TEST_CASE("shift rotates and composes") {
    RingPtr ring = e6_ring();
    const MatrixFactorization x = triple(ring, "y^3", "y", "1", "y^4");
    const MatrixFactorization tx = shift(x, 1);
    CHECK(tx.factor(0) == PolyMatrix::parse(ring, {{"y"}}));
    CHECK(tx.factor(1) == PolyMatrix::parse(ring, {{"1"}}));
    CHECK(tx.factor(2) == PolyMatrix::parse(ring, {{"y^3"}}));
    CHECK(shift(x, 3) == x);
    CHECK(shift(shift(x, 2), 1) == x);
    CHECK(shift(x, -1) == shift(x, 2));
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(shift(shift(x, a), b) == shift(x, a + b));
}

TEST_CASE("direct sums are factor-wise block diagonal") {
    RingPtr ring = e6_ring();
    const MatrixFactorization x = triple(ring, "y^3", "y", "1", "y^4");
    const MatrixFactorization s = direct_sum(x, shift(x, 1));
    CHECK(s.size() == 2);
    CHECK(s.factor(0) == PolyMatrix::parse(ring, {{"y^3", "0"}, {"0", "y"}}));
    CHECK(s.factor(1) == PolyMatrix::parse(ring, {{"y", "0"}, {"0", "1"}}));
    CHECK(s.factor(2) == PolyMatrix::parse(ring, {{"1", "0"}, {"0", "y^3"}}));
    CHECK(direct_sum(x, x).size() == 2);
    const MatrixFactorization other = triple(ring, "y^2", "y", "y", "y^4");
    CHECK_NOTHROW(direct_sum(x, other));
}

TEST_CASE("pad appends an identity factor") {
    RingPtr ring = e6_ring();
    const MatrixFactorization two = MatrixFactorization::make(
        Poly::parse(ring, "y^4"), {PolyMatrix::parse(ring, {{"y^3"}}), PolyMatrix::parse(ring, {{"y"}})});
    const MatrixFactorization padded = pad(two);
    CHECK(padded.arity() == 3);
    CHECK(padded == triple(ring, "y^3", "y", "1", "y^4"));
    // pad((f,1)) = (f,1,1) = P1
    const MatrixFactorization p1_seed = MatrixFactorization::make(
        Poly::parse(ring, "y^4"), {PolyMatrix::parse(ring, {{"y^4"}}), PolyMatrix::parse(ring, {{"1"}})});
    CHECK(pad(p1_seed) == triple(ring, "y^4", "1", "1", "y^4"));
}

TEST_CASE("reducedness per the E6 list") {
    const E6Corpus e = e6_d3();
    CHECK(is_reduced(e.X_beta));
    CHECK(!is_reduced(e.X_phi1));
    CHECK(!is_reduced(e.P1));
    CHECK(!is_reduced(e.X_alpha));
    CHECK(!is_reduced(e.X_xi));
    // reducedness is shift- and sum-compatible
    for (int k = 0; k < 3; ++k) CHECK(is_reduced(shift(e.X_beta, k)));
    CHECK(is_reduced(direct_sum(e.X_beta, shift(e.X_beta, 1))));
    CHECK(!is_reduced(direct_sum(e.X_beta, e.P1)));
}

TEST_CASE("entry ideal generators") {
    RingPtr ring = e6_ring();
    const MatrixFactorization xb = triple(ring, "y^2", "y", "y", "y^4");
    const auto gens = entry_ideal(xb);
    REQUIRE(gens.size() == 2);
    CHECK(gens[0] == Poly::parse(ring, "y"));
    CHECK(gens[1] == Poly::parse(ring, "y^2"));
    const MatrixFactorization p1 = triple(ring, "y^4", "1", "1", "y^4");
    const auto g1 = entry_ideal(p1);
    REQUIRE(g1.size() == 2);
    CHECK(g1[0] == Poly::constant(ring, 1));
    CHECK(g1[1] == Poly::parse(ring, "y^4"));
    // D-infinity: entries collapse to {x, y, y^k} after monic normalization
    const MatrixFactorization x3 = dinfty(3);
    const auto g3 = entry_ideal(x3);
    REQUIRE(g3.size() == 3);
    CHECK(g3[0] == Poly::parse(x3.ring(), "x"));
    CHECK(g3[1] == Poly::parse(x3.ring(), "y"));
    CHECK(g3[2] == Poly::parse(x3.ring(), "y^3"));
}

TEST_CASE("pad preserves the product identity on corpus entries") {
    const E6Corpus e = e6_d3();
    for (const auto& [name, x] : e.list()) {
        const MatrixFactorization padded = pad(*x);
        CHECK(padded.arity() == 4);
        CHECK(padded.size() == x->size());
        PolyMatrix prod = padded.factor(0);
        for (std::uint32_t j = 1; j < 4; ++j) prod = prod * padded.factor(j);
        CHECK(prod == PolyMatrix::identity(padded.ring(), padded.size()).scaled_by(padded.f()));
    }
}
