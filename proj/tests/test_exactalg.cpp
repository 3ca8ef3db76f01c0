#include <doctest.h>

#include <random>

#include "mfkit/polymatrix.hpp"

using namespace mfkit;

namespace {

Poly rand_poly(const RingPtr& ring, std::mt19937_64& rng, int max_deg) {
    std::uniform_int_distribution<std::uint64_t> coeff(0, ring->field.p - 1);
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::vector<Term> terms;
    const int nterms = static_cast<int>(rng() % 4);
    for (int t = 0; t < nterms; ++t) {
        Exps e(ring->vars.size(), 0);
        int budget = deg(rng);
        for (auto& x : e) {
            x = static_cast<std::uint32_t>(rng() % (budget + 1));
            budget -= static_cast<int>(x);
        }
        terms.push_back({e, coeff(rng)});
    }
    return Poly::from_terms(ring, std::move(terms));
}

PolyMatrix rand_matrix(const RingPtr& ring, std::mt19937_64& rng, std::size_t n, int max_deg) {
    PolyMatrix m(ring, n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m.set(r, c, rand_poly(ring, rng, max_deg));
    return m;
}

}  // namespace

TEST_CASE("make_field finds the smallest admissible prime and root") {
    const RootedField f3 = make_field(3);
    CHECK(f3.p == 7);
    CHECK(f3.zeta == 3);
    CHECK(f3.omega == 2);
    CHECK(f3.mu == 3);

    const RootedField f2 = make_field(2);
    CHECK(f2.p == 5);
    CHECK(f2.zeta == 2);
    CHECK(f2.omega == 4);
    CHECK(f2.mu == 2);
    CHECK(f2.pow(2, 4) == 1);
    CHECK(f2.pow(2, 2) == 4);  // = -1 mod 5

    const RootedField f13 = make_field(3, 13);
    CHECK(f13.p == 13);
    CHECK(f13.pow(f13.zeta, 6) == 1);
    CHECK(f13.pow(f13.zeta, 3) == 12);
    CHECK(f13.pow(f13.zeta, 2) != 1);

    CHECK_THROWS_AS(make_field(3, 12), FieldError);  // not prime
    CHECK_THROWS_AS(make_field(3, 11), FieldError);  // not 1 mod 6
}

TEST_CASE("rooted field invariants") {
    for (std::uint32_t d : {2u, 3u, 4u, 5u, 6u}) {
        const RootedField F = make_field(d);
        CHECK(F.p % (2 * d) == 1);
        CHECK(F.pow(F.zeta, 2 * d) == 1);
        CHECK(F.pow(F.zeta, d) == F.p - 1);
        CHECK(F.omega == F.mul(F.zeta, F.zeta));
        CHECK(F.mu == F.zeta);
        CHECK(F.pow(F.omega, d) == 1);
        for (std::uint32_t k = 1; k < d; ++k) CHECK(F.pow(F.omega, k) != 1);
        CHECK(F.mul(d % F.p, F.inv(d % F.p)) == 1);
    }
}

TEST_CASE("poly arithmetic over F_7") {
    const RootedField F = make_field(3);
    RingPtr ring = make_ring(F, {"x", "y"});
    const Poly y = Poly::variable(ring, 1);
    const Poly y3 = Poly::parse(ring, "y^3");
    CHECK(y3 * y == Poly::parse(ring, "y^4"));
    CHECK(Poly::parse(ring, "x^3+y^3") + Poly::zero(ring) == Poly::parse(ring, "x^3 + y^3"));
    // 3y * 5y = 15 y^2 = y^2 mod 7
    CHECK(Poly::parse(ring, "3*y") * Poly::parse(ring, "5*y") == Poly::parse(ring, "y^2"));
    CHECK((y - y).is_zero());
    RingPtr other = make_ring(F, {"x"});
    CHECK_THROWS_AS((void)(Poly::variable(other, 0) + y), VariableMismatchError);
}

TEST_CASE("truncate and ord") {
    const RootedField F = make_field(3);
    RingPtr ring = make_ring(F, {"x", "y"});
    CHECK(Poly::parse(ring, "y^4 + y^2").truncated(3) == Poly::parse(ring, "y^2"));
    CHECK(Poly::parse(ring, "x^3 + y^3").truncated(0).is_zero());
    CHECK(Poly::parse(ring, "x^2*y + x").truncated(2) == Poly::parse(ring, "x"));
    CHECK(*Poly::parse(ring, "y^4").ord() == 4);
    CHECK(*Poly::parse(ring, "x^2*y").ord() == 3);
    CHECK(!Poly::zero(ring).ord().has_value());
}

TEST_CASE("truncated multiplication is compatible with truncation") {
    const RootedField F = make_field(3);
    RingPtr ring = make_ring(F, {"x", "y"});
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
        const Poly a = rand_poly(ring, rng, 5);
        const Poly b = rand_poly(ring, rng, 5);
        const int N = static_cast<int>(rng() % 7);
        CHECK((a * b).truncated(N) == (a.truncated(N) * b.truncated(N)).truncated(N));
    }
}

TEST_CASE("matrix products and block sums") {
    const RootedField F = make_field(3);
    RingPtr ring = make_ring(F, {"y"});
    const PolyMatrix a = PolyMatrix::parse(ring, {{"y^3"}});
    const PolyMatrix b = PolyMatrix::parse(ring, {{"y"}});
    CHECK(a * b == PolyMatrix::parse(ring, {{"y^4"}}));
    const PolyMatrix d = PolyMatrix::block_diag(b, a);
    CHECK(d.rows() == 2);
    CHECK(d.at(0, 0) == Poly::parse(ring, "y"));
    CHECK(d.at(1, 1) == Poly::parse(ring, "y^3"));
    CHECK(d.at(0, 1).is_zero());
    CHECK_THROWS_AS(a + d, ShapeMismatchError);
}

TEST_CASE("the M1 z-action cubes to -y^4 I") {
    const RootedField F = make_field(3);
    RingPtr ring = make_ring(F, {"y"});
    const PolyMatrix phi = PolyMatrix::parse(ring, {{"0", "0", "y"}, {"-y^3", "0", "0"}, {"0", "1", "0"}});
    const PolyMatrix cube = phi.power(3);
    CHECK(cube == PolyMatrix::identity(ring, 3).scaled_by(Poly::parse(ring, "-y^4")));
    CHECK(phi.det() == Poly::parse(ring, "-y^4"));
    CHECK(phi.constant_rank() == 1);
}

TEST_CASE("determinants: identity, Moore matrix") {
    const RootedField F = make_field(3, 19);
    RingPtr ring = make_ring(F, {"x", "y", "z"});
    CHECK(PolyMatrix::identity(ring, 3).det() == Poly::constant(ring, 1));
    // a point on a^3 + b^3 + c^3 = 0 over F_19: det X_abc = abc (x^3+y^3+z^3)
    const std::uint64_t a = 1, b = 4, c = 5;
    PolyMatrix m(ring, 3, 3);
    const Poly x = Poly::variable(ring, 0), y = Poly::variable(ring, 1), z = Poly::variable(ring, 2);
    m.set(0, 0, x.scaled(a));
    m.set(0, 1, z.scaled(b));
    m.set(0, 2, y.scaled(c));
    m.set(1, 0, y.scaled(b));
    m.set(1, 1, x.scaled(c));
    m.set(1, 2, z.scaled(a));
    m.set(2, 0, z.scaled(c));
    m.set(2, 1, y.scaled(a));
    m.set(2, 2, x.scaled(b));
    CHECK(m.det() == Poly::parse(ring, "x^3+y^3+z^3").scaled(F.mul(F.mul(a, b), c)));
}

TEST_CASE("det is multiplicative on random small matrices") {
    const RootedField F = make_field(3);
    RingPtr ring = make_ring(F, {"x", "y"});
    std::mt19937_64 rng(7);
    for (int i = 0; i < 40; ++i) {
        const std::size_t n = 2 + (i % 2);
        const PolyMatrix a = rand_matrix(ring, rng, n, 2);
        const PolyMatrix b = rand_matrix(ring, rng, n, 2);
        CHECK((a * b).det() == a.det() * b.det());
    }
}

TEST_CASE("constant rank vanishes exactly for reduced matrices") {
    const RootedField F = make_field(3);
    RingPtr ring = make_ring(F, {"x", "y"});
    std::mt19937_64 rng(11);
    CHECK(PolyMatrix::identity(ring, 4).constant_rank() == 4);
    for (int i = 0; i < 60; ++i) {
        const PolyMatrix a = rand_matrix(ring, rng, 3, 2);
        const bool all_positive_ord = a.is_reduced();
        CHECK((a.constant_rank() == 0) == all_positive_ord);
    }
}

TEST_CASE("exact division by a single divisor") {
    const RootedField F = make_field(3);
    RingPtr ring = make_ring(F, {"x", "y"});
    const Poly f = Poly::parse(ring, "x^3 + y^3");
    const Poly q = Poly::parse(ring, "x^2*y + 3");
    CHECK(*((f * q).divided_exactly_by(f)) == q);
    CHECK(!Poly::parse(ring, "x^3 + y^3 + x").divided_exactly_by(f).has_value());
}

TEST_CASE("series inverse of a constant-invertible matrix") {
    const RootedField F = make_field(3);
    RingPtr ring = make_ring(F, {"y"});
    PolyMatrix a = PolyMatrix::parse(ring, {{"1 + y", "y^2"}, {"3*y", "2"}});
    const PolyMatrix inv = a.inverse_mod(8);
    CHECK((a * inv).truncated(8) == PolyMatrix::identity(ring, 2));
}
