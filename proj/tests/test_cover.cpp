#include <doctest.h>

#include "mfkit/corpus.hpp"
#include "mfkit/cover.hpp"

using namespace mfkit;

TEST_CASE("make_module validates phi^d = -f*I") {
    const E6Corpus e = e6_d3();
    const auto& ring = e.ring;
    CHECK(e.M1.rank_S() == 3);
    CHECK_THROWS_AS(CoverModule::make(Poly::parse(ring, "y^4"), PolyMatrix::identity(ring, 2)), PowerMismatchError);
    // 1x1 smoke case: f = y^3, phi = -y has (-y)^3 = -y^3
    RingPtr r1 = make_ring(make_field(3), {"y"});
    const CoverModule tiny = CoverModule::make(Poly::parse(r1, "y^3"), PolyMatrix::parse(r1, {{"-y"}}));
    const MatrixFactorization fl = flat(tiny);
    CHECK(fl.size() == 1);
    CHECK(fl.factor(0) == PolyMatrix::parse(r1, {{"-y"}}).scaled(r1->field.mu));
}

TEST_CASE("flat with mu = -1 reproduces the printed M1 tuple") {
    const E6Corpus e = e6_d3();
    const auto& F = e.ring->field;
    const MatrixFactorization fl = flat_with_mu(e.M1, F.p - 1);
    for (int i = 0; i < 3; ++i) CHECK(fl.factor(i) == -e.M1.phi());
    // canonical mu also yields a valid factorization
    CHECK(flat(e.M1).size() == 3);
    CHECK_THROWS_AS(flat_with_mu(e.M1, 1), FieldError);
}

TEST_CASE("sharp builds the cyclic block z-action") {
    const E6Corpus e = e6_d3();
    const auto& ring = e.ring;
    const auto& F = ring->field;
    const CoverModule n = sharp(e.X_phi1);
    CHECK(n.rank_S() == 3);
    // phi = mu^{-1} * [[0,0,1],[y,0,0],[0,y^3,0]]
    PolyMatrix expect = PolyMatrix::parse(ring, {{"0", "0", "1"}, {"y", "0", "0"}, {"0", "y^3", "0"}});
    CHECK(n.phi() == expect.scaled(F.inv(F.mu)));
    CHECK(n.phi().power(3) == PolyMatrix::identity(ring, 3).scaled_by(Poly::parse(ring, "-y^4")));
    // sharp of P1 has a unit in its z-action: the free module
    CHECK(num_generators(sharp(e.P1)) == 1);
    CHECK(sharp(e.X_xi).rank_S() == 6);
}

TEST_CASE("sigma twist scales the z-action by omega^k") {
    const E6Corpus e = e6_d3();
    const auto& F = e.ring->field;
    CHECK(sigma_twist(e.M1, 0) == e.M1);
    const CoverModule t1 = sigma_twist(e.M1, 1);
    CHECK(t1.phi() == e.M1.phi().scaled(F.omega));
    CHECK(sigma_twist(t1, 2) == e.M1);  // omega^3 = 1
}

TEST_CASE("sharp-flat certificate conjugates onto the shift sum") {
    const E6Corpus e = e6_d3();
    for (const auto& [name, x] : e.list()) {
        const auto us = sharp_flat_certificate(*x);
        REQUIRE(us.size() == 3);
        const MatrixFactorization lhs = flat(sharp(*x));
        const MatrixFactorization rhs = sharp_flat_target(*x);
        for (int i = 0; i < 3; ++i) CHECK(us[i] * lhs.factor(i) == rhs.factor(i) * us[(i + 1) % 3]);
    }
    // the conjugated tuple for X_phi1 is exactly the three diag blocks
    const MatrixFactorization rhs = sharp_flat_target(e.X_phi1);
    CHECK(rhs.factor(0).at(0, 0) == Poly::parse(e.ring, "y^3"));
    CHECK(rhs.factor(0).at(1, 1) == Poly::parse(e.ring, "y"));
    CHECK(rhs.factor(0).at(2, 2) == Poly::parse(e.ring, "1"));
}

TEST_CASE("flat-sharp certificate: g*s = I and intertwining, orthogonality") {
    const E6Corpus e = e6_d3();
    const SplitCertificate c = flat_sharp_certificate(e.M1);
    const auto& ring = e.ring;
    CHECK(c.g.rows() == 9);
    CHECK(c.g * c.s == PolyMatrix::identity(ring, 9));
    // g_i s_l = 0 for i != l is the off-diagonal part of g*s = I
    // 1/d in F_7 is 5: 3*5 = 15 = 1
    CHECK(ring->field.inv(3) == 5);
    // rank-1 module certificate
    RingPtr r1 = make_ring(make_field(3), {"y"});
    const CoverModule tiny = CoverModule::make(Poly::parse(r1, "y^3"), PolyMatrix::parse(r1, {{"-y"}}));
    const SplitCertificate c1 = flat_sharp_certificate(tiny);
    CHECK(c1.g * c1.s == PolyMatrix::identity(r1, 3));
}

TEST_CASE("num_generators and rank_over_cover") {
    const E6Corpus e = e6_d3();
    CHECK(num_generators(e.M1) == 2);
    CHECK(rank_over_cover(e.M1) == 1);
    CHECK(rank_over_cover(sharp(e.X_xi)) == 2);
    const CoverModule b = e6_d4_B();
    CHECK(num_generators(b) == 3);
    const UlrichFamily u4 = ulrich_family(4);
    CHECK(num_generators(u4.module) == 4);
    CHECK(rank_over_cover(u4.module) == 1);
    // direct sum doubles the rank
    const CoverModule dbl =
        CoverModule::make(e.M1.f(), PolyMatrix::block_diag(e.M1.phi(), e.M1.phi()));
    CHECK(rank_over_cover(dbl) == 2);
}

TEST_CASE("ulrich verdicts") {
    const UlrichFamily u3 = ulrich_family(3);
    CHECK(is_ulrich(u3.module).status == UlrichStatus::Ulrich);
    const CoverModule b = e6_d4_B();
    const UlrichVerdict vb = is_ulrich(b);
    CHECK(vb.status == UlrichStatus::NotApplicable);
    CHECK(!vb.applicable);
    CHECK(!vb.reduced);
    CHECK(!vb.mu_equals_rank);
    const E6Corpus e = e6_d3();
    const UlrichVerdict vp = is_ulrich(sharp(e.P1));
    CHECK(vp.status == UlrichStatus::NotUlrich);  // d=3 <= 4 but mu=1 < 3
    CHECK(vp.applicable);
    CHECK(!vp.reduced);
}

TEST_CASE("equivariant structure of B(X)") {
    const E6Corpus e = e6_d3();
    const auto& F = e.ring->field;
    const SigmaModule m = equivariant_B(e.X_phi1);
    // sigma = diag(1, omega, omega^2)
    CHECK(m.sigma().at(0, 0) == Poly::constant(e.ring, 1));
    CHECK(m.sigma().at(1, 1) == Poly::constant(e.ring, F.omega));
    CHECK(m.sigma().at(2, 2) == Poly::constant(e.ring, F.pow(F.omega, 2)));
    CHECK(m.sigma().power(3) == PolyMatrix::identity(e.ring, 3));
    CHECK(m.sigma() * m.base().phi() == (m.base().phi() * m.sigma()).scaled(F.omega));
    // projector identities
    const auto es = sigma_projectors(m);
    PolyMatrix sum = PolyMatrix::zeros(e.ring, 3, 3);
    for (const auto& p : es) {
        CHECK(p * p == p);
        sum = sum + p;
    }
    CHECK(sum == PolyMatrix::identity(e.ring, 3));
    for (int k = 0; k < 3; ++k) CHECK(m.base().phi() * es[k] == es[(k + 2) % 3] * m.base().phi());
    // sigma-module for the size-2 entry also satisfies the skew relation exactly
    const SigmaModule mxi = equivariant_B(e.X_xi);
    CHECK(mxi.sigma() * mxi.base().phi() == (mxi.base().phi() * mxi.sigma()).scaled(F.omega));
}

TEST_CASE("equivariant round trip is literal") {
    const E6Corpus e = e6_d3();
    for (const auto& [name, x] : e.list()) CHECK(equivariant_A(equivariant_B(*x)) == *x);
    const UlrichFamily u4 = ulrich_family(4);
    CHECK(equivariant_A(equivariant_B(u4.mf)) == u4.mf);
}

TEST_CASE("mu independence certificate exists for corpus modules") {
    // exercised further by the acceptance suite; here the flats differ but validate
    const E6Corpus e = e6_d3();
    const auto& F = e.ring->field;
    const MatrixFactorization a = flat_with_mu(e.M1, F.mu);
    const MatrixFactorization b = flat_with_mu(e.M1, F.mul(F.omega, F.mu));
    CHECK(a != b);
    CHECK(a.f() == b.f());
}

TEST_CASE("sigma actions must skew-commute with the z-action") {
    RingPtr ring = make_ring(make_field(3), {"y"});
    // a non-skew action is rejected outright; legal actions always produce
    // equal eigenspace dimensions because phi maps each eigenspace injectively
    PolyMatrix phi(ring, 2, 2);
    phi.set(0, 0, Poly::parse(ring, "-y"));
    phi.set(1, 1, Poly::parse(ring, "-y"));
    const CoverModule n = CoverModule::make(Poly::parse(ring, "y^3"), phi);
    PolyMatrix sigma(ring, 2, 2);
    sigma.set(0, 0, Poly::constant(ring, 1));
    sigma.set(1, 1, Poly::constant(ring, 1));
    // sigma = I commutes, but omega*phi*sigma != sigma*phi, so build the legal
    // diagonal action instead and check the eigenspace failure is diagnosed
    CHECK_THROWS_AS(SigmaModule::make(n, PolyMatrix::identity(ring, 2)), PowerMismatchError);
    const CoverModule tiny = CoverModule::make(Poly::parse(ring, "y^3"), PolyMatrix::parse(ring, {{"-y"}}));
    // rank-1: sigma must scale phi by omega, impossible for a 1x1 identity-like action
    CHECK_THROWS_AS(SigmaModule::make(tiny, PolyMatrix::identity(ring, 1)), PowerMismatchError);
}

TEST_CASE("factorizations need at least two factors") {
    RingPtr ring = make_ring(make_field(3), {"y"});
    CHECK_THROWS_AS(MatrixFactorization::make(Poly::parse(ring, "y^4"), {PolyMatrix::parse(ring, {{"y^4"}})}),
                    ShapeMismatchError);
}

TEST_CASE("sharp of the ulrich factorization is maximally generated") {
    const UlrichFamily u4 = ulrich_family(4);
    const CoverModule sh = sharp(u4.mf);
    CHECK(sh.rank_S() == 4);
    CHECK(sh.phi().is_reduced());
    CHECK(num_generators(sh) == 4);
    CHECK(is_ulrich(sh).status == UlrichStatus::Ulrich);
}

TEST_CASE("functor arity must match the field") {
    const E6Corpus e = e6_d3();
    const MatrixFactorization padded = pad(e.X_phi1);  // arity 4 over a d=3 field
    CHECK_THROWS_AS(sharp(padded), ShapeMismatchError);
    CHECK_THROWS_AS(sharp_flat_certificate(padded), ShapeMismatchError);
}
