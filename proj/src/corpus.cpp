#include "mfkit/corpus.hpp"

#include <algorithm>
#include <sstream>

#include "mfkit/classify.hpp"

namespace mfkit {

namespace {

Poly P(const RingPtr& ring, const std::string& s) { return Poly::parse(ring, s); }

PolyMatrix M(const RingPtr& ring, const std::vector<std::vector<std::string>>& rows) {
    return PolyMatrix::parse(ring, rows);
}

}  // namespace

std::vector<std::pair<std::string, const MatrixFactorization*>> E6Corpus::list() const {
    return {{"P1", &P1},         {"X_phi1", &X_phi1}, {"X_psi1", &X_psi1}, {"X_phi2", &X_phi2},
            {"X_beta", &X_beta}, {"X_alpha", &X_alpha}, {"X_xi", &X_xi}};
}

E6Corpus e6_d3(std::optional<std::uint64_t> p_override) {
    const RootedField F = make_field(3, p_override);
    RingPtr ring = make_ring(F, {"y"});
    const Poly f = P(ring, "y^4");
    auto one = [&](const std::string& a, const std::string& b, const std::string& c) {
        return MatrixFactorization::make(f, {M(ring, {{a}}), M(ring, {{b}}), M(ring, {{c}})});
    };
    E6Corpus e;
    e.ring = ring;
    e.P1 = one("y^4", "1", "1");
    e.X_phi1 = one("y^3", "y", "1");
    e.X_psi1 = one("y^3", "1", "y");
    e.X_phi2 = one("y^2", "y^2", "1");
    e.X_beta = one("y^2", "y", "y");
    e.X_alpha = MatrixFactorization::make(
        f, {M(ring, {{"0", "-y^2"}, {"1", "-y"}}), M(ring, {{"0", "-y^3"}, {"1", "-y^2"}}),
            M(ring, {{"0", "-y^3"}, {"1", "-y"}})});
    e.X_xi = MatrixFactorization::make(f, {M(ring, {{"y", "0"}, {"0", "y^3"}}), M(ring, {{"0", "y"}, {"y", "1"}}),
                                           M(ring, {{"-y", "1"}, {"y^2", "0"}})});
    e.M1 = CoverModule::make(f, M(ring, {{"0", "0", "y"}, {"-y^3", "0", "0"}, {"0", "1", "0"}}));
    e.M1_flat = flat(e.M1);
    return e;
}

MooreBatch moore_scan(std::size_t cap, std::optional<std::uint64_t> p_override) {
    MooreBatch batch;
    std::uint64_t p = p_override.value_or(7);
    for (;; p += 6) {
        if (!is_prime(p) || p % 6 != 1) {
            if (p_override) throw FieldError("override prime must be = 1 mod 6");
            continue;
        }
        const RootedField F = make_field(3, p);
        std::vector<MooreTriple> triples;
        std::vector<std::uint64_t> cube(p);
        for (std::uint64_t a = 1; a < p; ++a) cube[a] = F.mul(F.mul(a, a), a);
        for (std::uint64_t a = 1; a < p && triples.size() < cap; ++a)
            for (std::uint64_t b = 1; b < p && triples.size() < cap; ++b)
                for (std::uint64_t c = 1; c < p && triples.size() < cap; ++c)
                    if (F.add(F.add(cube[a], cube[b]), cube[c]) == 0) triples.push_back({a, b, c});
        if (!triples.empty()) {
            batch.p = p;
            batch.triples = std::move(triples);
            batch.ring = make_ring(F, {"x", "y"});
            batch.ring3 = make_ring(F, {"x", "y", "z"});
            return batch;
        }
        if (p_override) throw FieldError("no admissible Moore triples over F_" + std::to_string(p));
    }
}

CoverModule moore_module(const MooreBatch& batch, const MooreTriple& t) {
    const auto& ring = batch.ring;
    const auto& F = ring->field;
    const Poly x = Poly::variable(ring, 0), y = Poly::variable(ring, 1);
    auto e = [&](std::uint64_t num, std::uint64_t den, const Poly& v) { return v.scaled(F.neg(F.div(num, den))); };
    PolyMatrix phi(ring, 3, 3);
    phi.set(0, 1, e(t.c, t.a, y));
    phi.set(0, 2, e(t.a, t.c, x));
    phi.set(1, 0, e(t.c, t.b, x));
    phi.set(1, 2, e(t.b, t.c, y));
    phi.set(2, 0, e(t.a, t.b, y));
    phi.set(2, 1, e(t.b, t.a, x));
    const Poly f = P(ring, "x^3 + y^3");
    return CoverModule::make(f, std::move(phi));
}

PolyMatrix moore_matrix_xyz(const MooreBatch& batch, const MooreTriple& t) {
    const auto& ring = batch.ring3;
    const Poly x = Poly::variable(ring, 0), y = Poly::variable(ring, 1), z = Poly::variable(ring, 2);
    PolyMatrix m(ring, 3, 3);
    m.set(0, 0, x.scaled(t.a));
    m.set(0, 1, z.scaled(t.b));
    m.set(0, 2, y.scaled(t.c));
    m.set(1, 0, y.scaled(t.b));
    m.set(1, 1, x.scaled(t.c));
    m.set(1, 2, z.scaled(t.a));
    m.set(2, 0, z.scaled(t.c));
    m.set(2, 1, y.scaled(t.a));
    m.set(2, 2, x.scaled(t.b));
    return m;
}

MatrixFactorization dinfty(std::uint32_t k, std::optional<std::uint64_t> p_override) {
    if (k < 1) throw Error("dinfty needs k >= 1");
    const RootedField F = make_field(3, p_override);
    RingPtr ring = make_ring(F, {"x", "y"});
    const Poly f = P(ring, "x^2*y");
    const Poly x = Poly::variable(ring, 0);
    const Poly yk = Poly::monomial(ring, {0, k}, 1);
    PolyMatrix a(ring, 2, 2);
    a.set(0, 0, x);
    a.set(0, 1, yk);
    a.set(1, 1, -x);
    PolyMatrix b(ring, 2, 2);
    b.set(0, 0, P(ring, "y"));
    b.set(1, 1, P(ring, "y"));
    return MatrixFactorization::make(f, {a, b, a});
}

UlrichFamily ulrich_family(std::uint32_t a, std::optional<std::uint64_t> p_override) {
    if (a < 2) throw Error("ulrich_family needs a >= 2");
    const RootedField F = make_field(a, p_override);
    RingPtr ring = make_ring(F, {"y"});
    const Poly y = Poly::variable(ring, 0);
    const Poly f = Poly::monomial(ring, {a + 1}, 1);
    std::vector<PolyMatrix> factors;
    factors.push_back(M(ring, {{"y^2"}}));
    for (std::uint32_t i = 1; i < a; ++i) factors.push_back(M(ring, {{"y"}}));
    UlrichFamily u;
    u.ring = ring;
    u.mf = MatrixFactorization::make(f, std::move(factors));
    // the printed cyclic matrix satisfies phi^a = +f*I; the corner carries the
    // sign so that phi^a = -f*I as the module contract requires
    PolyMatrix phi(ring, a, a);
    for (std::uint32_t t = 0; t + 1 < a; ++t) phi.set(t + 1, t, y);
    phi.set(0, a - 1, P(ring, "-y^2"));
    u.module = CoverModule::make(f, std::move(phi));
    return u;
}

CoverModule e6_d4_B(std::optional<std::uint64_t> p_override) {
    const RootedField F = make_field(4, p_override);
    RingPtr ring = make_ring(F, {"x"});
    const Poly f = P(ring, "x^3");
    PolyMatrix phi = M(ring, {{"0", "0", "x", "0"}, {"-x", "0", "0", "0"}, {"0", "0", "0", "x"}, {"0", "1", "0", "0"}});
    return CoverModule::make(f, std::move(phi));
}

// ---------------------------------------------------------------------------
// expectations

namespace {

EntryCheck ok(std::string assertion, std::string detail, Json cert = nullptr) {
    return {std::move(assertion), true, std::move(detail), std::move(cert)};
}

EntryCheck fail(std::string assertion, std::string detail) {
    return {std::move(assertion), false, std::move(detail), nullptr};
}

EntryCheck verdict(std::string assertion, bool pass, std::string detail, Json cert = nullptr) {
    return {std::move(assertion), pass, std::move(detail), std::move(cert)};
}

bool rotations_valid(const MatrixFactorization& x) {
    for (std::uint32_t k = 0; k < x.arity(); ++k) {
        PolyMatrix prod = x.factor(k % x.arity());
        for (std::uint32_t j = 1; j < x.arity(); ++j) prod = prod * x.factor((k + j) % x.arity());
        if (prod != PolyMatrix::identity(x.ring(), x.size()).scaled_by(x.f())) return false;
    }
    return true;
}

EntryCheck check_valid(const std::string& tag, const MatrixFactorization& x) {
    return verdict(tag + ": product and all rotations equal f*I",
                   rotations_valid(x), "exact product test over F_" + std::to_string(x.ring()->field.p));
}

EntryCheck check_reduced(const std::string& tag, const MatrixFactorization& x, bool expect) {
    const bool got = is_reduced(x);
    return verdict(tag + ": is_reduced == " + (expect ? "true" : "false"), got == expect,
                   got ? "all factor entries lie in the maximal ideal" : "a unit entry is present");
}

EntryCheck check_order(const std::string& tag, const MatrixFactorization& x, int expect, int N,
                       const CorpusSettings& s) {
    IsoOptions opt;
    opt.seed = s.seed;
    try {
        const int got = order_of(x, s.truncation.value_or(N), opt);
        return verdict(tag + ": order == " + std::to_string(expect), got == expect,
                       "computed order " + std::to_string(got) + " at N=" + std::to_string(s.truncation.value_or(N)));
    } catch (const Error& e) {
        return fail(tag + ": order == " + std::to_string(expect), e.what());
    }
}

EntryCheck check_nosplit(const std::string& tag, const MatrixFactorization& x, int N, int D,
                         const CorpusSettings& s) {
    DecomposeOptions opt;
    opt.seed = s.seed;
    const DecompositionResult r = decompose(x, s.truncation.value_or(N), D, opt);
    return verdict(tag + ": NoSplitFoundAtLevel(" + std::to_string(s.truncation.value_or(N)) + "," +
                       std::to_string(D) + ")",
                   r.status == SplitStatus::NoSplitFoundAtLevel && r.summands.size() == 1,
                   r.status == SplitStatus::NoSplitFoundAtLevel ? "no idempotent split found at level"
                                                                : "unexpected certified split");
}

EntryCheck check_sharp_flat(const std::string& tag, const MatrixFactorization& x) {
    try {
        const auto us = sharp_flat_certificate(x);
        return ok("functor-cert sharp-flat " + tag + ": flat(sharp(X)) conjugates onto the shift sum",
                  "constant block permutation verified entry-exactly", sharp_flat_certificate_to_json(x, us));
    } catch (const Error& e) {
        return fail("functor-cert sharp-flat " + tag + ": flat(sharp(X)) conjugates onto the shift sum", e.what());
    }
}

EntryCheck check_flat_sharp(const std::string& tag, const CoverModule& n) {
    try {
        const SplitCertificate c = flat_sharp_certificate(n);
        return ok("functor-cert flat-sharp " + tag + ": g*s = I and g intertwines the twisted z-actions",
                  "1/d = " + std::to_string(n.ring()->field.inv(n.ring()->field.d)) + " in F_" +
                      std::to_string(n.ring()->field.p),
                  flat_sharp_certificate_to_json(n, c));
    } catch (const Error& e) {
        return fail("functor-cert flat-sharp " + tag + ": g*s = I and g intertwines the twisted z-actions", e.what());
    }
}

EntryCheck check_mu_independence(const std::string& tag, const CoverModule& n, const CorpusSettings& s) {
    const auto& F = n.ring()->field;
    const std::string assertion = "mu-independence " + tag + ": flats for mu and omega*mu are CertifiedIso";
    try {
        const MatrixFactorization a = flat_with_mu(n, F.mu);
        const MatrixFactorization b = flat_with_mu(n, F.mul(F.omega, F.mu));
        IsoOptions opt;
        opt.seed = s.seed;
        const IsoVerdict v = is_isomorphic(a, b, s.truncation.value_or(4), opt);
        if (v.status != IsoStatus::CertifiedIso) return fail(assertion, "verdict was not CertifiedIso");
        return ok(assertion, "exact certificate with two-sided inverse",
                  iso_certificate_to_json(a, b, *v.certificate));
    } catch (const Error& e) {
        return fail(assertion, e.what());
    }
}

EntryCheck check_equivariant(const std::string& tag, const MatrixFactorization& x, const CorpusSettings& s) {
    const std::string assertion = "equivariant " + tag + ": A(B(X)) is CertifiedIso to X and projectors are exact";
    try {
        const SigmaModule bm = equivariant_B(x);
        const MatrixFactorization back = equivariant_A(bm);
        IsoOptions opt;
        opt.seed = s.seed;
        const IsoVerdict v = is_isomorphic(back, x, s.truncation.value_or(4), opt);
        if (v.status != IsoStatus::CertifiedIso) return fail(assertion, "round trip is not a certified isomorphism");
        const auto es = sigma_projectors(bm);
        const auto& ring = x.ring();
        const std::size_t r = bm.base().rank_S();
        PolyMatrix sum = PolyMatrix::zeros(ring, r, r);
        const std::uint32_t d = x.ring()->field.d;
        for (const auto& e : es) {
            if (e * e != e) return fail(assertion, "a projector is not idempotent");
            sum = sum + e;
        }
        if (sum != PolyMatrix::identity(ring, r)) return fail(assertion, "projectors do not sum to I");
        for (std::uint32_t k = 0; k < d; ++k)
            if (bm.base().phi() * es[k] != es[(k + d - 1) % d] * bm.base().phi())
                return fail(assertion, "z e_k = e_{k-1} z fails at k=" + std::to_string(k));
        return ok(assertion, "literal round trip; e_k^2 = e_k, sum e_k = I, phi E_k = E_{k-1} phi exact",
                  iso_certificate_to_json(back, x, *v.certificate));
    } catch (const Error& e) {
        return fail(assertion, e.what());
    }
}

// found summand multiset == expected multiset up to certified isomorphism
bool summands_match(std::vector<MatrixFactorization> found, const std::vector<MatrixFactorization>& expected, int N,
                    const CorpusSettings& s, std::string& detail) {
    if (found.size() != expected.size()) {
        detail = "summand count " + std::to_string(found.size()) + " != " + std::to_string(expected.size());
        return false;
    }
    IsoOptions opt;
    opt.seed = s.seed;
    for (const auto& e : expected) {
        bool matched = false;
        for (std::size_t i = 0; i < found.size(); ++i) {
            if (found[i].size() != e.size()) continue;
            if (is_isomorphic(found[i], e, N, opt).status == IsoStatus::CertifiedIso) {
                found.erase(found.begin() + static_cast<long>(i));
                matched = true;
                break;
            }
        }
        if (!matched) {
            detail = "no summand certified isomorphic to an expected one";
            return false;
        }
    }
    detail = "summand multisets match up to certified isomorphism";
    return true;
}

// ---- per-entry check bundles ----------------------------------------------

EntryReport report_e6_mf(const std::string& name, const MatrixFactorization& x, bool reduced,
                         const CorpusSettings& s) {
    EntryReport rep{name, {}};
    rep.checks.push_back(check_valid("validity", x));
    rep.checks.push_back(check_reduced("validity", x, reduced));
    rep.checks.push_back(check_order("order", x, 3, 8, s));
    if (x.size() > 1) rep.checks.push_back(check_nosplit("split", x, 8, s.cert_degree, s));
    rep.checks.push_back(check_sharp_flat(name, x));
    rep.checks.push_back(check_equivariant(name, x, s));
    return rep;
}

EntryReport report_e6_family(const CorpusSettings& s) {
    EntryReport rep{"e6.family", {}};
    const E6Corpus e = e6_d3(s.p_override);
    std::vector<std::pair<std::string, MatrixFactorization>> objs;
    for (const auto& [nm, x] : e.list())
        for (int k = 0; k < 3; ++k) objs.emplace_back(nm + ".T" + std::to_string(k), shift(*x, k));
    const int N = s.truncation.value_or(8);
    IsoOptions opt;
    opt.seed = s.seed;
    int pairs = 0, distinct = 0;
    std::string first_failure;
    for (std::size_t i = 0; i < objs.size(); ++i) {
        for (std::size_t j = i + 1; j < objs.size(); ++j) {
            ++pairs;
            const IsoVerdict v = is_isomorphic(objs[i].second, objs[j].second, N, opt);
            if (v.status == IsoStatus::NotIsoModN)
                ++distinct;
            else if (first_failure.empty())
                first_failure = objs[i].first + " vs " + objs[j].first;
        }
    }
    rep.checks.push_back(verdict("classes21: 21 objects pairwise NotIsoModN at N=" + std::to_string(N),
                                 pairs == 210 && distinct == 210,
                                 std::to_string(distinct) + "/" + std::to_string(pairs) + " pairs refuted" +
                                     (first_failure.empty() ? "" : ("; first failure " + first_failure))));
    return rep;
}

EntryReport report_e6_m1(const CorpusSettings& s) {
    EntryReport rep{"e6.M1", {}};
    const E6Corpus e = e6_d3(s.p_override);
    const auto& ring = e.ring;
    const auto& F = ring->field;
    rep.checks.push_back(verdict("validity: phi^3 == -f*I for M1", true, "validated at construction"));
    // the displayed tuple uses mu = -1
    const MatrixFactorization flat_minus = flat_with_mu(e.M1, F.p - 1);
    const PolyMatrix minus_phi = -e.M1.phi();
    bool display_ok = true;
    for (std::uint32_t i = 0; i < 3; ++i)
        if (flat_minus.factor(i) != minus_phi) display_ok = false;
    rep.checks.push_back(verdict("validity: flat with mu = -1 equals (-phi, -phi, -phi)", display_ok,
                                 "matches the displayed tuple"));
    // M1-flat decomposes into the three shifts of (y^3, y, 1)
    DecomposeOptions dopt;
    dopt.seed = s.seed;
    const int N = s.truncation.value_or(8);
    const DecompositionResult r = decompose(e.M1_flat, N, s.cert_degree, dopt);
    std::string detail;
    bool split_ok = r.status == SplitStatus::CertifiedSplit;
    if (split_ok) {
        std::vector<MatrixFactorization> expected{e.X_phi1, shift(e.X_phi1, 1), shift(e.X_phi1, 2)};
        split_ok = summands_match(r.summands, expected, N, s, detail);
    } else {
        detail = "no certified split";
    }
    rep.checks.push_back(verdict("m1-split: flat(M1) decomposes into the three shifts of (y^3,y,1)", split_ok,
                                 detail, split_ok ? split_certificate_to_json(e.M1_flat, r) : Json(nullptr)));
    rep.checks.push_back(verdict("ulrich: num_generators(M1) == 2", num_generators(e.M1) == 2,
                                 "constant rank of phi is 1"));
    rep.checks.push_back(verdict("ulrich: rank_over_cover(M1) == 1", rank_over_cover(e.M1) == 1,
                                 "det phi = unit * f"));
    rep.checks.push_back(check_mu_independence("e6.M1", e.M1, s));
    rep.checks.push_back(check_flat_sharp("e6.M1", e.M1));
    return rep;
}

EntryReport report_dinfty_entry(std::uint32_t k, const CorpusSettings& s) {
    EntryReport rep{"dinfty.X" + std::to_string(k), {}};
    const MatrixFactorization x = dinfty(k, s.p_override);
    rep.checks.push_back(check_valid("dinfty validity", x));
    rep.checks.push_back(check_reduced("dinfty validity", x, true));
    rep.checks.push_back(check_nosplit("dinfty split", x, 8, s.cert_degree, s));
    // entry ideal generators [x, y, y^k]
    const auto gens = entry_ideal(x);
    std::vector<Poly> expect;
    expect.push_back(Poly::variable(x.ring(), 0));
    expect.push_back(Poly::variable(x.ring(), 1));
    if (k >= 2) expect.push_back(Poly::monomial(x.ring(), {0, k}, 1));
    rep.checks.push_back(verdict("dinfty ideal: I(X_k) generated by {x, y" + std::string(k >= 2 ? ", y^k" : "") + "}",
                                 gens == expect, "entry collection, monic and deduplicated"));
    rep.checks.push_back(check_sharp_flat("dinfty.X" + std::to_string(k), x));
    rep.checks.push_back(check_equivariant("dinfty.X" + std::to_string(k), x, s));
    return rep;
}

EntryReport report_dinfty_family(const CorpusSettings& s) {
    EntryReport rep{"dinfty.family", {}};
    const int N = s.truncation.value_or(8);
    std::vector<MatrixFactorization> xs;
    for (std::uint32_t k = 1; k <= 6; ++k) xs.push_back(dinfty(k, s.p_override));
    IsoOptions opt;
    opt.seed = s.seed;
    int pairs = 0, refuted = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            ++pairs;
            if (is_isomorphic(xs[i], xs[j], N, opt).status == IsoStatus::NotIsoModN) ++refuted;
        }
    rep.checks.push_back(verdict("dinfty: X1..X6 pairwise NotIsoModN at N=" + std::to_string(N),
                                 pairs == 15 && refuted == 15,
                                 std::to_string(refuted) + "/" + std::to_string(pairs) + " pairs refuted"));
    return rep;
}

namespace {

// validity sweep over every triple of a batch: module construction enforces
// phi_abc^3 = -(x^3+y^3) I, plus the determinant identity and reducedness
bool moore_batch_exact(const MooreBatch& batch, std::string& detail) {
    for (const auto& t : batch.triples) {
        const Poly det = moore_matrix_xyz(batch, t).det();
        const Poly expect =
            P(batch.ring3, "x^3 + y^3 + z^3").scaled(batch.ring3->field.mul(batch.ring3->field.mul(t.a, t.b), t.c));
        if (!(det == expect)) {
            detail = "determinant identity fails";
            return false;
        }
        try {
            if (!moore_module(batch, t).phi().is_reduced()) {
                detail = "a phi_abc has a unit entry";
                return false;
            }
        } catch (const Error& e) {
            detail = e.what();
            return false;
        }
    }
    detail = std::to_string(batch.triples.size()) + " triples exact over F_" + std::to_string(batch.p);
    return true;
}

// Greedy antichain of flats over the batch, pre-filtered at N=2 (a refutation
// at a lower level implies one at any higher level) and confirmed pairwise at
// the requested level.
std::vector<MatrixFactorization> moore_antichain(const MooreBatch& batch, std::size_t want, int confirm_level,
                                                 const CorpusSettings& s) {
    IsoOptions opt;
    opt.seed = s.seed;
    std::vector<MatrixFactorization> antichain;
    const std::size_t cap = 40;
    const std::size_t stride = std::max<std::size_t>(1, batch.triples.size() / cap);
    std::size_t considered = 0;
    for (std::size_t i = 0; i < batch.triples.size() && antichain.size() < want && considered < cap; i += stride) {
        ++considered;
        const MatrixFactorization cand = flat(moore_module(batch, batch.triples[i]));
        bool fresh = true;
        for (const auto& have : antichain) {
            if (is_isomorphic(cand, have, 2, opt).status != IsoStatus::NotIsoModN) {
                fresh = false;
                break;
            }
        }
        if (fresh) antichain.push_back(cand);
    }
    if (antichain.size() < want) return {};
    for (std::size_t i = 0; i < antichain.size(); ++i)
        for (std::size_t j = i + 1; j < antichain.size(); ++j)
            if (is_isomorphic(antichain[i], antichain[j], confirm_level, opt).status != IsoStatus::NotIsoModN)
                return {};
    return antichain;
}

}  // namespace

EntryReport report_moore_family(const CorpusSettings& s) {
    EntryReport rep{"moore.family", {}};
    MooreBatch batch = moore_scan(48, s.p_override);
    rep.checks.push_back(verdict("moore: scan finds p = 1 (mod 6) with at least 10 admissible triples",
                                 batch.triples.size() >= 10,
                                 "first admissible prime p = " + std::to_string(batch.p) + ", " +
                                     std::to_string(batch.triples.size()) + " triples in the batch"));
    {
        std::string detail;
        const bool exact = moore_batch_exact(batch, detail);
        rep.checks.push_back(verdict("moore: det X_abc == abc*(x^3+y^3+z^3) and phi_abc^3 == -(x^3+y^3)*I, "
                                     "all reduced (first batch)",
                                     exact, detail));
    }
    // Small primes give few isomorphism classes (the flats collapse under the
    // curve symmetries with exact certificates), so the refutation witness
    // scans onward until five classes certify at the pinned level N=6.
    const int confirm_level = s.truncation.value_or(6);
    std::uint64_t witness_p = 0;
    std::vector<MatrixFactorization> antichain;
    std::string witness_detail = "no admissible prime up to the scan bound";
    bool witness_exact = false;
    for (std::uint64_t q = batch.p; q <= 409 && antichain.empty(); ++q) {
        if (q % 6 != 1 || !is_prime(q)) continue;
        if (s.p_override && q != *s.p_override) break;  // honor a forced prime
        const MooreBatch full = moore_scan(1'000'000, q);
        if (full.triples.size() < 10) continue;
        antichain = moore_antichain(full, 5, confirm_level, s);
        if (!antichain.empty()) {
            witness_p = q;
            std::string detail;
            witness_exact = moore_batch_exact(full, detail);
            witness_detail = "witness prime p = " + std::to_string(q) + " with " +
                             std::to_string(full.triples.size()) + " triples; " + detail;
        }
    }
    rep.checks.push_back(verdict("moore: witness batch is exact (powers, determinants, reducedness)",
                                 witness_p != 0 && witness_exact, witness_detail));
    rep.checks.push_back(verdict("moore: at least 5 reduced flats pairwise NotIsoModN at N=" +
                                     std::to_string(confirm_level),
                                 antichain.size() >= 5,
                                 antichain.size() >= 5
                                     ? "5 classes confirmed pairwise at the witness prime " +
                                           std::to_string(witness_p)
                                     : witness_detail));
    NormalForm d4 = NormalForm::ade(AdeTag::D, 4, 2);
    d4.d = 3;
    rep.checks.push_back(verdict("moore: finite-type refutation consistent with the Infinite verdict at d=3",
                                 dmf_type(d4) == DmfType::Infinite,
                                 "x^3+y^3 is a D4 normal form; the d>2 table contains no D rows"));
    return rep;
}

EntryReport report_moore_module(std::size_t idx, const CorpusSettings& s) {
    EntryReport rep{"moore.N" + std::to_string(idx + 1), {}};
    const MooreBatch batch = moore_scan(48, s.p_override);
    if (idx >= batch.triples.size()) {
        rep.checks.push_back(fail("moore: batch has enough triples", "index out of range"));
        return rep;
    }
    const CoverModule n = moore_module(batch, batch.triples[idx]);
    rep.checks.push_back(verdict("validity: phi^3 == -f*I", true, "validated at construction"));
    rep.checks.push_back(verdict("moore: flat is reduced", is_reduced(flat(n)), "entries in the maximal ideal"));
    rep.checks.push_back(verdict("ulrich: rank_over_cover == 1", rank_over_cover(n) == 1, "det phi = unit * f"));
    rep.checks.push_back(verdict("ulrich: verdict is Ulrich (d = 3 <= ord f = 3)",
                                 is_ulrich(n).status == UlrichStatus::Ulrich, "reduced flat of a cover module"));
    rep.checks.push_back(check_mu_independence(rep.entry, n, s));
    rep.checks.push_back(check_flat_sharp(rep.entry, n));
    return rep;
}

EntryReport report_ulrich(std::uint32_t a, const CorpusSettings& s) {
    EntryReport rep{"ulrich.a" + std::to_string(a), {}};
    const UlrichFamily u = ulrich_family(a, s.p_override);
    rep.checks.push_back(check_valid("ulrich validity", u.mf));
    rep.checks.push_back(check_reduced("ulrich validity", u.mf, true));
    const UlrichVerdict v = is_ulrich(u.module);
    rep.checks.push_back(verdict("ulrich: module verdict is Ulrich", v.status == UlrichStatus::Ulrich,
                                 "d = a <= ord(y^(a+1)) = a+1 and phi is reduced"));
    rep.checks.push_back(verdict("ulrich: num_generators == rank_S == " + std::to_string(a),
                                 num_generators(u.module) == a && u.module.rank_S() == a,
                                 "phi has constant rank 0"));
    rep.checks.push_back(verdict("ulrich: rank_over_cover == 1", rank_over_cover(u.module) == 1,
                                 "det of the cyclic matrix is a unit times y^(a+1)"));
    // flat(module) decomposes into the shifts of (y^2, y, ..., y)
    DecomposeOptions dopt;
    dopt.seed = s.seed;
    const int N = s.truncation.value_or(8);
    const MatrixFactorization fl = flat(u.module);
    const DecompositionResult r = decompose(fl, N, s.cert_degree, dopt);
    std::string detail;
    bool split_ok = r.status == SplitStatus::CertifiedSplit;
    if (split_ok) {
        std::vector<MatrixFactorization> expected;
        for (std::uint32_t k = 0; k < a; ++k) expected.push_back(shift(u.mf, k));
        split_ok = summands_match(r.summands, expected, N, s, detail);
    } else {
        detail = "no certified split";
    }
    rep.checks.push_back(verdict("ulrich: flat(module) decomposes into the shifts of (y^2, y, ..., y)", split_ok,
                                 detail, split_ok ? split_certificate_to_json(fl, r) : Json(nullptr)));
    rep.checks.push_back(check_mu_independence(rep.entry, u.module, s));
    rep.checks.push_back(check_flat_sharp(rep.entry, u.module));
    rep.checks.push_back(check_sharp_flat(rep.entry + ".mf", u.mf));
    rep.checks.push_back(check_equivariant(rep.entry + ".mf", u.mf, s));
    return rep;
}

EntryReport report_e6d4_B(const CorpusSettings& s) {
    EntryReport rep{"e6d4.B", {}};
    const CoverModule b = e6_d4_B(s.p_override);
    rep.checks.push_back(verdict("validity: phi^4 == -x^3*I", true, "validated at construction"));
    rep.checks.push_back(verdict("d4b: num_generators == 3", num_generators(b) == 3,
                                 "B is minimally presented by the 3x3 beta"));
    rep.checks.push_back(verdict("d4b: phi is not reduced", !b.phi().is_reduced(), "a unit entry is present"));
    const UlrichVerdict v = is_ulrich(b);
    rep.checks.push_back(verdict("d4b: verdict NotApplicable with (non-reduced, mu < rank)",
                                 v.status == UlrichStatus::NotApplicable && !v.applicable && !v.reduced &&
                                     !v.mu_equals_rank,
                                 "d = 4 > ord(x^3) = 3; mu = 3 < rank 4"));
    rep.checks.push_back(check_mu_independence("e6d4.B", b, s));
    rep.checks.push_back(check_flat_sharp("e6d4.B", b));
    rep.checks.push_back(check_equivariant("e6d4.B_flat", flat(b), s));
    return rep;
}

const std::vector<std::pair<std::string, bool>>& entry_table() {
    // name -> emits an object (vs check-only family pseudo-entry)
    static const std::vector<std::pair<std::string, bool>> table = [] {
        std::vector<std::pair<std::string, bool>> t;
        for (std::uint32_t k = 1; k <= 6; ++k) t.emplace_back("dinfty.X" + std::to_string(k), true);
        t.emplace_back("dinfty.family", false);
        t.emplace_back("e6.M1", true);
        t.emplace_back("e6.M1_flat", true);
        t.emplace_back("e6.P1", true);
        t.emplace_back("e6.X_alpha", true);
        t.emplace_back("e6.X_beta", true);
        t.emplace_back("e6.X_phi1", true);
        t.emplace_back("e6.X_phi2", true);
        t.emplace_back("e6.X_psi1", true);
        t.emplace_back("e6.X_xi", true);
        t.emplace_back("e6.family", false);
        t.emplace_back("e6d4.B", true);
        t.emplace_back("moore.N1", true);
        t.emplace_back("moore.N2", true);
        t.emplace_back("moore.N3", true);
        t.emplace_back("moore.batch", true);
        t.emplace_back("moore.family", false);
        for (std::uint32_t a = 2; a <= 5; ++a) t.emplace_back("ulrich.a" + std::to_string(a), true);
        std::sort(t.begin(), t.end());
        return t;
    }();
    return table;
}

}  // namespace

std::vector<std::string> corpus_entry_names() {
    std::vector<std::string> names;
    for (const auto& [n, emits] : entry_table()) names.push_back(n);
    return names;
}

bool corpus_has_entry(const std::string& name) {
    for (const auto& [n, emits] : entry_table())
        if (n == name) return true;
    return false;
}

Json corpus_emit(const std::string& name, const CorpusSettings& s) {
    const E6Corpus e6 = e6_d3(s.p_override);
    if (name == "e6.M1") return module_to_json(e6.M1);
    if (name == "e6.M1_flat") return mf_to_json(e6.M1_flat);
    for (const auto& [nm, x] : e6.list())
        if (name == "e6." + nm) return mf_to_json(*x);
    if (name.rfind("dinfty.X", 0) == 0) {
        const std::uint32_t k = static_cast<std::uint32_t>(std::stoul(name.substr(8)));
        return mf_to_json(dinfty(k, s.p_override));
    }
    if (name.rfind("ulrich.a", 0) == 0) {
        const std::uint32_t a = static_cast<std::uint32_t>(std::stoul(name.substr(8)));
        const UlrichFamily u = ulrich_family(a, s.p_override);
        Json j;
        j["mf"] = mf_to_json(u.mf);
        j["module"] = module_to_json(u.module);
        return j;
    }
    if (name == "e6d4.B") return module_to_json(e6_d4_B(s.p_override));
    if (name == "moore.batch") {
        const MooreBatch b = moore_scan(48, s.p_override);
        Json j;
        j["p"] = b.p;
        Json triples = Json::array();
        for (const auto& t : b.triples) triples.push_back(Json::array({t.a, t.b, t.c}));
        j["triples"] = std::move(triples);
        return j;
    }
    if (name.rfind("moore.N", 0) == 0) {
        const std::size_t idx = std::stoul(name.substr(7)) - 1;
        const MooreBatch b = moore_scan(48, s.p_override);
        if (idx >= b.triples.size()) throw SchemaError("moore batch does not have entry " + name);
        return module_to_json(moore_module(b, b.triples[idx]));
    }
    throw SchemaError("unknown or non-emittable corpus entry: " + name);
}

EntryReport corpus_check_entry(const std::string& name, const CorpusSettings& s) {
    if (name == "e6.family") return report_e6_family(s);
    if (name == "e6.M1") return report_e6_m1(s);
    if (name == "dinfty.family") return report_dinfty_family(s);
    if (name == "moore.family") return report_moore_family(s);
    if (name == "e6d4.B") return report_e6d4_B(s);
    if (name.rfind("moore.N", 0) == 0) return report_moore_module(std::stoul(name.substr(7)) - 1, s);
    if (name == "moore.batch") {
        EntryReport rep{name, {}};
        const MooreBatch b = moore_scan(48, s.p_override);
        rep.checks.push_back(verdict("moore: batch is deterministic and nonempty", !b.triples.empty(),
                                     "p = " + std::to_string(b.p)));
        return rep;
    }
    if (name.rfind("dinfty.X", 0) == 0)
        return report_dinfty_entry(static_cast<std::uint32_t>(std::stoul(name.substr(8))), s);
    if (name.rfind("ulrich.a", 0) == 0)
        return report_ulrich(static_cast<std::uint32_t>(std::stoul(name.substr(8))), s);
    const E6Corpus e6 = e6_d3(s.p_override);
    if (name == "e6.M1_flat") {
        EntryReport rep{name, {}};
        rep.checks.push_back(check_valid("validity", e6.M1_flat));
        rep.checks.push_back(check_order("order", e6.M1_flat, 1, 8, s));
        rep.checks.push_back(check_sharp_flat(name, e6.M1_flat));
        rep.checks.push_back(check_equivariant(name, e6.M1_flat, s));
        return rep;
    }
    for (const auto& [nm, x] : e6.list()) {
        if (name != "e6." + nm) continue;
        const bool reduced = (nm == "X_beta");
        return report_e6_mf(name, *x, reduced, s);
    }
    throw SchemaError("unknown corpus entry: " + name);
}

std::vector<EntryReport> corpus_check_all(const CorpusSettings& s) {
    std::vector<EntryReport> out;
    for (const auto& name : corpus_entry_names()) out.push_back(corpus_check_entry(name, s));
    return out;
}

bool EntryReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const EntryCheck& c) { return c.pass; });
}

}  // namespace mfkit
