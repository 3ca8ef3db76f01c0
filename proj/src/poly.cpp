#include "mfkit/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace mfkit {

RingPtr make_ring(const RootedField& field, std::vector<std::string> vars) {
    if (vars.empty()) throw VariableMismatchError("a polynomial ring needs at least one variable");
    for (const auto& v : vars)
        if (v.empty()) throw VariableMismatchError("empty variable name");
    auto r = std::make_shared<PolyRing>();
    r->field = field;
    r->vars = std::move(vars);
    return r;
}

int compare_monomials(const Exps& a, const Exps& b) {
    const std::uint64_t da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
    const std::uint64_t db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

namespace {

struct MonoDescending {
    bool operator()(const Exps& a, const Exps& b) const { return compare_monomials(a, b) > 0; }
};

int term_degree(const Term& t) {
    return static_cast<int>(std::accumulate(t.exps.begin(), t.exps.end(), std::uint64_t{0}));
}

}  // namespace

void Poly::check_same_ring(const Poly& o) const {
    if (!ring_ || !o.ring_) throw VariableMismatchError("operation on uninitialized polynomial");
    if (ring_ != o.ring_ && !(*ring_ == *o.ring_))
        throw VariableMismatchError("polynomials live in different rings");
}

Poly Poly::zero(RingPtr ring) {
    Poly p;
    p.ring_ = std::move(ring);
    return p;
}

Poly Poly::constant(RingPtr ring, std::uint64_t c) {
    Poly p = zero(ring);
    c %= p.ring_->field.p;
    if (c != 0) p.terms_.push_back({Exps(p.ring_->vars.size(), 0), c});
    return p;
}

Poly Poly::constant_signed(RingPtr ring, long long c) {
    const std::uint64_t r = ring->field.reduce_signed(c);
    return constant(std::move(ring), r);
}

Poly Poly::variable(RingPtr ring, std::size_t index) {
    if (index >= ring->vars.size()) throw VariableMismatchError("variable index out of range");
    Exps e(ring->vars.size(), 0);
    e[index] = 1;
    return monomial(std::move(ring), std::move(e), 1);
}

Poly Poly::monomial(RingPtr ring, Exps exps, std::uint64_t c) {
    if (exps.size() != ring->vars.size()) throw VariableMismatchError("exponent vector length mismatch");
    Poly p = zero(std::move(ring));
    c %= p.ring_->field.p;
    if (c != 0) p.terms_.push_back({std::move(exps), c});
    return p;
}

Poly Poly::from_terms(RingPtr ring, std::vector<Term> terms) {
    std::map<Exps, std::uint64_t, MonoDescending> acc;
    const auto& F = ring->field;
    for (auto& t : terms) {
        if (t.exps.size() != ring->vars.size()) throw VariableMismatchError("exponent vector length mismatch");
        auto [it, inserted] = acc.try_emplace(std::move(t.exps), t.coeff % F.p);
        if (!inserted) it->second = F.add(it->second, t.coeff);
    }
    Poly p = zero(std::move(ring));
    for (auto& [e, c] : acc)
        if (c != 0) p.terms_.push_back({e, c});
    return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && term_degree(terms_[0]) == 0); }

std::uint64_t Poly::constant_term() const {
    if (terms_.empty()) return 0;
    const Term& last = terms_.back();
    return term_degree(last) == 0 ? last.coeff : 0;
}

std::optional<int> Poly::ord() const {
    if (terms_.empty()) return std::nullopt;
    return term_degree(terms_.back());
}

int Poly::total_degree() const { return terms_.empty() ? -1 : term_degree(terms_.front()); }

Poly Poly::operator+(const Poly& o) const {
    check_same_ring(o);
    std::vector<Term> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return from_terms(ring_, std::move(all));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    Poly p = *this;
    for (auto& t : p.terms_) t.coeff = ring_->field.neg(t.coeff);
    return p;
}

Poly Poly::scaled(std::uint64_t c) const {
    const auto& F = ring_->field;
    c %= F.p;
    Poly p = zero(ring_);
    if (c == 0) return p;
    p.terms_ = terms_;
    for (auto& t : p.terms_) t.coeff = F.mul(t.coeff, c);
    return p;
}

Poly Poly::operator*(const Poly& o) const {
    check_same_ring(o);
    const auto& F = ring_->field;
    std::map<Exps, std::uint64_t, MonoDescending> acc;
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            Exps e(a.exps.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exps[i] + b.exps[i];
            const std::uint64_t c = F.mul(a.coeff, b.coeff);
            auto [it, inserted] = acc.try_emplace(std::move(e), c);
            if (!inserted) it->second = F.add(it->second, c);
        }
    }
    Poly p = zero(ring_);
    for (auto& [e, c] : acc)
        if (c != 0) p.terms_.push_back({e, c});
    return p;
}

Poly Poly::truncated(int degree_bound) const {
    Poly p = zero(ring_);
    for (const auto& t : terms_)
        if (term_degree(t) < degree_bound) p.terms_.push_back(t);
    return p;
}

std::optional<Poly> Poly::divided_exactly_by(const Poly& divisor) const {
    check_same_ring(divisor);
    if (divisor.is_zero()) throw Error("division by the zero polynomial");
    const auto& F = ring_->field;
    const Term& lead = divisor.terms_.front();
    Poly rem = *this;
    std::vector<Term> quot;
    // single-divisor long division: if *this is a multiple of divisor, every
    // leading term of the remainder stays divisible by lead(divisor)
    while (!rem.is_zero()) {
        const Term& lt = rem.terms_.front();
        Exps q(lt.exps.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (lt.exps[i] < lead.exps[i]) return std::nullopt;
            q[i] = lt.exps[i] - lead.exps[i];
        }
        const std::uint64_t c = F.div(lt.coeff, lead.coeff);
        quot.push_back({q, c});
        rem = rem - divisor * monomial(ring_, std::move(q), c);
    }
    return from_terms(ring_, std::move(quot));
}

Poly Poly::monic() const {
    if (terms_.empty()) return *this;
    return scaled(ring_->field.inv(terms_.front().coeff));
}

bool Poly::operator==(const Poly& o) const {
    check_same_ring(o);
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].exps != o.terms_[i].exps || terms_[i].coeff != o.terms_[i].coeff) return false;
    return true;
}

int Poly::compare(const Poly& a, const Poly& b) {
    const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int c = compare_monomials(a.terms_[i].exps, b.terms_[i].exps);
        if (c != 0) return c;
        if (a.terms_[i].coeff != b.terms_[i].coeff) return a.terms_[i].coeff < b.terms_[i].coeff ? -1 : 1;
    }
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
    return 0;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        const bool has_vars = term_degree(t) > 0;
        bool printed = false;
        if (t.coeff != 1 || !has_vars) {
            os << t.coeff;
            printed = true;
        }
        for (std::size_t i = 0; i < t.exps.size(); ++i) {
            if (t.exps[i] == 0) continue;
            if (printed) os << "*";
            os << ring_->vars[i];
            if (t.exps[i] > 1) os << "^" << t.exps[i];
            printed = true;
        }
    }
    return os.str();
}

namespace {

struct Scanner {
    std::string_view s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
};

}  // namespace

Poly Poly::parse(RingPtr ring, std::string_view text) {
    Scanner sc{text};
    const auto& F = ring->field;
    Poly result = Poly::zero(ring);
    bool expect_term = true;
    std::uint64_t sign = 1;
    if (sc.peek() == '-') {
        sign = F.p - 1;
        ++sc.i;
    } else if (sc.peek() == '+') {
        ++sc.i;
    }
    while (!sc.done()) {
        // one term: number and/or var^exp factors joined by optional '*'
        std::uint64_t coeff = 1;
        Exps exps(ring->vars.size(), 0);
        bool saw_factor = false;
        for (;;) {
            sc.skip_ws();
            if (sc.i < sc.s.size() && std::isdigit(static_cast<unsigned char>(sc.s[sc.i]))) {
                std::uint64_t v = 0;
                while (sc.i < sc.s.size() && std::isdigit(static_cast<unsigned char>(sc.s[sc.i]))) {
                    v = v * 10 + static_cast<std::uint64_t>(sc.s[sc.i] - '0');
                    v %= F.p;  // keep reduced; exponents are parsed separately
                    ++sc.i;
                }
                coeff = F.mul(coeff, v % F.p);
                saw_factor = true;
            } else if (sc.i < sc.s.size() && (std::isalpha(static_cast<unsigned char>(sc.s[sc.i])) || sc.s[sc.i] == '_')) {
                // longest-match variable name
                std::size_t best = ring->vars.size(), best_len = 0;
                for (std::size_t v = 0; v < ring->vars.size(); ++v) {
                    const auto& name = ring->vars[v];
                    if (name.size() > best_len && sc.s.substr(sc.i, name.size()) == name) {
                        best = v;
                        best_len = name.size();
                    }
                }
                if (best == ring->vars.size())
                    throw ParseError("unknown variable at '" + std::string(sc.s.substr(sc.i, 8)) + "'");
                sc.i += best_len;
                std::uint32_t e = 1;
                sc.skip_ws();
                if (sc.i < sc.s.size() && sc.s[sc.i] == '^') {
                    ++sc.i;
                    sc.skip_ws();
                    if (sc.i >= sc.s.size() || !std::isdigit(static_cast<unsigned char>(sc.s[sc.i])))
                        throw ParseError("expected exponent after '^'");
                    e = 0;
                    while (sc.i < sc.s.size() && std::isdigit(static_cast<unsigned char>(sc.s[sc.i])))
                        e = e * 10 + static_cast<std::uint32_t>(sc.s[sc.i++] - '0');
                }
                exps[best] += e;
                saw_factor = true;
            } else {
                break;
            }
            sc.skip_ws();
            if (sc.i < sc.s.size() && sc.s[sc.i] == '*') {
                ++sc.i;
                continue;
            }
        }
        if (!saw_factor) throw ParseError("expected a term in '" + std::string(text) + "'");
        result = result + Poly::monomial(ring, std::move(exps), F.mul(coeff, sign));
        expect_term = false;
        if (sc.done()) break;
        const char c = sc.peek();
        if (c == '+') {
            sign = 1;
            ++sc.i;
            expect_term = true;
        } else if (c == '-') {
            sign = F.p - 1;
            ++sc.i;
            expect_term = true;
        } else {
            throw ParseError("unexpected character '" + std::string(1, c) + "' in polynomial");
        }
    }
    if (expect_term) throw ParseError("trailing operator in '" + std::string(text) + "'");
    return result;
}

}  // namespace mfkit
