#include "mfkit/io.hpp"

#include <sstream>

namespace mfkit {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw SchemaError(what);
}

std::uint64_t get_u64(const Json& j, const char* key) {
    require(j.is_object() && j.contains(key), std::string("missing field \"") + key + "\"");
    require(j[key].is_number_unsigned() || j[key].is_number_integer(), std::string("field \"") + key + "\" must be an integer");
    return j[key].get<std::uint64_t>();
}

RingPtr ring_from_json(const Json& j) {
    const RootedField f = field_from_json(j.at("field"));
    require(j.contains("vars") && j["vars"].is_array() && !j["vars"].empty(), "missing or empty \"vars\" list");
    std::vector<std::string> vars;
    for (const auto& v : j["vars"]) {
        require(v.is_string(), "variable names must be strings");
        vars.push_back(v.get<std::string>());
    }
    return make_ring(f, std::move(vars));
}

}  // namespace

Json field_to_json(const RootedField& f) {
    Json j;
    j["p"] = f.p;
    j["d"] = f.d;
    j["zeta"] = f.zeta;
    return j;
}

RootedField field_from_json(const Json& j) {
    require(j.is_object(), "field header must be an object");
    const std::uint64_t p = get_u64(j, "p");
    const std::uint64_t d = get_u64(j, "d");
    const std::uint64_t zeta = get_u64(j, "zeta");
    require(d >= 2 && d < (1u << 20), "field arity out of range");
    RootedField f = make_field(static_cast<std::uint32_t>(d), p);
    if (zeta != f.zeta) {
        // honor the recorded root if it is admissible
        require(zeta > 0 && zeta < p, "zeta out of range");
        require(f.pow(zeta, 2 * d) == 1 && f.pow(zeta, d) == p - 1, "zeta does not have order exactly 2d");
        for (std::uint64_t k = 1; k < 2 * d; ++k)
            require(!(2 * d % k == 0 && f.pow(zeta, k) == 1), "zeta does not have order exactly 2d");
        f.zeta = zeta;
        f.omega = f.mul(zeta, zeta);
        f.mu = zeta;
    }
    return f;
}

Json poly_to_json(const Poly& p) {
    Json j = Json::array();
    for (const auto& t : p.terms()) {
        Json term = Json::array();
        term.push_back(t.coeff);
        Json exps = Json::array();
        for (auto e : t.exps) exps.push_back(e);
        term.push_back(std::move(exps));
        j.push_back(std::move(term));
    }
    return j;
}

Poly poly_from_json(const RingPtr& ring, const Json& j) {
    require(j.is_array(), "a polynomial must be a list of terms");
    std::vector<Term> terms;
    for (const auto& t : j) {
        require(t.is_array() && t.size() == 2, "a term must be [coeff, [exponents]]");
        require(t[0].is_number_unsigned() || t[0].is_number_integer(), "term coefficient must be an integer");
        const std::uint64_t c = t[0].get<std::uint64_t>();
        require(c < ring->field.p, "coefficient not a canonical residue in [0, p)");
        require(t[1].is_array() && t[1].size() == ring->vars.size(),
                "exponent vector length must equal the number of variables");
        Exps e;
        for (const auto& x : t[1]) {
            require(x.is_number_unsigned() || x.is_number_integer(), "exponents must be integers");
            e.push_back(x.get<std::uint32_t>());
        }
        terms.push_back({std::move(e), c});
    }
    return Poly::from_terms(ring, std::move(terms));
}

Json matrix_to_json(const PolyMatrix& m) {
    Json j = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(poly_to_json(m.at(r, c)));
        j.push_back(std::move(row));
    }
    return j;
}

PolyMatrix matrix_from_json(const RingPtr& ring, const Json& j) {
    require(j.is_array() && !j.empty(), "a matrix must be a nonempty list of rows");
    std::vector<std::vector<Poly>> rows;
    for (const auto& r : j) {
        require(r.is_array(), "matrix rows must be lists");
        std::vector<Poly> row;
        for (const auto& e : r) row.push_back(poly_from_json(ring, e));
        rows.push_back(std::move(row));
    }
    return PolyMatrix::from_rows(ring, std::move(rows));
}

Json mf_to_json(const MatrixFactorization& x) {
    Json j;
    j["field"] = field_to_json(x.ring()->field);
    j["vars"] = x.ring()->vars;
    j["f"] = poly_to_json(x.f());
    j["d"] = x.arity();
    j["size"] = x.size();
    Json factors = Json::array();
    for (const auto& m : x.factors()) factors.push_back(matrix_to_json(m));
    j["factors"] = std::move(factors);
    return j;
}

MatrixFactorization mf_from_json(const Json& j) {
    require(j.is_object(), "a matrix factorization must be an object");
    const RingPtr ring = ring_from_json(j);
    require(j.contains("f"), "missing \"f\"");
    const Poly f = poly_from_json(ring, j["f"]);
    require(j.contains("factors") && j["factors"].is_array(), "missing \"factors\" list");
    std::vector<PolyMatrix> factors;
    for (const auto& m : j["factors"]) factors.push_back(matrix_from_json(ring, m));
    if (j.contains("d")) require(get_u64(j, "d") == factors.size(), "\"d\" does not match the factor count");
    MatrixFactorization x = MatrixFactorization::make(f, std::move(factors));
    if (j.contains("size")) require(get_u64(j, "size") == x.size(), "\"size\" does not match the factors");
    return x;
}

Json module_to_json(const CoverModule& n) {
    Json j;
    j["field"] = field_to_json(n.ring()->field);
    j["vars"] = n.ring()->vars;
    j["f"] = poly_to_json(n.f());
    j["d"] = n.arity();
    j["rank"] = n.rank_S();
    j["phi"] = matrix_to_json(n.phi());
    return j;
}

CoverModule module_from_json(const Json& j) {
    require(j.is_object(), "a cover module must be an object");
    const RingPtr ring = ring_from_json(j);
    require(j.contains("f") && j.contains("phi"), "missing \"f\" or \"phi\"");
    const Poly f = poly_from_json(ring, j["f"]);
    PolyMatrix phi = matrix_from_json(ring, j["phi"]);
    if (j.contains("d")) require(get_u64(j, "d") == ring->field.d, "\"d\" does not match the field header");
    if (j.contains("rank")) require(get_u64(j, "rank") == phi.rows(), "\"rank\" does not match phi");
    return CoverModule::make(f, std::move(phi));
}

Json sigma_module_to_json(const SigmaModule& m) {
    Json j = module_to_json(m.base());
    j["sigma"] = matrix_to_json(m.sigma());
    return j;
}

SigmaModule sigma_module_from_json(const Json& j) {
    CoverModule base = module_from_json(j);
    require(j.contains("sigma"), "missing \"sigma\"");
    PolyMatrix sigma = matrix_from_json(base.ring(), j["sigma"]);
    return SigmaModule::make(std::move(base), std::move(sigma));
}

Json iso_certificate_to_json(const MatrixFactorization& x, const MatrixFactorization& y, const IsoCertificate& c) {
    Json j;
    j["kind"] = "iso";
    j["X"] = mf_to_json(x);
    j["Y"] = mf_to_json(y);
    Json fw = Json::array(), bw = Json::array();
    for (const auto& m : c.forward) fw.push_back(matrix_to_json(m));
    for (const auto& m : c.inverse) bw.push_back(matrix_to_json(m));
    j["forward"] = std::move(fw);
    j["inverse"] = std::move(bw);
    return j;
}

Json split_certificate_to_json(const MatrixFactorization& x, const DecompositionResult& r) {
    Json j;
    j["kind"] = "split";
    j["level"] = Json{{"N", r.N}, {"D", r.D}};
    j["X"] = mf_to_json(x);
    Json summands = Json::array();
    for (const auto& s : r.summands) summands.push_back(mf_to_json(s));
    j["summands"] = std::move(summands);
    Json bc = Json::array();
    for (const auto& m : r.base_change) bc.push_back(matrix_to_json(m));
    j["base_change"] = std::move(bc);
    return j;
}

Json sharp_flat_certificate_to_json(const MatrixFactorization& x, const std::vector<PolyMatrix>& us) {
    Json j;
    j["kind"] = "sharp_flat";
    j["X"] = mf_to_json(x);
    Json u = Json::array();
    for (const auto& m : us) u.push_back(matrix_to_json(m));
    j["U"] = std::move(u);
    return j;
}

Json flat_sharp_certificate_to_json(const CoverModule& n, const SplitCertificate& c) {
    Json j;
    j["kind"] = "flat_sharp";
    j["N"] = module_to_json(n);
    j["g"] = matrix_to_json(c.g);
    j["s"] = matrix_to_json(c.s);
    return j;
}

namespace {

bool recheck_iso(const Json& cert, std::string& detail) {
    const MatrixFactorization x = mf_from_json(cert.at("X"));
    const MatrixFactorization y = mf_from_json(cert.at("Y"));
    std::vector<PolyMatrix> fw, bw;
    for (const auto& m : cert.at("forward")) fw.push_back(matrix_from_json(x.ring(), m));
    for (const auto& m : cert.at("inverse")) bw.push_back(matrix_from_json(x.ring(), m));
    const std::size_t d = x.arity();
    if (fw.size() != d || bw.size() != d) {
        detail = "certificate tuple length mismatch";
        return false;
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (fw[i] * x.factor(i) != y.factor(i) * fw[(i + 1) % d]) {
            detail = "forward tuple is not a morphism";
            return false;
        }
        const PolyMatrix id = PolyMatrix::identity(x.ring(), x.size());
        if (fw[i] * bw[i] != id || bw[i] * fw[i] != id) {
            detail = "inverse is not two-sided exact";
            return false;
        }
    }
    detail = "iso certificate verified exactly";
    return true;
}

bool recheck_split(const Json& cert, std::string& detail) {
    const MatrixFactorization x = mf_from_json(cert.at("X"));
    std::vector<MatrixFactorization> summands;
    for (const auto& s : cert.at("summands")) summands.push_back(mf_from_json(s));
    if (summands.empty()) {
        detail = "no summands";
        return false;
    }
    MatrixFactorization target = summands[0];
    for (std::size_t k = 1; k < summands.size(); ++k) target = direct_sum(target, summands[k]);
    std::vector<PolyMatrix> bc;
    for (const auto& m : cert.at("base_change")) bc.push_back(matrix_from_json(x.ring(), m));
    const std::size_t d = x.arity();
    if (bc.size() != d || target.size() != x.size()) {
        detail = "base change shape mismatch";
        return false;
    }
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<std::uint64_t> scratch;
        if (!constant_matrix_inverse(x.ring()->field, bc[i].constant_part(), bc[i].rows(), scratch)) {
            detail = "base change is not invertible over the local ring";
            return false;
        }
        if (bc[i] * target.factor(i) != x.factor(i) * bc[(i + 1) % d]) {
            detail = "base change does not intertwine the factors";
            return false;
        }
    }
    detail = "split certificate verified exactly (summand products validated on load)";
    return true;
}

bool recheck_sharp_flat(const Json& cert, std::string& detail) {
    const MatrixFactorization x = mf_from_json(cert.at("X"));
    std::vector<PolyMatrix> us;
    for (const auto& m : cert.at("U")) us.push_back(matrix_from_json(x.ring(), m));
    const MatrixFactorization lhs = flat(sharp(x));
    const MatrixFactorization rhs = sharp_flat_target(x);
    const std::size_t d = x.arity();
    if (us.size() != d) {
        detail = "certificate tuple length mismatch";
        return false;
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (us[i] * lhs.factor(i) != rhs.factor(i) * us[(i + 1) % d]) {
            detail = "U does not conjugate flat(sharp(X)) onto the shift sum";
            return false;
        }
        std::vector<std::uint64_t> scratch;
        if (!constant_matrix_inverse(x.ring()->field, us[i].constant_part(), us[i].rows(), scratch)) {
            detail = "U is not invertible";
            return false;
        }
    }
    detail = "sharp-flat certificate verified exactly";
    return true;
}

bool recheck_flat_sharp(const Json& cert, std::string& detail) {
    const CoverModule n = module_from_json(cert.at("N"));
    const PolyMatrix g = matrix_from_json(n.ring(), cert.at("g"));
    const PolyMatrix s = matrix_from_json(n.ring(), cert.at("s"));
    const auto& F = n.ring()->field;
    const std::size_t d = F.d, r = n.rank_S();
    if (g.rows() != d * r || s.rows() != d * r) {
        detail = "certificate shape mismatch";
        return false;
    }
    if (g * s != PolyMatrix::identity(n.ring(), d * r)) {
        detail = "g*s != I";
        return false;
    }
    const CoverModule both = sharp(flat(n));
    PolyMatrix delta(n.ring(), d * r, d * r);
    for (std::size_t k = 0; k < d; ++k) {
        const PolyMatrix tw = n.phi().scaled(F.pow(F.omega, k));
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) delta.set(k * r + a, k * r + b, tw.at(a, b));
    }
    if (g * both.phi() != delta * g) {
        detail = "g does not intertwine the z-actions";
        return false;
    }
    detail = "flat-sharp certificate verified exactly";
    return true;
}

}  // namespace

bool recheck_certificate(const Json& cert, std::string& detail) {
    if (!cert.is_object() || !cert.contains("kind")) {
        detail = "certificate without a kind";
        return false;
    }
    const std::string kind = cert["kind"].get<std::string>();
    if (kind == "iso") return recheck_iso(cert, detail);
    if (kind == "split") return recheck_split(cert, detail);
    if (kind == "sharp_flat") return recheck_sharp_flat(cert, detail);
    if (kind == "flat_sharp") return recheck_flat_sharp(cert, detail);
    detail = "unknown certificate kind: " + kind;
    return false;
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace mfkit
