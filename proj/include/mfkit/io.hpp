#pragma once

#include <string>

#include <json.hpp>

#include "mfkit/cover.hpp"
#include "mfkit/homalg.hpp"
#include "mfkit/mf.hpp"

namespace mfkit {

struct SchemaError : Error {
    using Error::Error;
};

using Json = nlohmann::ordered_json;

// field header {"p": 7, "d": 3, "zeta": 3}
Json field_to_json(const RootedField& f);
RootedField field_from_json(const Json& j);

// a term is [c, [e1,...,er]]; a Poly is a list of terms in canonical order
Json poly_to_json(const Poly& p);
Poly poly_from_json(const RingPtr& ring, const Json& j);

// row-major list of rows
Json matrix_to_json(const PolyMatrix& m);
PolyMatrix matrix_from_json(const RingPtr& ring, const Json& j);

Json mf_to_json(const MatrixFactorization& x);
MatrixFactorization mf_from_json(const Json& j);

Json module_to_json(const CoverModule& n);
CoverModule module_from_json(const Json& j);

Json sigma_module_to_json(const SigmaModule& m);
SigmaModule sigma_module_from_json(const Json& j);

// certificates, embedded with their objects so they re-verify standalone
Json iso_certificate_to_json(const MatrixFactorization& x, const MatrixFactorization& y, const IsoCertificate& c);
Json split_certificate_to_json(const MatrixFactorization& x, const DecompositionResult& r);
Json sharp_flat_certificate_to_json(const MatrixFactorization& x, const std::vector<PolyMatrix>& us);
Json flat_sharp_certificate_to_json(const CoverModule& n, const SplitCertificate& c);

// re-verify an embedded certificate using only exact matrix arithmetic
bool recheck_certificate(const Json& cert, std::string& detail);

std::string dump_canonical(const Json& j);
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace mfkit
