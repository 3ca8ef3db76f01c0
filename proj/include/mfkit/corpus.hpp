#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mfkit/homalg.hpp"
#include "mfkit/io.hpp"

namespace mfkit {

// E6 example: the complete list of 3-fold factorizations of y^4 over F_7,
// plus the module M1 whose flat decomposes into the shifts of (y^3, y, 1)
struct E6Corpus {
    RingPtr ring;
    MatrixFactorization P1, X_phi1, X_psi1, X_phi2, X_beta, X_alpha, X_xi;
    CoverModule M1;
    MatrixFactorization M1_flat;

    std::vector<std::pair<std::string, const MatrixFactorization*>> list() const;
};

E6Corpus e6_d3(std::optional<std::uint64_t> p_override = std::nullopt);

// Moore family for f = x^3 + y^3, d = 3: scans primes p == 1 (mod 6) for
// triples a^3+b^3+c^3 = 0 with abc != 0; small primes admit none, so the
// chosen p is recorded in the batch
struct MooreTriple {
    std::uint64_t a, b, c;
};

struct MooreBatch {
    RingPtr ring;   // x, y
    RingPtr ring3;  // x, y, z (for the determinant identity)
    std::uint64_t p = 0;
    std::vector<MooreTriple> triples;
};

MooreBatch moore_scan(std::size_t cap = 48, std::optional<std::uint64_t> p_override = std::nullopt);
CoverModule moore_module(const MooreBatch& batch, const MooreTriple& t);
// the 3x3 Moore matrix over k[x,y,z] with det = abc (x^3+y^3+z^3)
PolyMatrix moore_matrix_xyz(const MooreBatch& batch, const MooreTriple& t);

// D-infinity family: the printed 3-fold factorization of x^2 y
MatrixFactorization dinfty(std::uint32_t k, std::optional<std::uint64_t> p_override = std::nullopt);

// (y^2, y, ..., y) over f = y^(a+1) with a factors, plus the rank-a module
// whose flat decomposes into its shifts
struct UlrichFamily {
    RingPtr ring;
    MatrixFactorization mf;
    CoverModule module;
};

UlrichFamily ulrich_family(std::uint32_t a, std::optional<std::uint64_t> p_override = std::nullopt);

// the 4-fold-cover module B over f = x^3 showing d <= ord(f) is necessary
CoverModule e6_d4_B(std::optional<std::uint64_t> p_override = std::nullopt);

// ---------------------------------------------------------------------------
// expectation checking

struct CorpusSettings {
    std::uint64_t seed = 0;
    int cert_degree = 2;
    std::optional<int> truncation;  // overrides the per-check defaults
    std::optional<std::uint64_t> p_override;
};

struct EntryCheck {
    std::string assertion;
    bool pass = false;
    std::string detail;
    Json certificate;  // null unless the check produced one
};

struct EntryReport {
    std::string entry;
    std::vector<EntryCheck> checks;
    bool all_pass() const;
};

std::vector<std::string> corpus_entry_names();
bool corpus_has_entry(const std::string& name);
// canonical JSON of the named object (factorizations, modules, moore batch)
Json corpus_emit(const std::string& name, const CorpusSettings& settings = {});
EntryReport corpus_check_entry(const std::string& name, const CorpusSettings& settings = {});
std::vector<EntryReport> corpus_check_all(const CorpusSettings& settings = {});

}  // namespace mfkit
