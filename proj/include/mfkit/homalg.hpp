#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mfkit/cover.hpp"
#include "mfkit/mf.hpp"

namespace mfkit {

struct NotMorphismError : Error {
    using Error::Error;
};
struct NoScalarPartError : Error {
    using Error::Error;
};
struct RootMissingError : Error {
    using Error::Error;
};
struct UndecidedError : Error {
    using Error::Error;
};

// default truncation degree: 2*deg(f) + 2
int default_truncation(const Poly& f);

// k-basis of the morphism tuples X -> Y with entries of degree < N.
// Equation i is enforced modulo n^(N + m_i), m_i the minimum entry order of
// its two coefficient matrices, so truncations of exact morphisms always lie
// in the space and NotIsoModN below stays conclusive.
struct HomSpace {
    std::vector<std::vector<PolyMatrix>> basis;
    int truncation = 0;
    std::size_t dim() const { return basis.size(); }
};

HomSpace hom_space(const MatrixFactorization& x, const MatrixFactorization& y, int N);
// endomorphisms of a cover module: alpha with alpha*phi = phi*alpha (mod-N sense)
HomSpace module_end_space(const CoverModule& n, int N);

enum class IsoStatus { CertifiedIso, IsoModN, NotIsoModN, Undecided };

struct IsoCertificate {
    std::vector<PolyMatrix> forward;  // exact morphism tuple X -> Y
    std::vector<PolyMatrix> inverse;  // exact two-sided inverse tuple
};

struct IsoVerdict {
    IsoStatus status = IsoStatus::Undecided;
    std::optional<IsoCertificate> certificate;      // present iff CertifiedIso
    std::vector<PolyMatrix> mod_witness;            // present iff IsoModN
    int truncation = 0;
};

struct IsoOptions {
    std::uint64_t seed = 0;
    int random_tries = 64;
    // exhaustive projective scan budget for the constant-part space
    std::uint64_t scan_cap = 4'000'000;
    int exact_degree_cap = 4;  // degree ladder for exact certificate upgrade
};

IsoVerdict is_isomorphic(const MatrixFactorization& x, const MatrixFactorization& y, int N, IsoOptions opt = {});

// smallest divisor k of d with T^k X isomorphic to X at level N; throws
// UndecidedError if a needed pairwise verdict is inconclusive
int order_of(const MatrixFactorization& x, int N, IsoOptions opt = {});

enum class SplitStatus { CertifiedSplit, NoSplitFoundAtLevel };

struct DecompositionResult {
    SplitStatus status = SplitStatus::NoSplitFoundAtLevel;
    std::vector<MatrixFactorization> summands;
    // exact morphism V: blockdiag(summands) -> X with invertible constant
    // parts; empty for NoSplitFoundAtLevel on an unsplit input
    std::vector<PolyMatrix> base_change;
    int N = 0, D = 0;
};

struct DecomposeOptions {
    std::uint64_t seed = 0;
    int random_elements = 10;  // idempotent attempts per recursion level
};

DecompositionResult decompose(const MatrixFactorization& x, int N, int D, DecomposeOptions opt = {});

struct ModuleDecompositionResult {
    SplitStatus status = SplitStatus::NoSplitFoundAtLevel;
    std::vector<CoverModule> summands;
    std::vector<PolyMatrix> base_change;  // single-entry tuple when certified
    int N = 0, D = 0;
};

ModuleDecompositionResult decompose_module(const CoverModule& n, int N, int D, DecomposeOptions opt = {});

struct PeriodicNormalForm {
    // k factors with (f1'...fk')^(d/k) = f*I, verified exactly
    std::vector<PolyMatrix> factors;
    // morphism X -> the k-periodic tuple, valid modulo n^cert_level
    std::vector<PolyMatrix> certificate;
    int cert_level = 0;
};

// alpha: exact morphism X -> T^k X; k | d; X caller-asserted indecomposable
PeriodicNormalForm periodic_normal_form(const MatrixFactorization& x, std::uint32_t k,
                                        const std::vector<PolyMatrix>& alpha, int N);

// order-1 specialization: a single phi with phi^d = f*I and X = (phi,...,phi)
PolyMatrix symmetric_form(const MatrixFactorization& x, const std::vector<PolyMatrix>& alpha, int N);

// divisor contract: the computed order must divide d
int order_bound_check(const MatrixFactorization& x, int N, IsoOptions opt = {});

}  // namespace mfkit
