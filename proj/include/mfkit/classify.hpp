#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfkit/field.hpp"

namespace mfkit {

enum class AdeTag { A, D, E6, E7, E8 };

// Normal-form descriptor. For d > 2 only the A(e) series y^e + x_2^2 + ... is
// relevant; for d = 2 the ADE tags cover the finite-type list. Inputs are
// descriptors: no change-of-variables recognition is attempted.
struct NormalForm {
    bool is_ade_tag = false;
    // A(e) series: y^e + squares
    std::uint32_t e = 2;
    // ADE tag for d = 2
    AdeTag tag = AdeTag::A;
    std::uint32_t subscript = 1;  // the n of A_n / D_n
    std::uint32_t r = 1;          // ambient variable count
    std::uint32_t d = 2;          // factorization arity

    static NormalForm a_series(std::uint32_t e, std::uint32_t d, std::uint32_t r = 1);
    static NormalForm ade(AdeTag tag, std::uint32_t subscript, std::uint32_t r = 2);
};

enum class DmfType { Finite, Infinite };

// the finite d-MF type table: for d > 2, finite iff
//   e = 2 (any d), e = 3 (d in {3,4,5}), e = 4 (d = 3), e = 5 (d = 3);
// for d = 2, every ADE tag (and every A(e) descriptor) is finite type
DmfType dmf_type(const NormalForm& nf);

// human-readable verdict with the table row that decided it
std::string dmf_type_row(const NormalForm& nf);

struct ConsistencyReport {
    bool ok = true;
    std::vector<std::string> violations;
    std::uint32_t e_max = 8, d_max = 12;
};

// downward monotonicity of the table in d for the A(e) series
ConsistencyReport consistency_check(std::uint32_t e_max = 8, std::uint32_t d_max = 12);

}  // namespace mfkit
