#include "mfkit/classify.hpp"

namespace mfkit {

NormalForm NormalForm::a_series(std::uint32_t e, std::uint32_t d, std::uint32_t r) {
    if (e < 2) throw Error("A(e) series needs e >= 2");
    if (d < 2) throw Error("arity d must be at least 2");
    if (r < 1) throw Error("ambient variable count must be at least 1");
    NormalForm nf;
    nf.is_ade_tag = false;
    nf.e = e;
    nf.d = d;
    nf.r = r;
    return nf;
}

NormalForm NormalForm::ade(AdeTag tag, std::uint32_t subscript, std::uint32_t r) {
    NormalForm nf;
    nf.is_ade_tag = true;
    nf.tag = tag;
    nf.subscript = subscript;
    nf.d = 2;
    nf.r = r;
    if (tag == AdeTag::A && subscript < 1) throw Error("A_n needs n >= 1");
    if (tag == AdeTag::D && subscript < 4) throw Error("D_n needs n >= 4");
    return nf;
}

DmfType dmf_type(const NormalForm& nf) {
    if (nf.d == 2) return DmfType::Finite;  // the ADE list, and A(e) = A_{e-1}
    if (nf.is_ade_tag) {
        // only the A(e) series is meaningful above d = 2; D/E tags are
        // d = 2 objects and nothing in the table extends them
        return DmfType::Infinite;
    }
    if (nf.e == 2) return DmfType::Finite;
    if (nf.e == 3 && (nf.d == 3 || nf.d == 4 || nf.d == 5)) return DmfType::Finite;
    if (nf.e == 4 && nf.d == 3) return DmfType::Finite;
    if (nf.e == 5 && nf.d == 3) return DmfType::Finite;
    return DmfType::Infinite;
}

std::string dmf_type_row(const NormalForm& nf) {
    const DmfType t = dmf_type(nf);
    if (t == DmfType::Infinite) return "Infinite";
    if (nf.d == 2) return "Finite (d=2, ADE list)";
    return "Finite (A_" + std::to_string(nf.e - 1) + " row)";
}

ConsistencyReport consistency_check(std::uint32_t e_max, std::uint32_t d_max) {
    ConsistencyReport rep;
    rep.e_max = e_max;
    rep.d_max = d_max;
    for (std::uint32_t e = 2; e <= e_max; ++e) {
        for (std::uint32_t d = 3; d <= d_max; ++d) {
            if (dmf_type(NormalForm::a_series(e, d)) != DmfType::Finite) continue;
            for (std::uint32_t k = 2; k < d; ++k) {
                if (dmf_type(NormalForm::a_series(e, k)) != DmfType::Finite) {
                    rep.ok = false;
                    rep.violations.push_back("finite at (e=" + std::to_string(e) + ", d=" + std::to_string(d) +
                                             ") but infinite at k=" + std::to_string(k));
                }
            }
        }
    }
    return rep;
}

}  // namespace mfkit
