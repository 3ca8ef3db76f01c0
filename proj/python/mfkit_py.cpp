#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "mfkit/classify.hpp"
#include "mfkit/report.hpp"

namespace py = pybind11;
using namespace mfkit;

namespace {

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const std::exception& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
}

std::string iso_status_name(IsoStatus s) {
    switch (s) {
        case IsoStatus::CertifiedIso: return "CertifiedIso";
        case IsoStatus::IsoModN: return "IsoModN";
        case IsoStatus::NotIsoModN: return "NotIsoModN";
        case IsoStatus::Undecided: return "Undecided";
    }
    return "?";
}

}  // namespace

PYBIND11_MODULE(pymfkit, m) {
    m.doc() = "exact workbench for d-fold matrix factorizations and branched-cover modules";

    py::register_exception<Error>(m, "MfkitError");

    m.def(
        "make_field",
        [](std::uint32_t d, std::optional<std::uint64_t> p) {
            const RootedField f = make_field(d, p);
            py::dict out;
            out["p"] = f.p;
            out["d"] = f.d;
            out["zeta"] = f.zeta;
            out["omega"] = f.omega;
            out["mu"] = f.mu;
            return out;
        },
        py::arg("d"), py::arg("p") = std::nullopt,
        "smallest prime field with p = 1 (mod 2d) and its canonical roots");

    m.def("mf_verify", [](const std::string& text) {
        const MatrixFactorization x = mf_from_json(parse_json(text));
        py::dict out;
        out["size"] = x.size();
        out["arity"] = x.arity();
        out["p"] = x.ring()->field.p;
        out["reduced"] = is_reduced(x);
        out["f"] = x.f().str();
        return out;
    });
    m.def("module_verify", [](const std::string& text) {
        const CoverModule n = module_from_json(parse_json(text));
        py::dict out;
        out["rank"] = n.rank_S();
        out["arity"] = n.arity();
        out["p"] = n.ring()->field.p;
        out["f"] = n.f().str();
        return out;
    });
    m.def("mf_shift", [](const std::string& text, long long k) {
        return dump_canonical(mf_to_json(shift(mf_from_json(parse_json(text)), k)));
    });
    m.def("mf_direct_sum", [](const std::string& a, const std::string& b) {
        return dump_canonical(mf_to_json(direct_sum(mf_from_json(parse_json(a)), mf_from_json(parse_json(b)))));
    });
    m.def("mf_pad",
          [](const std::string& a) { return dump_canonical(mf_to_json(pad(mf_from_json(parse_json(a))))); });
    m.def("mf_entry_ideal", [](const std::string& a) {
        std::vector<std::string> out;
        for (const auto& g : entry_ideal(mf_from_json(parse_json(a)))) out.push_back(g.str());
        return out;
    });

    m.def(
        "flat",
        [](const std::string& text, std::optional<std::uint64_t> mu) {
            const CoverModule n = module_from_json(parse_json(text));
            const MatrixFactorization fl = mu ? flat_with_mu(n, *mu) : flat(n);
            return dump_canonical(mf_to_json(fl));
        },
        py::arg("module"), py::arg("mu") = std::nullopt);
    m.def("sharp",
          [](const std::string& text) { return dump_canonical(module_to_json(sharp(mf_from_json(parse_json(text))))); });
    m.def("sigma_twist", [](const std::string& text, long long k) {
        return dump_canonical(module_to_json(sigma_twist(module_from_json(parse_json(text)), k)));
    });
    m.def("num_generators",
          [](const std::string& text) { return num_generators(module_from_json(parse_json(text))); });
    m.def("rank_over_cover",
          [](const std::string& text) { return rank_over_cover(module_from_json(parse_json(text))); });
    m.def("is_ulrich", [](const std::string& text) {
        const UlrichVerdict v = is_ulrich(module_from_json(parse_json(text)));
        py::dict out;
        out["status"] = v.status == UlrichStatus::Ulrich      ? "Ulrich"
                        : v.status == UlrichStatus::NotUlrich ? "NotUlrich"
                                                              : "NotApplicable";
        out["applicable"] = v.applicable;
        out["reduced"] = v.reduced;
        out["mu_equals_rank"] = v.mu_equals_rank;
        return out;
    });

    m.def("sharp_flat_certificate", [](const std::string& text) {
        const MatrixFactorization x = mf_from_json(parse_json(text));
        return dump_canonical(sharp_flat_certificate_to_json(x, sharp_flat_certificate(x)));
    });
    m.def("flat_sharp_certificate", [](const std::string& text) {
        const CoverModule n = module_from_json(parse_json(text));
        return dump_canonical(flat_sharp_certificate_to_json(n, flat_sharp_certificate(n)));
    });
    m.def("recheck_certificate", [](const std::string& text) {
        std::string detail;
        const bool ok = recheck_certificate(parse_json(text), detail);
        return py::make_tuple(ok, detail);
    });

    m.def(
        "is_isomorphic",
        [](const std::string& a, const std::string& b, int N, std::uint64_t seed) {
            const MatrixFactorization x = mf_from_json(parse_json(a));
            const MatrixFactorization y = mf_from_json(parse_json(b));
            IsoOptions opt;
            opt.seed = seed;
            const IsoVerdict v = is_isomorphic(x, y, N, opt);
            py::dict out;
            out["status"] = iso_status_name(v.status);
            if (v.certificate) out["certificate"] = dump_canonical(iso_certificate_to_json(x, y, *v.certificate));
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("N"), py::arg("seed") = 0);
    m.def(
        "order_of",
        [](const std::string& a, int N, std::uint64_t seed) {
            IsoOptions opt;
            opt.seed = seed;
            return order_of(mf_from_json(parse_json(a)), N, opt);
        },
        py::arg("a"), py::arg("N"), py::arg("seed") = 0);
    m.def(
        "hom_dim",
        [](const std::string& a, const std::string& b, int N) {
            return hom_space(mf_from_json(parse_json(a)), mf_from_json(parse_json(b)), N).dim();
        },
        py::arg("a"), py::arg("b"), py::arg("N"));
    m.def(
        "decompose",
        [](const std::string& a, int N, int D, std::uint64_t seed) {
            const MatrixFactorization x = mf_from_json(parse_json(a));
            DecomposeOptions opt;
            opt.seed = seed;
            const DecompositionResult r = decompose(x, N, D, opt);
            py::dict out;
            out["status"] = r.status == SplitStatus::CertifiedSplit ? "CertifiedSplit" : "NoSplitFoundAtLevel";
            py::list summands;
            for (const auto& s : r.summands) summands.append(dump_canonical(mf_to_json(s)));
            out["summands"] = std::move(summands);
            if (r.status == SplitStatus::CertifiedSplit)
                out["certificate"] = dump_canonical(split_certificate_to_json(x, r));
            return out;
        },
        py::arg("a"), py::arg("N"), py::arg("D") = 2, py::arg("seed") = 0);

    m.def("equivariant_B", [](const std::string& a) {
        return dump_canonical(sigma_module_to_json(equivariant_B(mf_from_json(parse_json(a)))));
    });
    m.def("equivariant_A", [](const std::string& a) {
        return dump_canonical(mf_to_json(equivariant_A(sigma_module_from_json(parse_json(a)))));
    });

    m.def(
        "classify",
        [](std::uint32_t e, std::uint32_t d) { return dmf_type_row(NormalForm::a_series(e, d)); },
        py::arg("e"), py::arg("d"));
    m.def("classify_consistent", []() { return consistency_check().ok; });

    m.def("corpus_names", []() { return corpus_entry_names(); });
    m.def(
        "corpus_emit",
        [](const std::string& name) { return dump_canonical(corpus_emit(name, {})); }, py::arg("name"));
    m.def(
        "corpus_check",
        [](const std::string& entry, std::uint64_t seed) {
            CorpusSettings s;
            s.seed = seed;
            return dump_canonical(build_corpus_report(s, "corpus check", entry));
        },
        py::arg("entry") = "", py::arg("seed") = 0);
    m.def("report_all_pass", [](const std::string& text) { return report_all_pass(parse_json(text)); });
    m.def("recheck_report", [](const std::string& text) {
        const RecheckSummary sum = recheck_report(parse_json(text));
        py::dict out;
        out["certificates"] = sum.certificates;
        out["passed"] = sum.passed;
        out["ok"] = sum.ok();
        return out;
    });
}
