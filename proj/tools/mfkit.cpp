#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mfkit/classify.hpp"
#include "mfkit/report.hpp"

using namespace mfkit;

namespace {

struct Settings {
    std::optional<std::uint64_t> field_char;
    std::optional<int> truncation;
    int cert_degree = 2;
    std::uint64_t seed = 0;
    std::string format = "text";

    CorpusSettings corpus() const {
        CorpusSettings s;
        s.seed = seed;
        s.cert_degree = cert_degree;
        s.truncation = truncation;
        s.p_override = field_char;
        return s;
    }
};

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SchemaError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return j;
}

// object files carry their own field header; a --field-char flag must agree
Json load_object(const std::string& path, const Settings& s) {
    Json j = load_json(path);
    if (s.field_char && j.is_object() && j.contains("field") && j["field"].contains("p")) {
        const std::uint64_t file_p = j["field"]["p"].get<std::uint64_t>();
        if (file_p != *s.field_char)
            throw SchemaError("field header p=" + std::to_string(file_p) + " in " + path +
                              " does not match --field-char " + std::to_string(*s.field_char));
    }
    return j;
}

void emit(const Json& report, const Settings& s) {
    if (s.format == "json")
        std::cout << dump_canonical(report);
    else
        std::cout << render_report_text(report);
}

Json frame(const std::string& command, const Settings& s) {
    Json rep;
    rep["schema"] = "mfkit-report/1";
    rep["command"] = command;
    Json js;
    js["p"] = s.field_char ? Json(*s.field_char) : Json(nullptr);
    js["N"] = s.truncation ? Json(*s.truncation) : Json(nullptr);
    js["D"] = s.cert_degree;
    js["seed"] = s.seed;
    rep["settings"] = std::move(js);
    rep["inputs"] = Json::array();
    rep["results"] = Json::array();
    return rep;
}

void add_input(Json& rep, const std::string& name, const Json& obj) {
    Json in;
    in["name"] = name;
    in["digest"] = "fnv64:" + fnv1a64_hex(dump_canonical(obj));
    rep["inputs"].push_back(std::move(in));
}

void add_result(Json& rep, const std::string& assertion, bool pass, const std::string& detail,
                Json certificate = nullptr) {
    Json r;
    r["entry"] = rep["command"];
    r["assertion"] = assertion;
    r["status"] = pass ? "PASS" : "FAIL";
    r["detail"] = detail;
    r["certificate"] = std::move(certificate);
    rep["results"].push_back(std::move(r));
}

int finish(const Json& rep, const Settings& s) {
    emit(rep, s);
    return report_all_pass(rep) ? 0 : 1;
}

int resolved_truncation(const Settings& s, const Poly& f) {
    return s.truncation.value_or(default_truncation(f));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mfkit: exact workbench for d-fold matrix factorizations and branched-cover modules"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    Settings st;
    std::string recheck_path;
    app.add_option("-p,--field-char", st.field_char, "prime field characteristic (default: smallest admissible)");
    app.add_option("-N,--truncation", st.truncation, "truncation degree (default: 2*deg f + 2)");
    app.add_option("-D,--cert-degree", st.cert_degree, "certificate degree bound for splits (default 2)");
    app.add_option("--seed", st.seed, "seed for the randomized searches (default 0)");
    app.add_option("--format", st.format, "output format: text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--recheck", recheck_path, "standalone pass: re-verify every certificate in a report file");

    std::string file, other_file, out_file, kind = "mf", entry;
    long long shift_k = 1;
    std::uint64_t mu_opt = 0, a = 0, b = 0, c = 0;
    bool has_mu = false;
    std::uint32_t e_val = 0, d_val = 0;
    std::string ade;

    auto* verify = app.add_subcommand("verify", "validate a factorization or module file");
    verify->fallthrough();
    verify->add_option("--file", file, "object file")->required();
    verify->add_option("--kind", kind, "mf or module")->check(CLI::IsMember({"mf", "module"}));

    auto* shiftc = app.add_subcommand("shift", "apply the shift functor T^k");
    shiftc->fallthrough();
    shiftc->add_option("--file", file)->required();
    shiftc->add_option("--k", shift_k, "rotation amount (default 1)");
    shiftc->add_option("--out", out_file, "write the result here instead of stdout");

    auto* flatc = app.add_subcommand("flat", "the flat functor: module -> factorization");
    flatc->fallthrough();
    flatc->add_option("--file", file)->required();
    flatc->add_option("--mu", mu_opt, "override the d-th root of -1")->each([&](const std::string&) { has_mu = true; });
    flatc->add_option("--out", out_file);

    auto* sharpc = app.add_subcommand("sharp", "the sharp functor: factorization -> module");
    sharpc->fallthrough();
    sharpc->add_option("--file", file)->required();
    sharpc->add_option("--out", out_file);

    auto* decompc = app.add_subcommand("decompose", "idempotent-split into indecomposables with a certificate");
    decompc->fallthrough();
    decompc->add_option("--file", file)->required();
    decompc->add_option("--kind", kind, "mf or module")->check(CLI::IsMember({"mf", "module"}));

    auto* isomc = app.add_subcommand("isom", "isomorphism test with exact certificates");
    isomc->fallthrough();
    isomc->add_option("--file", file)->required();
    isomc->add_option("--other", other_file)->required();

    auto* orderc = app.add_subcommand("order", "order of the shift orbit");
    orderc->fallthrough();
    orderc->add_option("--file", file)->required();

    auto* classifyc = app.add_subcommand("classify", "finite d-MF type oracle");
    classifyc->fallthrough();
    classifyc->add_option("--e", e_val, "exponent of the A(e) series y^e + squares");
    classifyc->add_option("--d", d_val, "factorization arity")->required();
    classifyc->add_option("--ade", ade, "ADE tag for d=2 (A<n>, D<n>, E6, E7, E8)");

    auto* corpusc = app.add_subcommand("corpus", "the worked-example corpus");
    corpusc->fallthrough();
    auto* corpus_list = corpusc->add_subcommand("list", "list entry names");
    corpus_list->fallthrough();
    auto* corpus_emitc = corpusc->add_subcommand("emit", "emit an entry as canonical JSON");
    corpus_emitc->fallthrough();
    corpus_emitc->add_option("name", entry, "entry name")->required();
    auto* corpus_check = corpusc->add_subcommand("check", "run the expectation suite");
    corpus_check->fallthrough();
    corpus_check->add_option("--entry", entry, "check a single entry");

    auto* moorec = app.add_subcommand("moore", "Moore-matrix module for a point on a^3+b^3+c^3 = 0");
    moorec->fallthrough();
    moorec->add_option("--a", a)->required();
    moorec->add_option("--b", b)->required();
    moorec->add_option("--c", c)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!recheck_path.empty()) {
            const Json report = load_json(recheck_path);
            const RecheckSummary sum = recheck_report(report);
            Json rep = frame("recheck " + recheck_path, st);
            add_result(rep, "recheck: every embedded certificate verifies exactly", sum.ok(),
                       std::to_string(sum.passed) + "/" + std::to_string(sum.certificates) + " certificates verified" +
                           (sum.failures.empty() ? "" : ("; first failure: " + sum.failures.front())));
            return finish(rep, st);
        }
        if (verify->parsed()) {
            Json rep = frame("verify " + file, st);
            const Json obj = load_object(file, st);
            add_input(rep, file, obj);
            if (kind == "mf") {
                const MatrixFactorization x = mf_from_json(obj);
                add_result(rep, "product = f*I", true,
                           "size " + std::to_string(x.size()) + ", d = " + std::to_string(x.arity()) + " over F_" +
                               std::to_string(x.ring()->field.p));
            } else {
                const CoverModule n = module_from_json(obj);
                add_result(rep, "phi^d = -f*I", true,
                           "rank " + std::to_string(n.rank_S()) + " over F_" + std::to_string(n.ring()->field.p));
            }
            return finish(rep, st);
        }
        if (shiftc->parsed()) {
            const MatrixFactorization x = mf_from_json(load_object(file, st));
            const Json out = mf_to_json(shift(x, shift_k));
            if (out_file.empty())
                std::cout << dump_canonical(out);
            else
                std::ofstream(out_file) << dump_canonical(out);
            return 0;
        }
        if (flatc->parsed()) {
            const CoverModule n = module_from_json(load_object(file, st));
            const MatrixFactorization fl = has_mu ? flat_with_mu(n, mu_opt) : flat(n);
            const Json out = mf_to_json(fl);
            if (out_file.empty())
                std::cout << dump_canonical(out);
            else
                std::ofstream(out_file) << dump_canonical(out);
            return 0;
        }
        if (sharpc->parsed()) {
            const MatrixFactorization x = mf_from_json(load_object(file, st));
            const Json out = module_to_json(sharp(x));
            if (out_file.empty())
                std::cout << dump_canonical(out);
            else
                std::ofstream(out_file) << dump_canonical(out);
            return 0;
        }
        if (decompc->parsed()) {
            Json rep = frame("decompose " + file, st);
            const Json obj = load_object(file, st);
            add_input(rep, file, obj);
            DecomposeOptions opt;
            opt.seed = st.seed;
            if (kind == "mf") {
                const MatrixFactorization x = mf_from_json(obj);
                const int N = resolved_truncation(st, x.f());
                const DecompositionResult r = decompose(x, N, st.cert_degree, opt);
                const bool split = r.status == SplitStatus::CertifiedSplit;
                add_result(rep, split ? "CertifiedSplit" : "NoSplitFoundAtLevel", true,
                           std::to_string(r.summands.size()) + " summand(s) at (N=" + std::to_string(N) +
                               ", D=" + std::to_string(st.cert_degree) + ")",
                           split ? split_certificate_to_json(x, r) : Json(nullptr));
            } else {
                const CoverModule n = module_from_json(obj);
                const int N = resolved_truncation(st, n.f());
                const ModuleDecompositionResult r = decompose_module(n, N, st.cert_degree, opt);
                add_result(rep,
                           r.status == SplitStatus::CertifiedSplit ? "CertifiedSplit" : "NoSplitFoundAtLevel", true,
                           std::to_string(r.summands.size()) + " summand(s) at (N=" + std::to_string(N) +
                               ", D=" + std::to_string(st.cert_degree) + ")");
            }
            return finish(rep, st);
        }
        if (isomc->parsed()) {
            Json rep = frame("isom " + file + " vs " + other_file, st);
            const Json ja = load_object(file, st), jb = load_object(other_file, st);
            add_input(rep, file, ja);
            add_input(rep, other_file, jb);
            const MatrixFactorization x = mf_from_json(ja), y = mf_from_json(jb);
            IsoOptions opt;
            opt.seed = st.seed;
            const int N = resolved_truncation(st, x.f());
            const IsoVerdict v = is_isomorphic(x, y, N, opt);
            std::string status;
            Json cert = nullptr;
            switch (v.status) {
                case IsoStatus::CertifiedIso:
                    status = "CertifiedIso";
                    cert = iso_certificate_to_json(x, y, *v.certificate);
                    break;
                case IsoStatus::IsoModN: status = "IsoModN"; break;
                case IsoStatus::NotIsoModN: status = "NotIsoModN"; break;
                case IsoStatus::Undecided: status = "Undecided"; break;
            }
            add_result(rep, "verdict: " + status, true, "at N = " + std::to_string(N), std::move(cert));
            return finish(rep, st);
        }
        if (orderc->parsed()) {
            Json rep = frame("order " + file, st);
            const Json obj = load_object(file, st);
            add_input(rep, file, obj);
            const MatrixFactorization x = mf_from_json(obj);
            const int N = resolved_truncation(st, x.f());
            IsoOptions opt;
            opt.seed = st.seed;
            const int k = order_of(x, N, opt);
            add_result(rep, "order = " + std::to_string(k), static_cast<int>(x.arity()) % k == 0,
                       "divides d = " + std::to_string(x.arity()));
            return finish(rep, st);
        }
        if (classifyc->parsed()) {
            Json rep = frame("classify", st);
            NormalForm nf = NormalForm::a_series(2, 2);
            if (!ade.empty()) {
                if (ade == "E6")
                    nf = NormalForm::ade(AdeTag::E6, 6);
                else if (ade == "E7")
                    nf = NormalForm::ade(AdeTag::E7, 7);
                else if (ade == "E8")
                    nf = NormalForm::ade(AdeTag::E8, 8);
                else if (ade[0] == 'A')
                    nf = NormalForm::ade(AdeTag::A, static_cast<std::uint32_t>(std::stoul(ade.substr(1))));
                else if (ade[0] == 'D')
                    nf = NormalForm::ade(AdeTag::D, static_cast<std::uint32_t>(std::stoul(ade.substr(1))));
                else
                    throw CLI::ValidationError("--ade", "unknown tag " + ade);
                nf.d = d_val;
            } else {
                if (e_val < 2) throw CLI::ValidationError("--e", "need e >= 2 (or --ade)");
                nf = NormalForm::a_series(e_val, d_val);
            }
            add_result(rep, dmf_type_row(nf), true,
                       ade.empty() ? ("descriptor y^" + std::to_string(e_val) + " + squares at d = " +
                                      std::to_string(d_val))
                                   : ("descriptor " + ade + " at d = " + std::to_string(d_val)));
            return finish(rep, st);
        }
        if (corpusc->parsed()) {
            if (corpus_list->parsed()) {
                for (const auto& n : corpus_entry_names()) std::cout << n << "\n";
                return 0;
            }
            if (corpus_emitc->parsed()) {
                std::cout << dump_canonical(corpus_emit(entry, st.corpus()));
                return 0;
            }
            // corpus check [--entry]
            std::ostringstream cmd;
            cmd << "corpus check";
            if (!entry.empty()) cmd << " --entry " << entry;
            cmd << " --seed " << st.seed;
            const Json rep = build_corpus_report(st.corpus(), cmd.str(), entry);
            return finish(rep, st);
        }
        if (moorec->parsed()) {
            Json rep = frame("moore", st);
            MooreBatch batch = moore_scan(48, st.field_char);
            const auto& F = batch.ring->field;
            if (a % F.p == 0 || b % F.p == 0 || c % F.p == 0)
                throw Error("moore needs abc != 0 in F_" + std::to_string(F.p));
            const std::uint64_t s3 = F.add(F.add(F.pow(a, 3), F.pow(b, 3)), F.pow(c, 3));
            if (s3 != 0)
                throw Error("a^3 + b^3 + c^3 = " + std::to_string(s3) + " != 0 in F_" + std::to_string(F.p));
            const CoverModule n = moore_module(batch, MooreTriple{a % F.p, b % F.p, c % F.p});
            add_result(rep, "phi_abc^3 = -(x^3+y^3)*I", true, "validated over F_" + std::to_string(F.p));
            add_result(rep, "flat is reduced", is_reduced(flat(n)), "entries lie in the maximal ideal");
            rep["module"] = module_to_json(n);
            return finish(rep, st);
        }
        std::cerr << app.help();
        return 2;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const SchemaError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
