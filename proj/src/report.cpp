#include "mfkit/report.hpp"

#include <sstream>

namespace mfkit {

Json build_corpus_report(const CorpusSettings& settings, const std::string& command, const std::string& only_entry) {
    Json rep;
    rep["schema"] = "mfkit-report/1";
    rep["command"] = command;
    Json js;
    js["p"] = settings.p_override ? Json(*settings.p_override) : Json(nullptr);
    js["N"] = settings.truncation ? Json(*settings.truncation) : Json(nullptr);
    js["D"] = settings.cert_degree;
    js["seed"] = settings.seed;
    rep["settings"] = std::move(js);

    Json inputs = Json::array();
    for (const auto& name : corpus_entry_names()) {
        if (!only_entry.empty() && name != only_entry) continue;
        Json in;
        in["name"] = name;
        try {
            in["digest"] = "fnv64:" + fnv1a64_hex(dump_canonical(corpus_emit(name, settings)));
        } catch (const Error&) {
            in["digest"] = nullptr;  // check-only pseudo-entry
        }
        inputs.push_back(std::move(in));
    }
    rep["inputs"] = std::move(inputs);

    Json results = Json::array();
    for (const auto& name : corpus_entry_names()) {
        if (!only_entry.empty() && name != only_entry) continue;
        const EntryReport er = corpus_check_entry(name, settings);
        for (const auto& c : er.checks) {
            Json r;
            r["entry"] = er.entry;
            r["assertion"] = c.assertion;
            r["status"] = c.pass ? "PASS" : "FAIL";
            r["detail"] = c.detail;
            r["certificate"] = c.certificate;
            results.push_back(std::move(r));
        }
    }
    rep["results"] = std::move(results);
    return rep;
}

RecheckSummary recheck_report(const Json& report) {
    RecheckSummary sum;
    if (!report.is_object() || !report.contains("results") || !report["results"].is_array())
        throw SchemaError("not a mfkit report: missing results");
    for (const auto& r : report["results"]) {
        if (!r.contains("certificate") || r["certificate"].is_null()) continue;
        ++sum.certificates;
        std::string detail;
        bool pass = false;
        try {
            pass = recheck_certificate(r["certificate"], detail);
        } catch (const Error& e) {
            detail = e.what();
        }
        if (pass)
            ++sum.passed;
        else
            sum.failures.push_back(r.value("assertion", std::string("?")) + ": " + detail);
    }
    return sum;
}

std::string render_report_text(const Json& report) {
    std::ostringstream os;
    os << "# " << report.value("command", std::string("mfkit")) << "\n";
    const auto& s = report.at("settings");
    os << "settings: p=" << (s["p"].is_null() ? std::string("default") : std::to_string(s["p"].get<std::uint64_t>()))
       << " N=" << (s["N"].is_null() ? std::string("default") : std::to_string(s["N"].get<int>()))
       << " D=" << s["D"].get<int>() << " seed=" << s["seed"].get<std::uint64_t>() << "\n";
    int npass = 0, nfail = 0;
    for (const auto& r : report.at("results")) {
        const bool p = r["status"] == "PASS";
        (p ? npass : nfail) += 1;
        os << "[" << (p ? "PASS" : "FAIL") << "] " << r["entry"].get<std::string>() << " | "
           << r["assertion"].get<std::string>() << " | " << r["detail"].get<std::string>() << "\n";
    }
    os << npass << " passed, " << nfail << " failed\n";
    return os.str();
}

bool report_all_pass(const Json& report) {
    for (const auto& r : report.at("results"))
        if (r["status"] != "PASS") return false;
    return true;
}

}  // namespace mfkit
