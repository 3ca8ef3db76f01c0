#pragma once

#include <string>

#include "mfkit/corpus.hpp"

namespace mfkit {

// corpus check assembled as a versioned, re-checkable report; identical
// settings and seed reproduce the bytes exactly
Json build_corpus_report(const CorpusSettings& settings, const std::string& command,
                         const std::string& only_entry = "");

struct RecheckSummary {
    int certificates = 0;
    int passed = 0;
    std::vector<std::string> failures;
    bool ok() const { return passed == certificates; }
};

// re-verify every certificate embedded in a report, using only exact
// polynomial arithmetic (independent of the randomized search machinery)
RecheckSummary recheck_report(const Json& report);

// one line per assertion, stable ordering
std::string render_report_text(const Json& report);

bool report_all_pass(const Json& report);

}  // namespace mfkit
