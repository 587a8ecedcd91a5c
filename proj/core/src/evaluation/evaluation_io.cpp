#include "cropsense/error.hpp"
#include "cropsense/evaluation.hpp"

#include "json.hpp"

#include <istream>
#include <ostream>

namespace cropsense::evaluation {

using json = nlohmann::ordered_json;

namespace {

Diagnosis diagnosis_from(const json& j) {
    const auto text = j.get<std::string>();
    auto d = parse_diagnosis(text);
    if (!d) throw Error(Errc::ConfigInvalid, "unknown diagnosis '" + text + "'");
    return *d;
}

}  // namespace

KeywordLexicon read_lexicon_json(std::istream& in) {
    try {
        const json doc = json::parse(in);
        std::vector<KeywordLexicon::Entry> entries;
        for (const auto& k : doc.at("keywords")) {
            KeywordLexicon::Entry e;
            e.keyword = k.at("keyword").get<std::string>();
            if (k.contains("variants")) e.variants = k["variants"].get<std::vector<std::string>>();
            entries.push_back(std::move(e));
        }
        return KeywordLexicon(std::move(entries));
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigInvalid, std::string("lexicon file: ") + e.what());
    }
}

void write_lexicon_json(std::ostream& out, const KeywordLexicon& lexicon) {
    json keywords = json::array();
    for (const auto& e : lexicon.entries()) keywords.push_back({{"keyword", e.keyword}, {"variants", e.variants}});
    out << json{{"keywords", keywords}}.dump(2) << '\n';
}

DiagnosisRules read_rules_json(std::istream& in) {
    try {
        const json doc = json::parse(in);
        DiagnosisRules rules;
        for (const auto& p : doc.at("priority")) {
            rules.priority.push_back({p.at("keyword").get<std::string>(), diagnosis_from(p.at("diagnosis"))});
        }
        if (doc.contains("fallback")) {
            for (const auto& f : doc["fallback"]) {
                auto all_of = f.at("all_of").get<std::vector<std::string>>();
                if (all_of.empty()) throw Error(Errc::ConfigInvalid, "fallback rule with empty all_of");
                rules.fallback.push_back({std::move(all_of), diagnosis_from(f.at("diagnosis"))});
            }
        }
        if (doc.contains("otherwise")) rules.otherwise = diagnosis_from(doc["otherwise"]);
        return rules;
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigInvalid, std::string("rules file: ") + e.what());
    }
}

void write_rules_json(std::ostream& out, const DiagnosisRules& rules) {
    json priority = json::array();
    for (const auto& p : rules.priority) priority.push_back({{"keyword", p.keyword}, {"diagnosis", to_string(p.diagnosis)}});
    json fallback = json::array();
    for (const auto& f : rules.fallback) fallback.push_back({{"all_of", f.all_of}, {"diagnosis", to_string(f.diagnosis)}});
    out << json{{"priority", priority}, {"fallback", fallback}, {"otherwise", to_string(rules.otherwise)}}.dump(2)
        << '\n';
}

}  // namespace cropsense::evaluation
