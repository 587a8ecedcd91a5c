#include "cropsense/error.hpp"
#include "cropsense/evaluation.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cropsense::evaluation {

namespace {

std::vector<std::string> tokenize(std::string_view normalized) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(normalized)};
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

}  // namespace

KeywordLexicon::KeywordLexicon(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::map<std::string, std::size_t> owner;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.keyword.empty()) throw Error(Errc::ConfigInvalid, "lexicon entry without keyword");
        for (std::size_t j = 0; j < i; ++j) {
            if (entries_[j].keyword == e.keyword) {
                throw Error(Errc::ConfigInvalid, "keyword '" + e.keyword + "' listed twice");
            }
        }
        // The identifier itself is always a variant.
        std::vector<std::string> forms = e.variants;
        forms.push_back(e.keyword);
        for (const auto& form : forms) {
            auto norm = normalize_text(form);
            if (norm.empty()) continue;
            auto [it, inserted] = owner.emplace(norm, i);
            if (!inserted && it->second != i) {
                throw Error(Errc::ConfigInvalid, "variant '" + form + "' belongs to both '" +
                                                     entries_[it->second].keyword + "' and '" + e.keyword + "'");
            }
        }
    }
    for (const auto& [norm, keyword] : owner) patterns_.push_back(Pattern{tokenize(norm), keyword});
    std::stable_sort(patterns_.begin(), patterns_.end(),
                     [](const Pattern& a, const Pattern& b) { return a.tokens.size() > b.tokens.size(); });
}

std::vector<std::string> KeywordLexicon::keywords() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.keyword);
    return out;
}

KeywordLexicon KeywordLexicon::builtin() {
    return KeywordLexicon({
        {"leaves", {"leaf", "leafs", "leave", "leavs", "levaes"}},
        {"root", {"roots", "tuber", "tubers"}},
        {"stem", {"stems", "stalk", "stalks"}},
        {"yellow", {"yellowing", "yelow", "yellowish", "yello"}},
        {"pale", {"paleness", "pail"}},
        {"cmd", {"mosaic", "mozaic", "cassava mosaic", "mosaic disease", "cassava mosaic disease"}},
        {"cbsd", {"brown streak", "cassava brown streak", "brown streak disease", "streak"}},
        {"cbb", {"bacterial blight", "cassava bacterial blight", "blight"}},
        {"whitefly", {"whiteflies", "white fly", "white flies", "white flys", "whiteflys"}},
        {"cgm", {"green mite", "green mites", "cassava green mite", "mite", "mites"}},
        {"chlorosis", {"chlorotic", "chloris"}},
        {"stunted", {"stunting", "stunt", "stanted"}},
        {"black_spots", {"black spots", "black spot", "blackspots", "blackspot"}},
        {"twisted", {"twisting", "twist", "distorted", "distortion"}},
        {"engulfed", {"engulfing", "engulf"}},
        {"folded", {"folding", "fold", "folds"}},
        {"wilting", {"wilted", "wilt", "wilts"}},
        {"curling", {"curled", "curl", "curls", "curly"}},
        {"dry", {"drying", "dried", "dries"}},
        {"rotten", {"rotting", "rot", "rots"}},
        {"lesions", {"lesion", "lession", "lessions"}},
        {"candlestick", {"candle stick", "candlesticks"}},
        {"disease", {"diseased", "diseases", "desease", "disese", "infected", "infection"}},
        {"pest", {"pests", "insect", "insects"}},
        {"anomaly", {"anomalies", "abnormal"}},
        {"unhealthy", {"sick"}},
        {"healthy", {"helthy", "clean"}},
        {"variety", {"varieties", "verity"}},
        {"other", {"others"}},
        {"unknown", {"not sure", "unsure", "dont know"}},
    });
}

KeywordVector::KeywordVector(const KeywordLexicon& lexicon) {
    for (const auto& e : lexicon.entries()) bits_.emplace(e.keyword, false);
}

bool KeywordVector::has(std::string_view keyword) const {
    auto it = bits_.find(keyword);
    return it != bits_.end() && it->second;
}

void KeywordVector::set(std::string_view keyword, bool present) {
    auto it = bits_.find(keyword);
    if (it == bits_.end()) throw Error(Errc::ConfigInvalid, "keyword '" + std::string(keyword) + "' not in lexicon");
    it->second = present;
}

std::size_t KeywordVector::count() const {
    return static_cast<std::size_t>(std::count_if(bits_.begin(), bits_.end(), [](const auto& kv) { return kv.second; }));
}

KeywordVector extract_keywords(std::string_view comment, const KeywordLexicon& lexicon) {
    KeywordVector vec(lexicon);
    const auto tokens = tokenize(normalize_text(comment));
    const auto& patterns = lexicon.patterns();
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t consumed = 1;
        for (const auto& p : patterns) {
            if (p.tokens.size() > tokens.size() - i) continue;
            if (std::equal(p.tokens.begin(), p.tokens.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
                vec.set(lexicon.entries()[p.keyword].keyword);
                consumed = p.tokens.size();
                break;
            }
        }
        i += consumed;
    }
    return vec;
}

DiagnosisRules DiagnosisRules::builtin() {
    DiagnosisRules rules;
    rules.priority = {
        {"cmd", Diagnosis::CMD},
        {"cbsd", Diagnosis::CBSD},
        {"cbb", Diagnosis::CBB},
        {"cgm", Diagnosis::CGM},
    };
    rules.fallback = {
        {{"healthy"}, Diagnosis::None},
        {{"candlestick"}, Diagnosis::CBSD},
        {{"rotten"}, Diagnosis::CBSD},
        {{"chlorosis"}, Diagnosis::CMD},
        {{"yellow", "curling"}, Diagnosis::CMD},
        {{"twisted"}, Diagnosis::CMD},
        {{"lesions", "wilting"}, Diagnosis::CBB},
        {{"pale", "stunted"}, Diagnosis::CGM},
    };
    rules.otherwise = Diagnosis::None;
    return rules;
}

Diagnosis primary_diagnosis(const KeywordVector& vector, const DiagnosisRules& rules) {
    for (const auto& e : rules.priority) {
        if (vector.has(e.keyword)) return e.diagnosis;
    }
    for (const auto& rule : rules.fallback) {
        const bool all = !rule.all_of.empty() &&
                         std::all_of(rule.all_of.begin(), rule.all_of.end(),
                                     [&](const std::string& k) { return vector.has(k); });
        if (all) return rule.diagnosis;
    }
    return rules.otherwise;
}

}  // namespace cropsense::evaluation
