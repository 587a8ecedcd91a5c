#pragma once

#include "cropsense/diagnosis.hpp"
#include "cropsense/ingestion.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cropsense::evaluation {

/// Case-folds, strips Latin diacritics, and turns every non-alphanumeric
/// character into a single space. Leading/trailing spaces are dropped.
std::string normalize_text(std::string_view text);

/// Keyword identifiers with their spelling variants. Multi-word variants
/// ("white fly") are matched as token sequences.
class KeywordLexicon {
public:
    struct Entry {
        std::string keyword;
        std::vector<std::string> variants;
    };

    /// Throws ConfigInvalid for duplicate keywords or a variant that
    /// normalizes to the same text under two keywords.
    explicit KeywordLexicon(std::vector<Entry> entries);

    /// The 30-keyword lexicon with common misspellings.
    static KeywordLexicon builtin();

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::vector<std::string> keywords() const;
    std::size_t size() const noexcept { return entries_.size(); }

    struct Pattern {
        std::vector<std::string> tokens;
        std::size_t keyword = 0;
    };
    /// Normalized variants, longest token sequence first.
    const std::vector<Pattern>& patterns() const noexcept { return patterns_; }

private:
    std::vector<Entry> entries_;
    std::vector<Pattern> patterns_;
};

/// Presence bit per lexicon keyword.
class KeywordVector {
public:
    KeywordVector() = default;
    explicit KeywordVector(const KeywordLexicon& lexicon);

    bool has(std::string_view keyword) const;
    void set(std::string_view keyword, bool present = true);
    const std::map<std::string, bool, std::less<>>& bits() const noexcept { return bits_; }
    std::size_t count() const;

    friend bool operator==(const KeywordVector&, const KeywordVector&) = default;

private:
    std::map<std::string, bool, std::less<>> bits_;
};

KeywordVector extract_keywords(std::string_view comment, const KeywordLexicon& lexicon);

/// Comment-to-diagnosis rule table.
struct DiagnosisRules {
    struct Explicit {
        std::string keyword;
        Diagnosis diagnosis;
    };
    struct Fallback {
        std::vector<std::string> all_of;
        Diagnosis diagnosis;
    };

    std::vector<Explicit> priority;   // first present keyword wins
    std::vector<Fallback> fallback;   // tried in order when no explicit keyword
    Diagnosis otherwise = Diagnosis::None;

    static DiagnosisRules builtin();
};

Diagnosis primary_diagnosis(const KeywordVector& vector, const DiagnosisRules& rules = DiagnosisRules::builtin());

/// Rows = actual (expert), columns = predicted (farmer), both in kDiagnoses order.
class ConfusionMatrix {
public:
    using Count = std::uint64_t;

    void add(Diagnosis actual, Diagnosis predicted, Count n = 1);
    Count at(Diagnosis actual, Diagnosis predicted) const;
    Count row_sum(Diagnosis actual) const;
    Count column_sum(Diagnosis predicted) const;
    Count total() const;
    Count trace() const;

    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) { return a += b; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::array<std::array<Count, 5>, 5> cells_{};
};

ConfusionMatrix confusion_matrix(std::span<const std::pair<Diagnosis, Diagnosis>> pairs);

struct ClassMetrics {
    Diagnosis label = Diagnosis::None;
    double precision = 0.0;
    double recall = 0.0;
    ConfusionMatrix::Count support = 0;  // row sum
    bool zero_support = false;           // row sum is 0, recall reported as 0
    bool zero_predicted = false;         // column sum is 0, precision reported as 0
};

ClassMetrics precision_recall(const ConfusionMatrix& matrix, Diagnosis label);

struct CorpusEvaluation {
    ConfusionMatrix matrix;
    std::vector<ClassMetrics> metrics;  // kDiagnoses order
    std::size_t counted = 0;            // reports with expert label and comment
    std::size_t available = 0;          // reports in the store
};

CorpusEvaluation evaluate_corpus(const ingestion::ReportStore& store, const KeywordLexicon& lexicon,
                                 const DiagnosisRules& rules = DiagnosisRules::builtin());

// ---------------------------------------------------------------------------
// Data files

KeywordLexicon read_lexicon_json(std::istream& in);
void write_lexicon_json(std::ostream& out, const KeywordLexicon& lexicon);
DiagnosisRules read_rules_json(std::istream& in);
void write_rules_json(std::ostream& out, const DiagnosisRules& rules);

/// "actual,CBB,CBSD,CGM,CMD,None" then one row per actual class and a
/// trailing "all" row of column sums.
void write_matrix_csv(std::ostream& out, const ConfusionMatrix& matrix);
/// Reads the same layout. A trailing "all" row, if present, must match the
/// column sums (ParseError otherwise).
ConfusionMatrix read_matrix_csv(std::istream& in);

/// class,precision,recall,support,zero_support
void write_metrics_csv(std::ostream& out, std::span<const ClassMetrics> metrics);

}  // namespace cropsense::evaluation
