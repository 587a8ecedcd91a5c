#include "cropsense/csv.hpp"
#include "cropsense/error.hpp"
#include "cropsense/evaluation.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>

namespace cropsense::evaluation {

namespace {

std::size_t idx(Diagnosis d) { return static_cast<std::size_t>(d); }

}  // namespace

void ConfusionMatrix::add(Diagnosis actual, Diagnosis predicted, Count n) { cells_[idx(actual)][idx(predicted)] += n; }

ConfusionMatrix::Count ConfusionMatrix::at(Diagnosis actual, Diagnosis predicted) const {
    return cells_[idx(actual)][idx(predicted)];
}

ConfusionMatrix::Count ConfusionMatrix::row_sum(Diagnosis actual) const {
    Count sum = 0;
    for (auto c : cells_[idx(actual)]) sum += c;
    return sum;
}

ConfusionMatrix::Count ConfusionMatrix::column_sum(Diagnosis predicted) const {
    Count sum = 0;
    for (const auto& row : cells_) sum += row[idx(predicted)];
    return sum;
}

ConfusionMatrix::Count ConfusionMatrix::total() const {
    Count sum = 0;
    for (const auto& row : cells_) {
        for (auto c : row) sum += c;
    }
    return sum;
}

ConfusionMatrix::Count ConfusionMatrix::trace() const {
    Count sum = 0;
    for (std::size_t i = 0; i < cells_.size(); ++i) sum += cells_[i][i];
    return sum;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    for (std::size_t r = 0; r < cells_.size(); ++r) {
        for (std::size_t c = 0; c < cells_[r].size(); ++c) cells_[r][c] += other.cells_[r][c];
    }
    return *this;
}

ConfusionMatrix confusion_matrix(std::span<const std::pair<Diagnosis, Diagnosis>> pairs) {
    ConfusionMatrix m;
    for (const auto& [actual, predicted] : pairs) m.add(actual, predicted);
    return m;
}

ClassMetrics precision_recall(const ConfusionMatrix& matrix, Diagnosis label) {
    ClassMetrics m;
    m.label = label;
    const auto hit = matrix.at(label, label);
    const auto predicted = matrix.column_sum(label);
    m.support = matrix.row_sum(label);
    m.zero_support = m.support == 0;
    m.zero_predicted = predicted == 0;
    m.precision = predicted == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(predicted);
    m.recall = m.support == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(m.support);
    return m;
}

CorpusEvaluation evaluate_corpus(const ingestion::ReportStore& store, const KeywordLexicon& lexicon,
                                 const DiagnosisRules& rules) {
    CorpusEvaluation result;
    const auto reports = store.query({});
    result.available = reports.size();
    for (const auto& r : reports) {
        if (!r.expert_diagnosis) continue;
        if (r.comment.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        const auto predicted = primary_diagnosis(extract_keywords(r.comment, lexicon), rules);
        result.matrix.add(*r.expert_diagnosis, predicted);
        ++result.counted;
    }
    for (Diagnosis d : kDiagnoses) result.metrics.push_back(precision_recall(result.matrix, d));
    return result;
}

void write_matrix_csv(std::ostream& out, const ConfusionMatrix& matrix) {
    out << "actual";
    for (Diagnosis d : kDiagnoses) out << ',' << to_string(d);
    out << '\n';
    for (Diagnosis a : kDiagnoses) {
        out << to_string(a);
        for (Diagnosis p : kDiagnoses) out << ',' << matrix.at(a, p);
        out << '\n';
    }
    out << "all";
    for (Diagnosis p : kDiagnoses) out << ',' << matrix.column_sum(p);
    out << '\n';
}

ConfusionMatrix read_matrix_csv(std::istream& in) {
    const auto table = csv::read(in);
    if (table.header.size() != kDiagnoses.size() + 1) {
        throw Error(Errc::ParseError, "matrix CSV needs an actual column and five class columns");
    }
    std::array<Diagnosis, 5> columns{};
    for (std::size_t c = 0; c < kDiagnoses.size(); ++c) {
        auto d = parse_diagnosis(table.header[c + 1]);
        if (!d) throw Error(Errc::ParseError, "unknown class column '" + table.header[c + 1] + "'");
        columns[c] = *d;
    }
    auto number = [](const csv::Row& row, std::size_t c) {
        ConfusionMatrix::Count v = 0;
        const auto& f = row.fields[c];
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || ptr != f.data() + f.size()) {
            throw Error(Errc::ParseError, "line " + std::to_string(row.line) + ": bad count '" + f + "'");
        }
        return v;
    };
    ConfusionMatrix m;
    const csv::Row* all_row = nullptr;
    for (const auto& row : table.rows) {
        if (row.fields[0] == "all") {
            all_row = &row;
            continue;
        }
        auto actual = parse_diagnosis(row.fields[0]);
        if (!actual) throw Error(Errc::ParseError, "line " + std::to_string(row.line) + ": unknown class");
        for (std::size_t c = 0; c < kDiagnoses.size(); ++c) m.add(*actual, columns[c], number(row, c + 1));
    }
    if (all_row != nullptr) {
        for (std::size_t c = 0; c < kDiagnoses.size(); ++c) {
            if (number(*all_row, c + 1) != m.column_sum(columns[c])) {
                throw Error(Errc::ParseError, "'all' row does not match the column sum of " +
                                                  std::string(to_string(columns[c])));
            }
        }
    }
    return m;
}

void write_metrics_csv(std::ostream& out, std::span<const ClassMetrics> metrics) {
    out << "class,precision,recall,support,zero_support\n";
    char buf[64];
    for (const auto& m : metrics) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f", m.precision, m.recall);
        out << to_string(m.label) << ',' << buf << ',' << m.support << ',' << (m.zero_support ? "true" : "false")
            << '\n';
    }
}

}  // namespace cropsense::evaluation
