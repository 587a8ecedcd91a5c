#include "cropsense/error.hpp"
#include "cropsense/evaluation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

using namespace cropsense;
using namespace cropsense::evaluation;

namespace {

const KeywordLexicon& lexicon() {
    static const KeywordLexicon lex = KeywordLexicon::builtin();
    return lex;
}

std::vector<std::string> present(const KeywordVector& v) {
    std::vector<std::string> out;
    for (const auto& [k, on] : v.bits()) {
        if (on) out.push_back(k);
    }
    return out;
}

ConfusionMatrix table2() {
    std::ifstream in(std::string(CROPSENSE_FIXTURE_DIR) + "/table2_matrix.csv");
    return read_matrix_csv(in);
}

KeywordVector with(std::initializer_list<const char*> keys) {
    KeywordVector v(lexicon());
    for (const char* k : keys) v.set(k);
    return v;
}

}  // namespace

TEST(Normalize, FoldsCaseAccentsPunctuation) {
    EXPECT_EQ(normalize_text("  Leaves, YELLOW!! "), "leaves yellow");
    EXPECT_EQ(normalize_text("Caf\xC3\xA9 mosa\xC3\xAF" "c"), "cafe mosaic");
    EXPECT_EQ(normalize_text("white-fly"), "white fly");
    EXPECT_EQ(normalize_text(""), "");
}

TEST(Extract, DirectTokens) {
    const auto v = extract_keywords("Leaves are yellow and curling", lexicon());
    EXPECT_EQ(present(v), (std::vector<std::string>{"curling", "leaves", "yellow"}));
    EXPECT_EQ(v.bits().size(), 30u);
}

TEST(Extract, MultiWordVariant) {
    const auto v = extract_keywords("white fly under leaf", lexicon());
    EXPECT_EQ(present(v), (std::vector<std::string>{"leaves", "whitefly"}));
}

TEST(Extract, EmptyComment) {
    const auto v = extract_keywords("", lexicon());
    EXPECT_EQ(v.count(), 0u);
    EXPECT_EQ(v, KeywordVector(lexicon()));
}

TEST(Extract, IdempotentAndOrderInsensitive) {
    std::mt19937 rng(3);
    const std::vector<std::string> words{"leaf", "YELLOW", "mosaic", "white", "fly", "rotten", "root", "the",
                                         "Curling", "pale", "stunted", "dry", "stem", "healthy", "lesions"};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> tokens;
        for (int i = 0; i < 6; ++i) tokens.push_back(words[rng() % words.size()]);
        auto join = [](const std::vector<std::string>& t) {
            std::string s;
            for (const auto& w : t) s += w + " ";
            return s;
        };
        const auto v = extract_keywords(join(tokens), lexicon());
        // Re-extracting from the detected keyword names yields the same set.
        std::string names;
        for (const auto& k : present(v)) names += k + ", ";
        EXPECT_EQ(extract_keywords(names, lexicon()), v);
        // Shuffling single-token words keeps the set unless "white fly" is split.
        if (std::find(tokens.begin(), tokens.end(), "white") == tokens.end() &&
            std::find(tokens.begin(), tokens.end(), "fly") == tokens.end()) {
            std::shuffle(tokens.begin(), tokens.end(), rng);
            EXPECT_EQ(extract_keywords(join(tokens), lexicon()), v);
        }
        std::string upper = join(tokens);
        std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
        EXPECT_EQ(extract_keywords(upper, lexicon()), extract_keywords(join(tokens), lexicon()));
    }
}

TEST(Lexicon, RejectsConflicts) {
    EXPECT_THROW(KeywordLexicon({{"a", {"x"}}, {"a", {"y"}}}), Error);
    EXPECT_THROW(KeywordLexicon({{"a", {"Same"}}, {"b", {"same"}}}), Error);
    KeywordVector v(lexicon());
    EXPECT_THROW(v.set("nonsense"), Error);
}

TEST(Lexicon, JsonRoundTrip) {
    std::stringstream buf;
    write_lexicon_json(buf, lexicon());
    const auto back = read_lexicon_json(buf);
    EXPECT_EQ(back.keywords(), lexicon().keywords());
    std::ifstream shipped(std::string(CROPSENSE_DATA_DIR) + "/lexicon.json");
    EXPECT_EQ(read_lexicon_json(shipped).keywords(), lexicon().keywords());
    std::istringstream bad("{\"keywords\": 3}");
    EXPECT_THROW(read_lexicon_json(bad), Error);
}

TEST(Rules, Examples) {
    EXPECT_EQ(primary_diagnosis(with({"cmd", "curling"})), Diagnosis::CMD);
    EXPECT_EQ(primary_diagnosis(with({"whitefly"})), Diagnosis::None);
    EXPECT_EQ(primary_diagnosis(KeywordVector(lexicon())), Diagnosis::None);
    EXPECT_EQ(primary_diagnosis(with({"cgm", "cbb"})), Diagnosis::CBB);
    EXPECT_EQ(primary_diagnosis(with({"candlestick"})), Diagnosis::CBSD);
    EXPECT_EQ(primary_diagnosis(with({"rotten", "root"})), Diagnosis::CBSD);
    EXPECT_EQ(primary_diagnosis(with({"yellow", "curling"})), Diagnosis::CMD);
    EXPECT_EQ(primary_diagnosis(with({"yellow"})), Diagnosis::None);
    EXPECT_EQ(primary_diagnosis(with({"lesions", "wilting"})), Diagnosis::CBB);
    EXPECT_EQ(primary_diagnosis(with({"pale", "stunted"})), Diagnosis::CGM);
    EXPECT_EQ(primary_diagnosis(with({"healthy", "twisted"})), Diagnosis::None);
}

TEST(Rules, ShippedFileMatchesBuiltin) {
    std::ifstream in(std::string(CROPSENSE_DATA_DIR) + "/rules.json");
    const auto rules = read_rules_json(in);
    std::mt19937 rng(11);
    const auto keys = lexicon().keywords();
    for (int trial = 0; trial < 500; ++trial) {
        KeywordVector v(lexicon());
        for (const auto& k : keys) {
            if (rng() % 8 == 0) v.set(k);
        }
        EXPECT_EQ(primary_diagnosis(v, rules), primary_diagnosis(v));
    }
}

TEST(Matrix, Table2Fixture) {
    const auto m = table2();
    EXPECT_EQ(m.total(), 7491u);
    EXPECT_EQ(m.at(Diagnosis::CMD, Diagnosis::CMD), 3072u);
    const std::array<ConfusionMatrix::Count, 5> all{1063, 2056, 718, 3551, 103};
    for (std::size_t i = 0; i < kDiagnoses.size(); ++i) EXPECT_EQ(m.column_sum(kDiagnoses[i]), all[i]);

    const auto cbb = precision_recall(m, Diagnosis::CBB);
    EXPECT_NEAR(cbb.precision, 655.0 / 1063.0, 1e-12);
    EXPECT_NEAR(cbb.precision, 0.616, 0.0005);
    EXPECT_NEAR(cbb.recall, 0.431, 0.0005);
    EXPECT_EQ(cbb.support, 1518u);
    const auto cbsd = precision_recall(m, Diagnosis::CBSD);
    EXPECT_NEAR(cbsd.recall, 0.705, 0.0005);
    EXPECT_NEAR(cbsd.precision, 0.278, 0.0005);
}

TEST(Matrix, ZeroDivision) {
    const auto none = precision_recall(table2(), Diagnosis::None);
    EXPECT_EQ(none.precision, 0.0);  // diagonal is 0
    EXPECT_FALSE(none.zero_support);
    ConfusionMatrix empty;
    const auto m = precision_recall(empty, Diagnosis::CMD);
    EXPECT_TRUE(m.zero_support);
    EXPECT_TRUE(m.zero_predicted);
    EXPECT_EQ(m.recall, 0.0);
}

TEST(Matrix, PerfectDiagonal) {
    ConfusionMatrix m;
    for (Diagnosis d : kDiagnoses) m.add(d, d, 10);
    for (Diagnosis d : kDiagnoses) {
        EXPECT_EQ(precision_recall(m, d).precision, 1.0);
        EXPECT_EQ(precision_recall(m, d).recall, 1.0);
    }
}

TEST(Matrix, FromPairs) {
    EXPECT_EQ(confusion_matrix({}).total(), 0u);
    const std::vector<std::pair<Diagnosis, Diagnosis>> one{{Diagnosis::CMD, Diagnosis::CMD}};
    const auto m = confusion_matrix(one);
    EXPECT_EQ(m.total(), 1u);
    EXPECT_EQ(m.trace(), 1u);
}

TEST(Matrix, MicroRecallIsAccuracyAndMergeIsAssociative) {
    const auto m = table2();
    ConfusionMatrix::Count diag = 0;
    for (Diagnosis d : kDiagnoses) diag += m.at(d, d);
    EXPECT_EQ(diag, m.trace());
    std::mt19937 rng(5);
    auto random_matrix = [&] {
        ConfusionMatrix r;
        for (Diagnosis a : kDiagnoses) {
            for (Diagnosis p : kDiagnoses) r.add(a, p, rng() % 50);
        }
        return r;
    };
    for (int i = 0; i < 20; ++i) {
        const auto a = random_matrix(), b = random_matrix(), c = random_matrix();
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(a + b, b + a);
        for (Diagnosis d : kDiagnoses) {
            const auto pr = precision_recall(a, d);
            EXPECT_GE(pr.precision, 0.0);
            EXPECT_LE(pr.precision, 1.0);
            EXPECT_GE(pr.recall, 0.0);
            EXPECT_LE(pr.recall, 1.0);
        }
    }
}

TEST(MatrixCsv, RoundTripAndAllRowCheck) {
    const auto m = table2();
    std::stringstream buf;
    write_matrix_csv(buf, m);
    EXPECT_EQ(read_matrix_csv(buf), m);

    std::istringstream bad("actual,CBB,CBSD,CGM,CMD,None\nCBB,1,0,0,0,0\nall,2,0,0,0,0\n");
    try {
        read_matrix_csv(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ParseError);
    }
}

TEST(Corpus, CoverageAndMatrixRegeneration) {
    // 15,500 annotated reports; the 7,491 with comments carry a comment that
    // the rules map to the Table 2 prediction for that cell.
    const auto m = table2();
    const std::map<Diagnosis, std::string> comment_for{{Diagnosis::CBB, "bacterial blight cbb"},
                                                        {Diagnosis::CBSD, "brown streak, rotten roots"},
                                                        {Diagnosis::CGM, "green mite"},
                                                        {Diagnosis::CMD, "Mosaic on leaves"},
                                                        {Diagnosis::None, "looks healthy"}};
    for (const auto& [d, text] : comment_for) {
        ASSERT_EQ(primary_diagnosis(extract_keywords(text, lexicon())), d) << text;
    }
    ingestion::ReportStore store;
    int n = 0;
    auto add = [&](Diagnosis actual, const std::string& comment) {
        ingestion::Report r;
        r.agent_id = "A" + std::to_string(n % 175);
        r.image_ref = "img" + std::to_string(n++);
        r.label = ingestion::Label::Disease;
        r.comment = comment;
        r.expert_diagnosis = actual;
        store.insert_validated(std::move(r));
    };
    for (Diagnosis a : kDiagnoses) {
        for (Diagnosis p : kDiagnoses) {
            for (ConfusionMatrix::Count i = 0; i < m.at(a, p); ++i) add(a, comment_for.at(p));
        }
    }
    while (n < 15'500) add(kDiagnoses[static_cast<std::size_t>(n) % 5], n % 2 ? "" : "   ");
    const auto eval = evaluate_corpus(store, lexicon());
    EXPECT_EQ(eval.counted, 7491u);
    EXPECT_EQ(eval.available, 15'500u);
    EXPECT_EQ(eval.matrix, m);
}

TEST(Corpus, NoAnnotations) {
    ingestion::ReportStore store;
    ingestion::Report r;
    r.agent_id = "A";
    r.image_ref = "x";
    r.comment = "cmd";
    store.insert_validated(r);
    const auto eval = evaluate_corpus(store, lexicon());
    EXPECT_EQ(eval.counted, 0u);
    EXPECT_EQ(eval.available, 1u);
    EXPECT_EQ(eval.matrix.total(), 0u);
}

TEST(Corpus, AllCmd) {
    ingestion::ReportStore store;
    for (int i = 0; i < 25; ++i) {
        ingestion::Report r;
        r.agent_id = "A";
        r.image_ref = std::to_string(i);
        r.comment = "cmd";
        r.expert_diagnosis = Diagnosis::CMD;
        store.insert_validated(r);
    }
    const auto eval = evaluate_corpus(store, lexicon());
    EXPECT_EQ(eval.matrix.at(Diagnosis::CMD, Diagnosis::CMD), 25u);
    EXPECT_EQ(eval.matrix.trace(), eval.matrix.total());
}
