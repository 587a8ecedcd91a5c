#include "cropsense/csv.hpp"
#include "cropsense/error.hpp"
#include "cropsense/time.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace cropsense;
using namespace std::chrono;

TEST(Time, Rfc3339RoundTrip) {
    const Timestamp t = parse_rfc3339("2018-06-01T08:30:15Z");
    EXPECT_EQ(format_rfc3339(t), "2018-06-01T08:30:15Z");
    EXPECT_EQ(parse_rfc3339("2018-06-01T11:30:15+03:00"), t);
    EXPECT_EQ(parse_rfc3339("2018-06-01T08:30:15.987Z"), t);
}

TEST(Time, Rfc3339RejectsGarbage) {
    EXPECT_THROW(parse_rfc3339("2018-06-01"), Error);
    EXPECT_THROW(parse_rfc3339("2018-13-01T00:00:00Z"), Error);
    EXPECT_THROW(parse_rfc3339("not a time"), Error);
}

TEST(Time, IsoWeeks) {
    const Date start = parse_date("2018-04-16");
    EXPECT_EQ(iso_week_start(start), start);
    EXPECT_EQ(iso_week_start(parse_date("2018-04-22")), start);
    EXPECT_EQ(format_iso_week(start), "2018-W16");
    EXPECT_EQ(parse_iso_week("2018-W16"), start);
    // ISO year boundary: 2018-12-31 belongs to 2019-W01.
    EXPECT_EQ(format_iso_week(parse_date("2018-12-31")), "2019-W01");
    EXPECT_EQ(parse_iso_week("2019-W01"), parse_date("2018-12-31"));
}

TEST(Time, CampaignSpans33Weeks) {
    const Date first = parse_date("2018-04-16");
    const Date last = first + days{226};
    EXPECT_EQ(format_date(last), "2018-11-28");
    EXPECT_EQ((iso_week_start(last) - first).count() / 7 + 1, 33);
}

TEST(Csv, QuotedFields) {
    const auto f = csv::split_line(R"(a,"b,c","d ""e""",)");
    ASSERT_EQ(f.size(), 4u);
    EXPECT_EQ(f[1], "b,c");
    EXPECT_EQ(f[2], "d \"e\"");
    EXPECT_EQ(f[3], "");
    EXPECT_EQ(csv::join({"x", "y,z", "q\""}), "x,\"y,z\",\"q\"\"\"");
}

TEST(Csv, RaggedRowReportsLine) {
    std::istringstream in("a,b\n1,2\n\n3\n");
    try {
        csv::read(in);
        FAIL() << "expected ParseError";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ParseError);
        EXPECT_NE(std::string(e.what()).find('4'), std::string::npos);
    }
}

TEST(Csv, CrlfAndBlankLines) {
    std::istringstream in("a,b\r\n1,2\r\n\r\n3,4\r\n");
    const auto t = csv::read(in);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[1].fields[1], "4");
    EXPECT_EQ(t.column("b"), 1u);
    EXPECT_FALSE(t.column("c"));
}
