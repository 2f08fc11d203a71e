#include "rspin/table_io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

using namespace rspin;

namespace {

std::size_t error_line(const std::string& text)
{
    try {
        read_table(text);
    } catch (const TableFormatError& e) {
        return e.line();
    }
    FAIL("expected a TableFormatError");
    return 0;
}

std::string doc(const std::string& r, const std::string& mode, const std::string& entries)
{
    return "{\n  \"r\": " + r + ",\n  \"mode\": " + mode + ",\n  \"entries\": [\n" + entries + "\n  ]\n}\n";
}

const std::string good0 = R"(    {"g": 0, "a": [0, 0, 0], "m": [0, 0, 0], "value": "1"})";
const std::string good1 = R"(    {"g": 0, "a": [1, 0, 0, 0], "m": [0, 0, 0, 0], "value": "1"})";

} // namespace

TEST_CASE("round trip")
{
    const auto t = seed_genus0_wk(CorrelatorTable(2), 7);
    const std::string text = write_table(t);
    const auto back = read_table(text);
    CHECK(back.r() == 2);
    CHECK(back.mode() == TableMode::Numeric);
    CHECK(back.entries() == t.entries());
    CHECK(back.frozen());
    CHECK(write_table(back) == text);

    CorrelatorTable f(3, TableMode::Formal);
    f.insert(CorrelatorKey::from_lists(3, 0, {0, 0, 0}, {0, 0, 1}), make_rational(-2, 3));
    const auto fb = read_table(write_table(f));
    CHECK(fb.mode() == TableMode::Formal);
    CHECK(fb.entries() == f.entries());

    CHECK(read_table(write_table(CorrelatorTable(4))).entries().empty());

    const auto path = (std::filesystem::temp_directory_path() / "rspin_table_roundtrip.json").string();
    save_table(t, path);
    CHECK(load_table(path).entries() == t.entries());
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_table("/nonexistent/dir/table.json"), Error);
}

TEST_CASE("malformed tables report the offending line")
{
    CHECK_NOTHROW(read_table(doc("2", "\"numeric\"", good0 + ",\n" + good1)));

    // selection-rule violation on the second entry (line 6)
    CHECK(error_line(doc("2", "\"numeric\"",
                         good0 + ",\n" + R"(    {"g": 0, "a": [1, 0, 0], "m": [0, 0, 0], "value": "1"})")) == 6);
    // nonzero value on a vanishing key
    CHECK(error_line(doc("2", "\"numeric\"", R"(    {"g": 0, "a": [0, 0, 0], "m": [1, 0, 0], "value": "5"})")) == 5);
    // duplicate
    CHECK(error_line(doc("2", "\"numeric\"", good0 + ",\n" + good1 + ",\n" + good0)) == 7);
    // bad rational
    CHECK(error_line(doc("2", "\"numeric\"", R"(    {"g": 0, "a": [0, 0, 0], "m": [0, 0, 0], "value": "1/0"})")) == 5);
    CHECK(error_line(doc("2", "\"numeric\"", R"(    {"g": 0, "a": [0, 0, 0], "m": [0, 0, 0], "value": 1})")) == 5);
    // missing and unknown entry fields
    CHECK(error_line(doc("2", "\"numeric\"", good0 + ",\n" + R"(    {"g": 0, "a": [0, 0, 0], "value": "1"})")) == 6);
    CHECK(error_line(doc("2", "\"numeric\"", R"(    {"g": 0, "a": [0], "m": [0], "value": "1", "x": 1})")) == 5);
    // length mismatch
    CHECK(error_line(doc("2", "\"numeric\"", R"(    {"g": 0, "a": [0, 0], "m": [0, 0, 0], "value": "1"})")) == 5);
    // header problems
    CHECK(error_line(doc("1", "\"numeric\"", good0)) == 2);
    CHECK(error_line(doc("2", "\"approximate\"", good0)) == 3);
    CHECK(error_line("{\n  \"r\": 2,\n  \"mode\": \"numeric\",\n  \"extra\": 1,\n  \"entries\": []\n}\n") == 4);
    CHECK(error_line("{\n  \"r\": 2,\n  \"entries\": []\n}\n") == 1);
    // syntax error on line 3
    CHECK(error_line("{\n  \"r\": 2,\n  \"mode\" \"numeric\",\n  \"entries\": []\n}\n") == 3);

    try {
        read_table(doc("2", "\"numeric\"", good0 + ",\n" + good0));
        FAIL("duplicate accepted");
    } catch (const TableFormatError& e) {
        CHECK(std::string(e.what()).rfind("line 6: ", 0) == 0);
    }
}
