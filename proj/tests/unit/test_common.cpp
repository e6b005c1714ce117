#include <doctest.h>

#include <chrono>

#include "climkg/csv.hpp"
#include "climkg/dates.hpp"
#include "climkg/error.hpp"
#include "climkg/hashing.hpp"
#include "climkg/numeric_format.hpp"
#include "climkg/subprocess.hpp"
#include "climkg/text.hpp"

using namespace climkg;
using namespace std::chrono;

TEST_SUITE("common") {
  TEST_CASE("csv reader handles quotes, CRLF and embedded newlines") {
    auto rows = csv::parse("a,b\r\n\"x,1\",\"he said \"\"hi\"\"\"\n\"multi\nline\",z\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].cells == std::vector<std::string>{"x,1", "he said \"hi\""});
    CHECK(rows[2].cells[0] == "multi\nline");
    CHECK(rows[2].line == 3);
    CHECK_THROWS_AS(csv::parse("a,\"open\n"), ValidationError);
  }

  TEST_CASE("csv escape quotes only when needed") {
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::escape(" pad") == "\" pad\"");
    CHECK(csv::escape("q\"") == "\"q\"\"\"");
    CHECK(csv::format_row({"1", "x y", ""}) == "1,x y,\n");
  }

  TEST_CASE("dates") {
    auto d = dates::parse_iso_day("2000-07-02T12:30:00.000Z");
    REQUIRE(d);
    CHECK(*d == sys_days{year{2000} / 7 / 2});
    CHECK(dates::parse_iso_day("1993") == sys_days{year{1993} / 1 / 1});
    CHECK(dates::parse_iso_day("2020-12") == sys_days{year{2020} / 12 / 1});
    CHECK_FALSE(dates::parse_iso_day("2020-13-01"));
    CHECK_FALSE(dates::parse_iso_day("yesterday"));
    CHECK(dates::decimal_year(sys_days{year{2001} / 1 / 1}) == doctest::Approx(2001.0));
    CHECK(dates::parse_decimal_year("1950") == doctest::Approx(1950.0));
    CHECK(dates::format_day(sys_days{year{1993} / 1 / 1}) == "1993-01-01");
  }

  TEST_CASE("text helpers") {
    CHECK(text::trim("  a b ") == "a b");
    CHECK(text::collapse_whitespace(" a \t b\n") == "a b");
    CHECK(text::word_tokens("Sea-Surface  TEMP, 2m") == std::vector<std::string>{"sea", "surface", "temp", "2m"});
    CHECK(text::split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
    CHECK(text::iequals("NEW York", "new york"));
    CHECK(text::starts_with_icase("Temperature", "temp"));
  }

  TEST_CASE("hashing reference vectors") {
    CHECK(hashing::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(hashing::fnv1a64("") == 14695981039346656037ULL);
    CHECK(hashing::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  }

  TEST_CASE("shortest round-trip number formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_float(0.25f) == "0.25");
    CHECK(parse_int("42") == 42);
    CHECK_FALSE(parse_int("4x"));
    CHECK_FALSE(parse_double(""));
  }

  TEST_CASE("line process round trip and timeout") {
    LineProcess cat("cat");
    CHECK(cat.request("hello", seconds(5)) == "hello");
    LineProcess silent("sleep 5");
    CHECK_FALSE(silent.request("x", milliseconds(100)));
    CHECK_FALSE(silent.alive());
  }
}
