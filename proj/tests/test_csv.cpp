#include <limits>
#include <random>

#include "doctest.h"
#include "sentreg/csv.hpp"
#include "sentreg/error.hpp"
#include "support.hpp"

using namespace sentreg;

TEST_CASE("quoted fields, embedded newlines and doubled quotes") {
  const auto t = CsvTable::parse("id,text\r\n1,\"a, \"\"b\"\"\nc\"\r\n\r\n2,plain\n", "mem");
  REQUIRE(t.rows().size() == 2);
  CHECK(t.rows()[0].fields[1] == "a, \"b\"\nc");
  CHECK(t.rows()[0].line == 2);
  CHECK(t.rows()[1].line == 5);
  CHECK(t.rows()[1].fields[1] == "plain");
}

TEST_CASE("byte order mark and header whitespace are ignored") {
  const auto t = CsvTable::parse("\xEF\xBB\xBFid , state\nx,NC\n", "mem");
  CHECK(t.column("id") == 0);
  CHECK(t.column("state") == 1);
}

TEST_CASE("malformed rows report their line") {
  CHECK_THROWS_WITH_AS(CsvTable::parse("a,b\n1,2\n3\n", "f.csv"), doctest::Contains("f.csv:3"), InputError);
  CHECK_THROWS_AS(CsvTable::parse("a\n\"open\n", "f.csv"), InputError);
  CHECK_THROWS_AS(CsvTable::parse("a\n\"x\"y\n", "f.csv"), InputError);
  CHECK_THROWS_AS(CsvTable::parse("", "f.csv"), InputError);
}

TEST_CASE("missing column names the column") {
  const auto t = CsvTable::parse("id,state\n", "covariates.csv");
  CHECK(t.rows().empty());
  CHECK_THROWS_WITH(t.column("GR"), doctest::Contains("'GR'"));
}

TEST_CASE("escape and reparse round trip") {
  const std::vector<std::string> fields = {"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  const auto t = CsvTable::parse(csv_line({"a", "b", "c", "d", "e"}) + csv_line(fields), "mem");
  REQUIRE(t.rows().size() == 1);
  CHECK(t.rows()[0].fields == fields);
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(2.0) == "2");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(parse_double(format_double(v), "rt") == v);
  }
}

TEST_CASE("strict number parsing") {
  CHECK(parse_double(" 1.5 ", "x") == 1.5);
  CHECK(parse_double("+2", "x") == 2.0);
  CHECK_THROWS_AS(parse_double("1.5x", "x"), InputError);
  CHECK_THROWS_AS(parse_double("", "x"), InputError);
  CHECK(parse_int("42", "x") == 42);
  CHECK_THROWS_AS(parse_int("4.2", "x"), InputError);
}

TEST_CASE("file helpers") {
  const auto dir = testing::scratch_dir("csv");
  write_text_file(dir / "a.txt", "hello");
  CHECK(read_text_file(dir / "a.txt") == "hello");
  CHECK_THROWS_WITH_AS(read_text_file(dir / "nope.txt"), doctest::Contains("nope.txt"), IoError);
}
