#include <doctest.h>

#include <sstream>

#include "checkworthy/text.hpp"

using namespace checkworthy::text;

TEST_CASE("split keeps empty fields") {
  const auto parts = split("a\t\tb", '\t');
  REQUIRE(parts.size() == 3);
  CHECK(parts[1].empty());
}

TEST_CASE("strict numeric parsing") {
  CHECK(parse_int("42") == 42);
  CHECK_FALSE(parse_int("4x").has_value());
  CHECK_FALSE(parse_int("").has_value());
  CHECK(parse_double("0.87") == 0.87);
  CHECK(parse_double("+1") == 1.0);
  CHECK_FALSE(parse_double("1.0abc").has_value());
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5}) CHECK(*parse_double(format_double(v)) == v);
}

TEST_CASE("read_line strips carriage returns") {
  std::istringstream in("a\r\nb\n");
  std::string line;
  REQUIRE(read_line(in, line));
  CHECK(line == "a");
  REQUIRE(read_line(in, line));
  CHECK(line == "b");
  CHECK_FALSE(read_line(in, line));
}
