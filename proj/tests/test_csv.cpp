#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rsc/csv.hpp"

using namespace rsc;

TEST_CASE("number text round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    const std::string s = format_number(v);
    CHECK(format_number(parse_number(s)) == s);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::optional<double>{}) == "");
  CHECK(std::isnan(parse_number("nan")));
  CHECK(parse_number("-inf") < 0);
  CHECK_THROWS_AS(parse_number("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_number(""), std::invalid_argument);
}

TEST_CASE("table round trip with quoting") {
  CsvTable t;
  t.header = {"name", "value", "note"};
  t.rows = {{"a", "1.5", "plain"}, {"b,c", "2", "say \"hi\""}, {"", "nan", "x\ny"}};
  std::stringstream ss;
  t.write(ss);
  const CsvTable back = CsvTable::read(ss);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("note") == 2);
  CHECK_THROWS(back.column("missing"));

  std::stringstream ragged("a,b\n1,2,3\n");
  CHECK_THROWS(CsvTable::read(ragged));
}
