// Copyright 2026 The optosqueeze Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "optosqueeze/config.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/result_table.hpp"

using namespace optosqueeze;

namespace {

constexpr double kPi = std::numbers::pi;

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("keys, sections and comments") {
  const Config c = Config::parse(
      "# leading comment\n"
      "experiment = fidelity-sweep   # trailing\n"
      "\n"
      "squeeze.phi=0.0628\n"
      "[sweep]\n"
      "log10_q = 4, 5, 6\n"
      "name = \"a # b\"\n");
  CHECK(c.get_string("experiment") == "fidelity-sweep");
  CHECK(c.get_double("squeeze.phi") == 0.0628);
  CHECK(c.get_list("sweep.log10_q") == std::vector<double>{4, 5, 6});
  CHECK(c.get_string("sweep.name") == "a # b");
  CHECK(c.entries().size() == 4);
}

TEST_CASE("grammar errors name the line") {
  CHECK(error_of([] { Config::parse("no equals sign\n", "f.cfg"); }).find("f.cfg") !=
        std::string::npos);
  CHECK(error_of([] { Config::parse("a = 1\na = 2\n"); }).find("'a'") != std::string::npos);
  CHECK_THROWS_AS(Config::parse("[unterminated\n"), ValidationError);
  CHECK_THROWS_AS(Config::parse(" = 3\n"), ValidationError);
}

TEST_CASE("typed getters name the key") {
  const Config c = Config::parse("x = abc\nflag = maybe\nn = 2.5\n");
  CHECK(error_of([&] { c.get_double("x"); }).find("'x'") != std::string::npos);
  CHECK(error_of([&] { c.get_bool("flag"); }).find("'flag'") != std::string::npos);
  CHECK(error_of([&] { c.get_int("n"); }).find("'n'") != std::string::npos);
  CHECK(error_of([&] { c.get_string("missing"); }).find("'missing'") != std::string::npos);
}

TEST_CASE("booleans and integers") {
  const Config c = Config::parse("a = true\nb = no\nc = 1\nd = off\nn = 42\n");
  CHECK(c.get_bool("a"));
  CHECK_FALSE(c.get_bool("b"));
  CHECK(c.get_bool("c"));
  CHECK_FALSE(c.get_bool("d"));
  CHECK(c.get_int("n") == 42);
}

TEST_CASE("real numbers") {
  CHECK(parse_real("1e-3") == 1e-3);
  CHECK(parse_real(" -2.5 ") == -2.5);
  CHECK(parse_real("pi") == kPi);
  CHECK(parse_real("2pi/100") == doctest::Approx(2 * kPi / 100).epsilon(1e-15));
  CHECK(parse_real("pi/50") == doctest::Approx(kPi / 50).epsilon(1e-15));
  CHECK(parse_real("0.5*pi") == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(parse_real("inf") == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(parse_real("abc"), ValidationError);
  CHECK_THROWS_AS(parse_real("1.0x"), ValidationError);
  CHECK_THROWS_AS(parse_real(""), ValidationError);
  CHECK_THROWS_AS(parse_real("pi/0"), ValidationError);
}

TEST_CASE("ranges and lists") {
  CHECK(parse_range("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_range("2:5:1") == std::vector<double>{2.0});
  const std::vector<double> r = parse_range("-1.2:1.2:49");
  CHECK(r.size() == 49);
  CHECK(r.front() == -1.2);
  CHECK(r.back() == 1.2);
  CHECK(r[24] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(parse_list("1, 2.5,3") == std::vector<double>{1.0, 2.5, 3.0});
  CHECK(parse_list("0:2:3") == std::vector<double>{0.0, 1.0, 2.0});
  CHECK_THROWS_AS(parse_range("0:1:0"), ValidationError);
  CHECK_THROWS_AS(parse_range("0:1"), ValidationError);
  CHECK_THROWS_AS(parse_list("1,,2"), ValidationError);
}

TEST_CASE("overrides") {
  Config c = Config::parse("squeeze.mu = 2\n");
  c.apply_override("squeeze.mu=3");
  c.apply_override(" squeeze.phi = pi/50 ");
  CHECK(c.get_double("squeeze.mu") == 3.0);
  CHECK(c.get_double("squeeze.phi") == doctest::Approx(kPi / 50));
  CHECK_THROWS_AS(c.apply_override("novalue"), ValidationError);
  CHECK_THROWS_AS(c.apply_override("=3"), ValidationError);
}

TEST_CASE("real formatting round trips") {
  for (const double v : {0.1, 1.0 / 3.0, 2 * kPi / 100, 1e-300, -7.25e12}) {
    CHECK(parse_real(format_real(v)) == v);
  }
}

TEST_CASE("result CSV round trips with its config") {
  ResultTable t({"mu", "infidelity, ideal"});
  t.set_metadata("version", kVersion);
  t.set_metadata("experiment", "squeeze");
  t.set_config({{"experiment", "squeeze"}, {"squeeze.mu", "1.4142"}, {"sweep.list", "1, 2"}});
  t.add_row({1.0 / 3.0, 0.018093858810724117});
  t.add_row({2.0, std::numeric_limits<double>::infinity()});
  std::stringstream out;
  t.write_csv(out);
  const std::string text = out.str();
  std::stringstream in(text);
  const ResultTable back = ResultTable::read_csv(in);
  CHECK(back == t);
  const Config c = Config::from_result_csv(text);
  CHECK(c.get_string("experiment") == "squeeze");
  CHECK(c.get_double("squeeze.mu") == 1.4142);
  CHECK(c.get_list("sweep.list") == std::vector<double>{1.0, 2.0});
}

TEST_CASE("result JSON round trips") {
  ResultTable t({"a", "b"});
  t.set_metadata("version", kVersion);
  t.set_config({{"experiment", "multimode"}});
  t.add_row({0.1, -std::numeric_limits<double>::infinity()});
  t.add_row({1e-300, 5.0});
  std::stringstream out;
  t.write_json(out);
  std::stringstream in(out.str());
  CHECK(ResultTable::read_json(in) == t);
}

TEST_CASE("tables must stay rectangular") {
  ResultTable t({"a", "b"});
  CHECK_THROWS_AS(t.add_row({1.0}), ValidationError);
  CHECK_THROWS_AS(t.column("c"), ValidationError);
  std::stringstream bad("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(ResultTable::read_csv(bad), ValidationError);
}

TEST_CASE("timestamp honours SOURCE_DATE_EPOCH") {
  const char* saved = std::getenv("SOURCE_DATE_EPOCH");
  const std::string keep = saved ? saved : "";
  setenv("SOURCE_DATE_EPOCH", "1767225600", 1);
  CHECK(build_timestamp() == "2026-01-01T00:00:00Z");
  if (saved) {
    setenv("SOURCE_DATE_EPOCH", keep.c_str(), 1);
  } else {
    unsetenv("SOURCE_DATE_EPOCH");
  }
}

}  // TEST_SUITE
