#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pdsys/config.hpp"
#include "pdsys/csv.hpp"
#include "pdsys/error.hpp"

using namespace pdsys;

namespace {

std::string parse_error(const std::string& text) {
  try {
    Config::parse(text, "cfg");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfigParseError);
    return e.what();
  }
  FAIL("no parse error");
  return {};
}

bool contains(const std::string& s, const std::string& sub) { return s.find(sub) != std::string::npos; }

}  // namespace

TEST_CASE("typed values") {
  const Config c = Config::parse(R"(# header
[model]
name = ns-baro   # trailing comment
mu = 1.5
d = 2
[sim]
amplitude = 1, 2.5, -3e-2
mode = 1, -2
save_fields = false
label = "quoted text"
seed = 18446744073709551615
)");
  CHECK(c.get_string("model", "name") == "ns-baro");
  CHECK(c.get_double("model", "mu") == 1.5);
  CHECK(c.get_int("model", "d") == 2);
  CHECK(c.get_doubles("sim", "amplitude") == std::vector<double>{1.0, 2.5, -0.03});
  CHECK(c.get_ints("sim", "mode") == std::vector<long long>{1, -2});
  CHECK_FALSE(c.get_bool("sim", "save_fields"));
  CHECK(c.get_string("sim", "label") == "quoted text");
  CHECK(c.get_u64("sim", "seed") == 18446744073709551615ULL);
  CHECK(c.get_double("model", "lambda", 0.25) == 0.25);
  CHECK(c.keys("model") == std::vector<std::string>{"d", "mu", "name"});
  CHECK(c.has_section("sim"));
  CHECK_FALSE(c.has("sim", "missing"));
}

TEST_CASE("diagnostics carry line and column") {
  CHECK(contains(parse_error("[model]\nname = a\n[sphere\n"), "cfg:3:1"));
  CHECK(contains(parse_error("[model]\n  name a\n"), "cfg:2:3"));
  CHECK(contains(parse_error("name = a\n"), "outside of any section"));
  CHECK(contains(parse_error("[model]\nname = a\nname = b\n"), "cfg:3:1: duplicate key"));
  CHECK(contains(parse_error("[model]\nname =\n"), "missing value"));
  CHECK(contains(parse_error("[a]\n[a]\n"), "duplicate section"));

  const Config c = Config::parse("[sim]\nwidth = wide\nmode = 1, x\n", "cfg");
  try {
    c.get_double("sim", "width");
    FAIL("expected a type error");
  } catch (const Error& e) {
    CHECK(contains(e.what(), "cfg:2:9"));
  }
  try {
    c.get_ints("sim", "mode");
    FAIL("expected a type error");
  } catch (const Error& e) {
    CHECK(contains(e.what(), "cfg:3:11"));
  }
  try {
    c.get_double("sim", "t_end");
    FAIL("expected a missing-key error");
  } catch (const Error& e) {
    CHECK(contains(e.what(), "requires key 't_end'"));
  }
}

TEST_CASE("schema checks") {
  const Config c = Config::parse("[model]\nname = a\n[extra]\nx = 1\n", "cfg");
  CHECK_THROWS_AS(c.require_sections({"model"}), Error);
  CHECK_NOTHROW(c.require_sections({"model", "extra"}));
  CHECK_THROWS_AS(c.require_keys("extra", {"y"}), Error);
}

TEST_CASE("CSV formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");

  CsvTable t({"x", "label"});
  t.add_row(std::vector<std::string>{"1", "a,b"});
  CHECK(t.str() == "x,label\r\n1,\"a,b\"\r\n");
  CHECK_THROWS_AS(t.add_row(std::vector<std::string>{"1"}), Error);
}
