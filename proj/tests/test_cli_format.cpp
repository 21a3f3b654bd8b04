#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "dfrac/cli_format.hpp"

using namespace dfrac;

TEST_CASE("fixed-width float formatting") {
    CHECK(format_double(0.0) == "0.000000000000e+00");
    CHECK(format_double(-0.0) == "0.000000000000e+00");
    CHECK(format_double(1.0) == "1.000000000000e+00");
    CHECK(format_double(-2.4) == "-2.400000000000e+00");
    CHECK(format_double(0.3875) == "3.875000000000e-01");
    CHECK(format_double(1.2877985010485389) == "1.287798501049e+00");
    CHECK(format_double(1e-300) == "1.000000000000e-300");
}

TEST_CASE("envelope serialization is byte-stable with fixed field order") {
    OutputEnvelope env;
    env.command = "bound";
    env.params["alpha"] = 1.5;
    env.params["b"] = 3;
    env.sign_sigma = -1;
    env.results["value"] = 0.3875;
    std::string s = dump_deterministic(envelope_json(env));
    CHECK(s ==
          "{\"schema_version\":\"1\",\"command\":\"bound\","
          "\"params\":{\"alpha\":1.500000000000e+00,\"b\":3},"
          "\"sign_sigma\":-1,"
          "\"results\":{\"value\":3.875000000000e-01},"
          "\"warnings\":[],\"errors\":[]}");
    // Identical envelopes serialize identically.
    CHECK(s == dump_deterministic(envelope_json(env)));
}

TEST_CASE("non-finite numbers serialize as null") {
    ojson j = ojson::object();
    j["a"] = std::numeric_limits<double>::quiet_NaN();
    j["b"] = std::numeric_limits<double>::infinity();
    CHECK(dump_deterministic(j) == "{\"a\":null,\"b\":null}");
}

TEST_CASE("string escaping covers quotes, backslashes, and control bytes") {
    ojson j = std::string("a\"b\\c\nd\x01");
    CHECK(dump_deterministic(j) == "\"a\\\"b\\\\c\\nd\\u0001\"");
}

TEST_CASE("booleans, integers, and nesting") {
    ojson j = ojson::object();
    j["flag"] = true;
    j["off"] = false;
    j["n"] = -7;
    ojson arr = ojson::array();
    arr.push_back(1);
    arr.push_back(0.5);
    j["xs"] = arr;
    CHECK(dump_deterministic(j) ==
          "{\"flag\":true,\"off\":false,\"n\":-7,\"xs\":[1,5.000000000000e-01]}");
}

TEST_CASE("csv emission quotes only what needs quoting") {
    CsvTable t;
    t.header = {"t", "note"};
    t.rows = {{"a+0", "1,5"}, {"he\"y", "line\nbreak"}, {"plain", "x"}};
    std::string s = csv_emit(t);
    CHECK(s ==
          "t,note\n"
          "a+0,\"1,5\"\n"
          "\"he\"\"y\",\"line\nbreak\"\n"
          "plain,x\n");
}

TEST_CASE("csv parse inverts emit") {
    CsvTable t;
    t.header = {"t", "note"};
    t.rows = {{"a+0", "1,5"}, {"he\"y", "line\nbreak"}, {"", "trailing"}};
    std::string s = csv_emit(t);
    CsvTable back = csv_parse(s);
    REQUIRE(back.header == t.header);
    REQUIRE(back.rows == t.rows);
    CHECK(csv_emit(back) == s);
}

TEST_CASE("csv parse tolerates CRLF input") {
    CsvTable t = csv_parse("a,b\r\nc,d\r\n");
    REQUIRE(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0] == std::vector<std::string>{"c", "d"});
}

TEST_CASE("csv parse keeps empty fields") {
    CsvTable t = csv_parse("a,b\n,c\nd,\n");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == std::vector<std::string>{"", "c"});
    CHECK(t.rows[1] == std::vector<std::string>{"d", ""});
}

TEST_CASE("csv parse handles a missing final newline") {
    CsvTable t = csv_parse("a,b\nc,d");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0] == std::vector<std::string>{"c", "d"});
}
