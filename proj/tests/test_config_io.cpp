// Copyright 2026 The cvcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "cvcl/cvcl.hpp"

using namespace cvcl;

TEST_CASE("key=value parsing with comments and whitespace") {
  const RunConfig c = RunConfig::parse_string(
      "# header comment\n"
      "grid.x_min = -1.5\n"
      "grid.n_points=64   # trailing comment\n"
      "\n"
      "kernel.kind = gaussian\n");
  CHECK(c.has("grid.x_min"));
  CHECK(c.entries().at("grid.n_points") == "64");
  CHECK(c.entries().at("kernel.kind") == "gaussian");

  CHECK_THROWS_AS(RunConfig::parse_string("just a line without equals\n"), config_error);
  CHECK_THROWS_AS(RunConfig::parse_string("a = 1\na = 2\n"), config_error);
  CHECK_THROWS_AS(RunConfig::parse_string("= 3\n"), config_error);
}

TEST_CASE("schema resolution: unknown keys, types, defaults, choices") {
  ConfigSchema schema;
  schema.require("grid.x_min", ConfigSchema::Type::real)
      .optional("seed", ConfigSchema::Type::integer, "0")
      .choice("kernel.kind", {"gaussian", "none"}, "gaussian");

  SECTION("happy path with defaults") {
    const ResolvedConfig rc = schema.resolve(RunConfig::parse_string("grid.x_min = -2\n"));
    CHECK(rc.real("grid.x_min") == -2.0);
    CHECK(rc.integer("seed") == 0);
    CHECK(rc.str("kernel.kind") == "gaussian");
    CHECK(rc.raw().at("seed") == "0");
  }

  SECTION("unknown key is named in the error") {
    try {
      schema.resolve(RunConfig::parse_string("grid.x_min = 0\nbogus.key = 1\n"));
      FAIL("expected config_error");
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find("bogus.key") != std::string::npos);
    }
  }

  SECTION("missing required key is named") {
    try {
      schema.resolve(RunConfig::parse_string("seed = 3\n"));
      FAIL("expected config_error");
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find("grid.x_min") != std::string::npos);
    }
  }

  SECTION("type errors are rejected") {
    CHECK_THROWS_AS(schema.resolve(RunConfig::parse_string("grid.x_min = abc\n")),
                    config_error);
    CHECK_THROWS_AS(
        schema.resolve(RunConfig::parse_string("grid.x_min = 0\nseed = 1.5\n")),
        config_error);
    CHECK_THROWS_AS(
        schema.resolve(RunConfig::parse_string("grid.x_min = 0\nkernel.kind = bad\n")),
        config_error);
  }
}

TEST_CASE("CSV formatting round-trips doubles") {
  CHECK(format_real(1.0) == "1.0000000000000000e+00");
  for (double x : {3.141592653589793, 2.781e-14, -6.62607015e-34, 1e300}) {
    const double back = std::strtod(format_real(x).c_str(), nullptr);
    CHECK(back == x);
  }
}

TEST_CASE("CSV table enforces shape and finiteness") {
  CsvTable t({{"a"}, {"b", true}});
  t.add_row({1.0, 2.0});
  t.add_row({3.0, std::numeric_limits<double>::infinity()});  // b may diverge
  CHECK_THROWS_AS(t.add_row({1.0}), numeric_error);
  CHECK_THROWS_AS(t.add_row({std::numeric_limits<double>::quiet_NaN(), 1.0}),
                  numeric_error);
  const std::string s = t.to_string();
  CHECK(s.rfind("a,b\n", 0) == 0);
  CHECK(s.find("inf") != std::string::npos);
  CHECK(t.row_count() == 2);
}

TEST_CASE("SVG rendering is total and well-formed") {
  const std::vector<double> xs = {0.0, 1.0, 2.0, 3.0};
  const std::vector<double> ys = {0.0, 1e-14, 3e-14, 9e-14};
  const std::string svg = render_svg_polyline(xs, ys, "t", "delta", "test");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK_THROWS_AS(render_svg_polyline({}, {}, "x", "y", "t"), cvcl::error);
}
