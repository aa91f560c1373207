#include "doctest.h"

#include <sstream>

#include "altmin/feasibility.hpp"
#include "altmin/problem_spec.hpp"
#include "altmin/suites.hpp"

using altmin::ProblemSpec;
using altmin::SpecError;
using altmin::Vector;
using nlohmann::json;

namespace {

json triangles() {
  return json::parse(R"({
    "dimension": 2,
    "set_p": {"kind": "vpolytope", "vertices": [[0, 0], [2, 0], [0, 2]]},
    "set_q": {"kind": "vpolytope", "vertices": [[1, 1], [3, 1]]},
    "algorithm": "alm-adaptive",
    "step_rule": "agnostic",
    "max_iters": 1000,
    "seed": 1,
    "output": "trace.csv"
  })");
}

json segments() {
  json j = triangles();
  j["set_p"]["vertices"] = json::parse("[[0, 0], [0, 1]]");
  j["set_q"]["vertices"] = json::parse("[[2, 0], [2, 1]]");
  return j;
}

std::string field_of(const json& j) {
  try {
    altmin::parse_problem_spec(j);
  } catch (const SpecError& e) {
    return e.field();
  }
  return "<accepted>";
}

std::string csv_of(const ProblemSpec& spec) {
  std::ostringstream out;
  altmin::solve_problem(spec, &out);
  return out.str();
}

}  // namespace

TEST_CASE("parses every geometry kind") {
  json j = triangles();
  j["dimension"] = 3;
  const char* kinds[] = {
      R"({"kind": "box", "lower": [0, 0, 0], "upper": [1, 2, 3]})",
      R"({"kind": "ball", "center": [0, 0, 1], "radius": 2})",
      R"({"kind": "simplex", "dimension": 3, "scale": 2})",
      R"({"kind": "l1ball", "center": [1, 0, 0], "radius": 0.5})",
      R"({"kind": "vpolytope", "vertices": [[0, 0, 0], [1, 1, 1]]})",
  };
  for (const char* k : kinds) {
    j["set_p"] = json::parse(k);
    j["set_q"] = json::parse(k);
    const ProblemSpec spec = altmin::parse_problem_spec(j);
    CHECK(spec.set_p.dimension() == 3);
    // Round trip through JSON.
    const ProblemSpec again = altmin::parse_problem_spec(altmin::problem_spec_to_json(spec));
    CHECK(altmin::geometry_to_json(again.set_p) == altmin::geometry_to_json(spec.set_p));
  }
}

TEST_CASE("errors name the offending field") {
  json j = triangles();
  j.erase("set_q");
  CHECK(field_of(j) == "set_q");

  j = triangles();
  j["set_p"] = json::parse(R"({"kind": "ball", "center": [0, 0]})");
  CHECK(field_of(j) == "set_p.radius");

  j = triangles();
  j["set_p"]["kind"] = "hexagon";
  CHECK(field_of(j) == "set_p.kind");

  j = triangles();
  j["max_iters"] = 0;
  CHECK(field_of(j) == "max_iters");

  j = triangles();
  j["set_q"]["vertices"][1] = json::parse("[3, 1, 0]");
  CHECK(field_of(j) == "set_q.vertices[1]");

  j = triangles();
  j["algorithm"] = "newton";
  CHECK(field_of(j) == "algorithm");

  j = triangles();
  j["step_rule"] = "long";
  CHECK(field_of(j) == "step_rule");

  j = triangles();
  j["set_p"] = json::parse(R"({"kind": "box", "lower": [1, 1], "upper": [0, 0]})");
  CHECK(field_of(j) == "set_p");

  j = triangles();
  j["set_p"] = json::parse(R"({"kind": "ball", "center": [0, 0], "radius": -1})");
  CHECK(field_of(j) == "set_p.radius");

  CHECK_THROWS_AS(altmin::load_problem_spec("/nonexistent/spec.json"), SpecError);
}

TEST_CASE("end to end verdicts and exit codes") {
  const ProblemSpec tri = altmin::parse_problem_spec(triangles());
  const auto a = altmin::solve_problem(tri, nullptr);
  CHECK(altmin::exit_code(a.certificate) == 0);
  CHECK(a.certificate.verdict_name() == "IntersectionPoint");

  const ProblemSpec seg = altmin::parse_problem_spec(segments());
  const auto b = altmin::solve_problem(seg, nullptr);
  CHECK(altmin::exit_code(b.certificate) == 1);

  json hard = triangles();
  hard["set_p"] = json::parse(R"({"kind": "ball", "center": [0, 0], "radius": 1})");
  hard["set_q"] = json::parse(R"({"kind": "ball", "center": [1.9, 0], "radius": 1})");
  hard["max_iters"] = 1;
  const auto c = altmin::solve_problem(altmin::parse_problem_spec(hard), nullptr);
  CHECK(altmin::exit_code(c.certificate) == 2);
}

TEST_CASE("unsupported combination is reported") {
  json j = triangles();
  j["algorithm"] = "pocs";
  CHECK_THROWS_AS(altmin::solve_problem(altmin::parse_problem_spec(j), nullptr), altmin::UnsupportedOperation);
}

TEST_CASE("every algorithm produces a trace that parses back") {
  for (const char* algo : {"alm", "alm-adaptive", "cbcg"}) {
    for (const json& base : {triangles(), segments()}) {
      json j = base;
      j["algorithm"] = algo;
      j["max_iters"] = 64;
      const ProblemSpec spec = altmin::parse_problem_spec(j);
      std::ostringstream out;
      const auto outcome = altmin::solve_problem(spec, &out);
      std::istringstream in(out.str());
      const auto rows = altmin::read_trace_csv(in);
      CAPTURE(algo);
      CHECK(rows.size() == outcome.trace_rows);
      CHECK(altmin::validate_certificate(spec.set_p, spec.set_q, outcome.certificate).valid);
    }
  }
}

TEST_CASE("trace csv round trip is exact") {
  json j = triangles();
  j["algorithm"] = "alm";
  j["max_iters"] = 100;
  const ProblemSpec spec = altmin::parse_problem_spec(j);
  const auto run = altmin::alm_run(spec.set_p, spec.set_q, spec.rule, spec.max_iters);
  std::ostringstream out;
  altmin::write_trace_csv(out, run.trace);
  std::istringstream in(out.str());
  const auto rows = altmin::read_trace_csv(in);
  REQUIRE(rows.size() == run.trace.rows.size());
  REQUIRE(rows.size() == 2 * spec.max_iters);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].objective == run.trace.rows[i].objective);
    CHECK(rows[i].block_gap == run.trace.rows[i].block_gap);
    CHECK(rows[i].gamma == run.trace.rows[i].gamma);
    CHECK(rows[i].full_gap == run.trace.rows[i].full_gap);
    CHECK(rows[i].lmo_calls == run.trace.rows[i].lmo_calls);
  }
  CHECK(out.str().rfind("t,block,objective,block_gap,full_gap,gamma,lmo_calls\n", 0) == 0);
}

TEST_CASE("identical specs give byte-identical traces") {
  for (const char* algo : {"alm", "alm-adaptive", "cbcg"}) {
    json j = segments();
    j["algorithm"] = algo;
    j["step_rule"] = "short";
    const ProblemSpec spec = altmin::parse_problem_spec(j);
    CHECK(csv_of(spec) == csv_of(spec));
  }
  json p = triangles();
  p["algorithm"] = "pocs";
  p["set_p"] = json::parse(R"({"kind": "ball", "center": [0, 0], "radius": 1})");
  p["set_q"] = json::parse(R"({"kind": "box", "lower": [2, 0], "upper": [3, 1]})");
  const ProblemSpec pocs = altmin::parse_problem_spec(p);
  const std::string csv = csv_of(pocs);
  CHECK(csv == csv_of(pocs));
  CHECK(csv.rfind("t,distance_sq,residual\n", 0) == 0);
}

TEST_CASE("certificate json re-validates") {
  for (const json& j : {triangles(), segments()}) {
    const ProblemSpec spec = altmin::parse_problem_spec(j);
    const auto outcome = altmin::solve_problem(spec, nullptr);
    const json record = altmin::certificate_to_json(outcome.certificate);
    CHECK(record.contains("verdict"));
    CHECK(record.contains("lmo_calls"));
    CHECK(record.contains("iterations"));
    const auto back = altmin::certificate_from_json(json::parse(record.dump()));
    CHECK(back.verdict_name() == outcome.certificate.verdict_name());
    CHECK(altmin::validate_certificate(spec.set_p, spec.set_q, back).valid);
    if (back.is_intersection()) {
      const Vector& x = std::get<altmin::IntersectionPoint>(back.verdict).point;
      CHECK(altmin::membership(x, altmin::columns(*spec.set_p.vertices())));
      CHECK(altmin::membership(x, altmin::columns(*spec.set_q.vertices())));
    } else {
      const auto& d = std::get<altmin::Disjoint>(back.verdict);
      CHECK(altmin::support_gap(spec.set_p, spec.set_q, d.direction) > 0.0);
      CHECK(record.contains("margin"));
    }
  }
}

TEST_CASE("direction parsing") {
  const Vector d = altmin::parse_direction("1,-0.5, 2e-1");
  REQUIRE(d.size() == 3);
  CHECK(d[1] == -0.5);
  CHECK(d[2] == 0.2);
  CHECK_THROWS_AS(altmin::parse_direction("1,x"), SpecError);
  CHECK_THROWS_AS(altmin::parse_direction(""), SpecError);
}

TEST_CASE("unknown bench suite") {
  CHECK_THROWS_AS(altmin::run_suite("unknown"), altmin::InvalidArgument);
}
