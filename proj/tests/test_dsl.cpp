// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dsl.hpp"

using namespace geoforge;

namespace {

GeoProgram triangle_program() {
    return parse_program(
        "A = point(label=\"A\")\n"
        "B = point(label=\"B\")\n"
        "C = point(label=\"C\")\n"
        "line_1 = line(through=[A, B])\n"
        "line_2 = line(through=[B, C])\n"
        "line_3 = line(through=[C, A])\n");
}

}  // namespace

TEST_CASE("parse two points and a line") {
    GeoProgram p = parse_program(
        "A = point(label=\"A\")\n"
        "B = point(label=\"B\")\n"
        "line_1 = line(through=[A, B])\n");
    CHECK(p.points.size() == 2);
    CHECK(p.lines.size() == 1);
    CHECK(p.circles.empty());
    CHECK(p.constraints.empty());
    CHECK(p.lines[0].through == std::vector<int>{0, 1});
    CHECK(p.points[0].label == 'A');
}

TEST_CASE("empty input gives empty program") {
    GeoProgram p = parse_program("");
    CHECK(p.points.empty());
    CHECK(p.lines.empty());
    CHECK(p.circles.empty());
    CHECK(p.constraints.empty());
    CHECK(serialize_program(p).empty());
}

TEST_CASE("undeclared reference is an error") {
    try {
        parse_program("line_1 = line(through=[A, B])\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::Reference);
        CHECK(e.line() == 1);
    }
}

TEST_CASE("duplicate label is an error") {
    CHECK_THROWS_AS(parse_program("A = point(label=\"A\")\n"
                                  "X = point(label=\"A\")\n"),
                    ParseError);
}

TEST_CASE("constraint with wrong argument kind") {
    try {
        parse_program(
            "A = point(label=\"A\")\n"
            "B = point(label=\"B\")\n"
            "line_1 = line(through=[A, B])\n"
            "parallel(line_1, A)\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::Arity);
        CHECK(e.line() == 4);
    }
}

TEST_CASE("syntax errors carry position") {
    try {
        parse_program("A = point(label=\"A\"\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::Syntax);
        CHECK(e.line() == 1);
        CHECK(e.col() > 1);
    }
}

TEST_CASE("single point serialization") {
    GeoProgram p;
    p.points.push_back({'A', 0});
    CHECK(serialize_program(p) == "A = point(label=\"A\")\n");
}

TEST_CASE("anonymous point serialization and numbering") {
    GeoProgram p = parse_program("whatever = point()\n");
    REQUIRE(p.points.size() == 1);
    CHECK(p.points[0].anonymous());
    CHECK(p.points[0].anon_index == 1);
    CHECK(serialize_program(p) == "unlabeled_point_1 = point()\n");
}

TEST_CASE("comments and blank lines are skipped") {
    GeoProgram p = parse_program(
        "# header comment\n"
        "\n"
        "A = point(label=\"A\")  # trailing note\n");
    CHECK(p.points.size() == 1);
}

TEST_CASE("canonical form separates sections with blank lines") {
    GeoProgram p = parse_program(
        "A = point(label=\"A\")\n"
        "B = point(label=\"B\")\n"
        "C = point(label=\"C\")\n"
        "l = line(through=[A, B])\n"
        "m = line(through=[B, C])\n"
        "c = circle(center=C, through=[A])\n"
        "perpendicular(l, m)\n"
        "tangent_line_circle(l, c)\n");
    CHECK(serialize_program(p) ==
          "A = point(label=\"A\")\n"
          "B = point(label=\"B\")\n"
          "C = point(label=\"C\")\n"
          "\n"
          "line_1 = line(through=[A, B])\n"
          "line_2 = line(through=[B, C])\n"
          "\n"
          "circle_1 = circle(center=C, through=[A])\n"
          "\n"
          "perpendicular(line_1, line_2)\n"
          "tangent_line_circle(line_1, circle_1)\n");
}

TEST_CASE("round-trip on a mixed program") {
    std::string text =
        "Q = point(label=\"Q\")\n"
        "W = point(label=\"W\")\n"
        "Y = point(label=\"Y\")\n"
        "unlabeled_point_1 = point()\n"
        "G = point(label=\"G\")\n"
        "\n"
        "line_1 = line(through=[Q, W])\n"
        "line_2 = line(through=[W, Y])\n"
        "line_3 = line(through=[Y, Q])\n"
        "line_4 = line(through=[Q, unlabeled_point_1])\n"
        "\n"
        "circle_1 = circle(through=[Q, W, unlabeled_point_1])\n"
        "circle_2 = circle(through=[Q, W, Y])\n"
        "\n"
        "perpendicular(line_4, line_2)\n"
        "equal_distance((Q, W), (W, Y))\n"
        "tangent_circle_circle(circle_1, circle_2)\n";
    GeoProgram p = parse_program(text);
    CHECK(serialize_program(p) == text);
    CHECK(parse_program(serialize_program(p)) == p);
}

TEST_CASE("equal_distance parses nested pairs") {
    GeoProgram p = parse_program(
        "A = point(label=\"A\")\n"
        "B = point(label=\"B\")\n"
        "C = point(label=\"C\")\n"
        "D = point(label=\"D\")\n"
        "equal_distance((A, B), (C, D))\n");
    REQUIRE(p.constraints.size() == 1);
    CHECK(p.constraints[0].kind == ConstraintKind::EqualDistance);
    CHECK(p.constraints[0].points == std::array<int, 4>{0, 1, 2, 3});
}

TEST_CASE("incident points") {
    GeoProgram p = parse_program(
        "A = point(label=\"A\")\n"
        "B = point(label=\"B\")\n"
        "E = point(label=\"E\")\n"
        "O = point(label=\"O\")\n"
        "line_1 = line(through=[A, B, E])\n"
        "circle_1 = circle(center=O, through=[A])\n"
        "circle_2 = circle(through=[])\n");
    CHECK(incident_points(p, {CurveKind::Line, 0}) == std::vector<int>{0, 1, 2});
    CHECK(incident_points(p, {CurveKind::Circle, 0}) == std::vector<int>{0});
    CHECK(incident_points(p, {CurveKind::Circle, 1}).empty());
    CHECK_THROWS_AS(incident_points(p, {CurveKind::Line, 7}),
                    DanglingReferenceError);
}

TEST_CASE("validate accepts well-formed programs") {
    CHECK(validate(triangle_program()).empty());
}

TEST_CASE("validate flags duplicate labels") {
    GeoProgram p;
    p.points.push_back({'A', 0});
    p.points.push_back({'A', 0});
    auto violations = validate(p);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "duplicate-label");
    CHECK(violations[0].severity == Severity::Error);
}

TEST_CASE("validate flags dangling references") {
    GeoProgram p = triangle_program();
    ConstraintDecl r;
    r.kind = ConstraintKind::Parallel;
    r.curves = {0, 7};
    p.constraints.push_back(r);
    auto violations = validate(p);
    REQUIRE(!violations.empty());
    CHECK(violations[0].code == "dangling-reference");
    CHECK(has_errors(violations));
}

TEST_CASE("validate warns on duplicate declarations") {
    GeoProgram p = triangle_program();
    p.lines.push_back(p.lines[0]);
    auto violations = validate(p);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].severity == Severity::Warning);
    CHECK(violations[0].code == "duplicate-declaration");
    CHECK(!has_errors(violations));
}

TEST_CASE("validate flags center listed as incident") {
    GeoProgram p = parse_program(
        "O = point(label=\"O\")\n"
        "A = point(label=\"A\")\n"
        "c = circle(center=O, through=[A])\n");
    p.circles[0].through.push_back(0);
    auto violations = validate(p);
    CHECK(has_errors(violations));
    CHECK(violations[0].code == "center-in-through");
}

TEST_CASE("seed circle with no center and no points is a warning") {
    GeoProgram p = parse_program("c = circle(through=[])\n");
    auto violations = validate(p);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].severity == Severity::Warning);
    CHECK(violations[0].code == "empty-circle");
}

TEST_CASE("longer listing with tangency constraints parses") {
    GeoProgram p = parse_program(
        "J = point(label=\"J\")\n"
        "W = point(label=\"W\")\n"
        "E = point(label=\"E\")\n"
        "O = point(label=\"O\")\n"
        "\n"
        "line_1 = line(through=[J, W])\n"
        "line_2 = line(through=[W, E])\n"
        "line_3 = line(through=[E, J, O])\n"
        "\n"
        "circle_1 = circle(through=[J, W, E, O])\n"
        "\n"
        "tangent_line_circle(line_2, circle_1)\n"
        "tangent_line_circle(line_3, circle_1)\n");
    CHECK(p.points.size() == 4);
    CHECK(p.lines.size() == 3);
    CHECK(p.circles.size() == 1);
    CHECK(p.constraints.size() == 2);
    CHECK(validate(p).empty());
    CHECK(parse_program(serialize_program(p)) == p);
}
