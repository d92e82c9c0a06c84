// SPDX-License-Identifier: Apache-2.0
//
// GeoDSL abstract syntax, parser and canonical serializer.
//
// A program is four ordered sections: point, line, circle and constraint
// declarations. Point/curve references are stored as indices into the owning
// program, so a parsed program is always fully resolved.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoforge {

struct PointDecl {
    std::optional<char> label;  // 'A'..'Z'
    int anon_index = 0;         // 1-based among anonymous points, 0 if labeled

    bool anonymous() const { return !label.has_value(); }
    std::string name() const {
        return label ? std::string(1, *label)
                     : "unlabeled_point_" + std::to_string(anon_index);
    }
    bool operator==(const PointDecl&) const = default;
};

struct LineDecl {
    std::vector<int> through;  // point indices, declaration order
    bool operator==(const LineDecl&) const = default;
};

struct CircleDecl {
    std::optional<int> center;  // point index
    std::vector<int> through;   // point indices, never contains center
    bool operator==(const CircleDecl&) const = default;
};

enum class ConstraintKind {
    Parallel,
    Perpendicular,
    LineCircleTangent,
    CircleCircleTangent,
    EqualDistance,
};

const char* constraint_kind_name(ConstraintKind kind);

struct ConstraintDecl {
    ConstraintKind kind;
    // Parallel/Perpendicular: two line indices.
    // LineCircleTangent: {line index, circle index}.
    // CircleCircleTangent: two circle indices.
    std::array<int, 2> curves{-1, -1};
    // EqualDistance: point indices (p1,p2),(p3,p4).
    std::array<int, 4> points{-1, -1, -1, -1};
    bool operator==(const ConstraintDecl&) const = default;
};

struct GeoProgram {
    std::vector<PointDecl> points;
    std::vector<LineDecl> lines;
    std::vector<CircleDecl> circles;
    std::vector<ConstraintDecl> constraints;

    bool operator==(const GeoProgram&) const = default;

    int literal_count() const {
        return static_cast<int>(points.size() + lines.size() + circles.size() +
                                constraints.size());
    }
    std::string point_name(int i) const { return points.at(i).name(); }
    std::string line_name(int i) const { return "line_" + std::to_string(i + 1); }
    std::string circle_name(int i) const { return "circle_" + std::to_string(i + 1); }
};

// ---------------------------------------------------------------------------
// Parsing

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, Reference, DuplicateLabel, Arity };

    ParseError(Kind kind, int line, int col, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + what),
          kind_(kind),
          line_(line),
          col_(col) {}

    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int col() const { return col_; }

private:
    Kind kind_;
    int line_;
    int col_;
};

// Parses the assignment-style text format. Statements are line-based;
// `#` starts a comment. Throws ParseError on malformed input, undeclared
// references, duplicate point labels or wrong constraint argument kinds.
GeoProgram parse_program(const std::string& text);

// Canonical text form: sections in points/lines/circles/constraints order,
// one blank line between nonempty sections, LF endings, identifiers numbered
// from 1. parse_program(serialize_program(p)) == p for valid programs.
std::string serialize_program(const GeoProgram& p);

// ---------------------------------------------------------------------------
// Queries

enum class CurveKind { Line, Circle };

struct CurveRef {
    CurveKind kind;
    int index;
};

class DanglingReferenceError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Point indices incident to a curve: a line's through set, or a circle's
// through set with the center excluded. Order preserved, duplicates removed.
std::vector<int> incident_points(const GeoProgram& p, CurveRef curve);

// ---------------------------------------------------------------------------
// Validation

enum class Severity { Warning, Error };

struct Violation {
    Severity severity;
    std::string code;     // stable machine key, e.g. "duplicate-label"
    std::string message;  // names the offending declaration
};

// Structural invariant check. Violations are data: parse-level errors never
// reach here, and duplicate declarations are warnings (multiset semantics).
std::vector<Violation> validate(const GeoProgram& p);

inline bool has_errors(const std::vector<Violation>& vs) {
    for (const auto& v : vs)
        if (v.severity == Severity::Error) return true;
    return false;
}

}  // namespace geoforge
