// SPDX-License-Identifier: Apache-2.0
#include "dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace geoforge {

const char* constraint_kind_name(ConstraintKind kind) {
    switch (kind) {
        case ConstraintKind::Parallel: return "parallel";
        case ConstraintKind::Perpendicular: return "perpendicular";
        case ConstraintKind::LineCircleTangent: return "tangent_line_circle";
        case ConstraintKind::CircleCircleTangent: return "tangent_circle_circle";
        case ConstraintKind::EqualDistance: return "equal_distance";
    }
    return "?";
}

namespace {

enum class RefCategory { Point, Line, Circle };

struct Binding {
    RefCategory category;
    int index;
};

// Single-line scanner. Column numbers are 1-based byte offsets.
class LineScanner {
public:
    LineScanner(const std::string& text, int line_no)
        : text_(text), line_(line_no) {}

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
            ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size() || text_[pos_] == '#';
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected '") + c + "' " + what);
    }

    std::string ident() {
        skip_ws();
        size_t start = pos_;
        if (pos_ < text_.size() &&
            (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_'))
                ++pos_;
        }
        if (pos_ == start) fail("expected identifier");
        return text_.substr(start, pos_ - start);
    }

    std::string string_literal() {
        expect('"', "before string literal");
        size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
        if (pos_ >= text_.size()) fail("unterminated string literal");
        std::string value = text_.substr(start, pos_ - start);
        ++pos_;  // closing quote
        return value;
    }

    [[noreturn]] void fail(const std::string& what,
                           ParseError::Kind kind = ParseError::Kind::Syntax) {
        throw ParseError(kind, line_, col(), what);
    }

    int col() const { return static_cast<int>(pos_) + 1; }
    int line() const { return line_; }

private:
    const std::string& text_;
    int line_;
    size_t pos_ = 0;
};

class Parser {
public:
    GeoProgram run(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            LineScanner sc(raw, line_no);
            if (sc.at_end()) continue;
            statement(sc);
        }
        return std::move(program_);
    }

private:
    void statement(LineScanner& sc) {
        std::string head = sc.ident();
        if (sc.accept('=')) {
            declaration(sc, head);
        } else if (sc.peek('(')) {
            constraint(sc, head);
        } else {
            sc.fail("expected '=' or '(' after '" + head + "'");
        }
        if (!sc.at_end()) sc.fail("trailing input after statement");
    }

    void declaration(LineScanner& sc, const std::string& name) {
        std::string callee = sc.ident();
        sc.expect('(', "after callee");
        if (callee == "point") {
            point_decl(sc, name);
        } else if (callee == "line") {
            line_decl(sc, name);
        } else if (callee == "circle") {
            circle_decl(sc, name);
        } else {
            sc.fail("unknown declaration '" + callee + "'");
        }
    }

    void point_decl(LineScanner& sc, const std::string& name) {
        PointDecl decl;
        if (!sc.accept(')')) {
            std::string key = sc.ident();
            if (key != "label") sc.fail("point() accepts only label=...");
            sc.expect('=', "after label");
            std::string value = sc.string_literal();
            if (value.size() != 1 || value[0] < 'A' || value[0] > 'Z')
                sc.fail("label must be a single uppercase letter A-Z");
            decl.label = value[0];
            sc.expect(')', "to close point(...)");
        }
        if (decl.anonymous()) decl.anon_index = ++anon_count_;
        if (decl.label && !used_labels_.insert(*decl.label).second)
            sc.fail("duplicate point label \"" + std::string(1, *decl.label) + "\"",
                    ParseError::Kind::DuplicateLabel);
        bind(sc, name, {RefCategory::Point, static_cast<int>(program_.points.size())});
        program_.points.push_back(decl);
    }

    void line_decl(LineScanner& sc, const std::string& name) {
        LineDecl decl;
        std::string key = sc.ident();
        if (key != "through") sc.fail("line() requires through=[...]");
        sc.expect('=', "after through");
        decl.through = point_list(sc);
        sc.expect(')', "to close line(...)");
        bind(sc, name, {RefCategory::Line, static_cast<int>(program_.lines.size())});
        program_.lines.push_back(std::move(decl));
    }

    void circle_decl(LineScanner& sc, const std::string& name) {
        CircleDecl decl;
        if (!sc.accept(')')) {
            std::string key = sc.ident();
            if (key == "center") {
                sc.expect('=', "after center");
                decl.center = point_ref(sc);
                if (sc.accept(',')) {
                    key = sc.ident();
                    if (key != "through") sc.fail("circle() accepts center= and through=");
                    sc.expect('=', "after through");
                    decl.through = point_list(sc);
                }
            } else if (key == "through") {
                sc.expect('=', "after through");
                decl.through = point_list(sc);
            } else {
                sc.fail("circle() accepts center= and through=");
            }
            sc.expect(')', "to close circle(...)");
        }
        bind(sc, name, {RefCategory::Circle, static_cast<int>(program_.circles.size())});
        program_.circles.push_back(std::move(decl));
    }

    void constraint(LineScanner& sc, const std::string& callee) {
        sc.expect('(', "after constraint name");
        ConstraintDecl decl;
        if (callee == "parallel" || callee == "perpendicular") {
            decl.kind = callee == "parallel" ? ConstraintKind::Parallel
                                             : ConstraintKind::Perpendicular;
            decl.curves[0] = curve_ref(sc, RefCategory::Line);
            sc.expect(',', "between arguments");
            decl.curves[1] = curve_ref(sc, RefCategory::Line);
        } else if (callee == "tangent_line_circle") {
            decl.kind = ConstraintKind::LineCircleTangent;
            decl.curves[0] = curve_ref(sc, RefCategory::Line);
            sc.expect(',', "between arguments");
            decl.curves[1] = curve_ref(sc, RefCategory::Circle);
        } else if (callee == "tangent_circle_circle") {
            decl.kind = ConstraintKind::CircleCircleTangent;
            decl.curves[0] = curve_ref(sc, RefCategory::Circle);
            sc.expect(',', "between arguments");
            decl.curves[1] = curve_ref(sc, RefCategory::Circle);
        } else if (callee == "equal_distance") {
            decl.kind = ConstraintKind::EqualDistance;
            point_pair(sc, &decl.points[0]);
            sc.expect(',', "between distance arguments");
            point_pair(sc, &decl.points[2]);
        } else {
            sc.fail("unknown statement '" + callee + "'");
        }
        sc.expect(')', "to close constraint");
        program_.constraints.push_back(decl);
    }

    void point_pair(LineScanner& sc, int* out) {
        sc.expect('(', "to open point pair");
        out[0] = point_ref(sc);
        sc.expect(',', "between pair points");
        out[1] = point_ref(sc);
        sc.expect(')', "to close point pair");
    }

    std::vector<int> point_list(LineScanner& sc) {
        sc.expect('[', "to open point list");
        std::vector<int> refs;
        if (!sc.accept(']')) {
            refs.push_back(point_ref(sc));
            while (sc.accept(',')) refs.push_back(point_ref(sc));
            sc.expect(']', "to close point list");
        }
        return refs;
    }

    int point_ref(LineScanner& sc) {
        Binding b = lookup(sc, sc.ident());
        if (b.category != RefCategory::Point)
            sc.fail("expected a point reference", ParseError::Kind::Arity);
        return b.index;
    }

    int curve_ref(LineScanner& sc, RefCategory want) {
        Binding b = lookup(sc, sc.ident());
        if (b.category != want)
            sc.fail(want == RefCategory::Line ? "expected a line reference"
                                              : "expected a circle reference",
                    ParseError::Kind::Arity);
        return b.index;
    }

    Binding lookup(LineScanner& sc, const std::string& name) {
        auto it = bindings_.find(name);
        if (it == bindings_.end())
            sc.fail("use of undeclared identifier '" + name + "'",
                    ParseError::Kind::Reference);
        return it->second;
    }

    void bind(LineScanner& sc, const std::string& name, Binding binding) {
        if (!bindings_.emplace(name, binding).second)
            sc.fail("redefinition of '" + name + "'",
                    ParseError::Kind::DuplicateLabel);
    }

    GeoProgram program_;
    std::map<std::string, Binding> bindings_;
    std::set<char> used_labels_;
    int anon_count_ = 0;
};

}  // namespace

GeoProgram parse_program(const std::string& text) {
    return Parser().run(text);
}

std::string serialize_program(const GeoProgram& p) {
    std::string out;
    auto section_break = [&out] {
        if (!out.empty()) out += '\n';
    };

    if (!p.points.empty()) {
        for (const auto& pt : p.points) {
            if (pt.anonymous())
                out += pt.name() + " = point()\n";
            else
                out += pt.name() + " = point(label=\"" + *pt.label + "\")\n";
        }
    }
    auto point_list = [&p](const std::vector<int>& refs) {
        std::string s = "[";
        for (size_t i = 0; i < refs.size(); ++i) {
            if (i) s += ", ";
            s += p.point_name(refs[i]);
        }
        return s + "]";
    };
    if (!p.lines.empty()) {
        section_break();
        for (size_t i = 0; i < p.lines.size(); ++i)
            out += p.line_name(static_cast<int>(i)) + " = line(through=" +
                   point_list(p.lines[i].through) + ")\n";
    }
    if (!p.circles.empty()) {
        section_break();
        for (size_t i = 0; i < p.circles.size(); ++i) {
            const auto& c = p.circles[i];
            out += p.circle_name(static_cast<int>(i)) + " = circle(";
            if (c.center) out += "center=" + p.point_name(*c.center) + ", ";
            out += "through=" + point_list(c.through) + ")\n";
        }
    }
    if (!p.constraints.empty()) {
        section_break();
        for (const auto& r : p.constraints) {
            out += constraint_kind_name(r.kind);
            if (r.kind == ConstraintKind::EqualDistance) {
                out += "((" + p.point_name(r.points[0]) + ", " +
                       p.point_name(r.points[1]) + "), (" +
                       p.point_name(r.points[2]) + ", " +
                       p.point_name(r.points[3]) + "))";
            } else {
                auto arg_name = [&](int slot) {
                    bool is_circle =
                        r.kind == ConstraintKind::CircleCircleTangent ||
                        (r.kind == ConstraintKind::LineCircleTangent && slot == 1);
                    return is_circle ? p.circle_name(r.curves[slot])
                                     : p.line_name(r.curves[slot]);
                };
                out += "(" + arg_name(0) + ", " + arg_name(1) + ")";
            }
            out += '\n';
        }
    }
    return out;
}

std::vector<int> incident_points(const GeoProgram& p, CurveRef curve) {
    const std::vector<int>* through = nullptr;
    if (curve.kind == CurveKind::Line) {
        if (curve.index < 0 || curve.index >= static_cast<int>(p.lines.size()))
            throw DanglingReferenceError("line index out of range");
        through = &p.lines[curve.index].through;
    } else {
        if (curve.index < 0 || curve.index >= static_cast<int>(p.circles.size()))
            throw DanglingReferenceError("circle index out of range");
        through = &p.circles[curve.index].through;
    }
    std::vector<int> result;
    for (int idx : *through)
        if (std::find(result.begin(), result.end(), idx) == result.end())
            result.push_back(idx);
    return result;
}

std::vector<Violation> validate(const GeoProgram& p) {
    std::vector<Violation> out;
    auto error = [&out](std::string code, std::string msg) {
        out.push_back({Severity::Error, std::move(code), std::move(msg)});
    };
    auto warning = [&out](std::string code, std::string msg) {
        out.push_back({Severity::Warning, std::move(code), std::move(msg)});
    };

    const int n_points = static_cast<int>(p.points.size());
    auto point_ok = [n_points](int idx) { return idx >= 0 && idx < n_points; };
    auto point_label = [&p, point_ok](int idx) {
        return point_ok(idx) ? p.point_name(idx) : "point#" + std::to_string(idx);
    };

    std::set<char> labels;
    std::set<int> anon_indices;
    for (int i = 0; i < n_points; ++i) {
        const auto& pt = p.points[i];
        if (pt.label) {
            if (!labels.insert(*pt.label).second)
                error("duplicate-label", "duplicate point label \"" +
                                             std::string(1, *pt.label) + "\"");
        } else {
            if (pt.anon_index <= 0)
                error("anon-index", "anonymous point #" + std::to_string(i) +
                                        " has no anon index");
            else if (!anon_indices.insert(pt.anon_index).second)
                error("anon-index", "duplicate anon index " +
                                        std::to_string(pt.anon_index));
        }
    }

    for (size_t i = 0; i < p.lines.size(); ++i) {
        const auto& line = p.lines[i];
        std::string name = p.line_name(static_cast<int>(i));
        if (line.through.size() < 2)
            error("through-too-small", name + " passes through fewer than 2 points");
        std::set<int> seen;
        for (int idx : line.through) {
            if (!point_ok(idx)) {
                error("dangling-reference", name + " references unknown point");
                continue;
            }
            if (!seen.insert(idx).second)
                error("duplicate-through-point",
                      name + " lists " + point_label(idx) + " twice");
        }
        for (size_t j = 0; j < i; ++j)
            if (p.lines[j] == line)
                warning("duplicate-declaration",
                        name + " duplicates " + p.line_name(static_cast<int>(j)));
    }

    for (size_t i = 0; i < p.circles.size(); ++i) {
        const auto& c = p.circles[i];
        std::string name = p.circle_name(static_cast<int>(i));
        if (c.center && !point_ok(*c.center))
            error("dangling-reference", name + " has unknown center point");
        std::set<int> seen;
        for (int idx : c.through) {
            if (!point_ok(idx)) {
                error("dangling-reference", name + " references unknown point");
                continue;
            }
            if (!seen.insert(idx).second)
                error("duplicate-through-point",
                      name + " lists " + point_label(idx) + " twice");
            if (c.center && idx == *c.center)
                error("center-in-through",
                      name + " lists its center " + point_label(idx) + " as incident");
        }
        if (!c.center && c.through.empty())
            warning("empty-circle", name + " has neither center nor incident points");
        for (size_t j = 0; j < i; ++j)
            if (p.circles[j] == c)
                warning("duplicate-declaration",
                        name + " duplicates " + p.circle_name(static_cast<int>(j)));
    }

    const int n_lines = static_cast<int>(p.lines.size());
    const int n_circles = static_cast<int>(p.circles.size());
    for (size_t i = 0; i < p.constraints.size(); ++i) {
        const auto& r = p.constraints[i];
        std::string name = std::string(constraint_kind_name(r.kind)) + "#" +
                           std::to_string(i + 1);
        auto check_curve = [&](int idx, bool is_circle) {
            int limit = is_circle ? n_circles : n_lines;
            if (idx < 0 || idx >= limit)
                error("dangling-reference",
                      name + " references unknown " + (is_circle ? "circle" : "line"));
        };
        switch (r.kind) {
            case ConstraintKind::Parallel:
            case ConstraintKind::Perpendicular:
                check_curve(r.curves[0], false);
                check_curve(r.curves[1], false);
                if (r.curves[0] == r.curves[1])
                    error("self-constraint", name + " relates a line to itself");
                break;
            case ConstraintKind::LineCircleTangent:
                check_curve(r.curves[0], false);
                check_curve(r.curves[1], true);
                break;
            case ConstraintKind::CircleCircleTangent:
                check_curve(r.curves[0], true);
                check_curve(r.curves[1], true);
                if (r.curves[0] == r.curves[1])
                    error("self-constraint", name + " relates a circle to itself");
                break;
            case ConstraintKind::EqualDistance:
                for (int idx : r.points)
                    if (!point_ok(idx))
                        error("dangling-reference", name + " references unknown point");
                break;
        }
        for (size_t j = 0; j < i; ++j)
            if (p.constraints[j] == r)
                warning("duplicate-declaration",
                        name + " duplicates constraint #" + std::to_string(j + 1));
    }

    return out;
}

}  // namespace geoforge
