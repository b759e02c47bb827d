// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/loopmodel.hpp"

#include <algorithm>
#include <cctype>

namespace linrank {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line), column_(column) {}

namespace loopmodel {
namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Scanner over one line; columns are 1-based and include the line's offset.
class Scanner {
  public:
    Scanner(std::string_view text, std::size_t line, std::size_t column)
        : text_(text), line_(line), column_(column) {}

    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) {
            ++pos_;
        }
    }
    [[nodiscard]] bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    [[nodiscard]] char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    [[nodiscard]] std::size_t column() const { return column_ + pos_; }
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, column(), message); }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string identifier() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    Rational number() {
        skip_space();
        std::size_t start = pos_;
        auto digits = [&] {
            std::size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
                ++pos_;
            }
            return pos_ > s;
        };
        bool any = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            any = digits() || any;
        } else if (any && pos_ + 1 < text_.size() && text_[pos_] == '/' &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) != 0) {
            ++pos_;
            digits();
        }
        if (!any) {
            pos_ = start;
            fail("expected a number");
        }
        try {
            return parse_rational(text_.substr(start, pos_ - start));
        } catch (const std::exception& e) {
            pos_ = start;
            fail(e.what());
        }
    }

    // Relational operator, or nullopt when none is next.
    std::optional<Relation> relation() {
        char c = peek();
        std::size_t save = pos_;
        if (c == '<' || c == '>') {
            ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '=') {
                ++pos_;
                return c == '<' ? Relation::LessEq : Relation::GreaterEq;
            }
            pos_ = save;
            fail(std::string("strict inequality '") + c +
                 "' is not supported: loops are built from non-strict constraints (<=, >=, =) only");
        }
        if (c == '=') {
            ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '=') {
                ++pos_;
            }
            return Relation::Equal;
        }
        if (c == '!') {
            fail("disequality is not supported: loops are built from non-strict constraints (<=, >=, =) only");
        }
        return std::nullopt;
    }

  private:
    std::string_view text_;
    std::size_t line_;
    std::size_t column_;
    std::size_t pos_ = 0;
};

struct Affine {
    RatVector coeffs;
    Rational constant;
};

// expr := ['+'|'-'] term (('+'|'-') term)*; term := number ['*' var] | var
Affine parse_affine(Scanner& s, std::span<const std::string> vars, bool allow_primed, std::size_t line) {
    std::size_t n = vars.size();
    Affine out{zeros(2 * n), Rational(0)};
    bool first = true;
    while (true) {
        int sign = 1;
        bool has_sign = s.accept('+');
        if (!has_sign && s.accept('-')) {
            sign = -1;
            has_sign = true;
        }
        if (!has_sign && !first) {
            break;
        }
        first = false;
        char c = s.peek();
        Rational coef(sign);
        bool have_number = false;
        if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') {
            coef *= s.number();
            have_number = true;
            if (!s.accept('*')) {
                if (is_ident_start(s.peek())) {
                    s.fail("expected '*' between coefficient and variable");
                }
                out.constant += coef;
                continue;
            }
        }
        if (!is_ident_start(s.peek())) {
            s.fail(have_number ? "expected a variable after '*'" : "expected a number or variable");
        }
        std::size_t col = s.column();
        std::string name = s.identifier();
        auto it = std::find(vars.begin(), vars.end(), name);
        if (it == vars.end()) {
            throw ParseError(line, col, "unknown variable '" + name + "'");
        }
        auto idx = static_cast<std::size_t>(it - vars.begin());
        if (s.accept('\'')) {
            if (!allow_primed) {
                throw ParseError(line, col, "primed variable '" + name + "'' is not allowed here");
            }
            idx += n;
        }
        out.coeffs[idx] += coef;
    }
    return out;
}

LinearConstraint parse_constraint(std::string_view text, std::span<const std::string> vars, bool allow_primed,
                                  std::size_t line, std::size_t column) {
    Scanner s(text, line, column);
    if (s.at_end()) {
        s.fail("empty constraint");
    }
    Affine lhs = parse_affine(s, vars, allow_primed, line);
    auto rel = s.relation();
    if (!rel) {
        s.fail(s.at_end() ? "expected a relation (<=, >=, =)" : "unexpected character '" + std::string(1, s.peek()) + "'");
    }
    Affine rhs = parse_affine(s, vars, allow_primed, line);
    if (!s.at_end()) {
        if (s.relation()) {
            s.fail("chained relations are not supported");
        }
        s.fail("unexpected character '" + std::string(1, s.peek()) + "'");
    }
    return {sub(lhs.coeffs, rhs.coeffs), *rel, rhs.constant - lhs.constant};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (is_space(s.front()) || s.front() == '\n')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (is_space(s.back()) || s.back() == '\n')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string> primed_names(const std::vector<std::string>& vars) {
    std::vector<std::string> names = vars;
    for (const auto& v : vars) {
        names.push_back(v + "'");
    }
    return names;
}

std::string format_constraint(const LinearConstraint& c, std::span<const std::string> names) {
    std::string lhs = format_row(c.coeffs, names);
    if (lhs.empty()) {
        lhs = "0";
    }
    const char* op = c.rel == Relation::LessEq ? " <= " : c.rel == Relation::GreaterEq ? " >= " : " = ";
    return lhs + op + c.rhs.get_str();
}

} // namespace

std::pair<RatVector, Rational> parse_expression(std::string_view text, std::span<const std::string> vars,
                                                bool allow_primed) {
    Scanner s(text, 1, 1);
    if (s.at_end()) {
        s.fail("empty expression");
    }
    Affine a = parse_affine(s, vars, allow_primed, 1);
    if (!s.at_end()) {
        s.fail("unexpected character '" + std::string(1, s.peek()) + "'");
    }
    return {a.coeffs, a.constant};
}

LoopSpec parse_loop(std::string_view text) {
    LoopSpec spec;
    bool have_vars = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view raw = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        std::string_view line = trim(raw);
        if (line.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        std::size_t indent = static_cast<std::size_t>(line.data() - raw.data());
        auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError(line_no, indent + 1, "expected 'vars:', 'path:', 'guard:' or 'update:'");
        }
        std::string_view key = trim(line.substr(0, colon));
        std::string_view body = line.substr(colon + 1);
        std::size_t body_col = indent + colon + 2;
        if (key == "vars") {
            if (have_vars) {
                throw ParseError(line_no, indent + 1, "duplicate 'vars:' line");
            }
            have_vars = true;
            Scanner s(body, line_no, body_col);
            while (!s.at_end()) {
                if (!is_ident_start(s.peek())) {
                    s.fail("expected a variable name");
                }
                std::size_t col = s.column();
                std::string name = s.identifier();
                if (std::find(spec.vars.begin(), spec.vars.end(), name) != spec.vars.end()) {
                    throw ParseError(line_no, col, "duplicate variable '" + name + "'");
                }
                spec.vars.push_back(name);
                s.accept(',');
            }
            if (spec.vars.empty()) {
                throw ParseError(line_no, body_col, "at least one variable is required");
            }
            continue;
        }
        if (!have_vars) {
            throw ParseError(line_no, indent + 1, "the first line must declare 'vars:'");
        }
        if (key == "path") {
            if (!trim(body).empty()) {
                throw ParseError(line_no, body_col, "unexpected text after 'path:'");
            }
            spec.paths.emplace_back();
            continue;
        }
        if (key != "guard" && key != "update") {
            throw ParseError(line_no, indent + 1, "unknown section '" + std::string(key) + "'");
        }
        if (spec.paths.empty()) {
            throw ParseError(line_no, indent + 1, "'" + std::string(key) + ":' outside a 'path:' block");
        }
        bool guard = key == "guard";
        auto& target = guard ? spec.paths.back().guard : spec.paths.back().update;
        std::size_t piece_start = 0;
        while (piece_start <= body.size()) {
            std::size_t semi = body.find(';', piece_start);
            if (semi == std::string_view::npos) {
                semi = body.size();
            }
            std::string_view piece = body.substr(piece_start, semi - piece_start);
            if (!trim(piece).empty()) {
                target.push_back(parse_constraint(piece, spec.vars, !guard, line_no, body_col + piece_start));
            }
            piece_start = semi + 1;
        }
    }
    if (!have_vars) {
        throw ParseError(line_no == 0 ? 1 : line_no, 1, "missing 'vars:' declaration");
    }
    if (spec.paths.empty()) {
        throw ParseError(line_no == 0 ? 1 : line_no, 1, "at least one 'path:' block is required");
    }
    return spec;
}

std::string format_loop(const LoopSpec& spec) {
    std::string out = "vars:";
    for (const auto& v : spec.vars) {
        out += " " + v;
    }
    out += "\n";
    auto names = primed_names(spec.vars);
    auto block = [&](const char* key, const std::vector<LinearConstraint>& cs) {
        if (cs.empty()) {
            return;
        }
        out += "  ";
        out += key;
        out += ":";
        for (std::size_t i = 0; i < cs.size(); ++i) {
            out += (i == 0 ? " " : "; ") + format_constraint(cs[i], names);
        }
        out += "\n";
    };
    for (const auto& p : spec.paths) {
        out += "path:\n";
        block("guard", p.guard);
        block("update", p.update);
    }
    return out;
}

std::vector<std::pair<RatVector, Rational>> to_rows(const LinearConstraint& c) {
    switch (c.rel) {
    case Relation::LessEq:
        return {{c.coeffs, c.rhs}};
    case Relation::GreaterEq:
        return {{negated(c.coeffs), -c.rhs}};
    case Relation::Equal:
        return {{c.coeffs, c.rhs}, {negated(c.coeffs), -c.rhs}};
    }
    return {};
}

TransitionSystem build_transition_system(const LoopSpec& spec) {
    TransitionSystem ts;
    ts.n = spec.n();
    ts.vars = spec.vars;
    for (const auto& path : spec.paths) {
        ConstraintPoly q(2 * ts.n);
        for (const auto* part : {&path.guard, &path.update}) {
            for (const auto& c : *part) {
                if (c.coeffs.size() != 2 * ts.n) {
                    throw DimensionError("build_transition_system: constraint has the wrong width");
                }
                for (auto& [row, rhs] : to_rows(c)) {
                    q.add_row(std::move(row), rhs);
                }
            }
        }
        ts.empty.push_back(polyhedra::is_empty(q));
        ts.polys.push_back(std::move(q));
    }
    return ts;
}

bool QuickChecks::any_origin() const {
    return std::any_of(origin_fixpoint.begin(), origin_fixpoint.end(), [](bool b) { return b; });
}

bool QuickChecks::all_empty() const {
    return std::all_of(empty.begin(), empty.end(), [](bool b) { return b; });
}

QuickChecks quick_checks(const TransitionSystem& ts) {
    QuickChecks qc;
    RatVector origin = zeros(2 * ts.n);
    for (std::size_t i = 0; i < ts.polys.size(); ++i) {
        qc.origin_fixpoint.push_back(ts.polys[i].contains(origin));
        qc.empty.push_back(i < ts.empty.size() ? ts.empty[i] : polyhedra::is_empty(ts.polys[i]));
    }
    return qc;
}

TransitionSystem drop_empty(const TransitionSystem& ts) {
    TransitionSystem out;
    out.n = ts.n;
    out.vars = ts.vars;
    for (std::size_t i = 0; i < ts.polys.size(); ++i) {
        bool empty = i < ts.empty.size() ? ts.empty[i] : polyhedra::is_empty(ts.polys[i]);
        if (!empty) {
            out.polys.push_back(ts.polys[i]);
            out.empty.push_back(false);
        }
    }
    return out;
}

} // namespace loopmodel
} // namespace linrank
