// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "linrank/polyhedra.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace linrank {

enum class Relation { LessEq, GreaterEq, Equal };

// coeffs . (x, x') rel rhs, with coeffs over 2n coordinates.
struct LinearConstraint {
    RatVector coeffs;
    Relation rel = Relation::LessEq;
    Rational rhs;
    bool operator==(const LinearConstraint& other) const = default;
};

struct Path {
    std::vector<LinearConstraint> guard;
    std::vector<LinearConstraint> update;
    bool operator==(const Path& other) const = default;
};

struct LoopSpec {
    std::vector<std::string> vars;
    std::vector<Path> paths;
    [[nodiscard]] std::size_t n() const { return vars.size(); }
    bool operator==(const LoopSpec& other) const = default;
};

// Polyhedra over 2n coordinates: x first, then x'.
struct TransitionSystem {
    std::size_t n = 0;
    std::vector<std::string> vars;
    std::vector<ConstraintPoly> polys;
    std::vector<bool> empty;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

namespace loopmodel {

LoopSpec parse_loop(std::string_view text);
std::string format_loop(const LoopSpec& spec);

// Parses a single affine expression over the loop variables (primes allowed when
// allow_primed). Returns the 2n coefficient vector and the constant.
std::pair<RatVector, Rational> parse_expression(std::string_view text, std::span<const std::string> vars,
                                                bool allow_primed);

// Rows of c in <= form (equalities give two rows).
std::vector<std::pair<RatVector, Rational>> to_rows(const LinearConstraint& c);

TransitionSystem build_transition_system(const LoopSpec& spec);

struct QuickChecks {
    std::vector<bool> origin_fixpoint;
    std::vector<bool> empty;
    [[nodiscard]] bool any_origin() const;
    [[nodiscard]] bool all_empty() const;
};

QuickChecks quick_checks(const TransitionSystem& ts);

// The nonempty paths only.
TransitionSystem drop_empty(const TransitionSystem& ts);

} // namespace loopmodel
} // namespace linrank
