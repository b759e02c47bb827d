// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "linrank/linalg.hpp"

#include <optional>
#include <variant>

namespace linrank::lp {

enum class Sense { Minimize, Maximize };

struct Objective {
    RatVector coeffs;
    Sense sense = Sense::Minimize;
};

// Free variables, constraints a x <= b.
struct LPProblem {
    RatMatrix a;
    RatVector b;
    std::optional<Objective> objective;
};

// y >= 0 on inequality rows, y^T a matches the variable signs, y^T b < 0.
struct Infeasible {
    RatVector certificate;
};
struct Unbounded {
    RatVector point;
    RatVector ray;
};
struct Optimal {
    RatVector point;
    Rational value;
};
struct Feasible {
    RatVector point;
};
using LPOutcome = std::variant<Infeasible, Unbounded, Optimal, Feasible>;

enum class RowKind { LessEq, Equal };

struct Row {
    RatVector coeffs;
    Rational rhs;
    RowKind kind = RowKind::LessEq;
};

// Constraint system with per-variable sign restrictions and native equalities.
class LinearSystem {
  public:
    explicit LinearSystem(std::size_t num_vars = 0) : nonneg_(num_vars, false) {}

    std::size_t add_variable(bool nonneg = false);
    void set_nonneg(std::size_t var, bool nonneg) { nonneg_.at(var) = nonneg; }

    [[nodiscard]] std::size_t num_vars() const { return nonneg_.size(); }
    [[nodiscard]] bool nonneg(std::size_t var) const { return nonneg_.at(var); }
    [[nodiscard]] const std::vector<Row>& rows() const { return rows_; }
    [[nodiscard]] std::size_t num_rows() const { return rows_.size(); }

    void add_le(RatVector coeffs, Rational rhs);
    void add_ge(const RatVector& coeffs, const Rational& rhs);
    void add_eq(RatVector coeffs, Rational rhs);
    void add_row(Row row);

    [[nodiscard]] bool satisfied_by(std::span<const Rational> x) const;

    static LinearSystem from_problem(const RatMatrix& a, const RatVector& b);

  private:
    std::vector<bool> nonneg_;
    std::vector<Row> rows_;
};

struct SolveOptions {
    bool want_certificate = true;
};

LPOutcome solve(const LinearSystem& system, const std::optional<Objective>& objective = std::nullopt,
                const SolveOptions& options = {});
LPOutcome solve(const LPProblem& problem);

bool is_feasible(const LinearSystem& system);
bool verify_certificate(const LinearSystem& system, std::span<const Rational> y);
bool verify_certificate(const RatMatrix& a, const RatVector& b, std::span<const Rational> y);

// Indices of rows of a x <= b that hold with equality at every feasible point.
// Throws std::invalid_argument when the system is infeasible.
std::vector<std::size_t> implied_equalities(const RatMatrix& a, const RatVector& b);

// Irreducible infeasible subset of rows. Throws std::invalid_argument when feasible.
std::vector<std::size_t> iis(const RatMatrix& a, const RatVector& b);

// Helpers for reading outcomes.
inline bool is_infeasible(const LPOutcome& o) { return std::holds_alternative<Infeasible>(o); }
inline bool is_unbounded(const LPOutcome& o) { return std::holds_alternative<Unbounded>(o); }
const RatVector* point_of(const LPOutcome& o);

} // namespace linrank::lp
