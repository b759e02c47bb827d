// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace linrank {

using Integer = mpz_class;
using Rational = mpq_class;
using RatVector = std::vector<Rational>;
using IntVector = std::vector<Integer>;

class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

Rational make_rational(long num, long den = 1);

// Accepts "p", "p/q" and finite decimals such as "-0.25".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(std::span<const Rational> v);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);

RatVector zeros(std::size_t n);
RatVector unit(std::size_t n, std::size_t k);
Rational dot(std::span<const Rational> a, std::span<const Rational> b);
RatVector add(std::span<const Rational> a, std::span<const Rational> b);
RatVector sub(std::span<const Rational> a, std::span<const Rational> b);
RatVector scaled(std::span<const Rational> a, const Rational& s);
RatVector negated(std::span<const Rational> a);
RatVector concat(std::span<const Rational> a, std::span<const Rational> b);
bool is_zero(std::span<const Rational> v);
bool is_integral(std::span<const Rational> v);
bool is_integral(const Rational& q);

Integer lcm_of_denominators(std::span<const Rational> v);

// Positive multiple of v with coprime integer entries. Zero stays zero.
IntVector primitive(std::span<const Rational> v);
IntVector primitive(std::span<const Integer> v);
RatVector to_rational(std::span<const Integer> v);

class RatMatrix {
  public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols);
    static RatMatrix from_rows(std::vector<RatVector> rows, std::size_t cols);
    static RatMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const { return rows_.size(); }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return rows_[r][c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return rows_[r][c]; }

    [[nodiscard]] const RatVector& row(std::size_t r) const { return rows_[r]; }
    RatVector& row(std::size_t r) { return rows_[r]; }
    [[nodiscard]] RatVector column(std::size_t c) const;

    void append_row(RatVector r);
    void remove_row(std::size_t r);
    [[nodiscard]] RatMatrix transpose() const;
    [[nodiscard]] RatVector multiply(std::span<const Rational> x) const;
    // Row vector times matrix.
    [[nodiscard]] RatVector left_multiply(std::span<const Rational> y) const;
    [[nodiscard]] RatMatrix select_rows(std::span<const std::size_t> idx) const;
    [[nodiscard]] RatMatrix select_cols(std::span<const std::size_t> idx) const;

    bool operator==(const RatMatrix& other) const = default;

  private:
    std::size_t cols_ = 0;
    std::vector<RatVector> rows_;
};

std::size_t rank(const RatMatrix& m);

// Basis of {x : m x = 0}.
std::vector<RatVector> nullspace(const RatMatrix& m);

// Some x with m x = rhs, or nullopt when inconsistent.
std::optional<RatVector> solve(const RatMatrix& m, std::span<const Rational> rhs);

// Greedy maximal linearly independent subset of the rows, in order.
std::vector<std::size_t> independent_rows(const RatMatrix& m);

// Integer x with m x = rhs, or nullopt when none exists.
std::optional<IntVector> integer_solution(const RatMatrix& m, std::span<const Rational> rhs);

// Determinant of a square integer matrix.
Integer determinant(std::vector<IntVector> m);

// f(x) = coeffs . x + constant over n variables.
struct AffineFunc {
    RatVector coeffs;
    Rational constant;

    [[nodiscard]] std::size_t dim() const { return coeffs.size(); }
    [[nodiscard]] Rational eval(std::span<const Rational> x) const;
    // f(x) - f(x') for a 2n-vector (x, x').
    [[nodiscard]] Rational delta(std::span<const Rational> xx) const;
    // The row (coeffs, -coeffs) so that row . (x, x') = f(x) - f(x').
    [[nodiscard]] RatVector delta_row() const;
    // The row (coeffs, 0) over 2n coordinates.
    [[nodiscard]] RatVector lifted_row() const;

    bool operator==(const AffineFunc& other) const = default;
};

struct ScaledAffine {
    AffineFunc func;
    Rational scale;
};

// Multiply by the lcm of the coefficient denominators so all coefficients are integers.
ScaledAffine integer_scale(const AffineFunc& f);

std::string format_affine(const AffineFunc& f, std::span<const std::string> names);
std::string format_row(std::span<const Rational> row, std::span<const std::string> names);

} // namespace linrank
