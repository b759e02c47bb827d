// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "linrank/linalg.hpp"
#include "linrank/lp.hpp"

#include <optional>
#include <span>
#include <vector>

namespace linrank {

// {x : a x <= b}. Equalities are stored as a pair of opposite rows.
struct ConstraintPoly {
    RatMatrix a;
    RatVector b;

    ConstraintPoly() = default;
    explicit ConstraintPoly(std::size_t ambient) : a(0, ambient) {}
    ConstraintPoly(RatMatrix m, RatVector rhs);

    static ConstraintPoly universe(std::size_t ambient) { return ConstraintPoly(ambient); }
    // The canonical empty polyhedron: the single row 0 <= -1.
    static ConstraintPoly empty_set(std::size_t ambient);

    [[nodiscard]] std::size_t ambient() const { return a.cols(); }
    [[nodiscard]] std::size_t num_rows() const { return a.rows(); }

    void add_row(RatVector row, Rational rhs);
    void add_equality(const RatVector& row, const Rational& rhs);
    void append(const ConstraintPoly& other);

    [[nodiscard]] bool contains(std::span<const Rational> x) const;
    [[nodiscard]] lp::LinearSystem system() const { return lp::LinearSystem::from_problem(a, b); }
};

struct GeneratorRep {
    std::size_t ambient = 0;
    std::vector<RatVector> vertices;
    std::vector<RatVector> rays;

    [[nodiscard]] bool empty() const { return vertices.empty(); }
};

// The face cut out by a valid hyperplane, described by the rows that become tight.
struct FaceSpec {
    ConstraintPoly base;
    std::vector<std::size_t> tight_rows;
    bool empty = false;

    [[nodiscard]] ConstraintPoly to_poly() const;
};

namespace polyhedra {

struct Extremum {
    enum class Kind { Empty, Unbounded, Finite } kind = Kind::Empty;
    Rational value;
    RatVector point;
};

Extremum minimize(const ConstraintPoly& p, const RatVector& c);
Extremum maximize(const ConstraintPoly& p, const RatVector& c);

bool is_empty(const ConstraintPoly& p);
// -1 for the empty set.
int dim(const ConstraintPoly& p);

GeneratorRep to_generators(const ConstraintPoly& p);
ConstraintPoly to_constraints(const GeneratorRep& g);
ConstraintPoly recession_cone(const ConstraintPoly& p);

// Every point of p satisfies row . x <= rhs (vacuously true for empty p).
bool implies(const ConstraintPoly& p, const RatVector& row, const Rational& rhs);
// inner is a subset of outer.
bool includes(const ConstraintPoly& outer, const ConstraintPoly& inner);
bool set_equal(const ConstraintPoly& p, const ConstraintPoly& q);
ConstraintPoly intersect(const ConstraintPoly& p, const ConstraintPoly& q);
// Drops rows implied by the remaining ones; returns the canonical empty set when empty.
ConstraintPoly remove_redundant(const ConstraintPoly& p);

// A value strictly between lo and hi (nullopt means infinite): 0 if possible, else the
// integer closest to zero, else the midpoint.
Rational pick_in_open_interval(const std::optional<Rational>& lo, const std::optional<Rational>& hi);

// Fixes the listed variables one after another to values picked strictly inside their
// current range (or to the forced value when the range is a point). When minimize_last is
// set, that variable is then minimised. The system must be feasible.
RatVector sweep_point(const lp::LinearSystem& system, std::span<const std::size_t> order,
                      std::optional<std::size_t> minimize_last = std::nullopt);

// A point in the relative interior. Coordinates are processed in the given order
// (default 0..d-1). Throws std::invalid_argument for the empty set.
RatVector relative_interior_point(const ConstraintPoly& p, std::span<const std::size_t> order = {});

// Face of p on the hyperplane h x = c, which must be valid (h x <= c on p).
FaceSpec face(const ConstraintPoly& p, const RatVector& h, const Rational& c);

} // namespace polyhedra
} // namespace linrank
