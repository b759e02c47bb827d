// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "linrank/polyhedra.hpp"

#include <string>
#include <vector>

namespace linrank {

enum class HullTag { Cone, TotallyUnimodular, DifferenceBounds, TwoDim, Octagon, General };

std::string to_string(HullTag tag);

enum class OctagonMode { Exact, Closure };

struct HullOptions {
    int cut_round_cap = 25;
    OctagonMode octagon_mode = OctagonMode::Exact;
};

// A connected group of variables together with the rows over them, in local coordinates.
struct Component {
    std::vector<std::size_t> vars;
    ConstraintPoly local;
};

struct ComponentReport {
    std::vector<std::size_t> vars;
    HullTag tag = HullTag::General;
    bool exact = true;
    // Rows of the component hull not implied by the input, in global coordinates.
    ConstraintPoly added;
};

struct HullReport {
    std::vector<ComponentReport> components;
    bool exact = true;
    // True when the update was an integer affine map and only the guard was hulled.
    bool guard_only = false;
};

struct HullResult {
    ConstraintPoly hull;
    HullReport report;
};

namespace inthull {

// Row scaled by a positive factor so its coefficients are coprime integers.
std::pair<RatVector, Rational> normalize_row(std::span<const Rational> row, const Rational& rhs);

// Throws std::invalid_argument only for malformed input; an infeasible zero row yields a
// single component holding the empty set.
std::vector<Component> decompose_components(const ConstraintPoly& p);

HullTag classify(const ConstraintPoly& p);

// Every square subdeterminant is 0 or +-1. Matrices whose smaller side exceeds six are
// reported as not verified (false).
bool is_totally_unimodular(const RatMatrix& m);

// Rows must be difference or unit bounds; their right-hand sides are floored.
ConstraintPoly tighten_difference_bounds(const ConstraintPoly& p);

// Exact integer hull of a polyhedron in at most two variables.
ConstraintPoly hull_2d(const ConstraintPoly& p);

// Tight closure of an octagonal system (rows +-x +-y <= c, +-x <= c).
ConstraintPoly octagon_tight_closure(const ConstraintPoly& p);

struct GeneralHull {
    ConstraintPoly hull;
    bool exact = true;
    int rounds = 0;
};

// Integer hull by pushing facets of the hull of found integer points outwards until each
// is confirmed by an integer optimisation. On hitting the round cap the result is the input
// strengthened by the confirmed facets and exact is false.
GeneralHull general_hull(const ConstraintPoly& p, int round_cap = 25);

// Branch and bound: an integer point of p maximising c, or nullopt if none exists.
// p must be bounded.
std::optional<RatVector> best_integer_point(const ConstraintPoly& p, const RatVector& c);

// Every minimal face contains an integer point.
bool is_integral(const ConstraintPoly& p);

// Generators with integer vertices and primitive integer rays. Throws std::invalid_argument
// when p is not integral.
GeneratorRep integral_generators(const ConstraintPoly& p);

HullResult integer_hull(const ConstraintPoly& p, const HullOptions& options = {});

// Hull of a transition polyhedron over (x, x'). When the primed part is x' = M x + c with
// integer M and c, only the guard is hulled.
HullResult transition_hull(const ConstraintPoly& q, std::size_t n, const HullOptions& options = {});

} // namespace inthull
} // namespace linrank
