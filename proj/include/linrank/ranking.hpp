// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "linrank/inthull.hpp"
#include "linrank/loopmodel.hpp"

#include <string>
#include <vector>

namespace linrank {

enum class Domain { Rational, Integer };
enum class Verdict { Found, None, NoneModuloHull, NonTerminating, Vacuous };

std::string to_string(Domain d);
std::string to_string(Verdict v);

// Per-path point and ray sets over 2n coordinates, indexed like the transition system.
struct Witness {
    std::vector<std::vector<RatVector>> points;
    std::vector<std::vector<RatVector>> rays;

    [[nodiscard]] std::size_t size() const;
    bool operator==(const Witness& other) const = default;
};

struct CheckResult {
    bool ok = true;
    std::string reason;

    static CheckResult pass() { return {}; }
    static CheckResult fail(std::string why) { return {false, std::move(why)}; }
    explicit operator bool() const { return ok; }
};

// The polyhedra an analysis works on: nonempty paths only, replaced by their integer hulls
// in the Integer domain.
struct PreparedPaths {
    std::size_t n = 0;
    std::vector<ConstraintPoly> polys;
    // Index in the transition system of each entry of polys.
    std::vector<std::size_t> source;
    // One report per transition-system path (Integer domain only).
    std::vector<HullReport> hulls;
    bool exact = true;
    // Paths containing the origin, which makes the loop non-terminating.
    std::vector<std::size_t> origin_paths;
};

PreparedPaths prepare_paths(const TransitionSystem& ts, Domain domain, const HullOptions& hull = {});

// Generators of a prepared polyhedron; integer vertices and primitive rays when the
// domain is Integer and the hull is exact.
GeneratorRep witness_generators(const ConstraintPoly& p, Domain domain, bool exact);

// Points lie in their path (and are integral for Integer), rays lie in the recession cone,
// and no path has rays without points.
CheckResult check_witness_members(const Witness& w, const TransitionSystem& ts, Domain domain);

// Witness sized for the transition system with every set empty.
Witness empty_witness(std::size_t paths);

// First n and last n coordinates of a transition.
RatVector state_part(std::span<const Rational> xx, std::size_t n);
RatVector successor_part(std::span<const Rational> xx, std::size_t n);
// x - x' for a transition (x, x').
RatVector step_difference(std::span<const Rational> xx, std::size_t n);

} // namespace linrank
