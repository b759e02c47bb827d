// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/ranking.hpp"

namespace linrank {

std::string to_string(Domain d) { return d == Domain::Integer ? "int" : "rat"; }

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Found: return "found";
    case Verdict::None: return "none";
    case Verdict::NoneModuloHull: return "none_modulo_hull";
    case Verdict::NonTerminating: return "non_terminating";
    case Verdict::Vacuous: return "vacuous";
    }
    return "unknown";
}

std::size_t Witness::size() const {
    std::size_t s = 0;
    for (const auto& p : points) {
        s += p.size();
    }
    for (const auto& r : rays) {
        s += r.size();
    }
    return s;
}

Witness empty_witness(std::size_t paths) {
    Witness w;
    w.points.resize(paths);
    w.rays.resize(paths);
    return w;
}

PreparedPaths prepare_paths(const TransitionSystem& ts, Domain domain, const HullOptions& hull) {
    PreparedPaths out;
    out.n = ts.n;
    RatVector origin = zeros(2 * ts.n);
    for (std::size_t i = 0; i < ts.polys.size(); ++i) {
        const auto& q = ts.polys[i];
        if (q.contains(origin)) {
            out.origin_paths.push_back(i);
        }
        bool empty = i < ts.empty.size() ? ts.empty[i] : polyhedra::is_empty(q);
        if (domain == Domain::Rational) {
            if (!empty) {
                out.polys.push_back(q);
                out.source.push_back(i);
            }
            continue;
        }
        if (empty) {
            out.hulls.emplace_back();
            continue;
        }
        HullResult h = inthull::transition_hull(q, ts.n, hull);
        out.exact = out.exact && h.report.exact;
        out.hulls.push_back(h.report);
        if (!polyhedra::is_empty(h.hull)) {
            out.polys.push_back(std::move(h.hull));
            out.source.push_back(i);
        }
    }
    return out;
}

GeneratorRep witness_generators(const ConstraintPoly& p, Domain domain, bool exact) {
    if (domain == Domain::Integer && exact) {
        return inthull::integral_generators(p);
    }
    return polyhedra::to_generators(p);
}

CheckResult check_witness_members(const Witness& w, const TransitionSystem& ts, Domain domain) {
    std::size_t k = ts.polys.size();
    if (w.points.size() != k || w.rays.size() != k) {
        return CheckResult::fail("witness has " + std::to_string(w.points.size()) + " path entries, loop has " +
                                 std::to_string(k));
    }
    std::size_t width = 2 * ts.n;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& q = ts.polys[i];
        for (const auto& x : w.points[i]) {
            if (x.size() != width) {
                return CheckResult::fail("point of path " + std::to_string(i + 1) + " has the wrong width");
            }
            if (domain == Domain::Integer && !is_integral(std::span<const Rational>(x))) {
                return CheckResult::fail("point " + to_string(std::span<const Rational>(x)) + " of path " +
                                         std::to_string(i + 1) + " is not integral");
            }
            if (!q.contains(x)) {
                return CheckResult::fail("point " + to_string(std::span<const Rational>(x)) +
                                         " is not a transition of path " + std::to_string(i + 1));
            }
        }
        for (const auto& y : w.rays[i]) {
            if (y.size() != width) {
                return CheckResult::fail("ray of path " + std::to_string(i + 1) + " has the wrong width");
            }
            if (domain == Domain::Integer && !is_integral(std::span<const Rational>(y))) {
                return CheckResult::fail("ray " + to_string(std::span<const Rational>(y)) + " of path " +
                                         std::to_string(i + 1) + " is not integral");
            }
            if (is_zero(y)) {
                return CheckResult::fail("zero ray in path " + std::to_string(i + 1));
            }
            RatVector ay = q.a.multiply(y);
            for (const auto& v : ay) {
                if (v > 0) {
                    return CheckResult::fail("ray " + to_string(std::span<const Rational>(y)) +
                                             " is not in the recession cone of path " + std::to_string(i + 1));
                }
            }
        }
        if (!w.rays[i].empty() && w.points[i].empty()) {
            return CheckResult::fail("path " + std::to_string(i + 1) + " has rays but no points");
        }
    }
    return CheckResult::pass();
}

RatVector state_part(std::span<const Rational> xx, std::size_t n) { return {xx.begin(), xx.begin() + n}; }

RatVector successor_part(std::span<const Rational> xx, std::size_t n) {
    return {xx.begin() + n, xx.begin() + 2 * n};
}

RatVector step_difference(std::span<const Rational> xx, std::size_t n) {
    RatVector d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = xx[i] - xx[n + i];
    }
    return d;
}

} // namespace linrank
