// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/inthull.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace linrank {

std::string to_string(HullTag tag) {
    switch (tag) {
    case HullTag::Cone: return "cone";
    case HullTag::TotallyUnimodular: return "totally-unimodular";
    case HullTag::DifferenceBounds: return "difference-bounds";
    case HullTag::TwoDim: return "two-dim";
    case HullTag::Octagon: return "octagon";
    case HullTag::General: return "general";
    }
    return "general";
}

namespace inthull {

std::pair<RatVector, Rational> normalize_row(std::span<const Rational> row, const Rational& rhs) {
    if (is_zero(row)) {
        return {RatVector(row.begin(), row.end()), rhs};
    }
    IntVector p = primitive(row);
    // Scale factor: p = s * row for some positive rational s.
    std::size_t k = 0;
    while (sgn(row[k]) == 0) {
        ++k;
    }
    Rational s = Rational(p[k]) / row[k];
    return {to_rational(p), rhs * s};
}

std::vector<Component> decompose_components(const ConstraintPoly& p) {
    std::size_t d = p.ambient();
    std::vector<std::size_t> parent(d);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::vector<bool> used(d, false);
    for (std::size_t r = 0; r < p.num_rows(); ++r) {
        std::optional<std::size_t> first;
        for (std::size_t c = 0; c < d; ++c) {
            if (sgn(p.a(r, c)) == 0) {
                continue;
            }
            used[c] = true;
            if (first) {
                parent[find(c)] = find(*first);
            } else {
                first = c;
            }
        }
        if (!first && sgn(p.b[r]) < 0) {
            std::vector<std::size_t> all(d);
            std::iota(all.begin(), all.end(), 0);
            return {Component{all, ConstraintPoly::empty_set(d)}};
        }
    }
    std::vector<Component> comps;
    std::vector<std::ptrdiff_t> comp_of_root(d, -1);
    for (std::size_t c = 0; c < d; ++c) {
        if (!used[c]) {
            continue;
        }
        std::size_t root = find(c);
        if (comp_of_root[root] < 0) {
            comp_of_root[root] = static_cast<std::ptrdiff_t>(comps.size());
            comps.push_back({});
        }
        comps[static_cast<std::size_t>(comp_of_root[root])].vars.push_back(c);
    }
    for (auto& comp : comps) {
        comp.local = ConstraintPoly(comp.vars.size());
    }
    for (std::size_t r = 0; r < p.num_rows(); ++r) {
        std::optional<std::size_t> first;
        for (std::size_t c = 0; c < d && !first; ++c) {
            if (sgn(p.a(r, c)) != 0) {
                first = c;
            }
        }
        if (!first) {
            continue;
        }
        auto& comp = comps[static_cast<std::size_t>(comp_of_root[find(*first)])];
        RatVector row(comp.vars.size());
        for (std::size_t k = 0; k < comp.vars.size(); ++k) {
            row[k] = p.a(r, comp.vars[k]);
        }
        comp.local.add_row(std::move(row), p.b[r]);
    }
    return comps;
}

HullTag classify(const ConstraintPoly& p) {
    std::vector<std::pair<RatVector, Rational>> rows;
    for (std::size_t r = 0; r < p.num_rows(); ++r) {
        if (!is_zero(p.a.row(r))) {
            rows.push_back(normalize_row(p.a.row(r), p.b[r]));
        }
    }
    if (std::all_of(rows.begin(), rows.end(), [](const auto& r) { return sgn(r.second) == 0; })) {
        return HullTag::Cone;
    }
    bool units = true;
    bool diff = true;
    bool oct = true;
    bool integral_rhs = true;
    for (const auto& [row, rhs] : rows) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (sgn(row[i]) != 0) {
                s.push_back(i);
                if (row[i] != 1 && row[i] != -1) {
                    units = false;
                }
            }
        }
        if (!linrank::is_integral(rhs)) {
            integral_rhs = false;
        }
        if (s.size() > 2) {
            oct = false;
            diff = false;
        } else if (s.size() == 2 && row[s[0]] != -row[s[1]]) {
            diff = false;
        }
    }
    if (units && integral_rhs) {
        RatMatrix m(0, p.ambient());
        for (const auto& r : rows) {
            m.append_row(r.first);
        }
        if (is_totally_unimodular(m)) {
            return HullTag::TotallyUnimodular;
        }
    }
    if (units && diff) {
        return HullTag::DifferenceBounds;
    }
    if (p.ambient() <= 2) {
        return HullTag::TwoDim;
    }
    if (units && oct) {
        return HullTag::Octagon;
    }
    return HullTag::General;
}

namespace {

// Integer point on the minimal face through v, if any.
std::optional<RatVector> integer_point_on_minimal_face(const ConstraintPoly& p, const RatVector& v) {
    if (linrank::is_integral(std::span<const Rational>(v))) {
        return v;
    }
    RatMatrix e(0, p.ambient());
    RatVector rhs;
    for (std::size_t r = 0; r < p.num_rows(); ++r) {
        if (dot(p.a.row(r), v) == p.b[r]) {
            e.append_row(p.a.row(r));
            rhs.push_back(p.b[r]);
        }
    }
    auto z = integer_solution(e, rhs);
    if (!z) {
        return std::nullopt;
    }
    return to_rational(*z);
}

} // namespace

bool is_integral(const ConstraintPoly& p) {
    GeneratorRep g = polyhedra::to_generators(p);
    bool lines = !g.rays.empty();
    for (const auto& v : g.vertices) {
        if (linrank::is_integral(std::span<const Rational>(v))) {
            continue;
        }
        if (!lines || !integer_point_on_minimal_face(p, v)) {
            return false;
        }
    }
    return true;
}

GeneratorRep integral_generators(const ConstraintPoly& p) {
    GeneratorRep g = polyhedra::to_generators(p);
    std::set<RatVector> verts;
    for (const auto& v : g.vertices) {
        auto z = integer_point_on_minimal_face(p, v);
        if (!z || (g.rays.empty() && !linrank::is_integral(std::span<const Rational>(v)))) {
            throw std::invalid_argument("integral_generators: polyhedron is not integral");
        }
        verts.insert(*z);
    }
    g.vertices.assign(verts.begin(), verts.end());
    return g;
}

namespace {

struct ComponentHull {
    ConstraintPoly poly;
    bool exact = true;
};

ComponentHull hull_component(const ConstraintPoly& local, HullTag tag, const HullOptions& options) {
    switch (tag) {
    case HullTag::Cone:
    case HullTag::TotallyUnimodular: return {local, true};
    case HullTag::DifferenceBounds: return {tighten_difference_bounds(local), true};
    case HullTag::TwoDim: return {hull_2d(local), true};
    case HullTag::Octagon: {
        ConstraintPoly closed = octagon_tight_closure(local);
        if (options.octagon_mode == OctagonMode::Closure) {
            return {closed, false};
        }
        if (is_integral(closed)) {
            return {closed, true};
        }
        auto g = general_hull(closed, options.cut_round_cap);
        return {g.hull, g.exact};
    }
    case HullTag::General: {
        if (is_integral(local)) {
            return {local, true};
        }
        auto g = general_hull(local, options.cut_round_cap);
        return {g.hull, g.exact};
    }
    }
    return {local, false};
}

RatVector lift(std::span<const Rational> local_row, const std::vector<std::size_t>& vars, std::size_t d) {
    RatVector row(d);
    for (std::size_t k = 0; k < vars.size(); ++k) {
        row[vars[k]] = local_row[k];
    }
    return row;
}

} // namespace

HullResult integer_hull(const ConstraintPoly& p, const HullOptions& options) {
    std::size_t d = p.ambient();
    HullResult res{ConstraintPoly(d), {}};
    for (const auto& comp : decompose_components(p)) {
        HullTag tag = classify(comp.local);
        ComponentHull h = hull_component(comp.local, tag, options);
        ComponentReport rep;
        rep.vars = comp.vars;
        rep.tag = tag;
        rep.exact = h.exact;
        rep.added = ConstraintPoly(d);
        res.report.exact = res.report.exact && h.exact;
        if (polyhedra::is_empty(h.poly)) {
            res.hull = ConstraintPoly::empty_set(d);
            res.report.components.push_back(std::move(rep));
            return res;
        }
        for (std::size_t r = 0; r < h.poly.num_rows(); ++r) {
            RatVector row = lift(h.poly.a.row(r), comp.vars, d);
            if (!polyhedra::implies(comp.local, h.poly.a.row(r), h.poly.b[r])) {
                rep.added.add_row(row, h.poly.b[r]);
            }
            res.hull.add_row(std::move(row), h.poly.b[r]);
        }
        res.report.components.push_back(std::move(rep));
    }
    return res;
}

namespace {

struct AffineUpdate {
    RatMatrix m;  // n x n
    RatVector c;
};

// Recognises x' = M x + c among the rows mentioning primed variables.
std::optional<AffineUpdate> affine_update(const ConstraintPoly& q, std::size_t n) {
    std::set<std::pair<RatVector, Rational>> rows;
    std::vector<std::size_t> primed;
    for (std::size_t r = 0; r < q.num_rows(); ++r) {
        bool touches = false;
        for (std::size_t c = n; c < 2 * n; ++c) {
            touches = touches || sgn(q.a(r, c)) != 0;
        }
        if (touches) {
            primed.push_back(r);
            rows.insert(normalize_row(q.a.row(r), q.b[r]));
        }
    }
    RatMatrix e(0, 2 * n);
    RatVector rhs;
    std::set<std::pair<RatVector, Rational>> taken;
    for (auto r : primed) {
        auto key = normalize_row(q.a.row(r), q.b[r]);
        auto neg = normalize_row(negated(q.a.row(r)), -q.b[r]);
        if (rows.count(neg) == 0) {
            return std::nullopt;
        }
        if (taken.count(key) != 0 || taken.count(neg) != 0) {
            continue;
        }
        taken.insert(key);
        e.append_row(key.first);
        rhs.push_back(key.second);
    }
    std::vector<std::size_t> xcols(n), pcols(n);
    std::iota(xcols.begin(), xcols.end(), 0);
    std::iota(pcols.begin(), pcols.end(), n);
    RatMatrix ex = e.select_cols(xcols);
    RatMatrix ep = e.select_cols(pcols);
    auto idx = independent_rows(ep);
    if (idx.size() != n) {
        return std::nullopt;
    }
    RatMatrix s = ep.select_rows(idx);
    AffineUpdate u{RatMatrix(n, n), RatVector(n)};
    // Solve s x' = rhs_s - ex_s x column by column.
    RatVector rs;
    for (auto i : idx) {
        rs.push_back(rhs[i]);
    }
    auto c = solve(s, rs);
    if (!c) {
        return std::nullopt;
    }
    u.c = *c;
    for (std::size_t j = 0; j < n; ++j) {
        RatVector col;
        for (auto i : idx) {
            col.push_back(-ex(i, j));
        }
        auto sol = solve(s, col);
        if (!sol) {
            return std::nullopt;
        }
        for (std::size_t i = 0; i < n; ++i) {
            u.m(i, j) = (*sol)[i];
        }
    }
    // Every equality must follow from the map.
    for (std::size_t r = 0; r < e.rows(); ++r) {
        for (std::size_t j = 0; j < n; ++j) {
            Rational v = ex(r, j);
            for (std::size_t i = 0; i < n; ++i) {
                v += ep(r, i) * u.m(i, j);
            }
            if (sgn(v) != 0) {
                return std::nullopt;
            }
        }
        if (dot(ep.row(r), u.c) != rhs[r]) {
            return std::nullopt;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!linrank::is_integral(std::span<const Rational>(u.m.row(i))) || !linrank::is_integral(u.c[i])) {
            return std::nullopt;
        }
    }
    return u;
}

} // namespace

HullResult transition_hull(const ConstraintPoly& q, std::size_t n, const HullOptions& options) {
    if (q.ambient() != 2 * n) {
        throw DimensionError("transition polyhedron must have 2n columns");
    }
    auto update = affine_update(q, n);
    if (!update) {
        return integer_hull(q, options);
    }
    ConstraintPoly guard(n);
    for (std::size_t r = 0; r < q.num_rows(); ++r) {
        bool primed = false;
        for (std::size_t c = n; c < 2 * n; ++c) {
            primed = primed || sgn(q.a(r, c)) != 0;
        }
        if (!primed) {
            guard.add_row(RatVector(q.a.row(r).begin(), q.a.row(r).begin() + static_cast<std::ptrdiff_t>(n)), q.b[r]);
        }
    }
    HullResult g = integer_hull(guard, options);
    HullResult res{ConstraintPoly(2 * n), g.report};
    res.report.guard_only = true;
    for (auto& comp : res.report.components) {
        ConstraintPoly wide(2 * n);
        for (std::size_t r = 0; r < comp.added.num_rows(); ++r) {
            wide.add_row(concat(comp.added.a.row(r), zeros(n)), comp.added.b[r]);
        }
        comp.added = std::move(wide);
    }
    if (polyhedra::is_empty(g.hull)) {
        res.hull = ConstraintPoly::empty_set(2 * n);
        return res;
    }
    for (std::size_t r = 0; r < g.hull.num_rows(); ++r) {
        res.hull.add_row(concat(g.hull.a.row(r), zeros(n)), g.hull.b[r]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        RatVector row(2 * n);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = -update->m(i, j);
        }
        row[n + i] = 1;
        res.hull.add_equality(row, update->c[i]);
    }
    return res;
}

} // namespace inthull
} // namespace linrank
