// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Per-class integer hull procedures.
#include "linrank/inthull.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace linrank::inthull {

using polyhedra::Extremum;

namespace {

bool is_unit(const Rational& q) { return q == 1 || q == -1; }

std::vector<std::size_t> support(std::span<const Rational> row) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (sgn(row[i]) != 0) {
            s.push_back(i);
        }
    }
    return s;
}

// Box containing every point v + sum t_j r_j with v a vertex and t in [0,1]^k.
ConstraintPoly clip_to_box(const ConstraintPoly& p, const GeneratorRep& g) {
    std::size_t d = p.ambient();
    ConstraintPoly out = p;
    for (std::size_t k = 0; k < d; ++k) {
        Rational lo = g.vertices.front()[k];
        Rational hi = lo;
        for (const auto& v : g.vertices) {
            lo = std::min(lo, v[k]);
            hi = std::max(hi, v[k]);
        }
        for (const auto& r : g.rays) {
            if (sgn(r[k]) < 0) {
                lo += r[k];
            } else {
                hi += r[k];
            }
        }
        out.add_row(unit(d, k), Rational(floor_of(hi)));
        out.add_row(negated(unit(d, k)), -Rational(ceil_of(lo)));
    }
    return out;
}

ConstraintPoly attach_rays(const std::vector<RatVector>& points, const std::vector<RatVector>& rays, std::size_t d) {
    if (points.empty()) {
        return ConstraintPoly::empty_set(d);
    }
    return polyhedra::remove_redundant(polyhedra::to_constraints(GeneratorRep{d, points, rays}));
}

} // namespace

bool is_totally_unimodular(const RatMatrix& m) {
    std::set<RatVector> seen;
    std::vector<IntVector> rows;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto& row = m.row(r);
        for (const auto& q : row) {
            if (sgn(q) != 0 && !is_unit(q)) {
                return false;
            }
        }
        if (is_zero(row)) {
            continue;
        }
        auto lead = std::find_if(row.begin(), row.end(), [](const Rational& q) { return sgn(q) != 0; });
        RatVector key = sgn(*lead) < 0 ? negated(row) : row;
        if (seen.insert(key).second) {
            IntVector ir;
            for (const auto& q : key) {
                ir.push_back(q.get_num());
            }
            rows.push_back(std::move(ir));
        }
    }
    if (rows.empty()) {
        return true;
    }
    std::size_t nr = rows.size();
    std::size_t nc = m.cols();
    std::size_t kmax = std::min(nr, nc);
    if (kmax > 6) {
        return false;
    }
    std::vector<std::size_t> ri, ci;
    bool ok = true;
    std::function<void(std::size_t, std::size_t, std::size_t)> choose_cols;
    std::function<void(std::size_t, std::size_t)> choose_rows = [&](std::size_t start, std::size_t k) {
        if (!ok) {
            return;
        }
        if (ri.size() == k) {
            choose_cols(0, k, 0);
            return;
        }
        for (std::size_t i = start; i < nr && ok; ++i) {
            ri.push_back(i);
            choose_rows(i + 1, k);
            ri.pop_back();
        }
    };
    choose_cols = [&](std::size_t start, std::size_t k, std::size_t) {
        if (!ok) {
            return;
        }
        if (ci.size() == k) {
            std::vector<IntVector> sub(k, IntVector(k));
            for (std::size_t a = 0; a < k; ++a) {
                for (std::size_t b = 0; b < k; ++b) {
                    sub[a][b] = rows[ri[a]][ci[b]];
                }
            }
            Integer det = determinant(sub);
            if (abs(det) > 1) {
                ok = false;
            }
            return;
        }
        for (std::size_t j = start; j < nc && ok; ++j) {
            ci.push_back(j);
            choose_cols(j + 1, k, 0);
            ci.pop_back();
        }
    };
    for (std::size_t k = 2; k <= kmax && ok; ++k) {
        choose_rows(0, k);
    }
    return ok;
}

ConstraintPoly tighten_difference_bounds(const ConstraintPoly& p) {
    ConstraintPoly out(p.ambient());
    for (std::size_t r = 0; r < p.num_rows(); ++r) {
        auto [row, rhs] = normalize_row(p.a.row(r), p.b[r]);
        auto s = support(row);
        bool ok = s.empty() || (s.size() == 1 && is_unit(row[s[0]])) ||
                  (s.size() == 2 && is_unit(row[s[0]]) && row[s[0]] == -row[s[1]]);
        if (!ok) {
            throw std::invalid_argument("tighten_difference_bounds: row is not a difference bound");
        }
        out.add_row(row, Rational(floor_of(rhs)));
    }
    if (polyhedra::is_empty(out)) {
        return ConstraintPoly::empty_set(p.ambient());
    }
    return out;
}

std::optional<RatVector> best_integer_point(const ConstraintPoly& p, const RatVector& c) {
    struct Bound {
        std::size_t var;
        bool upper;
        Rational value;
    };
    std::size_t d = p.ambient();
    std::optional<RatVector> best;
    Rational best_val;
    std::vector<std::vector<Bound>> stack{{}};
    while (!stack.empty()) {
        auto bounds = std::move(stack.back());
        stack.pop_back();
        lp::LinearSystem sys = p.system();
        for (const auto& b : bounds) {
            if (b.upper) {
                sys.add_le(unit(d, b.var), b.value);
            } else {
                sys.add_ge(unit(d, b.var), b.value);
            }
        }
        auto out = lp::solve(sys, lp::Objective{c, lp::Sense::Maximize}, lp::SolveOptions{false});
        if (lp::is_infeasible(out)) {
            continue;
        }
        auto* opt = std::get_if<lp::Optimal>(&out);
        if (opt == nullptr) {
            throw std::invalid_argument("best_integer_point: polyhedron is unbounded in the objective");
        }
        if (best && opt->value <= best_val) {
            continue;
        }
        const RatVector& x = opt->point;
        auto frac = std::find_if(x.begin(), x.end(), [](const Rational& q) { return !linrank::is_integral(q); });
        if (frac == x.end()) {
            best = x;
            best_val = opt->value;
            continue;
        }
        std::size_t j = static_cast<std::size_t>(frac - x.begin());
        auto lo = bounds;
        lo.push_back({j, true, Rational(floor_of(*frac))});
        auto hi = std::move(bounds);
        hi.push_back({j, false, Rational(ceil_of(*frac))});
        stack.push_back(std::move(lo));
        stack.push_back(std::move(hi));
    }
    return best;
}

GeneralHull general_hull(const ConstraintPoly& p, int round_cap) {
    std::size_t d = p.ambient();
    if (polyhedra::is_empty(p)) {
        return {ConstraintPoly::empty_set(d), true, 0};
    }
    GeneratorRep g = polyhedra::to_generators(p);
    ConstraintPoly bounded = g.rays.empty() ? p : clip_to_box(p, g);
    auto seed = best_integer_point(bounded, RatVector(d));
    if (!seed) {
        return {ConstraintPoly::empty_set(d), true, 0};
    }
    std::vector<RatVector> points{*seed};
    std::set<RatVector> confirmed;
    std::vector<std::pair<RatVector, Rational>> confirmed_rows;
    for (int round = 1; round <= round_cap; ++round) {
        ConstraintPoly h = polyhedra::to_constraints(GeneratorRep{d, points, {}});
        std::vector<RatVector> found;
        for (std::size_t r = 0; r < h.num_rows(); ++r) {
            RatVector key = h.a.row(r);
            key.push_back(h.b[r]);
            if (confirmed.count(key) != 0) {
                continue;
            }
            ConstraintPoly beyond = bounded;
            beyond.add_row(negated(h.a.row(r)), -(h.b[r] + 1));
            auto z = best_integer_point(beyond, h.a.row(r));
            if (z) {
                found.push_back(*z);
            } else {
                confirmed.insert(key);
                confirmed_rows.emplace_back(h.a.row(r), h.b[r]);
            }
        }
        if (found.empty()) {
            return {attach_rays(points, g.rays, d), true, round};
        }
        for (auto& z : found) {
            points.push_back(std::move(z));
        }
        points = polyhedra::to_generators(polyhedra::to_constraints(GeneratorRep{d, points, {}})).vertices;
    }
    ConstraintPoly partial = p;
    for (const auto& [row, rhs] : confirmed_rows) {
        bool valid = std::all_of(g.rays.begin(), g.rays.end(), [&](const RatVector& y) { return sgn(dot(row, y)) <= 0; });
        if (valid) {
            partial.add_row(row, rhs);
        }
    }
    return {polyhedra::remove_redundant(partial), false, round_cap};
}

namespace {

// Convex hull of planar integer points, counter-clockwise, without collinear points.
std::vector<RatVector> planar_hull(std::vector<RatVector> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
        return pts;
    }
    auto cross = [](const RatVector& o, const RatVector& a, const RatVector& b) -> Rational {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<RatVector> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && sgn(cross(h[k - 2], h[k - 1], p)) <= 0) {
            --k;
        }
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && sgn(cross(h[k - 2], h[k - 1], pts[i])) <= 0) {
            --k;
        }
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

} // namespace

ConstraintPoly hull_2d(const ConstraintPoly& p) {
    std::size_t d = p.ambient();
    if (d > 2) {
        throw std::invalid_argument("hull_2d: more than two variables");
    }
    if (polyhedra::is_empty(p)) {
        return ConstraintPoly::empty_set(d);
    }
    if (d == 0) {
        return p;
    }
    GeneratorRep g = polyhedra::to_generators(p);
    ConstraintPoly bounded = g.rays.empty() ? p : clip_to_box(p, g);
    auto range = [&](std::size_t k) -> std::pair<Integer, Integer> {
        auto lo = polyhedra::minimize(bounded, unit(d, k));
        auto hi = polyhedra::maximize(bounded, unit(d, k));
        return {ceil_of(lo.value), floor_of(hi.value)};
    };
    std::vector<RatVector> pts;
    if (d == 1) {
        auto [lo, hi] = range(0);
        if (lo <= hi) {
            pts.push_back({Rational(lo)});
            pts.push_back({Rational(hi)});
        }
        return attach_rays(pts, g.rays, d);
    }
    // Sweep the shorter axis; the other coordinate's integer range is read off the rows.
    auto r0 = range(0);
    auto r1 = range(1);
    std::size_t sweep = (r0.second - r0.first) <= (r1.second - r1.first) ? 0 : 1;
    std::size_t other = 1 - sweep;
    auto [lo, hi] = sweep == 0 ? r0 : r1;
    if (hi - lo > 200000) {
        return general_hull(p).hull;
    }
    for (Integer s = lo; s <= hi; ++s) {
        std::optional<Rational> below, above;
        bool feasible = true;
        for (std::size_t r = 0; r < bounded.num_rows() && feasible; ++r) {
            const Rational& cs = bounded.a(r, sweep);
            const Rational& co = bounded.a(r, other);
            Rational rest = bounded.b[r] - cs * Rational(s);
            if (sgn(co) == 0) {
                feasible = sgn(rest) >= 0;
            } else if (sgn(co) > 0) {
                Rational v = rest / co;
                if (!above || v < *above) {
                    above = v;
                }
            } else {
                Rational v = rest / co;
                if (!below || v > *below) {
                    below = v;
                }
            }
        }
        if (!feasible || !below || !above) {
            continue;
        }
        Integer ylo = ceil_of(*below);
        Integer yhi = floor_of(*above);
        if (ylo > yhi) {
            continue;
        }
        for (const Integer& y : {ylo, yhi}) {
            RatVector pt(2);
            pt[sweep] = Rational(s);
            pt[other] = Rational(y);
            pts.push_back(std::move(pt));
        }
    }
    return attach_rays(planar_hull(std::move(pts)), g.rays, d);
}

ConstraintPoly octagon_tight_closure(const ConstraintPoly& p) {
    std::size_t d = p.ambient();
    std::size_t n = 2 * d;
    using Entry = std::optional<Integer>;
    std::vector<std::vector<Entry>> m(n, std::vector<Entry>(n));
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = Integer(0);
    }
    auto tighten = [](Entry& e, const Integer& v) {
        if (!e || v < *e) {
            e = v;
        }
    };
    auto node = [](std::size_t var, const Rational& sign) { return 2 * var + (sgn(sign) > 0 ? 0 : 1); };
    auto bar = [](std::size_t i) { return i ^ 1U; };
    for (std::size_t r = 0; r < p.num_rows(); ++r) {
        auto [row, rhs] = normalize_row(p.a.row(r), p.b[r]);
        auto s = support(row);
        for (auto k : s) {
            if (!is_unit(row[k])) {
                throw std::invalid_argument("octagon_tight_closure: coefficient outside {-1, 0, 1}");
            }
        }
        Integer c = floor_of(rhs);
        if (s.empty()) {
            if (sgn(rhs) < 0) {
                return ConstraintPoly::empty_set(d);
            }
        } else if (s.size() == 1) {
            std::size_t a = node(s[0], row[s[0]]);
            tighten(m[bar(a)][a], 2 * c);
        } else if (s.size() == 2) {
            std::size_t a = node(s[0], row[s[0]]);
            std::size_t b = bar(node(s[1], row[s[1]]));
            tighten(m[b][a], c);
            tighten(m[bar(a)][bar(b)], c);
        } else {
            throw std::invalid_argument("octagon_tight_closure: row mentions more than two variables");
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!m[i][k]) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (m[k][j]) {
                    tighten(m[i][j], *m[i][k] + *m[k][j]);
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (sgn(*m[i][i]) < 0) {
            return ConstraintPoly::empty_set(d);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i][bar(i)]) {
            Integer v;
            mpz_fdiv_q_2exp(v.get_mpz_t(), m[i][bar(i)]->get_mpz_t(), 1);
            m[i][bar(i)] = 2 * v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i][bar(i)] && m[bar(i)][i] && sgn(*m[i][bar(i)] + *m[bar(i)][i]) < 0) {
            return ConstraintPoly::empty_set(d);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (m[i][bar(i)] && m[bar(j)][j]) {
                Integer v = *m[i][bar(i)] + *m[bar(j)][j];
                mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), 2);
                tighten(m[i][j], v);
            }
        }
    }
    // m[i][j] bounds v_j - v_i where v_{2k} = x_k and v_{2k+1} = -x_k.
    ConstraintPoly out(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !m[i][j]) {
                continue;
            }
            RatVector row(d);
            row[j / 2] += (j % 2 == 0) ? 1 : -1;
            row[i / 2] -= (i % 2 == 0) ? 1 : -1;
            out.add_row(row, Rational(*m[i][j]));
        }
    }
    return polyhedra::remove_redundant(out);
}

} // namespace linrank::inthull
