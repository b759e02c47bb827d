// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/polyhedra.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>

namespace linrank {

ConstraintPoly::ConstraintPoly(RatMatrix m, RatVector rhs) : a(std::move(m)), b(std::move(rhs)) {
    if (a.rows() != b.size()) {
        throw DimensionError("constraint matrix has " + std::to_string(a.rows()) + " rows but " +
                             std::to_string(b.size()) + " right-hand sides");
    }
}

ConstraintPoly ConstraintPoly::empty_set(std::size_t ambient) {
    ConstraintPoly p(ambient);
    p.add_row(RatVector(ambient), -1);
    return p;
}

void ConstraintPoly::add_row(RatVector row, Rational rhs) {
    a.append_row(std::move(row));
    b.push_back(std::move(rhs));
}

void ConstraintPoly::add_equality(const RatVector& row, const Rational& rhs) {
    add_row(row, rhs);
    add_row(negated(row), -rhs);
}

void ConstraintPoly::append(const ConstraintPoly& other) {
    if (other.ambient() != ambient()) {
        throw DimensionError("cannot conjoin polyhedra of different dimension");
    }
    for (std::size_t r = 0; r < other.num_rows(); ++r) {
        add_row(other.a.row(r), other.b[r]);
    }
}

bool ConstraintPoly::contains(std::span<const Rational> x) const {
    if (x.size() != ambient()) {
        throw DimensionError("point dimension does not match polyhedron");
    }
    for (std::size_t r = 0; r < num_rows(); ++r) {
        if (dot(a.row(r), x) > b[r]) {
            return false;
        }
    }
    return true;
}

ConstraintPoly FaceSpec::to_poly() const {
    if (empty) {
        return ConstraintPoly::empty_set(base.ambient());
    }
    ConstraintPoly p = base;
    for (auto r : tight_rows) {
        p.add_row(negated(base.a.row(r)), -base.b[r]);
    }
    return p;
}

namespace polyhedra {

namespace {

// Fixed-width bitset over processed constraints.
struct Bits {
    std::vector<std::uint64_t> w;
    explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
    void resize(std::size_t n) { w.resize((n + 63) / 64, 0); }
    void set(std::size_t i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }
    [[nodiscard]] bool test(std::size_t i) const { return ((w[i / 64] >> (i % 64)) & 1U) != 0; }
    [[nodiscard]] Bits operator&(const Bits& o) const {
        Bits r;
        r.w.resize(w.size());
        for (std::size_t k = 0; k < w.size(); ++k) {
            r.w[k] = w[k] & o.w[k];
        }
        return r;
    }
    [[nodiscard]] std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w) {
            c += static_cast<std::size_t>(std::popcount(x));
        }
        return c;
    }
};

Integer idot(const IntVector& a, const IntVector& b) {
    Integer s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) {
            s += a[i] * b[i];
        }
    }
    return s;
}

std::size_t int_rank(std::vector<IntVector> a, std::size_t cols) {
    std::size_t rows = a.size();
    std::size_t rk = 0;
    Integer prev = 1;
    for (std::size_t c = 0; c < cols && rk < rows; ++c) {
        std::size_t piv = rk;
        while (piv < rows && sgn(a[piv][c]) == 0) {
            ++piv;
        }
        if (piv == rows) {
            continue;
        }
        std::swap(a[piv], a[rk]);
        for (std::size_t r = rk + 1; r < rows; ++r) {
            for (std::size_t k = c + 1; k < cols; ++k) {
                Integer t = a[rk][c] * a[r][k] - a[r][c] * a[rk][k];
                mpz_divexact(a[r][k].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[r][c] = 0;
        }
        prev = a[rk][c];
        ++rk;
    }
    return rk;
}

struct Cone {
    std::vector<IntVector> lineality;
    std::vector<IntVector> rays;
};

// Generators of {z : c . z <= 0 for every c in cons} by the double description method.
Cone dd_cone(const std::vector<IntVector>& cons, std::size_t dim) {
    std::vector<IntVector> lin;
    for (std::size_t i = 0; i < dim; ++i) {
        IntVector e(dim);
        e[i] = 1;
        lin.push_back(std::move(e));
    }
    std::vector<IntVector> rays;
    std::vector<Bits> zero;
    std::vector<const IntVector*> processed;
    for (const auto& c : cons) {
        std::size_t k = processed.size();
        for (auto& z : zero) {
            z.resize(k + 1);
        }
        auto pick = std::find_if(lin.begin(), lin.end(), [&](const IntVector& l) { return sgn(idot(c, l)) != 0; });
        if (pick != lin.end()) {
            IntVector piv = *pick;
            lin.erase(pick);
            Integer s = idot(c, piv);
            for (auto& l : lin) {
                Integer t = idot(c, l);
                if (sgn(t) != 0) {
                    for (std::size_t i = 0; i < dim; ++i) {
                        l[i] = s * l[i] - t * piv[i];
                    }
                    l = primitive(std::span<const Integer>(l));
                }
            }
            Integer abs_s = abs(s);
            for (std::size_t r = 0; r < rays.size(); ++r) {
                Integer t = idot(c, rays[r]);
                if (sgn(t) != 0) {
                    for (std::size_t i = 0; i < dim; ++i) {
                        rays[r][i] = abs_s * rays[r][i] - sgn(s) * t * piv[i];
                    }
                    rays[r] = primitive(std::span<const Integer>(rays[r]));
                }
                zero[r].set(k);
            }
            if (sgn(s) > 0) {
                for (auto& x : piv) {
                    x = -x;
                }
            }
            Bits zb(k + 1);
            for (std::size_t j = 0; j < k; ++j) {
                zb.set(j);
            }
            rays.push_back(std::move(piv));
            zero.push_back(std::move(zb));
        } else {
            std::vector<Integer> val(rays.size());
            std::vector<std::size_t> pos, neg;
            std::vector<IntVector> next;
            std::vector<Bits> next_zero;
            for (std::size_t r = 0; r < rays.size(); ++r) {
                val[r] = idot(c, rays[r]);
                int sg = sgn(val[r]);
                if (sg > 0) {
                    pos.push_back(r);
                } else {
                    if (sg == 0) {
                        zero[r].set(k);
                    } else {
                        neg.push_back(r);
                    }
                    next.push_back(rays[r]);
                    next_zero.push_back(zero[r]);
                }
            }
            std::size_t pointed_dim = dim - lin.size();
            for (auto p : pos) {
                for (auto n : neg) {
                    Bits common = zero[p] & zero[n];
                    if (pointed_dim < 2 || common.count() + 2 < pointed_dim) {
                        continue;
                    }
                    std::vector<IntVector> tight;
                    for (std::size_t j = 0; j < k; ++j) {
                        if (common.test(j)) {
                            tight.push_back(*processed[j]);
                        }
                    }
                    if (int_rank(tight, dim) != pointed_dim - 2) {
                        continue;
                    }
                    IntVector comb(dim);
                    for (std::size_t i = 0; i < dim; ++i) {
                        comb[i] = val[p] * rays[n][i] - val[n] * rays[p][i];
                    }
                    common.set(k);
                    next.push_back(primitive(std::span<const Integer>(comb)));
                    next_zero.push_back(std::move(common));
                }
            }
            rays = std::move(next);
            zero = std::move(next_zero);
        }
        processed.push_back(&c);
    }
    return {std::move(lin), std::move(rays)};
}

IntVector homogenised_row(std::span<const Rational> a, const Rational& last) {
    RatVector r(a.begin(), a.end());
    r.push_back(last);
    return primitive(std::span<const Rational>(r));
}

IntVector canonical_line(IntVector v) {
    auto it = std::find_if(v.begin(), v.end(), [](const Integer& x) { return sgn(x) != 0; });
    if (it != v.end() && sgn(*it) < 0) {
        for (auto& x : v) {
            x = -x;
        }
    }
    return v;
}

Extremum optimise(const ConstraintPoly& p, const RatVector& c, lp::Sense sense) {
    auto out = lp::solve(p.system(), lp::Objective{c, sense}, lp::SolveOptions{false});
    Extremum e;
    if (auto* opt = std::get_if<lp::Optimal>(&out)) {
        e.kind = Extremum::Kind::Finite;
        e.value = opt->value;
        e.point = opt->point;
    } else if (auto* unb = std::get_if<lp::Unbounded>(&out)) {
        e.kind = Extremum::Kind::Unbounded;
        e.point = unb->point;
    }
    return e;
}

} // namespace

Extremum minimize(const ConstraintPoly& p, const RatVector& c) { return optimise(p, c, lp::Sense::Minimize); }
Extremum maximize(const ConstraintPoly& p, const RatVector& c) { return optimise(p, c, lp::Sense::Maximize); }

bool is_empty(const ConstraintPoly& p) { return !lp::is_feasible(p.system()); }

int dim(const ConstraintPoly& p) {
    if (is_empty(p)) {
        return -1;
    }
    auto eq = lp::implied_equalities(p.a, p.b);
    return static_cast<int>(p.ambient() - rank(p.a.select_rows(eq)));
}

GeneratorRep to_generators(const ConstraintPoly& p) {
    std::size_t d = p.ambient();
    GeneratorRep g;
    g.ambient = d;
    std::vector<IntVector> cons;
    IntVector t_nonneg(d + 1);
    t_nonneg[d] = -1;
    cons.push_back(t_nonneg);
    for (std::size_t r = 0; r < p.num_rows(); ++r) {
        cons.push_back(homogenised_row(p.a.row(r), -p.b[r]));
    }
    Cone cone = dd_cone(cons, d + 1);
    std::set<RatVector> verts, rays;
    for (const auto& z : cone.rays) {
        RatVector v(d);
        if (sgn(z[d]) > 0) {
            for (std::size_t i = 0; i < d; ++i) {
                v[i] = Rational(z[i], z[d]);
                v[i].canonicalize();
            }
            verts.insert(std::move(v));
        } else {
            IntVector head(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(d));
            rays.insert(to_rational(primitive(std::span<const Integer>(head))));
        }
    }
    if (verts.empty()) {
        return g;
    }
    for (const auto& l : cone.lineality) {
        IntVector head(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(d));
        IntVector c = canonical_line(primitive(std::span<const Integer>(head)));
        rays.insert(to_rational(c));
        for (auto& x : c) {
            x = -x;
        }
        rays.insert(to_rational(c));
    }
    g.vertices.assign(verts.begin(), verts.end());
    g.rays.assign(rays.begin(), rays.end());
    return g;
}

ConstraintPoly to_constraints(const GeneratorRep& g) {
    std::size_t d = g.ambient;
    if (g.vertices.empty()) {
        return ConstraintPoly::empty_set(d);
    }
    std::vector<IntVector> cons;
    for (const auto& v : g.vertices) {
        if (v.size() != d) {
            throw DimensionError("vertex dimension mismatch");
        }
        cons.push_back(homogenised_row(v, -1));
    }
    for (const auto& r : g.rays) {
        if (r.size() != d) {
            throw DimensionError("ray dimension mismatch");
        }
        if (!is_zero(r)) {
            cons.push_back(homogenised_row(r, 0));
        }
    }
    Cone cone = dd_cone(cons, d + 1);
    std::set<RatVector> ineqs, eqs;
    auto split = [&](const IntVector& z) {
        RatVector row = to_rational(z);
        return row;
    };
    for (const auto& z : cone.rays) {
        RatVector row = split(z);
        if (is_zero(std::span<const Rational>(row).subspan(0, d))) {
            continue;
        }
        ineqs.insert(row);
    }
    for (const auto& l : cone.lineality) {
        eqs.insert(split(canonical_line(l)));
    }
    ConstraintPoly p(d);
    for (const auto& e : eqs) {
        RatVector a(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(d));
        p.add_equality(a, e[d]);
    }
    for (const auto& e : ineqs) {
        RatVector a(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(d));
        p.add_row(a, e[d]);
    }
    return p;
}

ConstraintPoly recession_cone(const ConstraintPoly& p) { return ConstraintPoly(p.a, RatVector(p.num_rows())); }

bool implies(const ConstraintPoly& p, const RatVector& row, const Rational& rhs) {
    auto e = maximize(p, row);
    switch (e.kind) {
    case Extremum::Kind::Empty: return true;
    case Extremum::Kind::Unbounded: return false;
    case Extremum::Kind::Finite: return e.value <= rhs;
    }
    return false;
}

bool includes(const ConstraintPoly& outer, const ConstraintPoly& inner) {
    if (outer.ambient() != inner.ambient()) {
        throw DimensionError("cannot compare polyhedra of different dimension");
    }
    if (is_empty(inner)) {
        return true;
    }
    for (std::size_t r = 0; r < outer.num_rows(); ++r) {
        if (!implies(inner, outer.a.row(r), outer.b[r])) {
            return false;
        }
    }
    return true;
}

bool set_equal(const ConstraintPoly& p, const ConstraintPoly& q) { return includes(p, q) && includes(q, p); }

ConstraintPoly intersect(const ConstraintPoly& p, const ConstraintPoly& q) {
    ConstraintPoly r = p;
    r.append(q);
    return r;
}

ConstraintPoly remove_redundant(const ConstraintPoly& p) {
    std::size_t d = p.ambient();
    if (is_empty(p)) {
        return ConstraintPoly::empty_set(d);
    }
    std::set<RatVector> seen;
    std::vector<std::pair<RatVector, Rational>> rows;
    for (std::size_t r = 0; r < p.num_rows(); ++r) {
        if (is_zero(p.a.row(r))) {
            continue;
        }
        RatVector key = to_rational(homogenised_row(p.a.row(r), p.b[r]));
        if (seen.insert(key).second) {
            rows.emplace_back(RatVector(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(d)), key[d]);
        }
    }
    for (std::size_t i = rows.size(); i-- > 0;) {
        ConstraintPoly rest(d);
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j != i) {
                rest.add_row(rows[j].first, rows[j].second);
            }
        }
        if (implies(rest, rows[i].first, rows[i].second)) {
            rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    ConstraintPoly out(d);
    for (auto& [row, rhs] : rows) {
        out.add_row(row, rhs);
    }
    return out;
}

Rational pick_in_open_interval(const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
    if (lo && hi && *lo >= *hi) {
        throw std::invalid_argument("empty open interval");
    }
    if ((!lo || sgn(*lo) < 0) && (!hi || sgn(*hi) > 0)) {
        return 0;
    }
    if (lo && sgn(*lo) >= 0) {
        Rational cand(floor_of(*lo) + 1);
        if (!hi || cand < *hi) {
            return cand;
        }
    } else if (hi) {
        Rational cand(ceil_of(*hi) - 1);
        if (!lo || cand > *lo) {
            return cand;
        }
    }
    return (*lo + *hi) / 2;
}

RatVector sweep_point(const lp::LinearSystem& system, std::span<const std::size_t> order,
                      std::optional<std::size_t> minimize_last) {
    lp::LinearSystem sys = system;
    std::size_t n = sys.num_vars();
    auto bound = [&](std::size_t var, lp::Sense sense) -> std::optional<Rational> {
        auto out = lp::solve(sys, lp::Objective{unit(n, var), sense}, lp::SolveOptions{false});
        if (lp::is_infeasible(out)) {
            throw std::invalid_argument("sweep_point: system is infeasible");
        }
        if (auto* opt = std::get_if<lp::Optimal>(&out)) {
            return opt->value;
        }
        return std::nullopt;
    };
    for (auto var : order) {
        auto lo = bound(var, lp::Sense::Minimize);
        auto hi = bound(var, lp::Sense::Maximize);
        Rational val = (lo && hi && *lo == *hi) ? *lo : pick_in_open_interval(lo, hi);
        sys.add_eq(unit(n, var), val);
    }
    if (minimize_last) {
        auto lo = bound(*minimize_last, lp::Sense::Minimize);
        if (!lo) {
            throw std::logic_error("sweep_point: final coordinate is unbounded below");
        }
        sys.add_eq(unit(n, *minimize_last), *lo);
    }
    auto out = lp::solve(sys, std::nullopt, lp::SolveOptions{false});
    const RatVector* x = lp::point_of(out);
    if (x == nullptr) {
        throw std::logic_error("sweep_point: lost feasibility");
    }
    return *x;
}

RatVector relative_interior_point(const ConstraintPoly& p, std::span<const std::size_t> order) {
    std::vector<std::size_t> idx(order.begin(), order.end());
    if (idx.empty()) {
        idx.resize(p.ambient());
        std::iota(idx.begin(), idx.end(), 0);
    }
    if (is_empty(p)) {
        throw std::invalid_argument("relative_interior_point: polyhedron is empty");
    }
    return sweep_point(p.system(), idx);
}

FaceSpec face(const ConstraintPoly& p, const RatVector& h, const Rational& c) {
    FaceSpec f{p, {}, false};
    auto top = maximize(p, h);
    if (top.kind == Extremum::Kind::Empty) {
        f.empty = true;
        return f;
    }
    if (top.kind == Extremum::Kind::Unbounded || top.value > c) {
        throw std::invalid_argument("face: hyperplane is not valid for the polyhedron");
    }
    if (top.value < c) {
        f.empty = true;
        return f;
    }
    ConstraintPoly cut = p;
    cut.add_equality(h, c);
    auto eq = lp::implied_equalities(cut.a, cut.b);
    for (auto r : eq) {
        if (r < p.num_rows()) {
            f.tight_rows.push_back(r);
        }
    }
    return f;
}

} // namespace polyhedra
} // namespace linrank
