// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/lrf.hpp"

#include <numeric>
#include <set>
#include <stdexcept>

namespace linrank::lrf {
namespace {

struct GenRef {
    std::size_t path;
    std::size_t item;
    bool ray;
};

// Rows of the generator system together with the generator each row comes from.
struct GenSystem {
    RatMatrix a;
    RatVector b;
    std::vector<GenRef> refs;
};

GenSystem build_gen_system(std::span<const GeneratorRep> gens, std::size_t n) {
    GenSystem s;
    s.a = RatMatrix(0, n + 1);
    auto push = [&](RatVector row, const Rational& rhs, GenRef ref) {
        s.a.append_row(std::move(row));
        s.b.push_back(rhs);
        s.refs.push_back(ref);
    };
    for (std::size_t p = 0; p < gens.size(); ++p) {
        const auto& g = gens[p];
        if (g.ambient != 2 * n) {
            throw DimensionError("generator width does not match the loop");
        }
        for (std::size_t j = 0; j < g.vertices.size(); ++j) {
            const auto& v = g.vertices[j];
            // -lambda_0 - lambda . x <= 0
            RatVector r1(n + 1);
            r1[0] = -1;
            // -lambda . (x - x') <= -1
            RatVector r2(n + 1);
            for (std::size_t i = 0; i < n; ++i) {
                r1[i + 1] = -v[i];
                r2[i + 1] = v[n + i] - v[i];
            }
            push(std::move(r1), 0, {p, j, false});
            push(std::move(r2), -1, {p, j, false});
        }
        for (std::size_t j = 0; j < g.rays.size(); ++j) {
            const auto& y = g.rays[j];
            RatVector r1(n + 1);
            RatVector r2(n + 1);
            for (std::size_t i = 0; i < n; ++i) {
                r1[i + 1] = -y[i];
                r2[i + 1] = y[n + i] - y[i];
            }
            push(std::move(r1), 0, {p, j, true});
            push(std::move(r2), 0, {p, j, true});
        }
    }
    return s;
}

Witness witness_from_generators(std::span<const GeneratorRep> gens, std::span<const std::size_t> source,
                                std::size_t paths, std::size_t n) {
    GenSystem s = build_gen_system(gens, n);
    if (lp::is_feasible(lp::LinearSystem::from_problem(s.a, s.b))) {
        throw std::invalid_argument("extract_lrf_witness: a linear ranking function exists");
    }
    std::vector<std::set<std::size_t>> pts(gens.size());
    std::vector<std::set<std::size_t>> rys(gens.size());
    for (std::size_t r : lp::iis(s.a, s.b)) {
        const auto& ref = s.refs[r];
        (ref.ray ? rys : pts)[ref.path].insert(ref.item);
    }
    Witness w = empty_witness(paths);
    for (std::size_t p = 0; p < gens.size(); ++p) {
        if (!rys[p].empty() && pts[p].empty()) {
            pts[p].insert(0);
        }
        for (std::size_t j : pts[p]) {
            w.points[source[p]].push_back(gens[p].vertices[j]);
        }
        for (std::size_t j : rys[p]) {
            w.rays[source[p]].push_back(gens[p].rays[j]);
        }
    }
    return w;
}

Witness witness_from_prepared(const PreparedPaths& pp, std::size_t paths, Domain domain) {
    std::vector<GeneratorRep> gens;
    for (const auto& p : pp.polys) {
        gens.push_back(witness_generators(p, domain, pp.exact));
    }
    return witness_from_generators(gens, pp.source, paths, pp.n);
}

} // namespace

lp::LinearSystem pr_system(const ConstraintPoly& q, std::size_t n) {
    std::size_t m = q.num_rows();
    if (q.ambient() != 2 * n) {
        throw DimensionError("pr_system: polyhedron width is not 2n");
    }
    lp::LinearSystem sys(2 * m);
    for (std::size_t v = 0; v < 2 * m; ++v) {
        sys.set_nonneg(v, true);
    }
    auto mu = [](std::size_t r) { return r; };
    auto eta = [m](std::size_t r) { return m + r; };
    for (std::size_t k = 0; k < n; ++k) {
        RatVector primed(2 * m);
        RatVector diff(2 * m);
        RatVector sum(2 * m);
        for (std::size_t r = 0; r < m; ++r) {
            primed[mu(r)] = q.a(r, n + k);
            diff[mu(r)] = q.a(r, k);
            diff[eta(r)] = -q.a(r, k);
            sum[eta(r)] = q.a(r, k) + q.a(r, n + k);
        }
        sys.add_eq(std::move(primed), 0);
        sys.add_eq(std::move(diff), 0);
        sys.add_eq(std::move(sum), 0);
    }
    RatVector dec(2 * m);
    for (std::size_t r = 0; r < m; ++r) {
        dec[eta(r)] = q.b[r];
    }
    sys.add_le(std::move(dec), -1);
    return sys;
}

RankingSpace ranking_space(std::span<const ConstraintPoly> polys, std::size_t n, const Rational& decrease) {
    RankingSpace s;
    s.n = n;
    s.system = lp::LinearSystem(n + 1);
    for (const auto& q : polys) {
        if (q.ambient() != 2 * n) {
            throw DimensionError("ranking_space: polyhedron width is not 2n");
        }
        std::size_t m = q.num_rows();
        std::size_t off = s.system.num_vars();
        s.path_offset.push_back(off);
        for (std::size_t v = 0; v < 2 * m; ++v) {
            s.system.add_variable(true);
        }
        std::size_t width = off + 2 * m;
        auto mu = [off](std::size_t r) { return off + r; };
        auto eta = [off, m](std::size_t r) { return off + m + r; };
        for (std::size_t k = 0; k < n; ++k) {
            RatVector primed(width);
            RatVector diff(width);
            RatVector sum(width);
            RatVector lambda(width);
            lambda[1 + k] = 1;
            for (std::size_t r = 0; r < m; ++r) {
                primed[mu(r)] = q.a(r, n + k);
                diff[mu(r)] = q.a(r, k);
                diff[eta(r)] = -q.a(r, k);
                sum[eta(r)] = q.a(r, k) + q.a(r, n + k);
                lambda[eta(r)] = -q.a(r, n + k);
            }
            s.system.add_eq(std::move(primed), 0);
            s.system.add_eq(std::move(diff), 0);
            s.system.add_eq(std::move(sum), 0);
            s.system.add_eq(std::move(lambda), 0);
        }
        RatVector dec(width);
        RatVector bound(width);
        bound[0] = -1;
        for (std::size_t r = 0; r < m; ++r) {
            dec[eta(r)] = q.b[r];
            bound[mu(r)] = q.b[r];
        }
        s.system.add_le(std::move(dec), -decrease);
        s.system.add_le(std::move(bound), 0);
    }
    // Earlier rows were built before later variables existed; pad them to full width.
    lp::LinearSystem padded(s.system.num_vars());
    for (std::size_t v = 0; v < s.system.num_vars(); ++v) {
        padded.set_nonneg(v, s.system.nonneg(v));
    }
    for (auto row : s.system.rows()) {
        row.coeffs.resize(s.system.num_vars());
        padded.add_row(std::move(row));
    }
    s.system = std::move(padded);
    return s;
}

std::optional<AffineFunc> pick_function(const RankingSpace& space) {
    if (!lp::is_feasible(space.system)) {
        return std::nullopt;
    }
    std::vector<std::size_t> order(space.n);
    std::iota(order.begin(), order.end(), 1);
    RatVector p = polyhedra::sweep_point(space.system, order, 0);
    return AffineFunc{RatVector(p.begin() + 1, p.begin() + 1 + static_cast<std::ptrdiff_t>(space.n)), p[0]};
}

std::optional<AffineFunc> farkas_lrf(std::span<const ConstraintPoly> polys, std::size_t n) {
    return pick_function(ranking_space(polys, n, 1));
}

RatMatrix psi_ws_matrix(std::span<const GeneratorRep> gens, std::size_t n, RatVector& rhs) {
    GenSystem s = build_gen_system(gens, n);
    rhs = s.b;
    return s.a;
}

std::optional<AffineFunc> generators_lrf(std::span<const GeneratorRep> gens, std::size_t n) {
    GenSystem s = build_gen_system(gens, n);
    return pick_function(RankingSpace{lp::LinearSystem::from_problem(s.a, s.b), n, {}});
}

LrfVerdict synth_lrf_generators(std::span<const GeneratorRep> gens, std::size_t n) {
    if (gens.empty()) {
        throw std::invalid_argument("synth_lrf_generators: empty generator list");
    }
    LrfVerdict v;
    v.rho = generators_lrf(gens, n);
    v.kind = v.rho ? Verdict::Found : Verdict::None;
    return v;
}

LrfVerdict synth_lrf(const LrfQuery& query) {
    const auto& ts = query.ts;
    PreparedPaths pp = prepare_paths(ts, query.domain, query.hull);
    LrfVerdict v;
    v.hulls = pp.hulls;
    v.hulls_exact = pp.exact;
    v.origin_paths = pp.origin_paths;
    if (!pp.origin_paths.empty()) {
        v.kind = Verdict::NonTerminating;
        return v;
    }
    if (pp.polys.empty()) {
        v.kind = Verdict::Vacuous;
        v.rho = AffineFunc{zeros(ts.n), 0};
        return v;
    }
    if (query.engine == LrfEngine::Farkas) {
        v.rho = farkas_lrf(pp.polys, ts.n);
    } else {
        std::vector<GeneratorRep> gens;
        for (const auto& p : pp.polys) {
            gens.push_back(polyhedra::to_generators(p));
        }
        v.rho = generators_lrf(gens, ts.n);
    }
    if (v.rho) {
        v.kind = Verdict::Found;
        return v;
    }
    v.kind = Verdict::None;
    if (!pp.exact) {
        // Only a witness made of genuine integer transitions settles the question.
        Witness w = witness_from_prepared(pp, ts.polys.size(), query.domain);
        if (verify_lrf_witness(w, ts, query.domain)) {
            v.witness = std::move(w);
        } else {
            v.kind = Verdict::NoneModuloHull;
        }
        return v;
    }
    if (query.witness_wanted) {
        v.witness = witness_from_prepared(pp, ts.polys.size(), query.domain);
    }
    return v;
}

Witness extract_lrf_witness(const TransitionSystem& ts, Domain domain, const HullOptions& hull) {
    PreparedPaths pp = prepare_paths(ts, domain, hull);
    return witness_from_prepared(pp, ts.polys.size(), domain);
}

bool verify_lrf(const AffineFunc& rho, const TransitionSystem& ts, Domain domain, const HullOptions& hull) {
    if (rho.dim() != ts.n) {
        throw DimensionError("verify_lrf: function arity does not match the loop");
    }
    PreparedPaths pp = prepare_paths(ts, domain, hull);
    RatVector value_row = rho.lifted_row();
    RatVector delta_row = rho.delta_row();
    for (const auto& p : pp.polys) {
        auto lo = polyhedra::minimize(p, value_row);
        if (lo.kind != polyhedra::Extremum::Kind::Finite || lo.value + rho.constant < 0) {
            return false;
        }
        auto dec = polyhedra::minimize(p, delta_row);
        if (dec.kind != polyhedra::Extremum::Kind::Finite || dec.value < 1) {
            return false;
        }
    }
    return true;
}

CheckResult verify_lrf_witness(const Witness& w, const TransitionSystem& ts, Domain domain) {
    if (auto members = check_witness_members(w, ts, domain); !members) {
        return members;
    }
    std::vector<GeneratorRep> gens;
    for (std::size_t i = 0; i < w.points.size(); ++i) {
        GeneratorRep g;
        g.ambient = 2 * ts.n;
        g.vertices = w.points[i];
        g.rays = w.rays[i];
        gens.push_back(std::move(g));
    }
    if (generators_lrf(gens, ts.n)) {
        return CheckResult::fail("the witness admits a linear ranking function");
    }
    return CheckResult::pass();
}

} // namespace linrank::lrf
