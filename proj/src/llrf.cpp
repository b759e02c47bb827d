// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/llrf.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace linrank {

bool ChainLevel::all_empty() const { return std::all_of(empty.begin(), empty.end(), [](bool b) { return b; }); }

namespace llrf {
namespace {

ChainLevel next_level(const ChainLevel& cur, const AffineFunc& rho) {
    ChainLevel next;
    RatVector h = negated(rho.delta_row());
    for (std::size_t i = 0; i < cur.polys.size(); ++i) {
        if (cur.empty[i]) {
            next.polys.push_back(cur.polys[i]);
            next.empty.push_back(true);
            continue;
        }
        FaceSpec f = polyhedra::face(cur.polys[i], h, 0);
        next.empty.push_back(f.empty);
        next.polys.push_back(f.empty ? ConstraintPoly::empty_set(cur.polys[i].ambient()) : f.to_poly());
    }
    return next;
}

std::vector<ConstraintPoly> nonempty_polys(const ChainLevel& level) {
    std::vector<ConstraintPoly> out;
    for (std::size_t i = 0; i < level.polys.size(); ++i) {
        if (!level.empty[i]) {
            out.push_back(level.polys[i]);
        }
    }
    return out;
}

struct Candidate {
    std::size_t path;
    RatVector z;
    bool ray;
};

// Rows of the lexicographic witness system for the candidates, with the total-decrease
// row summing over the given subset.
void phi_rows(const std::vector<Candidate>& cands, std::span<const std::size_t> total_over, std::size_t n,
              RatMatrix& a, RatVector& b) {
    a = RatMatrix(0, n + 1);
    b.clear();
    for (const auto& c : cands) {
        RatVector r1(n + 1);
        RatVector r2(n + 1);
        r1[0] = c.ray ? 0 : -1;
        for (std::size_t i = 0; i < n; ++i) {
            r1[i + 1] = -c.z[i];
            r2[i + 1] = c.z[n + i] - c.z[i];
        }
        a.append_row(std::move(r1));
        b.push_back(0);
        a.append_row(std::move(r2));
        b.push_back(0);
    }
    RatVector total(n + 1);
    for (std::size_t k : total_over) {
        for (std::size_t i = 0; i < n; ++i) {
            total[i + 1] += cands[k].z[n + i] - cands[k].z[i];
        }
    }
    a.append_row(std::move(total));
    b.push_back(-1);
}

std::vector<Candidate> witness_candidates(const Witness& w) {
    std::vector<Candidate> out;
    for (std::size_t p = 0; p < w.points.size(); ++p) {
        for (const auto& x : w.points[p]) {
            out.push_back({p, x, false});
        }
        for (const auto& y : w.rays[p]) {
            out.push_back({p, y, true});
        }
    }
    return out;
}

} // namespace

lrf::RankingSpace quasi_space(std::span<const ConstraintPoly> polys, std::size_t n) {
    return lrf::ranking_space(polys, n, 0);
}

std::optional<AffineFunc> find_nontrivial_quasi_lrf(std::span<const ConstraintPoly> polys, std::size_t n) {
    auto rho = lrf::pick_function(quasi_space(polys, n));
    if (!rho) {
        return std::nullopt;
    }
    RatVector row = rho->delta_row();
    for (const auto& p : polys) {
        auto best = polyhedra::maximize(p, row);
        if (best.kind == polyhedra::Extremum::Kind::Unbounded ||
            (best.kind == polyhedra::Extremum::Kind::Finite && best.value > 0)) {
            return rho;
        }
    }
    return std::nullopt;
}

SynResult llrf_syn(std::span<const ConstraintPoly> polys, std::size_t n) {
    SynResult res;
    ChainLevel cur;
    for (const auto& p : polys) {
        cur.polys.push_back(p);
        cur.empty.push_back(polyhedra::is_empty(p));
    }
    res.chain.levels.push_back(cur);
    while (true) {
        ++res.depth;
        if (res.depth > n + 1) {
            throw std::logic_error("llrf_syn: recursion deeper than n + 1");
        }
        if (cur.all_empty()) {
            res.found = true;
            return res;
        }
        auto rho = find_nontrivial_quasi_lrf(nonempty_polys(cur), n);
        if (!rho) {
            res.stuck = cur;
            return res;
        }
        res.components.push_back(*rho);
        cur = next_level(cur, *rho);
        res.chain.levels.push_back(cur);
    }
}

RatMatrix phi_matrix(const Witness& w, std::size_t n, RatVector& rhs) {
    auto cands = witness_candidates(w);
    std::vector<std::size_t> all(cands.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    RatMatrix a;
    phi_rows(cands, all, n, a, rhs);
    return a;
}

Witness extract_lex_witness(const ChainLevel& stuck, std::span<const std::size_t> source, std::size_t paths,
                            std::size_t n, Domain domain, bool exact) {
    std::vector<Candidate> cands;
    std::vector<std::optional<RatVector>> first_vertex(stuck.polys.size());
    for (std::size_t p = 0; p < stuck.polys.size(); ++p) {
        if (stuck.empty[p]) {
            continue;
        }
        GeneratorRep g = witness_generators(stuck.polys[p], domain, exact);
        for (const auto& v : g.vertices) {
            cands.push_back({p, v, false});
        }
        for (const auto& y : g.rays) {
            cands.push_back({p, y, true});
        }
        if (!g.vertices.empty()) {
            first_vertex[p] = g.vertices.front();
        }
    }
    if (cands.empty()) {
        throw std::invalid_argument("extract_lex_witness: no transitions at the stuck level");
    }
    RatMatrix vecs(0, 2 * n);
    for (const auto& c : cands) {
        vecs.append_row(c.z);
    }
    std::vector<std::size_t> basis = independent_rows(vecs);
    RatMatrix a;
    RatVector b;
    phi_rows(cands, basis, n, a, b);
    if (lp::is_feasible(lp::LinearSystem::from_problem(a, b))) {
        throw std::invalid_argument("extract_lex_witness: a non-trivial quasi-LRF exists");
    }
    std::set<std::size_t> keep(basis.begin(), basis.end());
    for (std::size_t r : lp::iis(a, b)) {
        if (r < 2 * cands.size()) {
            keep.insert(r / 2);
        }
    }
    Witness w = empty_witness(paths);
    std::vector<bool> has_point(stuck.polys.size(), false);
    for (std::size_t k : keep) {
        const auto& c = cands[k];
        (c.ray ? w.rays : w.points)[source[c.path]].push_back(c.z);
        if (!c.ray) {
            has_point[c.path] = true;
        }
    }
    for (std::size_t p = 0; p < stuck.polys.size(); ++p) {
        if (!has_point[p] && !w.rays[source[p]].empty()) {
            w.points[source[p]].push_back(*first_vertex[p]);
        }
    }
    return w;
}

CheckResult verify_lex_witness(const Witness& w, const TransitionSystem& ts, Domain domain) {
    if (auto members = check_witness_members(w, ts, domain); !members) {
        return members;
    }
    if (std::all_of(w.points.begin(), w.points.end(), [](const auto& s) { return s.empty(); })) {
        return CheckResult::fail("the witness contains no transition");
    }
    RatVector rhs;
    RatMatrix a = phi_matrix(w, ts.n, rhs);
    if (lp::is_feasible(lp::LinearSystem::from_problem(a, rhs))) {
        return CheckResult::fail("the witness admits a non-trivial quasi-LRF");
    }
    return CheckResult::pass();
}

CheckResult verify_weak_llrf(std::span<const AffineFunc> components, std::span<const ConstraintPoly> polys) {
    ChainLevel cur;
    for (const auto& p : polys) {
        cur.polys.push_back(p);
        cur.empty.push_back(polyhedra::is_empty(p));
    }
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& rho = components[i];
        std::string tag = "component " + std::to_string(i + 1);
        for (std::size_t p = 0; p < cur.polys.size(); ++p) {
            if (cur.empty[p]) {
                continue;
            }
            auto lo = polyhedra::minimize(cur.polys[p], rho.lifted_row());
            if (lo.kind != polyhedra::Extremum::Kind::Finite || lo.value + rho.constant < 0) {
                return CheckResult::fail(tag + " is negative on path " + std::to_string(p + 1));
            }
            auto dec = polyhedra::minimize(cur.polys[p], rho.delta_row());
            if (dec.kind != polyhedra::Extremum::Kind::Finite || dec.value < 0) {
                return CheckResult::fail(tag + " increases on path " + std::to_string(p + 1));
            }
        }
        cur = next_level(cur, rho);
    }
    for (std::size_t p = 0; p < cur.polys.size(); ++p) {
        if (!cur.empty[p]) {
            return CheckResult::fail("transitions of path " + std::to_string(p + 1) +
                                     " are not ranked by any component");
        }
    }
    return CheckResult::pass();
}

CheckResult verify_weak_llrf(std::span<const AffineFunc> components, const TransitionSystem& ts, Domain domain,
                             const HullOptions& hull) {
    for (const auto& c : components) {
        if (c.dim() != ts.n) {
            throw DimensionError("verify_weak_llrf: function arity does not match the loop");
        }
    }
    PreparedPaths pp = prepare_paths(ts, domain, hull);
    return verify_weak_llrf(components, pp.polys);
}

LlrfVerdict synth_llrf(const LlrfQuery& query) {
    const auto& ts = query.ts;
    PreparedPaths pp = prepare_paths(ts, query.domain, query.hull);
    LlrfVerdict v;
    v.hulls = pp.hulls;
    v.hulls_exact = pp.exact;
    v.origin_paths = pp.origin_paths;
    if (!pp.origin_paths.empty()) {
        v.kind = Verdict::NonTerminating;
        return v;
    }
    if (pp.polys.empty()) {
        v.kind = Verdict::Vacuous;
        v.llrf = Llrf{{}, {}, LlrfKind::Strong, query.domain};
        return v;
    }
    SynResult syn = llrf_syn(pp.polys, ts.n);
    v.chain = syn.chain;
    v.depth = syn.depth;
    if (syn.found) {
        v.kind = Verdict::Found;
        if (query.domain == Domain::Integer) {
            Llrf f{{}, {}, LlrfKind::Strong, Domain::Integer};
            for (const auto& c : syn.components) {
                f.components.push_back(integer_scale(c).func);
                f.deltas.emplace_back(1);
            }
            v.llrf = std::move(f);
        } else {
            v.llrf = Llrf{syn.components, {}, LlrfKind::Weak, Domain::Rational};
        }
        v.strong = weak_to_strong(syn.components, syn.chain, ts.n);
        return v;
    }
    v.kind = Verdict::None;
    if (!pp.exact) {
        // Only a witness made of genuine integer transitions settles the question.
        Witness w = extract_lex_witness(syn.stuck, pp.source, ts.polys.size(), ts.n, query.domain, false);
        if (verify_lex_witness(w, ts, query.domain)) {
            v.witness = std::move(w);
        } else {
            v.kind = Verdict::NoneModuloHull;
        }
        return v;
    }
    if (query.witness_wanted) {
        v.witness = extract_lex_witness(syn.stuck, pp.source, ts.polys.size(), ts.n, query.domain, true);
    }
    return v;
}

LlrfVerdict llrf_int(const TransitionSystem& ts, const HullOptions& hull, bool witness_wanted) {
    return synth_llrf({ts, Domain::Integer, witness_wanted, hull});
}

} // namespace llrf
} // namespace linrank
