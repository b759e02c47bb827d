// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/llrf.hpp"

#include <stdexcept>

namespace linrank::llrf {
namespace {

AffineFunc combine(const AffineFunc& f, const AffineFunc& g, const Rational& s) {
    return {add(f.coeffs, scaled(g.coeffs, s)), f.constant + s * g.constant};
}

// Least xi >= 0 such that Delta(a) >= -xi * Delta(b) is implied on q, by Farkas. nullopt when no such xi exists.
std::optional<Rational> least_multiplier(const ConstraintPoly& q, const AffineFunc& a, const AffineFunc& b,
                                         std::size_t n) {
    std::size_t m = q.num_rows();
    lp::LinearSystem sys(m + 1);
    for (std::size_t r = 0; r <= m; ++r) {
        sys.set_nonneg(r, true);
    }
    RatVector arow = a.delta_row();
    RatVector brow = b.delta_row();
    for (std::size_t k = 0; k < 2 * n; ++k) {
        RatVector row(m + 1);
        for (std::size_t r = 0; r < m; ++r) {
            row[r] = -q.a(r, k);
        }
        row[m] = -brow[k];
        sys.add_eq(std::move(row), arow[k]);
    }
    RatVector crow(m + 1);
    for (std::size_t r = 0; r < m; ++r) {
        crow[r] = q.b[r];
    }
    sys.add_le(std::move(crow), 0);
    RatVector obj(m + 1);
    obj[m] = 1;
    auto out = lp::solve(sys, lp::Objective{obj, lp::Sense::Minimize});
    if (const auto* opt = std::get_if<lp::Optimal>(&out)) {
        return opt->value;
    }
    return std::nullopt;
}

} // namespace

StrongConversion weak_to_strong(std::span<const AffineFunc> components, const RankingChain& chain, std::size_t n) {
    std::size_t d = components.size();
    if (chain.levels.size() != d + 1 || !chain.levels.back().all_empty()) {
        throw std::invalid_argument("weak_to_strong: chain does not match the components");
    }
    std::size_t paths = chain.levels.front().polys.size();
    StrongConversion out;

    // Partial sums whose differences dominate the earlier components on later levels.
    std::vector<AffineFunc> f;
    if (d > 0) {
        f.push_back(components[0]);
    }
    for (std::size_t i = 1; i < d; ++i) {
        Rational xi = 0;
        bool any = false;
        for (std::size_t p = 0; p < paths; ++p) {
            if (chain.levels[i].empty[p]) {
                continue;
            }
            auto m = least_multiplier(chain.levels[0].polys[p], components[i], f[i - 1], n);
            if (!m) {
                throw std::invalid_argument("weak_to_strong: component " + std::to_string(i + 1) +
                                            " is not bounded by the previous ones");
            }
            if (!any || *m > xi) {
                xi = *m;
            }
            any = true;
        }
        out.multipliers.push_back(xi);
        f.push_back(combine(components[i], f[i - 1], xi + 1));
    }
    out.partial_sums = f;

    // Per path decrease bounds, from the last reached level down to the first.
    std::vector<std::optional<Rational>> delta(d);
    out.reach.assign(paths, 0);
    for (std::size_t p = 0; p < paths; ++p) {
        std::size_t reach = 0;
        for (std::size_t i = 1; i <= d; ++i) {
            if (!chain.levels[i - 1].empty[p]) {
                reach = i;
            }
        }
        out.reach[p] = reach;
        if (reach == 0) {
            continue;
        }
        if (reach != d) {
            out.bound_valid = false;
        }
        std::vector<Rational> local(reach + 1);
        auto lowest = [&](const ConstraintPoly& x, std::size_t i) -> std::optional<Rational> {
            auto e = polyhedra::minimize(x, f[i - 1].delta_row());
            if (e.kind == polyhedra::Extremum::Kind::Empty) {
                return std::nullopt;
            }
            if (e.kind == polyhedra::Extremum::Kind::Unbounded) {
                throw std::logic_error("weak_to_strong: decrease unbounded below");
            }
            if (e.value <= 0) {
                throw std::logic_error("weak_to_strong: non-positive decrease");
            }
            return e.value;
        };
        {
            auto mu = lowest(chain.levels[reach - 1].polys[p], reach);
            if (!mu) {
                throw std::logic_error("weak_to_strong: last reached level is empty");
            }
            local[reach] = *mu / Rational(static_cast<long>(reach));
        }
        for (std::size_t i = reach - 1; i >= 1; --i) {
            const ConstraintPoly& x = chain.levels[i - 1].polys[p];
            auto small_decrease = [&](ConstraintPoly& q, std::size_t j) {
                q.add_row(f[j - 1].delta_row(), Rational(static_cast<long>(i)) * local[j]);
            };
            std::optional<Rational> mu;
            auto consider = [&](const ConstraintPoly& q) {
                auto v = lowest(q, i);
                if (v && (!mu || *v < *mu)) {
                    mu = v;
                }
            };
            // Every later component decreases little.
            ConstraintPoly all = x;
            for (std::size_t j = i + 1; j <= reach; ++j) {
                small_decrease(all, j);
            }
            consider(all);
            // Or a later one is negative after the little decreases before it. Taking l = i as
            // well would reach into the next level, where the decrease of f_i is zero.
            for (std::size_t l = i + 1; l <= reach; ++l) {
                ConstraintPoly q = x;
                for (std::size_t j = i + 1; j < l; ++j) {
                    small_decrease(q, j);
                }
                q.add_row(f[l - 1].lifted_row(), -f[l - 1].constant - Rational(static_cast<long>(l - i)));
                consider(q);
            }
            local[i] = mu ? *mu / Rational(static_cast<long>(i)) : local[i + 1];
        }
        for (std::size_t i = 1; i <= reach; ++i) {
            if (!delta[i - 1] || local[i] < *delta[i - 1]) {
                delta[i - 1] = local[i];
            }
        }
    }

    Llrf strong{{}, {}, LlrfKind::Strong, Domain::Rational};
    Rational least;
    for (std::size_t i = 1; i <= d; ++i) {
        AffineFunc g = f[i - 1];
        g.constant += Rational(static_cast<long>(i - 1));
        strong.components.push_back(g);
        Rational di = delta[i - 1] ? *delta[i - 1] : Rational(1);
        strong.deltas.push_back(di);
        if (i == 1 || di < least) {
            least = di;
        }
    }
    out.scale = d == 0 ? Rational(1) : Rational(ceil_of(1 / least) + 1);
    Llrf normalized = strong;
    for (std::size_t i = 0; i < d; ++i) {
        normalized.components[i].coeffs = scaled(normalized.components[i].coeffs, out.scale);
        normalized.components[i].constant *= out.scale;
        normalized.deltas[i] *= out.scale;
    }
    out.llrf = std::move(strong);
    out.normalized = std::move(normalized);
    return out;
}

namespace {

struct Literal {
    RatVector row;
    Rational rhs;
};

// Whether p together with the strict rows row . x < rhs has a point.
bool strictly_feasible(const ConstraintPoly& p, const std::vector<Literal>& strict) {
    std::size_t dim = p.ambient();
    RatMatrix a(0, dim + 1);
    RatVector b;
    for (std::size_t r = 0; r < p.num_rows(); ++r) {
        RatVector row(dim + 1);
        for (std::size_t k = 0; k < dim; ++k) {
            row[k] = p.a(r, k);
        }
        a.append_row(std::move(row));
        b.push_back(p.b[r]);
    }
    for (const auto& lit : strict) {
        RatVector row = lit.row;
        row.push_back(1);
        a.append_row(std::move(row));
        b.push_back(lit.rhs);
    }
    RatVector cap(dim + 1);
    cap[dim] = 1;
    a.append_row(cap);
    b.push_back(1);
    RatVector obj(dim + 1);
    obj[dim] = 1;
    auto out = lp::solve(lp::LPProblem{a, b, lp::Objective{obj, lp::Sense::Maximize}});
    if (const auto* opt = std::get_if<lp::Optimal>(&out)) {
        return opt->value > 0;
    }
    return false;
}

// Searches for a transition of p that no component ranks. Returns one if found.
bool unranked(const Llrf& f, const ConstraintPoly& p, std::size_t level, std::vector<Literal>& chosen) {
    if (!strictly_feasible(p, chosen)) {
        return false;
    }
    if (level > f.dim()) {
        return true;
    }
    const AffineFunc& rho = f.components[level - 1];
    // An earlier component increases or is negative: no later component can rank the transition.
    for (std::size_t j = 1; j < level; ++j) {
        const AffineFunc& g = f.components[j - 1];
        for (Literal lit : {Literal{g.delta_row(), 0}, Literal{g.lifted_row(), -g.constant}}) {
            chosen.push_back(std::move(lit));
            bool hit = strictly_feasible(p, chosen);
            chosen.pop_back();
            if (hit) {
                return true;
            }
        }
    }
    chosen.push_back({rho.delta_row(), f.deltas[level - 1]});
    if (unranked(f, p, level + 1, chosen)) {
        return true;
    }
    chosen.back() = {rho.lifted_row(), -rho.constant};
    if (unranked(f, p, level + 1, chosen)) {
        return true;
    }
    chosen.pop_back();
    return false;
}

} // namespace

CheckResult verify_strong_llrf(const Llrf& f, std::span<const ConstraintPoly> polys) {
    if (f.deltas.size() != f.dim()) {
        return CheckResult::fail("one delta per component is required");
    }
    for (const auto& d : f.deltas) {
        if (d <= 0) {
            return CheckResult::fail("deltas must be positive");
        }
    }
    for (std::size_t p = 0; p < polys.size(); ++p) {
        std::vector<Literal> chosen;
        if (unranked(f, polys[p], 1, chosen)) {
            return CheckResult::fail("a transition of path " + std::to_string(p + 1) +
                                     " is not ranked by any component");
        }
    }
    return CheckResult::pass();
}

CheckResult verify_strong_llrf(const Llrf& f, const TransitionSystem& ts, const HullOptions& hull) {
    for (const auto& c : f.components) {
        if (c.dim() != ts.n) {
            throw DimensionError("verify_strong_llrf: function arity does not match the loop");
        }
    }
    if (f.domain == Domain::Rational) {
        PreparedPaths pp = prepare_paths(ts, Domain::Rational, hull);
        return verify_strong_llrf(f, pp.polys);
    }
    for (const auto& c : f.components) {
        if (!is_integral(c.coeffs)) {
            return CheckResult::fail("integer functions need integer coefficients");
        }
    }
    for (const auto& d : f.deltas) {
        if (d > 1 || d <= 0) {
            return CheckResult::fail("integer functions need deltas in (0, 1]");
        }
    }
    if (f.deltas.size() != f.dim()) {
        return CheckResult::fail("one delta per component is required");
    }
    return verify_weak_llrf(f.components, ts, Domain::Integer, hull);
}

BoundReport iteration_bound(const Llrf& f, std::span<const Rational> x0) {
    BoundReport r;
    std::size_t d = f.dim();
    std::size_t upto = d;
    for (std::size_t i = 1; i <= d; ++i) {
        if (f.components[i - 1].eval(x0) < 0) {
            r.first_negative = i;
            upto = i - 1;
            break;
        }
    }
    for (std::size_t i = 1; i <= upto; ++i) {
        Integer c = floor_of(f.components[i - 1].eval(x0) / f.deltas[i - 1]) + 1;
        r.contributions.push_back(c);
        r.bound += c;
    }
    r.literal_bound = r.bound;
    if (r.first_negative == 0 && !r.contributions.empty()) {
        r.literal_bound -= r.contributions.back();
    }
    return r;
}

} // namespace linrank::llrf
