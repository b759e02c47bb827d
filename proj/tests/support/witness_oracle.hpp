// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent witness checks: membership by direct evaluation of the loop constraints and
// infeasibility of the witness systems by Fourier-Motzkin elimination.

#include "linrank/ranking.hpp"
#include "support/oracles.hpp"
#include "support/random_loops.hpp"

namespace testloops {

inline bool members_ok(const linrank::Witness& w, const LoopSpec& spec, bool integral) {
    if (w.points.size() != spec.paths.size() || w.rays.size() != spec.paths.size()) {
        return false;
    }
    for (std::size_t i = 0; i < spec.paths.size(); ++i) {
        if (!w.rays[i].empty() && w.points[i].empty()) {
            return false;
        }
        for (const auto& x : w.points[i]) {
            if (!path_holds(spec.paths[i], x)) {
                return false;
            }
            if (integral && !std::all_of(x.begin(), x.end(), [](const Rational& q) { return q.get_den() == 1; })) {
                return false;
            }
        }
        for (const auto& y : w.rays[i]) {
            if (!path_ray_holds(spec.paths[i], y)) {
                return false;
            }
            if (std::all_of(y.begin(), y.end(), [](const Rational& q) { return q == 0; })) {
                return false;
            }
            if (integral && !std::all_of(y.begin(), y.end(), [](const Rational& q) { return q.get_den() == 1; })) {
                return false;
            }
        }
    }
    return true;
}

// Rows over (lambda_0, lambda) in <= form.
inline void push_row(oracle::Ineqs& s, Rational l0, const RatVector& lambda_coeffs, Rational rhs) {
    RatVector row{l0};
    row.insert(row.end(), lambda_coeffs.begin(), lambda_coeffs.end());
    s.a.push_back(row);
    s.b.push_back(rhs);
}

inline RatVector neg_state(const RatVector& xx, std::size_t n) {
    RatVector r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = -xx[i];
    }
    return r;
}

inline RatVector neg_step(const RatVector& xx, std::size_t n) {
    RatVector r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = xx[n + i] - xx[i];
    }
    return r;
}

// The unit-decrease system over the witness; a witness needs it infeasible.
inline oracle::Ineqs lrf_system(const linrank::Witness& w, std::size_t n) {
    oracle::Ineqs s;
    for (std::size_t i = 0; i < w.points.size(); ++i) {
        for (const auto& x : w.points[i]) {
            push_row(s, -1, neg_state(x, n), 0);
            push_row(s, 0, neg_step(x, n), -1);
        }
        for (const auto& y : w.rays[i]) {
            push_row(s, 0, neg_state(y, n), 0);
            push_row(s, 0, neg_step(y, n), 0);
        }
    }
    return s;
}

// The lexicographic witness system: non-negativity and non-increase everywhere, plus a
// positive total decrease.
inline oracle::Ineqs lex_system(const linrank::Witness& w, std::size_t n) {
    oracle::Ineqs s;
    RatVector total(n);
    for (std::size_t i = 0; i < w.points.size(); ++i) {
        for (const auto& x : w.points[i]) {
            push_row(s, -1, neg_state(x, n), 0);
            push_row(s, 0, neg_step(x, n), 0);
            auto d = neg_step(x, n);
            for (std::size_t c = 0; c < n; ++c) {
                total[c] += d[c];
            }
        }
        for (const auto& y : w.rays[i]) {
            push_row(s, 0, neg_state(y, n), 0);
            push_row(s, 0, neg_step(y, n), 0);
            auto d = neg_step(y, n);
            for (std::size_t c = 0; c < n; ++c) {
                total[c] += d[c];
            }
        }
    }
    push_row(s, 0, total, -1);
    return s;
}

inline bool lrf_witness_oracle(const linrank::Witness& w, const LoopSpec& spec, bool integral) {
    if (w.size() == 0 && !spec.paths.empty()) {
        return false;
    }
    return members_ok(w, spec, integral) && !oracle::fm_feasible(lrf_system(w, spec.n()));
}

inline bool lex_witness_oracle(const linrank::Witness& w, const LoopSpec& spec, bool integral) {
    if (std::all_of(w.points.begin(), w.points.end(), [](const auto& s) { return s.empty(); })) {
        return false;
    }
    return members_ok(w, spec, integral) && !oracle::fm_feasible(lex_system(w, spec.n()));
}

// Every variant of w with one element moved by +-1 in one coordinate, or one element removed.
inline std::vector<linrank::Witness> single_point_mutations(const linrank::Witness& w) {
    std::vector<linrank::Witness> out;
    for (int kind = 0; kind < 2; ++kind) {
        const auto& sets = kind == 0 ? w.points : w.rays;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (std::size_t j = 0; j < sets[i].size(); ++j) {
                for (std::size_t c = 0; c < sets[i][j].size(); ++c) {
                    for (int delta : {-1, 1}) {
                        linrank::Witness m = w;
                        auto& target = kind == 0 ? m.points[i][j] : m.rays[i][j];
                        target[c] += delta;
                        out.push_back(std::move(m));
                    }
                }
                linrank::Witness m = w;
                auto& target = kind == 0 ? m.points[i] : m.rays[i];
                target.erase(target.begin() + static_cast<std::ptrdiff_t>(j));
                out.push_back(std::move(m));
            }
        }
    }
    return out;
}

} // namespace testloops
