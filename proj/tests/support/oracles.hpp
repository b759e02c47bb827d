// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force reference computations used by the tests. Nothing here calls the library
// algorithms under test; only the Rational type is shared.

#include "linrank/linalg.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using linrank::Integer;
using linrank::RatVector;
using linrank::Rational;

struct Ineqs {
    std::vector<RatVector> a;
    RatVector b;
    [[nodiscard]] std::size_t dim() const { return a.empty() ? 0 : a[0].size(); }
};

inline Rational dot(const RatVector& x, const RatVector& y) {
    Rational s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

inline bool satisfies(const Ineqs& p, const RatVector& x) {
    for (std::size_t r = 0; r < p.a.size(); ++r) {
        if (dot(p.a[r], x) > p.b[r]) {
            return false;
        }
    }
    return true;
}

// Gaussian elimination on a square system; nullopt when singular.
inline std::optional<RatVector> gauss(std::vector<RatVector> m, RatVector rhs) {
    std::size_t n = m.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) {
            ++p;
        }
        if (p == n) {
            return std::nullopt;
        }
        std::swap(m[p], m[c]);
        std::swap(rhs[p], rhs[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) {
                continue;
            }
            Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) {
                m[r][k] -= f * m[c][k];
            }
            rhs[r] -= f * rhs[c];
        }
    }
    RatVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rhs[i] / m[i][i];
    }
    return x;
}

// Rank by repeated elimination with rationals.
inline std::size_t rank(std::vector<RatVector> m) {
    if (m.empty()) {
        return 0;
    }
    std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) {
            ++p;
        }
        if (p == m.size()) {
            continue;
        }
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            Rational f = m[i][c] / m[r][c];
            for (std::size_t k = c; k < cols; ++k) {
                m[i][k] -= f * m[r][k];
            }
        }
        ++r;
    }
    return r;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == k) {
            f(idx);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

// Vertices of a polytope by solving every d-subset of rows.
inline std::vector<RatVector> vertices(const Ineqs& p) {
    std::set<RatVector> out;
    std::size_t d = p.dim();
    for_each_subset(p.a.size(), d, [&](const std::vector<std::size_t>& idx) {
        std::vector<RatVector> m;
        RatVector rhs;
        for (auto i : idx) {
            m.push_back(p.a[i]);
            rhs.push_back(p.b[i]);
        }
        auto x = gauss(m, rhs);
        if (x && satisfies(p, *x)) {
            out.insert(*x);
        }
    });
    return {out.begin(), out.end()};
}

// Maximum of c.x over a polytope (nullopt when empty).
inline std::optional<Rational> max_over(const Ineqs& p, const RatVector& c) {
    std::optional<Rational> best;
    for (const auto& v : vertices(p)) {
        Rational val = dot(c, v);
        if (!best || val > *best) {
            best = val;
        }
    }
    return best;
}

// Integer points of p inside the box [lo, hi]^d.
inline std::vector<RatVector> integer_points(const Ineqs& p, long lo, long hi) {
    std::vector<RatVector> out;
    std::size_t d = p.dim();
    RatVector x(d);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == d) {
            if (satisfies(p, x)) {
                out.push_back(x);
            }
            return;
        }
        for (long v = lo; v <= hi; ++v) {
            x[k] = v;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

// Is the point set's convex hull contained in {a x <= b}? Checks every point.
inline bool all_satisfy(const std::vector<RatVector>& pts, const RatVector& a, const Rational& b) {
    return std::all_of(pts.begin(), pts.end(), [&](const RatVector& x) { return dot(a, x) <= b; });
}

inline Rational random_rational(std::mt19937& rng, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return Rational(d(rng));
}

inline Ineqs random_box_system(std::mt19937& rng, std::size_t d, std::size_t extra, int coef, int box) {
    Ineqs p;
    for (std::size_t i = 0; i < d; ++i) {
        RatVector up(d), down(d);
        up[i] = 1;
        down[i] = -1;
        p.a.push_back(up);
        p.b.push_back(random_rational(rng, 1, box));
        p.a.push_back(down);
        p.b.push_back(random_rational(rng, 1, box));
    }
    std::uniform_int_distribution<int> c(-coef, coef);
    for (std::size_t k = 0; k < extra; ++k) {
        RatVector row(d);
        for (auto& x : row) {
            x = c(rng);
        }
        p.a.push_back(row);
        p.b.push_back(Rational(c(rng)) + 2);
    }
    return p;
}

// Feasibility of a x <= b by Fourier-Motzkin elimination. Only for small systems.
inline bool fm_feasible(Ineqs p) {
    std::size_t d = p.dim();
    for (std::size_t v = 0; v < d; ++v) {
        Ineqs next;
        std::vector<std::size_t> pos, neg;
        for (std::size_t r = 0; r < p.a.size(); ++r) {
            int s = sgn(p.a[r][v]);
            if (s > 0) {
                pos.push_back(r);
            } else if (s < 0) {
                neg.push_back(r);
            } else {
                next.a.push_back(p.a[r]);
                next.b.push_back(p.b[r]);
            }
        }
        for (std::size_t i : pos) {
            for (std::size_t j : neg) {
                Rational wi = -p.a[j][v];
                Rational wj = p.a[i][v];
                RatVector row(d);
                for (std::size_t c = 0; c < d; ++c) {
                    row[c] = wi * p.a[i][c] + wj * p.a[j][c];
                }
                next.a.push_back(row);
                next.b.push_back(wi * p.b[i] + wj * p.b[j]);
            }
        }
        // Drop duplicate rows after scaling each to a unit leading coefficient.
        std::set<std::pair<RatVector, Rational>> seen;
        Ineqs uniq;
        for (std::size_t r = 0; r < next.a.size(); ++r) {
            Rational lead;
            for (const auto& x : next.a[r]) {
                if (x != 0) {
                    lead = abs(x);
                    break;
                }
            }
            if (lead == 0) {
                if (next.b[r] < 0) {
                    return false;
                }
                continue;
            }
            RatVector row = next.a[r];
            for (auto& x : row) {
                x /= lead;
            }
            Rational rhs = next.b[r] / lead;
            if (seen.insert({row, rhs}).second) {
                uniq.a.push_back(row);
                uniq.b.push_back(rhs);
            }
        }
        p = std::move(uniq);
        if (p.a.empty()) {
            return true;
        }
    }
    for (std::size_t r = 0; r < p.a.size(); ++r) {
        if (p.b[r] < 0) {
            return false;
        }
    }
    return true;
}

} // namespace oracle
