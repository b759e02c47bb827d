// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/lp.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace linrank;
using namespace linrank::lp;

namespace {

RatMatrix to_matrix(const oracle::Ineqs& p) { return RatMatrix::from_rows(p.a, p.dim()); }

} // namespace

TEST(Simplex, MaximisesOverABox) {
    LPProblem p{RatMatrix::from_rows({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, 2), {1, 2, 0, 0},
                Objective{{1, 1}, Sense::Maximize}};
    auto out = solve(p);
    auto* opt = std::get_if<Optimal>(&out);
    ASSERT_NE(opt, nullptr);
    EXPECT_EQ(opt->value, Rational(3));
    EXPECT_EQ(opt->point, (RatVector{1, 2}));
}

TEST(Simplex, InfeasibleCarriesCertificate) {
    RatMatrix a = RatMatrix::from_rows({{1}, {-1}}, 1);
    RatVector b{1, -2};
    auto out = solve(LPProblem{a, b, std::nullopt});
    auto* inf = std::get_if<Infeasible>(&out);
    ASSERT_NE(inf, nullptr);
    EXPECT_EQ(inf->certificate, (RatVector{1, 1}));
    EXPECT_TRUE(verify_certificate(a, b, inf->certificate));
}

TEST(Simplex, UnboundedCarriesRay) {
    RatMatrix a = RatMatrix::from_rows({{-1}}, 1);
    auto out = solve(LPProblem{a, {0}, Objective{{-1}, Sense::Minimize}});
    auto* unb = std::get_if<Unbounded>(&out);
    ASSERT_NE(unb, nullptr);
    EXPECT_GT(unb->ray[0], 0);
}

TEST(Simplex, ZeroRowsIsFeasible) {
    auto out = solve(LPProblem{RatMatrix(0, 2), {}, std::nullopt});
    EXPECT_TRUE(std::holds_alternative<Feasible>(out));
}

TEST(Simplex, DimensionMismatchThrows) {
    EXPECT_THROW(solve(LPProblem{RatMatrix(1, 2), {1, 2}, std::nullopt}), DimensionError);
}

TEST(Simplex, OptimumMatchesVertexEnumeration) {
    std::mt19937 rng(101);
    int optimal = 0;
    for (int trial = 0; trial < 250; ++trial) {
        std::size_t d = 2 + rng() % 2;
        auto sys = oracle::random_box_system(rng, d, 1 + rng() % 4, 5, 6);
        RatVector c(d);
        for (auto& x : c) {
            x = static_cast<int>(rng() % 11) - 5;
        }
        auto expected = oracle::max_over(sys, c);
        auto out = solve(LPProblem{to_matrix(sys), sys.b, Objective{c, Sense::Maximize}});
        if (!expected) {
            auto* inf = std::get_if<Infeasible>(&out);
            ASSERT_NE(inf, nullptr);
            EXPECT_TRUE(verify_certificate(to_matrix(sys), sys.b, inf->certificate));
        } else {
            auto* opt = std::get_if<Optimal>(&out);
            ASSERT_NE(opt, nullptr);
            EXPECT_EQ(opt->value, *expected);
            EXPECT_TRUE(oracle::satisfies(sys, opt->point));
            ++optimal;
        }
    }
    EXPECT_GT(optimal, 100);
}

TEST(Simplex, UnboundedRaysAreRecessionDirections) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t d = 2 + rng() % 2;
        RatMatrix a(0, d);
        RatVector b;
        for (int k = 0; k < 3; ++k) {
            RatVector row(d);
            for (auto& x : row) {
                x = static_cast<int>(rng() % 7) - 3;
            }
            a.append_row(row);
            b.push_back(static_cast<int>(rng() % 5));
        }
        RatVector c(d);
        for (auto& x : c) {
            x = static_cast<int>(rng() % 7) - 3;
        }
        auto out = solve(LPProblem{a, b, Objective{c, Sense::Minimize}});
        if (auto* unb = std::get_if<Unbounded>(&out)) {
            RatVector ar = a.multiply(unb->ray);
            for (auto& v : ar) {
                EXPECT_LE(v, 0);
            }
            EXPECT_LT(dot(c, unb->ray), 0);
        }
    }
}

TEST(LinearSystem, NonnegativeVariablesAndEqualities) {
    // min x + y  s.t.  x - y = 1,  x, y >= 0
    LinearSystem s(2);
    s.set_nonneg(0, true);
    s.set_nonneg(1, true);
    s.add_eq({1, -1}, 1);
    auto out = solve(s, Objective{{1, 1}, Sense::Minimize});
    auto* opt = std::get_if<Optimal>(&out);
    ASSERT_NE(opt, nullptr);
    EXPECT_EQ(opt->value, Rational(1));
    // x + y = -1 with x, y >= 0 is infeasible.
    LinearSystem t(2);
    t.set_nonneg(0, true);
    t.set_nonneg(1, true);
    t.add_eq({1, 1}, -1);
    auto bad = solve(t);
    auto* inf = std::get_if<Infeasible>(&bad);
    ASSERT_NE(inf, nullptr);
    EXPECT_TRUE(verify_certificate(t, inf->certificate));
}

TEST(LinearSystem, AgreesWithInequalityExpansion) {
    std::mt19937 rng(55);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t d = 2 + rng() % 2;
        LinearSystem native(d);
        RatMatrix a(0, d);
        RatVector b;
        for (std::size_t j = 0; j < d; ++j) {
            bool nn = rng() % 2 == 0;
            native.set_nonneg(j, nn);
            RatVector row(d);
            row[j] = -1;
            if (nn) {
                a.append_row(row);
                b.push_back(0);
            }
            row[j] = 1;
            a.append_row(row);
            b.push_back(5);
            native.add_le(row, 5);
        }
        for (int k = 0; k < 3; ++k) {
            RatVector row(d);
            for (auto& x : row) {
                x = static_cast<int>(rng() % 7) - 3;
            }
            Rational rhs = static_cast<int>(rng() % 7) - 3;
            if (k == 0) {
                native.add_eq(row, rhs);
                a.append_row(row);
                b.push_back(rhs);
                a.append_row(negated(row));
                b.push_back(-rhs);
            } else {
                native.add_le(row, rhs);
                a.append_row(row);
                b.push_back(rhs);
            }
        }
        RatVector c(d);
        for (auto& x : c) {
            x = static_cast<int>(rng() % 7) - 3;
        }
        auto lhs = solve(native, Objective{c, Sense::Maximize});
        auto rhs = solve(LPProblem{a, b, Objective{c, Sense::Maximize}});
        ASSERT_EQ(lhs.index(), rhs.index());
        if (auto* o = std::get_if<Optimal>(&lhs)) {
            EXPECT_EQ(o->value, std::get<Optimal>(rhs).value);
        }
        if (auto* inf = std::get_if<Infeasible>(&lhs)) {
            EXPECT_TRUE(verify_certificate(native, inf->certificate));
        }
    }
}

TEST(ImpliedEqualities, DetectsPairsAndHiddenEqualities) {
    // x + y <= 1, -x - y <= -1 (an equality pair), x <= 3, -x <= 0
    RatMatrix a = RatMatrix::from_rows({{1, 1}, {-1, -1}, {1, 0}, {-1, 0}}, 2);
    EXPECT_EQ(implied_equalities(a, {1, -1, 3, 0}), (std::vector<std::size_t>{0, 1}));
    // x <= 0, y <= 0, x + y >= 0 forces x = y = 0.
    RatMatrix c = RatMatrix::from_rows({{1, 0}, {0, 1}, {-1, -1}}, 2);
    EXPECT_EQ(implied_equalities(c, {0, 0, 0}), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_THROW(implied_equalities(RatMatrix::from_rows({{1}, {-1}}, 1), {0, -1}), std::invalid_argument);
}

TEST(ImpliedEqualities, MatchesVertexOracleOnPolytopes) {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t d = 2 + rng() % 2;
        auto sys = oracle::random_box_system(rng, d, 2, 3, 3);
        // Add an equality through a vertex to create implicit rows sometimes.
        auto verts = oracle::vertices(sys);
        if (verts.empty()) {
            continue;
        }
        RatVector row(d);
        for (auto& x : row) {
            x = static_cast<int>(rng() % 5) - 2;
        }
        Rational val = oracle::dot(row, verts[0]);
        sys.a.push_back(row);
        sys.b.push_back(val);
        sys.a.push_back(negated(row));
        sys.b.push_back(-val);
        auto pts = oracle::vertices(sys);
        ASSERT_FALSE(pts.empty());
        auto got = implied_equalities(to_matrix(sys), sys.b);
        for (std::size_t r = 0; r < sys.a.size(); ++r) {
            bool tight = std::all_of(pts.begin(), pts.end(),
                                     [&](const RatVector& v) { return oracle::dot(sys.a[r], v) == sys.b[r]; });
            bool reported = std::find(got.begin(), got.end(), r) != got.end();
            EXPECT_EQ(tight, reported) << "row " << r;
        }
    }
}

TEST(Iis, IsInfeasibleAndIrreducible) {
    std::mt19937 rng(202);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 60; ++trial) {
        std::size_t d = 2 + rng() % 2;
        RatMatrix a(0, d);
        RatVector b;
        for (int k = 0; k < 7; ++k) {
            RatVector row(d);
            for (auto& x : row) {
                x = static_cast<int>(rng() % 7) - 3;
            }
            a.append_row(row);
            b.push_back(static_cast<int>(rng() % 7) - 4);
        }
        if (is_feasible(LinearSystem::from_problem(a, b))) {
            EXPECT_THROW(iis(a, b), std::invalid_argument);
            continue;
        }
        ++checked;
        auto rows = iis(a, b);
        EXPECT_LE(rows.size(), d + 1);
        auto feasible_without = [&](std::size_t skip) {
            RatMatrix sa(0, d);
            RatVector sb;
            for (auto r : rows) {
                if (r != skip) {
                    sa.append_row(a.row(r));
                    sb.push_back(b[r]);
                }
            }
            return is_feasible(LinearSystem::from_problem(sa, sb));
        };
        EXPECT_FALSE(feasible_without(static_cast<std::size_t>(-1)));
        for (auto r : rows) {
            EXPECT_TRUE(feasible_without(r));
        }
    }
    EXPECT_GE(checked, 20);
}
