// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/polyhedra.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace linrank;
using namespace linrank::polyhedra;

namespace {

ConstraintPoly from_oracle(const oracle::Ineqs& p) { return {RatMatrix::from_rows(p.a, p.dim()), p.b}; }

oracle::Ineqs random_system(std::mt19937& rng, std::size_t d, std::size_t m) {
    oracle::Ineqs p;
    for (std::size_t k = 0; k < m; ++k) {
        RatVector row(d);
        for (auto& x : row) {
            x = static_cast<int>(rng() % 7) - 3;
        }
        p.a.push_back(row);
        p.b.push_back(static_cast<int>(rng() % 7) - 2);
    }
    return p;
}

} // namespace

TEST(Generators, UnitSquare) {
    ConstraintPoly sq(RatMatrix::from_rows({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, 2), {1, 1, 0, 0});
    auto g = to_generators(sq);
    EXPECT_EQ(g.vertices.size(), 4U);
    EXPECT_TRUE(g.rays.empty());
    std::set<RatVector> v(g.vertices.begin(), g.vertices.end());
    EXPECT_TRUE(v.count(RatVector{0, 0}) && v.count(RatVector{1, 1}) && v.count(RatVector{0, 1}));
}

TEST(Generators, HalfLineAndLineality) {
    // x >= 0 in two dimensions: one vertex, ray (1,0), lineality +-(0,1).
    ConstraintPoly half(RatMatrix::from_rows({{-1, 0}}, 2), {0});
    auto g = to_generators(half);
    ASSERT_EQ(g.vertices.size(), 1U);
    std::set<RatVector> rays(g.rays.begin(), g.rays.end());
    EXPECT_EQ(rays, (std::set<RatVector>{{1, 0}, {0, 1}, {0, -1}}));
}

TEST(Generators, EmptyPolyhedronHasNoVertices) {
    ConstraintPoly p(RatMatrix::from_rows({{1}, {-1}}, 1), {0, -1});
    EXPECT_TRUE(to_generators(p).empty());
    EXPECT_TRUE(is_empty(to_constraints(GeneratorRep{1, {}, {}})));
}

TEST(Generators, VerticesMatchEnumerationOracle) {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t d = 2 + rng() % 2;
        auto sys = oracle::random_box_system(rng, d, 1 + rng() % 3, 4, 4);
        auto g = to_generators(from_oracle(sys));
        auto expected = oracle::vertices(sys);
        // Oracle returns all feasible basic solutions; keep only extreme ones.
        std::set<RatVector> got(g.vertices.begin(), g.vertices.end());
        std::set<RatVector> want(expected.begin(), expected.end());
        EXPECT_EQ(got, want);
        EXPECT_TRUE(g.rays.empty());
    }
}

TEST(Generators, RoundTripPreservesTheSet) {
    std::mt19937 rng(97);
    int nonempty = 0;
    for (int trial = 0; trial < 250; ++trial) {
        std::size_t d = 1 + rng() % 4;
        auto sys = random_system(rng, d, 1 + rng() % 6);
        ConstraintPoly p = from_oracle(sys);
        auto g = to_generators(p);
        EXPECT_EQ(g.empty(), is_empty(p));
        if (g.empty()) {
            continue;
        }
        ++nonempty;
        for (const auto& v : g.vertices) {
            EXPECT_TRUE(p.contains(v));
        }
        for (const auto& y : g.rays) {
            for (std::size_t r = 0; r < p.num_rows(); ++r) {
                EXPECT_LE(dot(p.a.row(r), y), 0);
            }
        }
        EXPECT_TRUE(set_equal(p, to_constraints(g)));
    }
    EXPECT_GT(nonempty, 100);
}

TEST(Dimension, MatchesAffineHullOfVertices) {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t d = 2 + rng() % 2;
        auto sys = oracle::random_box_system(rng, d, 1, 3, 3);
        if (trial % 2 == 0) {
            RatVector row(d);
            row[0] = 1;
            row[d - 1] = -1;
            sys.a.push_back(row);
            sys.b.push_back(0);
            sys.a.push_back(negated(row));
            sys.b.push_back(0);
        }
        auto verts = oracle::vertices(sys);
        int expected = -1;
        if (!verts.empty()) {
            std::vector<RatVector> diffs;
            for (const auto& v : verts) {
                diffs.push_back(sub(v, verts[0]));
            }
            expected = static_cast<int>(oracle::rank(diffs));
        }
        EXPECT_EQ(dim(from_oracle(sys)), expected);
    }
}

TEST(OpenInterval, PrefersZeroThenSmallIntegers) {
    using O = std::optional<Rational>;
    EXPECT_EQ(pick_in_open_interval(O{-1}, O{1}), Rational(0));
    EXPECT_EQ(pick_in_open_interval(O{1}, std::nullopt), Rational(2));
    EXPECT_EQ(pick_in_open_interval(O{make_rational(1, 2)}, O{5}), Rational(1));
    EXPECT_EQ(pick_in_open_interval(std::nullopt, O{-3}), Rational(-4));
    EXPECT_EQ(pick_in_open_interval(O{1}, O{2}), make_rational(3, 2));
    EXPECT_EQ(pick_in_open_interval(std::nullopt, std::nullopt), Rational(0));
    EXPECT_THROW(pick_in_open_interval(O{2}, O{1}), std::invalid_argument);
}

TEST(RelativeInterior, StrictOnEveryNonImplicitRow) {
    std::mt19937 rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t d = 2 + rng() % 2;
        auto sys = oracle::random_box_system(rng, d, 2, 3, 4);
        if (trial % 3 == 0) {
            RatVector row(d);
            row[0] = 1;
            row[1] = 1;
            sys.a.push_back(row);
            sys.b.push_back(1);
            sys.a.push_back(negated(row));
            sys.b.push_back(-1);
        }
        auto verts = oracle::vertices(sys);
        ConstraintPoly p = from_oracle(sys);
        if (verts.empty()) {
            EXPECT_THROW(relative_interior_point(p), std::invalid_argument);
            continue;
        }
        auto x = relative_interior_point(p);
        for (std::size_t r = 0; r < sys.a.size(); ++r) {
            bool implicit = std::all_of(verts.begin(), verts.end(),
                                        [&](const RatVector& v) { return oracle::dot(sys.a[r], v) == sys.b[r]; });
            Rational val = oracle::dot(sys.a[r], x);
            if (implicit) {
                EXPECT_EQ(val, sys.b[r]);
            } else {
                EXPECT_LT(val, sys.b[r]);
            }
        }
    }
}

TEST(RelativeInterior, RespectsCoordinateOrder) {
    // x, y >= 0, x + y <= 3: first coordinate picked first.
    ConstraintPoly p(RatMatrix::from_rows({{-1, 0}, {0, -1}, {1, 1}}, 2), {0, 0, 3});
    std::vector<std::size_t> xy{0, 1};
    std::vector<std::size_t> yx{1, 0};
    EXPECT_EQ(relative_interior_point(p, xy), (RatVector{1, 1}));
    EXPECT_EQ(relative_interior_point(p, yx), (RatVector{1, 1}));
    ConstraintPoly q(RatMatrix::from_rows({{-1, 0}, {0, -1}, {1, 2}}, 2), {0, 0, 3});
    EXPECT_EQ(relative_interior_point(q, xy), (RatVector{1, make_rational(1, 2)}));
    EXPECT_EQ(relative_interior_point(q, yx), (RatVector{make_rational(1, 2), 1}));
}

TEST(Face, TightRowsDescribeTheIntersection) {
    std::mt19937 rng(61);
    int faces = 0;
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t d = 2 + rng() % 2;
        auto sys = random_system(rng, d, 2 + rng() % 4);
        ConstraintPoly p = from_oracle(sys);
        if (is_empty(p)) {
            continue;
        }
        RatVector h(d);
        for (auto& x : h) {
            x = static_cast<int>(rng() % 5) - 2;
        }
        auto top = maximize(p, h);
        if (top.kind != Extremum::Kind::Finite) {
            if (top.kind == Extremum::Kind::Unbounded) {
                EXPECT_THROW(face(p, h, 0), std::invalid_argument);
            }
            continue;
        }
        ++faces;
        auto f = face(p, h, top.value);
        ASSERT_FALSE(f.empty);
        ConstraintPoly cut = p;
        cut.add_equality(h, top.value);
        EXPECT_TRUE(set_equal(f.to_poly(), cut));
        auto strict = face(p, h, top.value + 1);
        EXPECT_TRUE(strict.empty);
    }
    EXPECT_GT(faces, 30);
}

TEST(Redundancy, RemovalKeepsTheSet) {
    std::mt19937 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        auto sys = random_system(rng, 2 + rng() % 2, 3 + rng() % 5);
        ConstraintPoly p = from_oracle(sys);
        auto q = remove_redundant(p);
        EXPECT_LE(q.num_rows(), std::max<std::size_t>(p.num_rows(), 1));
        EXPECT_TRUE(set_equal(p, q));
    }
}
