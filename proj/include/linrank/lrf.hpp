// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "linrank/ranking.hpp"

#include <optional>

namespace linrank {

enum class LrfEngine { Farkas, Generators };

struct LrfQuery {
    TransitionSystem ts;
    Domain domain = Domain::Integer;
    bool witness_wanted = false;
    LrfEngine engine = LrfEngine::Farkas;
    HullOptions hull;
};

struct LrfVerdict {
    Verdict kind = Verdict::None;
    std::optional<AffineFunc> rho;
    std::optional<Witness> witness;
    std::vector<HullReport> hulls;
    bool hulls_exact = true;
    std::vector<std::size_t> origin_paths;
};

namespace lrf {

// Farkas system over (mu, eta) for one path, in the variable order mu_1..mu_m, eta_1..eta_m:
// mu, eta >= 0; mu A' = 0; (mu - eta) A = 0; eta (A + A') = 0; eta c <= -1.
lp::LinearSystem pr_system(const ConstraintPoly& q, std::size_t n);

// Conjunction of the per-path Farkas systems sharing (lambda_0, lambda). Variables are
// lambda_0, lambda_1..lambda_n, then mu and eta of each path. The decrease row reads
// eta c <= -decrease, so decrease = 1 describes LRFs and decrease = 0 quasi-LRFs.
struct RankingSpace {
    lp::LinearSystem system;
    std::size_t n = 0;
    std::vector<std::size_t> path_offset;
};

RankingSpace ranking_space(std::span<const ConstraintPoly> polys, std::size_t n, const Rational& decrease);

// Picks lambda_1..lambda_n by the coordinate sweep, then the least lambda_0.
// nullopt when the space is empty.
std::optional<AffineFunc> pick_function(const RankingSpace& space);

std::optional<AffineFunc> farkas_lrf(std::span<const ConstraintPoly> polys, std::size_t n);

// System over (lambda_0, lambda) requiring rho >= 0 and a unit decrease at every vertex,
// and rho non-decreasing along rays in x with a non-negative decrease along every ray.
RatMatrix psi_ws_matrix(std::span<const GeneratorRep> gens, std::size_t n, RatVector& rhs);

std::optional<AffineFunc> generators_lrf(std::span<const GeneratorRep> gens, std::size_t n);

LrfVerdict synth_lrf(const LrfQuery& query);

// Throws std::invalid_argument for an empty generator list.
LrfVerdict synth_lrf_generators(std::span<const GeneratorRep> gens, std::size_t n);

// Throws std::invalid_argument when an LRF exists.
Witness extract_lrf_witness(const TransitionSystem& ts, Domain domain = Domain::Integer,
                            const HullOptions& hull = {});

bool verify_lrf(const AffineFunc& rho, const TransitionSystem& ts, Domain domain, const HullOptions& hull = {});

CheckResult verify_lrf_witness(const Witness& w, const TransitionSystem& ts, Domain domain = Domain::Integer);

} // namespace lrf
} // namespace linrank
