// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "linrank/lrf.hpp"

namespace linrank {

enum class LlrfKind { Weak, Strong };

struct Llrf {
    std::vector<AffineFunc> components;
    std::vector<Rational> deltas;
    LlrfKind kind = LlrfKind::Weak;
    Domain domain = Domain::Rational;

    [[nodiscard]] std::size_t dim() const { return components.size(); }
};

// levels[i] holds, per path, the transitions not yet ranked by the first i components.
// The last level is empty for every path.
struct ChainLevel {
    std::vector<ConstraintPoly> polys;
    std::vector<bool> empty;

    [[nodiscard]] bool all_empty() const;
};

struct RankingChain {
    std::vector<ChainLevel> levels;
};

struct StrongConversion {
    Llrf llrf;
    // The same function multiplied so every delta is at least 1.
    Llrf normalized;
    Rational scale;
    std::vector<AffineFunc> partial_sums;
    std::vector<Rational> multipliers;
    // Per path, the last level whose face meets the path.
    std::vector<std::size_t> reach;
    // Every path reaches the last level, which the iteration bound needs on several paths.
    bool bound_valid = true;
};

struct LlrfQuery {
    TransitionSystem ts;
    Domain domain = Domain::Integer;
    bool witness_wanted = false;
    HullOptions hull;
};

struct LlrfVerdict {
    Verdict kind = Verdict::None;
    // Integer: integer-scaled components with unit deltas. Rational: the weak function.
    std::optional<Llrf> llrf;
    // Strong rational function built from the weak one (over the hulls for Integer).
    std::optional<StrongConversion> strong;
    RankingChain chain;
    std::size_t depth = 0;
    std::optional<Witness> witness;
    std::vector<HullReport> hulls;
    bool hulls_exact = true;
    std::vector<std::size_t> origin_paths;
};

struct BoundReport {
    Integer bound;
    std::vector<Integer> contributions;
    // 1-based index of the first negative component, or 0 when none is negative.
    std::size_t first_negative = 0;
    // The sum that leaves out the last component when none is negative.
    Integer literal_bound;
};

namespace llrf {

// Space of quasi-LRFs: the ranking space with a non-negative instead of unit decrease.
lrf::RankingSpace quasi_space(std::span<const ConstraintPoly> polys, std::size_t n);

// A quasi-LRF that decreases on some transition, picked from the relative interior so that
// it decreases wherever any quasi-LRF does; nullopt when only trivial ones exist.
std::optional<AffineFunc> find_nontrivial_quasi_lrf(std::span<const ConstraintPoly> polys, std::size_t n);

struct SynResult {
    bool found = false;
    std::vector<AffineFunc> components;
    RankingChain chain;
    std::size_t depth = 0;
    // The level at which no non-trivial quasi-LRF exists (when not found).
    ChainLevel stuck;
};

SynResult llrf_syn(std::span<const ConstraintPoly> polys, std::size_t n);

LlrfVerdict synth_llrf(const LlrfQuery& query);

// Integer-domain synthesis; the same as synth_llrf with Domain::Integer.
LlrfVerdict llrf_int(const TransitionSystem& ts, const HullOptions& hull = {}, bool witness_wanted = false);

// Throws std::invalid_argument when the chain does not belong to an irredundant weak LLRF,
// and std::logic_error when a decrease bound comes out non-positive.
StrongConversion weak_to_strong(std::span<const AffineFunc> components, const RankingChain& chain,
                                std::size_t n);

CheckResult verify_weak_llrf(std::span<const AffineFunc> components, std::span<const ConstraintPoly> polys);
CheckResult verify_weak_llrf(std::span<const AffineFunc> components, const TransitionSystem& ts, Domain domain,
                             const HullOptions& hull = {});

// Every transition is ranked by some component with its delta. Exact, by a search over
// the ways a transition can fail to be ranked.
CheckResult verify_strong_llrf(const Llrf& f, std::span<const ConstraintPoly> polys);
// Rational functions are checked exactly on the paths. Integer functions need integer
// coefficients, unit deltas and a weak check over the integer hulls.
CheckResult verify_strong_llrf(const Llrf& f, const TransitionSystem& ts, const HullOptions& hull = {});

// Lexicographic witness system over (lambda_0, lambda) in <= form.
RatMatrix phi_matrix(const Witness& w, std::size_t n, RatVector& rhs);

// Throws std::invalid_argument when the level admits a non-trivial quasi-LRF.
Witness extract_lex_witness(const ChainLevel& stuck, std::span<const std::size_t> source, std::size_t paths,
                            std::size_t n, Domain domain, bool exact);

CheckResult verify_lex_witness(const Witness& w, const TransitionSystem& ts, Domain domain = Domain::Integer);

// Upper bound on the iterations from x0 for a strong function built by weak_to_strong.
BoundReport iteration_bound(const Llrf& f, std::span<const Rational> x0);

} // namespace llrf
} // namespace linrank
