// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/lp.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace linrank::lp {

std::size_t LinearSystem::add_variable(bool nonneg) {
    nonneg_.push_back(nonneg);
    for (auto& r : rows_) {
        r.coeffs.emplace_back();
    }
    return nonneg_.size() - 1;
}

void LinearSystem::add_row(Row row) {
    if (row.coeffs.size() != nonneg_.size()) {
        throw DimensionError("row has " + std::to_string(row.coeffs.size()) + " coefficients, system has " +
                             std::to_string(nonneg_.size()) + " variables");
    }
    rows_.push_back(std::move(row));
}

void LinearSystem::add_le(RatVector coeffs, Rational rhs) {
    add_row({std::move(coeffs), std::move(rhs), RowKind::LessEq});
}

void LinearSystem::add_ge(const RatVector& coeffs, const Rational& rhs) { add_le(negated(coeffs), -rhs); }

void LinearSystem::add_eq(RatVector coeffs, Rational rhs) {
    add_row({std::move(coeffs), std::move(rhs), RowKind::Equal});
}

bool LinearSystem::satisfied_by(std::span<const Rational> x) const {
    if (x.size() != nonneg_.size()) {
        return false;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (nonneg_[j] && sgn(x[j]) < 0) {
            return false;
        }
    }
    for (const auto& r : rows_) {
        Rational v = dot(r.coeffs, x);
        if (r.kind == RowKind::Equal ? v != r.rhs : v > r.rhs) {
            return false;
        }
    }
    return true;
}

LinearSystem LinearSystem::from_problem(const RatMatrix& a, const RatVector& b) {
    if (a.rows() != b.size()) {
        throw DimensionError("constraint matrix and right-hand side disagree");
    }
    LinearSystem s(a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        s.add_le(a.row(r), b[r]);
    }
    return s;
}

const RatVector* point_of(const LPOutcome& o) {
    if (auto* p = std::get_if<Optimal>(&o)) {
        return &p->point;
    }
    if (auto* p = std::get_if<Feasible>(&o)) {
        return &p->point;
    }
    if (auto* p = std::get_if<Unbounded>(&o)) {
        return &p->point;
    }
    return nullptr;
}

namespace {

enum class ColKind { Free, NonNeg, Artificial };

// Dense tableau simplex with Bland's rule. Free variables are pivoted into the basis
// up front and never leave it; rows they occupy are excluded from ratio tests.
class Tableau {
  public:
    Tableau(const LinearSystem& sys) : nvars_(sys.num_vars()) {
        std::size_t m = sys.num_rows();
        std::size_t slacks = 0;
        for (const auto& r : sys.rows()) {
            if (r.kind == RowKind::LessEq) {
                ++slacks;
            }
        }
        ncols_ = nvars_ + slacks;
        kinds_.resize(ncols_, ColKind::NonNeg);
        for (std::size_t j = 0; j < nvars_; ++j) {
            kinds_[j] = sys.nonneg(j) ? ColKind::NonNeg : ColKind::Free;
        }
        rows_.resize(m);
        basis_.assign(m, npos);
        std::size_t s = nvars_;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& src = sys.rows()[i];
            auto& row = rows_[i];
            row.assign(ncols_ + 1, Rational());
            for (std::size_t j = 0; j < nvars_; ++j) {
                row[j] = src.coeffs[j];
            }
            if (src.kind == RowKind::LessEq) {
                row[s] = 1;
                basis_[i] = s;
                ++s;
            }
            row[ncols_] = src.rhs;
        }
    }

    // Returns false when the system is infeasible.
    bool find_feasible() {
        absorb_free_variables();
        std::vector<std::size_t> art_rows;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (restricted(i) && (basis_[i] == npos || sgn(rhs(i)) < 0)) {
                if (sgn(rhs(i)) < 0) {
                    for (auto& x : rows_[i]) {
                        x = -x;
                    }
                }
                art_rows.push_back(i);
            }
        }
        if (art_rows.empty()) {
            return true;
        }
        std::size_t first_art = ncols_;
        for (auto i : art_rows) {
            add_column(ColKind::Artificial);
            rows_[i][ncols_ - 1] = 1;
            basis_[i] = ncols_ - 1;
        }
        // Phase one: minimise the sum of artificials.
        RatVector cost(ncols_);
        for (std::size_t j = first_art; j < ncols_; ++j) {
            cost[j] = 1;
        }
        set_objective(cost);
        if (iterate() != Status::Optimal) {
            throw std::logic_error("phase one cannot be unbounded");
        }
        if (sgn(obj_[ncols_]) != 0) {
            return false;
        }
        // Drive zero-level artificials out of the basis or drop redundant rows.
        for (std::size_t i = 0; i < rows_.size();) {
            if (basis_[i] != npos && kinds_[basis_[i]] == ColKind::Artificial) {
                std::size_t col = npos;
                for (std::size_t j = 0; j < ncols_; ++j) {
                    if (kinds_[j] != ColKind::Artificial && !is_basic(j) && sgn(rows_[i][j]) != 0) {
                        col = j;
                        break;
                    }
                }
                if (col == npos) {
                    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
                    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
                    continue;
                }
                pivot(i, col);
            }
            ++i;
        }
        return true;
    }

    enum class Status { Optimal, Unbounded };

    // Minimise cost over the current feasible basis.
    Status minimise(const RatVector& cost_vars) {
        RatVector cost(ncols_);
        for (std::size_t j = 0; j < nvars_; ++j) {
            cost[j] = cost_vars[j];
        }
        set_objective(cost);
        // Free nonbasic columns only appear in free rows; a nonzero reduced cost there is unbounded.
        for (std::size_t j = 0; j < nvars_; ++j) {
            if (kinds_[j] == ColKind::Free && !is_basic(j) && sgn(obj_[j]) != 0) {
                entering_ = j;
                entering_sign_ = sgn(obj_[j]) < 0 ? 1 : -1;
                return Status::Unbounded;
            }
        }
        entering_sign_ = 1;
        return iterate();
    }

    [[nodiscard]] RatVector point() const {
        RatVector x(nvars_);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (basis_[i] < nvars_) {
                x[basis_[i]] = rhs(i);
            }
        }
        return x;
    }

    [[nodiscard]] RatVector ray() const {
        RatVector d(nvars_);
        if (entering_ < nvars_) {
            d[entering_] = entering_sign_;
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (basis_[i] < nvars_) {
                d[basis_[i]] = -rows_[i][entering_] * entering_sign_;
            }
        }
        return d;
    }

    [[nodiscard]] Rational value() const { return -obj_[ncols_]; }

  private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    [[nodiscard]] const Rational& rhs(std::size_t i) const { return rows_[i][ncols_]; }
    [[nodiscard]] bool restricted(std::size_t i) const {
        return basis_[i] == npos || kinds_[basis_[i]] != ColKind::Free;
    }
    [[nodiscard]] bool is_basic(std::size_t j) const {
        return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
    }

    void add_column(ColKind kind) {
        for (auto& row : rows_) {
            row.insert(row.begin() + static_cast<std::ptrdiff_t>(ncols_), Rational());
        }
        if (!obj_.empty()) {
            obj_.insert(obj_.begin() + static_cast<std::ptrdiff_t>(ncols_), Rational());
        }
        kinds_.push_back(kind);
        ++ncols_;
    }

    void absorb_free_variables() {
        for (std::size_t j = 0; j < nvars_; ++j) {
            if (kinds_[j] != ColKind::Free) {
                continue;
            }
            std::size_t best = npos;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (!restricted(i) || sgn(rows_[i][j]) == 0) {
                    continue;
                }
                if (best == npos || (basis_[i] == npos && basis_[best] != npos)) {
                    best = i;
                }
            }
            if (best != npos) {
                pivot(best, j);
            }
        }
    }

    void set_objective(const RatVector& cost) {
        obj_ = cost;
        obj_.resize(ncols_ + 1);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            std::size_t b = basis_[i];
            if (b == npos || sgn(obj_[b]) == 0) {
                continue;
            }
            Rational f = obj_[b];
            for (std::size_t k = 0; k <= ncols_; ++k) {
                if (sgn(rows_[i][k]) != 0) {
                    obj_[k] -= f * rows_[i][k];
                }
            }
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        auto& prow = rows_[r];
        Rational inv = 1 / prow[c];
        std::vector<std::size_t> nz;
        for (std::size_t k = 0; k <= ncols_; ++k) {
            if (sgn(prow[k]) != 0) {
                prow[k] *= inv;
                nz.push_back(k);
            }
        }
        auto eliminate = [&](RatVector& row) {
            if (sgn(row[c]) == 0) {
                return;
            }
            Rational f = row[c];
            for (auto k : nz) {
                row[k] -= f * prow[k];
            }
        };
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i != r) {
                eliminate(rows_[i]);
            }
        }
        if (!obj_.empty()) {
            eliminate(obj_);
        }
        basis_[r] = c;
    }

    Status iterate() {
        while (true) {
            std::size_t enter = npos;
            for (std::size_t j = 0; j < ncols_; ++j) {
                if (kinds_[j] == ColKind::Free || sgn(obj_[j]) >= 0 || is_basic(j)) {
                    continue;
                }
                if (kinds_[j] == ColKind::Artificial && artificials_frozen_) {
                    continue;
                }
                enter = j;
                break;
            }
            if (enter == npos) {
                return Status::Optimal;
            }
            std::size_t leave = npos;
            Rational best;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (!restricted(i) || sgn(rows_[i][enter]) <= 0) {
                    continue;
                }
                Rational ratio = rhs(i) / rows_[i][enter];
                if (leave == npos || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == npos) {
                entering_ = enter;
                return Status::Unbounded;
            }
            pivot(leave, enter);
        }
    }

  public:
    void freeze_artificials() { artificials_frozen_ = true; }

  private:
    std::size_t nvars_;
    std::size_t ncols_ = 0;
    std::vector<ColKind> kinds_;
    std::vector<RatVector> rows_;
    std::vector<std::size_t> basis_;
    RatVector obj_;
    std::size_t entering_ = npos;
    int entering_sign_ = 1;
    bool artificials_frozen_ = false;
};

RatVector farkas_certificate(const LinearSystem& sys) {
    // y_i >= 0 on inequality rows; y^T A = 0 on free columns, >= 0 on nonneg columns; y^T b = -1.
    std::size_t m = sys.num_rows();
    LinearSystem dual(m);
    for (std::size_t i = 0; i < m; ++i) {
        dual.set_nonneg(i, sys.rows()[i].kind == RowKind::LessEq);
    }
    for (std::size_t j = 0; j < sys.num_vars(); ++j) {
        RatVector col(m);
        for (std::size_t i = 0; i < m; ++i) {
            col[i] = sys.rows()[i].coeffs[j];
        }
        if (sys.nonneg(j)) {
            dual.add_ge(col, 0);
        } else {
            dual.add_eq(std::move(col), 0);
        }
    }
    RatVector b(m);
    for (std::size_t i = 0; i < m; ++i) {
        b[i] = sys.rows()[i].rhs;
    }
    dual.add_eq(std::move(b), -1);
    auto out = solve(dual, std::nullopt, SolveOptions{false});
    const RatVector* y = point_of(out);
    if (y == nullptr || !verify_certificate(sys, *y)) {
        throw std::logic_error("failed to construct an infeasibility certificate");
    }
    return *y;
}

} // namespace

LPOutcome solve(const LinearSystem& sys, const std::optional<Objective>& objective, const SolveOptions& options) {
    if (objective && objective->coeffs.size() != sys.num_vars()) {
        throw DimensionError("objective length does not match the number of variables");
    }
    Tableau t(sys);
    if (!t.find_feasible()) {
        return Infeasible{options.want_certificate ? farkas_certificate(sys) : RatVector{}};
    }
    t.freeze_artificials();
    if (!objective) {
        RatVector x = t.point();
        if (!sys.satisfied_by(x)) {
            throw std::logic_error("simplex produced an infeasible point");
        }
        return Feasible{std::move(x)};
    }
    RatVector cost = objective->sense == Sense::Minimize ? objective->coeffs : negated(objective->coeffs);
    auto status = t.minimise(cost);
    RatVector x = t.point();
    if (!sys.satisfied_by(x)) {
        throw std::logic_error("simplex produced an infeasible point");
    }
    if (status == decltype(status)::Unbounded) {
        RatVector d = t.ray();
        return Unbounded{std::move(x), std::move(d)};
    }
    Rational v = dot(objective->coeffs, x);
    return Optimal{std::move(x), std::move(v)};
}

LPOutcome solve(const LPProblem& p) { return solve(LinearSystem::from_problem(p.a, p.b), p.objective); }

bool is_feasible(const LinearSystem& sys) { return !is_infeasible(solve(sys, std::nullopt, SolveOptions{false})); }

bool verify_certificate(const LinearSystem& sys, std::span<const Rational> y) {
    if (y.size() != sys.num_rows()) {
        return false;
    }
    RatVector combo(sys.num_vars());
    Rational rhs;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto& r = sys.rows()[i];
        if (r.kind == RowKind::LessEq && sgn(y[i]) < 0) {
            return false;
        }
        if (sgn(y[i]) == 0) {
            continue;
        }
        for (std::size_t j = 0; j < combo.size(); ++j) {
            combo[j] += y[i] * r.coeffs[j];
        }
        rhs += y[i] * r.rhs;
    }
    for (std::size_t j = 0; j < combo.size(); ++j) {
        if (sys.nonneg(j) ? sgn(combo[j]) < 0 : sgn(combo[j]) != 0) {
            return false;
        }
    }
    return sgn(rhs) < 0;
}

bool verify_certificate(const RatMatrix& a, const RatVector& b, std::span<const Rational> y) {
    return verify_certificate(LinearSystem::from_problem(a, b), y);
}

std::vector<std::size_t> implied_equalities(const RatMatrix& a, const RatVector& b) {
    LinearSystem sys = LinearSystem::from_problem(a, b);
    auto first = solve(sys, std::nullopt, SolveOptions{false});
    if (is_infeasible(first)) {
        throw std::invalid_argument("implied_equalities: system is infeasible");
    }
    std::vector<RatVector> witnesses{*point_of(first)};
    auto slack_seen = [&](std::size_t r) {
        return std::any_of(witnesses.begin(), witnesses.end(),
                           [&](const RatVector& x) { return dot(a.row(r), x) < b[r]; });
    };
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (slack_seen(r)) {
            continue;
        }
        auto res = solve(sys, Objective{a.row(r), Sense::Minimize}, SolveOptions{false});
        if (auto* opt = std::get_if<Optimal>(&res)) {
            if (opt->value == b[r]) {
                out.push_back(r);
                continue;
            }
            witnesses.push_back(opt->point);
        } else if (auto* unb = std::get_if<Unbounded>(&res)) {
            witnesses.push_back(add(unb->point, unb->ray));
        }
    }
    return out;
}

std::vector<std::size_t> iis(const RatMatrix& a, const RatVector& b) {
    LinearSystem sys = LinearSystem::from_problem(a, b);
    auto res = solve(sys);
    auto* inf = std::get_if<Infeasible>(&res);
    if (inf == nullptr) {
        throw std::invalid_argument("iis: system is feasible");
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < inf->certificate.size(); ++i) {
        if (sgn(inf->certificate[i]) != 0) {
            keep.push_back(i);
        }
    }
    auto infeasible_subset = [&](const std::vector<std::size_t>& idx) {
        RatVector bs;
        for (auto i : idx) {
            bs.push_back(b[i]);
        }
        return !is_feasible(LinearSystem::from_problem(a.select_rows(idx), bs));
    };
    for (std::size_t pos = 0; pos < keep.size();) {
        std::vector<std::size_t> trial = keep;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(pos));
        if (infeasible_subset(trial)) {
            keep = std::move(trial);
        } else {
            ++pos;
        }
    }
    return keep;
}

} // namespace linrank::lp
