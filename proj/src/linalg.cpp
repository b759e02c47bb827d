// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "linrank/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace linrank {

Rational make_rational(long num, long den) {
    if (den == 0) {
        throw std::domain_error("zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) {
        throw std::invalid_argument("empty number");
    }
    auto bad = [&] { return std::invalid_argument("malformed number '" + s + "'"); };
    std::size_t pos = 0;
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') {
        neg = s[pos] == '-';
        ++pos;
    }
    auto digits = [&](std::size_t from) {
        std::size_t i = from;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
        }
        return i;
    };
    std::size_t int_end = digits(pos);
    Rational result;
    if (int_end < s.size() && s[int_end] == '/') {
        std::size_t den_end = digits(int_end + 1);
        if (int_end == pos || den_end == int_end + 1 || den_end != s.size()) {
            throw bad();
        }
        Integer num(s.substr(pos, int_end - pos));
        Integer den(s.substr(int_end + 1));
        if (den == 0) {
            throw std::domain_error("zero denominator in '" + s + "'");
        }
        result = Rational(num, den);
        result.canonicalize();
    } else if (int_end < s.size() && s[int_end] == '.') {
        std::size_t frac_end = digits(int_end + 1);
        if ((int_end == pos && frac_end == int_end + 1) || frac_end != s.size()) {
            throw bad();
        }
        std::string whole = s.substr(pos, int_end - pos);
        std::string frac = s.substr(int_end + 1, frac_end - int_end - 1);
        Integer num(whole.empty() ? "0" : whole);
        Integer den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            den *= 10;
        }
        num = num * den + (frac.empty() ? Integer(0) : Integer(frac));
        result = Rational(num, den);
        result.canonicalize();
    } else {
        if (int_end == pos || int_end != s.size()) {
            throw bad();
        }
        result = Rational(Integer(s.substr(pos)));
    }
    return neg ? Rational(-result) : result;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(std::span<const Rational> v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += v[i].get_str();
    }
    return out + ")";
}

Integer floor_of(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer ceil_of(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

RatVector zeros(std::size_t n) { return RatVector(n); }

RatVector unit(std::size_t n, std::size_t k) {
    RatVector v(n);
    v.at(k) = 1;
    return v;
}

static void check_same(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionError("vector length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    check_same(a.size(), b.size());
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) {
            s += a[i] * b[i];
        }
    }
    return s;
}

RatVector add(std::span<const Rational> a, std::span<const Rational> b) {
    check_same(a.size(), b.size());
    RatVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = a[i] + b[i];
    }
    return r;
}

RatVector sub(std::span<const Rational> a, std::span<const Rational> b) {
    check_same(a.size(), b.size());
    RatVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = a[i] - b[i];
    }
    return r;
}

RatVector scaled(std::span<const Rational> a, const Rational& s) {
    RatVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = a[i] * s;
    }
    return r;
}

RatVector negated(std::span<const Rational> a) {
    RatVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = -a[i];
    }
    return r;
}

RatVector concat(std::span<const Rational> a, std::span<const Rational> b) {
    RatVector r(a.begin(), a.end());
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

bool is_zero(std::span<const Rational> v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

bool is_integral(const Rational& q) { return q.get_den() == 1; }

bool is_integral(std::span<const Rational> v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q.get_den() == 1; });
}

Integer lcm_of_denominators(std::span<const Rational> v) {
    Integer l = 1;
    for (const auto& q : v) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    }
    return l;
}

IntVector primitive(std::span<const Integer> v) {
    Integer g = 0;
    for (const auto& x : v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    IntVector r(v.begin(), v.end());
    if (g > 1) {
        for (auto& x : r) {
            mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
        }
    }
    return r;
}

IntVector primitive(std::span<const Rational> v) {
    Integer l = lcm_of_denominators(v);
    IntVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Integer t = v[i].get_num() * l;
        mpz_divexact(r[i].get_mpz_t(), t.get_mpz_t(), v[i].get_den_mpz_t());
    }
    return primitive(std::span<const Integer>(r));
}

RatVector to_rational(std::span<const Integer> v) {
    RatVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        r[i] = Rational(v[i]);
    }
    return r;
}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, RatVector(cols)) {}

RatMatrix RatMatrix::from_rows(std::vector<RatVector> rows, std::size_t cols) {
    RatMatrix m;
    m.cols_ = cols;
    for (auto& r : rows) {
        m.append_row(std::move(r));
    }
    return m;
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

RatVector RatMatrix::column(std::size_t c) const {
    RatVector v(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        v[r] = rows_[r][c];
    }
    return v;
}

void RatMatrix::append_row(RatVector r) {
    if (r.size() != cols_) {
        throw DimensionError("row has " + std::to_string(r.size()) + " entries, expected " + std::to_string(cols_));
    }
    rows_.push_back(std::move(r));
}

void RatMatrix::remove_row(std::size_t r) { rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r)); }

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = rows_[r][c];
        }
    }
    return t;
}

RatVector RatMatrix::multiply(std::span<const Rational> x) const {
    check_same(x.size(), cols_);
    RatVector y(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        y[r] = dot(rows_[r], x);
    }
    return y;
}

RatVector RatMatrix::left_multiply(std::span<const Rational> y) const {
    check_same(y.size(), rows_.size());
    RatVector x(cols_);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (sgn(y[r]) == 0) {
            continue;
        }
        for (std::size_t c = 0; c < cols_; ++c) {
            if (sgn(rows_[r][c]) != 0) {
                x[c] += y[r] * rows_[r][c];
            }
        }
    }
    return x;
}

RatMatrix RatMatrix::select_rows(std::span<const std::size_t> idx) const {
    RatMatrix m(0, cols_);
    for (auto i : idx) {
        m.append_row(rows_.at(i));
    }
    return m;
}

RatMatrix RatMatrix::select_cols(std::span<const std::size_t> idx) const {
    RatMatrix m(rows_.size(), idx.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        for (std::size_t k = 0; k < idx.size(); ++k) {
            m(r, k) = rows_[r].at(idx[k]);
        }
    }
    return m;
}

namespace {

std::vector<IntVector> integer_rows(const RatMatrix& m) {
    std::vector<IntVector> out;
    out.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Integer l = lcm_of_denominators(m.row(r));
        IntVector row(m.cols());
        for (std::size_t c = 0; c < m.cols(); ++c) {
            Integer t = m(r, c).get_num() * l;
            mpz_divexact(row[c].get_mpz_t(), t.get_mpz_t(), m(r, c).get_den_mpz_t());
        }
        out.push_back(std::move(row));
    }
    return out;
}

// Fraction-free forward elimination; returns the rank.
std::size_t bareiss_rank(std::vector<IntVector> a, std::size_t cols) {
    std::size_t rows = a.size();
    std::size_t rank = 0;
    Integer prev = 1;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && sgn(a[piv][c]) == 0) {
            ++piv;
        }
        if (piv == rows) {
            continue;
        }
        std::swap(a[piv], a[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t k = c + 1; k < cols; ++k) {
                Integer t = a[rank][c] * a[r][k] - a[r][c] * a[rank][k];
                mpz_divexact(a[r][k].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        ++rank;
    }
    return rank;
}

// Reduced row echelon form over the rationals; returns pivot columns.
std::vector<std::size_t> rref(std::vector<RatVector>& a, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t piv = r;
        while (piv < a.size() && sgn(a[piv][c]) == 0) {
            ++piv;
        }
        if (piv == a.size()) {
            continue;
        }
        std::swap(a[piv], a[r]);
        Rational inv = 1 / a[r][c];
        for (auto& x : a[r]) {
            x *= inv;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || sgn(a[i][c]) == 0) {
                continue;
            }
            Rational f = a[i][c];
            for (std::size_t k = 0; k < a[i].size(); ++k) {
                if (sgn(a[r][k]) != 0) {
                    a[i][k] -= f * a[r][k];
                }
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

std::size_t rank(const RatMatrix& m) { return bareiss_rank(integer_rows(m), m.cols()); }

Integer determinant(std::vector<IntVector> a) {
    std::size_t n = a.size();
    if (n == 0) {
        return 1;
    }
    Integer prev = 1;
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && sgn(a[piv][c]) == 0) {
            ++piv;
        }
        if (piv == n) {
            return 0;
        }
        if (piv != c) {
            std::swap(a[piv], a[c]);
            sign = -sign;
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            for (std::size_t k = c + 1; k < n; ++k) {
                Integer t = a[c][c] * a[r][k] - a[r][c] * a[c][k];
                mpz_divexact(a[r][k].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a[c][c];
    }
    return sign * a[n - 1][n - 1];
}

std::vector<RatVector> nullspace(const RatMatrix& m) {
    std::vector<RatVector> a;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        a.push_back(m.row(r));
    }
    auto pivots = rref(a, m.cols());
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) {
        is_pivot[p] = true;
    }
    std::vector<RatVector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) {
            continue;
        }
        RatVector v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            v[pivots[i]] = -a[i][f];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RatVector> solve(const RatMatrix& m, std::span<const Rational> rhs) {
    check_same(rhs.size(), m.rows());
    std::vector<RatVector> a;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        RatVector row = m.row(r);
        row.push_back(rhs[r]);
        a.push_back(std::move(row));
    }
    auto pivots = rref(a, m.cols() + 1);
    if (!pivots.empty() && pivots.back() == m.cols()) {
        return std::nullopt;
    }
    RatVector x(m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        x[pivots[i]] = a[i][m.cols()];
    }
    return x;
}

std::vector<std::size_t> independent_rows(const RatMatrix& m) {
    std::vector<std::size_t> chosen;
    std::vector<RatVector> basis;  // kept in echelon form
    std::vector<std::size_t> lead;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        RatVector v = m.row(r);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (sgn(v[lead[i]]) != 0) {
                Rational f = v[lead[i]] / basis[i][lead[i]];
                for (std::size_t k = 0; k < v.size(); ++k) {
                    if (sgn(basis[i][k]) != 0) {
                        v[k] -= f * basis[i][k];
                    }
                }
            }
        }
        auto it = std::find_if(v.begin(), v.end(), [](const Rational& q) { return sgn(q) != 0; });
        if (it == v.end()) {
            continue;
        }
        lead.push_back(static_cast<std::size_t>(it - v.begin()));
        basis.push_back(std::move(v));
        chosen.push_back(r);
    }
    return chosen;
}

std::optional<IntVector> integer_solution(const RatMatrix& m, std::span<const Rational> rhs) {
    check_same(rhs.size(), m.rows());
    std::size_t rows = m.rows();
    std::size_t n = m.cols();
    // Scale each equation to integers.
    std::vector<IntVector> e(rows, IntVector(n));
    IntVector f(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        RatVector full = m.row(r);
        full.push_back(rhs[r]);
        Integer l = lcm_of_denominators(full);
        for (std::size_t c = 0; c <= n; ++c) {
            Rational t = full[c] * l;
            (c < n ? e[r][c] : f[r]) = t.get_num();
        }
    }
    // Unimodular column operations bring e to lower echelon form; u tracks them.
    std::vector<IntVector> u(n, IntVector(n));
    for (std::size_t i = 0; i < n; ++i) {
        u[i][i] = 1;
    }
    auto col_axpy = [&](std::size_t dst, std::size_t src, const Integer& k) {
        // column dst -= k * column src
        for (std::size_t r = 0; r < rows; ++r) {
            e[r][dst] -= k * e[r][src];
        }
        for (std::size_t r = 0; r < n; ++r) {
            u[r][dst] -= k * u[r][src];
        }
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        for (std::size_t r = 0; r < rows; ++r) {
            std::swap(e[r][a], e[r][b]);
        }
        for (std::size_t r = 0; r < n; ++r) {
            std::swap(u[r][a], u[r][b]);
        }
    };
    std::vector<std::ptrdiff_t> pivot_col(rows, -1);
    std::size_t k = 0;
    for (std::size_t r = 0; r < rows && k < n; ++r) {
        while (true) {
            std::size_t best = n;
            for (std::size_t c = k; c < n; ++c) {
                if (sgn(e[r][c]) != 0 && (best == n || abs(e[r][c]) < abs(e[r][best]))) {
                    best = c;
                }
            }
            if (best == n) {
                break;
            }
            col_swap(k, best);
            bool done = true;
            for (std::size_t c = k + 1; c < n; ++c) {
                if (sgn(e[r][c]) != 0) {
                    Integer q;
                    mpz_fdiv_q(q.get_mpz_t(), e[r][c].get_mpz_t(), e[r][k].get_mpz_t());
                    col_axpy(c, k, q);
                    if (sgn(e[r][c]) != 0) {
                        done = false;
                    }
                }
            }
            if (done) {
                pivot_col[r] = static_cast<std::ptrdiff_t>(k);
                ++k;
                break;
            }
        }
    }
    IntVector z(n);
    for (std::size_t r = 0; r < rows; ++r) {
        Integer acc = f[r];
        std::size_t upto = pivot_col[r] >= 0 ? static_cast<std::size_t>(pivot_col[r]) : k;
        for (std::size_t c = 0; c < upto; ++c) {
            acc -= e[r][c] * z[c];
        }
        if (pivot_col[r] >= 0) {
            const Integer& p = e[r][static_cast<std::size_t>(pivot_col[r])];
            if (!mpz_divisible_p(acc.get_mpz_t(), p.get_mpz_t())) {
                return std::nullopt;
            }
            mpz_divexact(z[static_cast<std::size_t>(pivot_col[r])].get_mpz_t(), acc.get_mpz_t(), p.get_mpz_t());
        } else if (sgn(acc) != 0) {
            return std::nullopt;
        }
    }
    IntVector x(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (sgn(u[r][c]) != 0 && sgn(z[c]) != 0) {
                x[r] += u[r][c] * z[c];
            }
        }
    }
    return x;
}

Rational AffineFunc::eval(std::span<const Rational> x) const { return dot(coeffs, x) + constant; }

Rational AffineFunc::delta(std::span<const Rational> xx) const {
    std::size_t n = coeffs.size();
    check_same(xx.size(), 2 * n);
    return dot(coeffs, xx.subspan(0, n)) - dot(coeffs, xx.subspan(n, n));
}

RatVector AffineFunc::delta_row() const { return concat(coeffs, negated(coeffs)); }

RatVector AffineFunc::lifted_row() const { return concat(coeffs, zeros(coeffs.size())); }

ScaledAffine integer_scale(const AffineFunc& f) {
    Rational s(lcm_of_denominators(f.coeffs));
    return {AffineFunc{scaled(f.coeffs, s), f.constant * s}, s};
}

std::string format_row(std::span<const Rational> row, std::span<const std::string> names) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        const Rational& c = row[i];
        if (sgn(c) == 0) {
            continue;
        }
        std::string name = i < names.size() ? names[i] : "v" + std::to_string(i + 1);
        Rational mag = abs(c);
        std::string term = mag == 1 ? name : mag.get_str() + "*" + name;
        if (out.empty()) {
            out = sgn(c) < 0 ? "-" + term : term;
        } else {
            out += sgn(c) < 0 ? " - " + term : " + " + term;
        }
    }
    return out;
}

std::string format_affine(const AffineFunc& f, std::span<const std::string> names) {
    std::string out = format_row(f.coeffs, names);
    const Rational& c = f.constant;
    if (out.empty()) {
        return c.get_str();
    }
    if (sgn(c) > 0) {
        out += " + " + c.get_str();
    } else if (sgn(c) < 0) {
        out += " - " + Rational(-c).get_str();
    }
    return out;
}

} // namespace linrank
