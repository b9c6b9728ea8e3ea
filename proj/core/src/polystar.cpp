#include "fpsyn/polystar.hpp"

#include <algorithm>
#include <sstream>

namespace fpsyn {

// ---------------------------------------------------------------------------
// Univariate helpers

UPoly upoly_trim(UPoly p) {
    while (!p.empty() && p.back().is_zero()) {
        p.pop_back();
    }
    return p;
}

UPoly upoly_add(const UPoly& a, const UPoly& b) {
    if (a.empty()) {
        return b;
    }
    if (b.empty()) {
        return a;
    }
    UPoly r = a.size() >= b.size() ? a : b;
    const UPoly& s = a.size() >= b.size() ? b : a;
    for (std::size_t i = 0; i < s.size(); ++i) {
        r[i] += s[i];
    }
    return upoly_trim(std::move(r));
}

UPoly upoly_sub(const UPoly& a, const UPoly& b) {
    UPoly nb = b;
    for (auto& c : nb) {
        c = -c;
    }
    return upoly_add(a, nb);
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) {
        return {};
    }
    UPoly r(a.size() + b.size() - 1, a[0].field().zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (!b[j].is_zero()) {
                r[i + j] += a[i] * b[j];
            }
        }
    }
    return upoly_trim(std::move(r));
}

UPoly upoly_scale(const Elem& s, const UPoly& a) {
    UPoly r = a;
    for (auto& c : r) {
        c = s * c;
    }
    return upoly_trim(std::move(r));
}

std::pair<UPoly, UPoly> upoly_divmod(const UPoly& a, const UPoly& b) {
    UPoly bt = upoly_trim(b);
    if (bt.empty()) {
        throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
    }
    UPoly r = upoly_trim(a);
    if (r.size() < bt.size()) {
        return {UPoly{}, r};
    }
    const Field& f = bt[0].field();
    const std::size_t db = bt.size() - 1;
    UPoly quot(r.size() - db, f.zero());
    Elem lead_inv = bt.back().inverse();
    for (std::size_t k = r.size(); k-- > db;) {
        if (r[k].is_zero()) {
            continue;
        }
        Elem c = r[k] * lead_inv;
        std::size_t shift = k - db;
        quot[shift] = c;
        for (std::size_t i = 0; i < bt.size(); ++i) {
            r[shift + i] -= c * bt[i];
        }
    }
    return {upoly_trim(std::move(quot)), upoly_trim(std::move(r))};
}

Elem upoly_eval(const Field& f, const UPoly& p, const Elem& x) {
    Elem acc = f.zero();
    for (std::size_t k = p.size(); k-- > 0;) {
        acc = acc * x + p[k];
    }
    return acc;
}

namespace {

// Appends "c*mono" to the stream, handling signs and parentheses.
void append_term(std::ostringstream& out, bool first, const Elem& c, const std::string& mono) {
    if (mono.empty()) {
        std::string s = c.to_string();
        if (first) {
            out << s;
        } else if (s[0] == '-') {
            out << " - " << s.substr(1);
        } else {
            out << " + " << s;
        }
        return;
    }
    bool negative = false;
    std::string body;
    if (c.term_count() == 1) {
        std::string s = c.to_string();
        if (s[0] == '-') {
            negative = true;
            s = s.substr(1);
        }
        body = s == "1" ? mono : s + "*" + mono;
    } else {
        body = "(" + c.to_string() + ")*" + mono;
    }
    if (first) {
        out << (negative ? "-" : "") << body;
    } else {
        out << (negative ? " - " : " + ") << body;
    }
}

std::string power(std::string_view var, std::size_t k) {
    if (k == 0) {
        return {};
    }
    std::string s(var);
    if (k > 1) {
        s += "^" + std::to_string(k);
    }
    return s;
}

} // namespace

std::string upoly_to_string(const Field&, const UPoly& p, std::string_view var) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k].is_zero()) {
            continue;
        }
        append_term(out, first, p[k], power(var, k));
        first = false;
    }
    return first ? "0" : out.str();
}

// ---------------------------------------------------------------------------
// OnePoly

OnePoly::OnePoly(Field field, std::vector<Elem> coeffs) : field_(std::move(field)), coeffs_(upoly_trim(std::move(coeffs))) {
    if (coeffs_.empty() || !coeffs_[0].is_one()) {
        throw Error(ErrorKind::ParseError, "polynomial must have constant term 1");
    }
    for (const auto& c : coeffs_) {
        if (!(c.field() == field_)) {
            throw Error(ErrorKind::FieldMismatch, "polynomial coefficient from another field");
        }
    }
}

OnePoly OnePoly::one(const Field& f) { return OnePoly(f, {f.one()}); }

OnePoly OnePoly::parse(const Field& f, std::string_view text) {
    return OnePoly(f, parse_expression(f, text, true));
}

Elem OnePoly::eval(const Elem& x) const { return upoly_eval(field_, coeffs_, x); }

std::string OnePoly::to_string() const { return upoly_to_string(field_, coeffs_); }

OnePoly OnePoly::operator*(const OnePoly& b) const { return OnePoly(field_, upoly_mul(coeffs_, b.coeffs_)); }

// ---------------------------------------------------------------------------
// BivarPoly

BivarPoly::BivarPoly(Field field, std::vector<std::vector<Elem>> table) : field_(std::move(field)), table_(std::move(table)) {
    normalize();
}

void BivarPoly::normalize() {
    std::size_t width = 0;
    for (auto& row : table_) {
        row = upoly_trim(std::move(row));
        width = std::max(width, row.size());
    }
    for (auto& row : table_) {
        row.resize(width, field_.zero());
    }
    while (!table_.empty() && std::all_of(table_.back().begin(), table_.back().end(),
                                          [](const Elem& e) { return e.is_zero(); })) {
        table_.pop_back();
    }
    if (table_.empty()) {
        return;
    }
}

Elem BivarPoly::coeff(std::size_t i, std::size_t j) const {
    if (i < table_.size() && j < table_[i].size()) {
        return table_[i][j];
    }
    return field_.zero();
}

void BivarPoly::set(std::size_t i, std::size_t j, const Elem& value) {
    if (table_.size() <= i) {
        table_.resize(i + 1);
    }
    for (auto& row : table_) {
        if (row.size() <= j) {
            row.resize(j + 1, field_.zero());
        }
    }
    table_[i][j] = value;
    normalize();
}

bool BivarPoly::is_zero() const { return table_.empty(); }

BivarPoly BivarPoly::operator+(const BivarPoly& b) const {
    std::vector<std::vector<Elem>> t(std::max(table_.size(), b.table_.size()));
    for (std::size_t i = 0; i < t.size(); ++i) {
        UPoly x = i < table_.size() ? table_[i] : UPoly{};
        UPoly y = i < b.table_.size() ? b.table_[i] : UPoly{};
        t[i] = upoly_add(upoly_trim(x), upoly_trim(y));
    }
    return BivarPoly(field_, std::move(t));
}

BivarPoly BivarPoly::operator-(const BivarPoly& b) const {
    std::vector<std::vector<Elem>> t(std::max(table_.size(), b.table_.size()));
    for (std::size_t i = 0; i < t.size(); ++i) {
        UPoly x = i < table_.size() ? table_[i] : UPoly{};
        UPoly y = i < b.table_.size() ? b.table_[i] : UPoly{};
        t[i] = upoly_sub(upoly_trim(x), upoly_trim(y));
    }
    return BivarPoly(field_, std::move(t));
}

BivarPoly BivarPoly::operator*(const BivarPoly& b) const {
    if (is_zero() || b.is_zero()) {
        return BivarPoly(field_);
    }
    std::vector<std::vector<Elem>> t(table_.size() + b.table_.size() - 1);
    for (std::size_t i = 0; i < table_.size(); ++i) {
        for (std::size_t k = 0; k < b.table_.size(); ++k) {
            t[i + k] = upoly_add(t[i + k], upoly_mul(upoly_trim(table_[i]), upoly_trim(b.table_[k])));
        }
    }
    return BivarPoly(field_, std::move(t));
}

bool BivarPoly::operator==(const BivarPoly& b) const { return table_ == b.table_; }

BivarPoly BivarPoly::in_t1(const Field& f, const UPoly& p) {
    std::vector<std::vector<Elem>> t;
    for (const auto& c : p) {
        t.push_back({c});
    }
    return BivarPoly(f, std::move(t));
}

BivarPoly BivarPoly::in_t2(const Field& f, const UPoly& p) { return BivarPoly(f, {p}); }

BivarPoly BivarPoly::in_product(const Field& f, const UPoly& p) {
    std::vector<std::vector<Elem>> t(p.size(), std::vector<Elem>(p.size(), f.zero()));
    for (std::size_t k = 0; k < p.size(); ++k) {
        t[k][k] = p[k];
    }
    return BivarPoly(f, std::move(t));
}

std::string BivarPoly::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < table_.size(); ++i) {
        for (std::size_t j = 0; j < table_[i].size(); ++j) {
            if (table_[i][j].is_zero()) {
                continue;
            }
            std::string mono = power("T1", i);
            std::string m2 = power("T2", j);
            if (!m2.empty()) {
                mono = mono.empty() ? m2 : mono + "*" + m2;
            }
            append_term(out, first, table_[i][j], mono);
            first = false;
        }
    }
    return first ? "0" : out.str();
}

// ---------------------------------------------------------------------------
// Composed product via a resultant in y with coefficients in L[x].

namespace {

// det of a square matrix over L[x] by fraction-free (Bareiss) elimination.
UPoly bareiss_det(std::vector<std::vector<UPoly>> m, const Field& f) {
    const std::size_t n = m.size();
    if (n == 0) {
        return {f.one()};
    }
    bool negate = false;
    UPoly prev{f.one()};
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].empty()) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].empty()) {
                ++swap_row;
            }
            if (swap_row == n) {
                return {};
            }
            std::swap(m[k], m[swap_row]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                UPoly num = upoly_sub(upoly_mul(m[i][j], m[k][k]), upoly_mul(m[i][k], m[k][j]));
                auto [quot, rem] = upoly_divmod(num, prev);
                if (!rem.empty()) {
                    throw Error(ErrorKind::InternalInconsistency, "inexact Bareiss division");
                }
                m[i][j] = std::move(quot);
            }
            m[i][k] = {};
        }
        prev = m[k][k];
    }
    UPoly det = m[n - 1][n - 1];
    if (negate) {
        det = upoly_scale(-f.one(), det);
    }
    return det;
}

} // namespace

OnePoly star(const OnePoly& p, const OnePoly& q) {
    if (!(p.field() == q.field())) {
        throw Error(ErrorKind::FieldMismatch, "star of polynomials over different fields");
    }
    const Field& f = p.field();
    const std::size_t d = p.degree();
    const std::size_t m = q.degree();
    if (d == 0 || m == 0) {
        return OnePoly::one(f);
    }
    // A(y) = y^d P(1/y) is monic with roots the reciprocal roots alpha_i of P;
    // H(y) = y^m B(x/y) with B(y) = y^m Q(1/y). Res_y(A, H) = prod (x - alpha_i beta_j).
    const auto& pc = p.coeffs();
    const auto& qc = q.coeffs();
    // B(y) = sum_k qc[k] y^(m-k), so H(y) = sum_k qc[k] x^(m-k) y^k.
    const std::size_t n = d + m;
    std::vector<std::vector<UPoly>> syl(n, std::vector<UPoly>(n));
    // m rows of A, highest power of y first; A's y^(d-k) coefficient is pc[k].
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t k = 0; k <= d; ++k) {
            syl[r][r + k] = upoly_trim({pc[k]});
        }
    }
    // d rows of H, highest power first; H's y^(m-k) coefficient is qc[m-k] x^k.
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = 0; k <= m; ++k) {
            UPoly c(k + 1, f.zero());
            c[k] = qc[m - k];
            syl[m + r][r + k] = upoly_trim(std::move(c));
        }
    }
    UPoly res = bareiss_det(std::move(syl), f);
    if (res.size() != d * m + 1) {
        throw Error(ErrorKind::InternalInconsistency, "composed product has unexpected degree");
    }
    Elem lead_inv = res.back().inverse();
    res = upoly_scale(lead_inv, res);
    std::reverse(res.begin(), res.end());
    return OnePoly(f, std::move(res));
}

// ---------------------------------------------------------------------------
// Bezout pair

BezoutPair bezout_star(const OnePoly& p, const OnePoly& q) {
    const Field& f = p.field();
    OnePoly pq = star(p, q);
    const std::size_t d = p.degree();
    if (d == 0) {
        // P = 1: take a = (P*Q)(T1 T2) = 1.
        return {BivarPoly::in_t1(f, {f.one()}), BivarPoly(f)};
    }
    if (q.degree() == 0) {
        return {BivarPoly(f), BivarPoly::in_t1(f, {f.one()})};
    }
    // Rows indexed by T1 exponent, each a polynomial in T2.
    std::vector<UPoly> rem(pq.coeffs().size());
    for (std::size_t k = 0; k < pq.coeffs().size(); ++k) {
        UPoly c(k + 1, f.zero());
        c[k] = pq.coeffs()[k];
        rem[k] = upoly_trim(std::move(c));
    }
    const auto& pc = p.coeffs();
    Elem lead_inv = pc[d].inverse();
    std::vector<UPoly> quot(rem.size() >= d ? rem.size() - d : 0);
    for (std::size_t k = rem.size(); k-- > d;) {
        if (rem[k].empty()) {
            continue;
        }
        UPoly c = upoly_scale(lead_inv, rem[k]);
        quot[k - d] = c;
        for (std::size_t i = 0; i <= d; ++i) {
            rem[k - d + i] = upoly_sub(rem[k - d + i], upoly_scale(pc[i], c));
        }
    }
    std::vector<std::vector<Elem>> btab(std::min(rem.size(), d));
    for (std::size_t i = 0; i < btab.size(); ++i) {
        auto [qq, rr] = upoly_divmod(rem[i], q.coeffs());
        if (!rr.empty()) {
            throw Error(ErrorKind::InternalInconsistency, "Bezout remainder not divisible by Q(T2)");
        }
        btab[i] = std::move(qq);
    }
    for (std::size_t i = d; i < rem.size(); ++i) {
        if (!rem[i].empty()) {
            throw Error(ErrorKind::InternalInconsistency, "Bezout reduction left high T1 terms");
        }
    }
    return {BivarPoly(f, std::move(quot)), BivarPoly(f, std::move(btab))};
}

bool bezout_identity_holds(const OnePoly& p, const OnePoly& q, const BezoutPair& ab) {
    const Field& f = p.field();
    BivarPoly lhs = ab.a * BivarPoly::in_t1(f, p.coeffs()) + ab.b * BivarPoly::in_t2(f, q.coeffs());
    BivarPoly rhs = BivarPoly::in_product(f, star(p, q).coeffs());
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Operators

Matrix eval_at_operator(const UPoly& p, const Matrix& m, const Elem& scale) {
    if (!m.is_square()) {
        throw Error(ErrorKind::ShapeMismatch, "polynomial evaluated at a non-square matrix");
    }
    const Field& f = m.field();
    const std::size_t n = m.rows();
    if (p.empty()) {
        return Matrix(f, n, n);
    }
    Matrix sm = scale * m;
    Matrix acc = Matrix::scalar(p.back(), n);
    for (std::size_t k = p.size() - 1; k-- > 0;) {
        acc = acc * sm + Matrix::scalar(p[k], n);
    }
    return acc;
}

Matrix eval_at_operator(const OnePoly& p, const Matrix& m, const Elem& scale) {
    return eval_at_operator(p.coeffs(), m, scale);
}

Matrix eval_bivar(const BivarPoly& a, const Matrix& x1, const Matrix& x2) {
    const Field& f = x1.field();
    const std::size_t n = x1.rows() * x2.rows();
    Matrix acc(f, n, n);
    const auto& t = a.table();
    std::vector<Matrix> pow2{Matrix::identity(f, x2.rows())};
    std::size_t width = t.empty() ? 0 : t[0].size();
    for (std::size_t j = 1; j < width; ++j) {
        pow2.push_back(pow2.back() * x2);
    }
    Matrix pow1 = Matrix::identity(f, x1.rows());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0) {
            pow1 = pow1 * x1;
        }
        for (std::size_t j = 0; j < t[i].size(); ++j) {
            if (!t[i][j].is_zero()) {
                acc = acc + t[i][j] * kron(pow1, pow2[j]);
            }
        }
    }
    return acc;
}

OnePoly reflect(const OnePoly& p) {
    UPoly r = p.coeffs();
    std::reverse(r.begin(), r.end());
    Elem c = r[0].inverse();
    return OnePoly(p.field(), upoly_scale(c, r));
}

OnePoly factor_through_power(const OnePoly& p, std::size_t d) {
    if (d == 0) {
        throw Error(ErrorKind::NoSuchFactorization, "level d must be positive");
    }
    const auto& c = p.coeffs();
    std::vector<Elem> out;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k % d == 0) {
            out.push_back(c[k]);
        } else if (!c[k].is_zero()) {
            throw Error(ErrorKind::NoSuchFactorization,
                        "P(T) is not of the form P'(T^" + std::to_string(d) + "): coefficient of T^" + std::to_string(k) +
                            " is nonzero");
        }
    }
    return OnePoly(p.field(), std::move(out));
}

} // namespace fpsyn
