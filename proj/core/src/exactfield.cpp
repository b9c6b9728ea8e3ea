#include "fpsyn/exactfield.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <utility>

namespace fpsyn {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ValuationUnavailable: return "ValuationUnavailable";
    case ErrorKind::InvalidModule: return "InvalidModule";
    case ErrorKind::UnsupportedModule: return "UnsupportedModule";
    case ErrorKind::NotConvenient: return "NotConvenient";
    case ErrorKind::PolynomialVanishes: return "PolynomialVanishes";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorKind::InvalidDatum: return "InvalidDatum";
    case ErrorKind::DatumMismatch: return "DatumMismatch";
    case ErrorKind::ComparisonNotIso: return "ComparisonNotIso";
    case ErrorKind::TopCohomologyNotALine: return "TopCohomologyNotALine";
    case ErrorKind::ObstructionNonzero: return "ObstructionNonzero";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::OperatorNotInvertible: return "OperatorNotInvertible";
    case ErrorKind::NoSuchFactorization: return "NoSuchFactorization";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Rationals

Rational parse_rational(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) {
        throw Error(ErrorKind::ParseError, "empty rational");
    }
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool seen_slash = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        if (s[i] == '/' && !seen_slash && i > start && i + 1 < s.size()) {
            seen_slash = true;
        } else if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            throw Error(ErrorKind::ParseError, "malformed rational '" + s + "'");
        }
    }
    if (s[0] == '+') {
        s.erase(0, 1);
    }
    Rational r;
    if (r.set_str(s, 10) != 0) {
        throw Error(ErrorKind::ParseError, "malformed rational '" + s + "'");
    }
    if (r.get_den() == 0) {
        throw Error(ErrorKind::DivisionByZero, "zero denominator in '" + s + "'");
    }
    r.canonicalize();
    return r;
}

std::string rational_to_string(const Rational& r) { return r.get_str(10); }

namespace {

long count_factor(mpz_class n, long p) {
    long k = 0;
    if (n == 0) {
        return 0;
    }
    mpz_class pp = p;
    while (n % pp == 0) {
        n /= pp;
        ++k;
    }
    return k;
}

} // namespace

Rational padic_valuation(const Rational& r, long p) {
    if (r == 0) {
        throw Error(ErrorKind::ValuationUnavailable, "valuation of zero");
    }
    return Rational(count_factor(r.get_num(), p) - count_factor(r.get_den(), p));
}

// ---------------------------------------------------------------------------
// Dense rational linear algebra used internally by the field itself.

namespace {

using QMat = std::vector<std::vector<Rational>>;

Rational q_determinant(QMat a) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) {
            ++piv;
        }
        if (piv == n) {
            return 0;
        }
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) {
                continue;
            }
            Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    return det;
}

std::optional<std::vector<Rational>> q_solve(QMat a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) {
            ++piv;
        }
        if (piv == n) {
            return std::nullopt;
        }
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        Rational inv = 1 / a[c][c];
        for (std::size_t k = c; k < n; ++k) {
            a[c][k] *= inv;
        }
        b[c] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) {
                continue;
            }
            Rational f = a[r][c];
            for (std::size_t k = c; k < n; ++k) {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    return b;
}

// Integer divisors of |n| (positive), or nullopt when too large to enumerate.
std::optional<std::vector<mpz_class>> small_divisors(const mpz_class& n) {
    mpz_class a = abs(n);
    if (a > mpz_class("1000000000000")) {
        return std::nullopt;
    }
    std::vector<mpz_class> out;
    for (mpz_class d = 1; d * d <= a; ++d) {
        if (a % d == 0) {
            out.push_back(d);
            if (d * d != a) {
                out.push_back(a / d);
            }
        }
    }
    return out;
}

// Cheap reducibility screen for monic rational polynomials of degree <= 4:
// rational roots, and for quartics a split into two integer quadratics.
bool screen_reducible(const std::vector<Rational>& m) {
    const std::size_t n = m.size() - 1;
    if (n <= 1 || n > 4) {
        return false;
    }
    mpz_class den = 1;
    for (const auto& c : m) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    }
    // y^n + D c_{n-1} y^{n-1} + ... + D^n c_0 is integral and monic.
    std::vector<mpz_class> z(n + 1);
    mpz_class pw = 1;
    for (std::size_t k = 0; k <= n; ++k) {
        Rational v = m[n - k] * Rational(pw);
        z[n - k] = v.get_num();
        pw *= den;
    }
    if (z[0] == 0) {
        return true;
    }
    auto eval = [&](const mpz_class& x) {
        mpz_class acc = 0;
        for (std::size_t k = n + 1; k-- > 0;) {
            acc = acc * x + z[k];
        }
        return acc;
    };
    auto divs = small_divisors(z[0]);
    if (!divs) {
        return false;
    }
    for (const auto& d : *divs) {
        if (eval(d) == 0 || eval(-d) == 0) {
            return true;
        }
    }
    if (n != 4) {
        return false;
    }
    // (y^2 + u y + v)(y^2 + s y + t) with v t = z0.
    const mpz_class a = z[3], b = z[2], c = z[1], d0 = z[0];
    for (const auto& dpos : *divs) {
        for (int sgn : {1, -1}) {
            mpz_class v = dpos * sgn;
            mpz_class t = d0 / v;
            if (t != v) {
                mpz_class num = c - v * a;
                mpz_class den2 = t - v;
                if (num % den2 != 0) {
                    continue;
                }
                mpz_class u = num / den2;
                mpz_class s = a - u;
                if (v + t + u * s == b) {
                    return true;
                }
            } else {
                if (c != v * a) {
                    continue;
                }
                mpz_class disc = a * a - 4 * (b - 2 * v);
                if (disc < 0) {
                    continue;
                }
                mpz_class root = sqrt(disc);
                if (root * root == disc) {
                    return true;
                }
            }
        }
    }
    return false;
}

} // namespace

// ---------------------------------------------------------------------------
// Field

struct Field::Impl {
    FieldSpec spec;
    std::size_t degree = 1;
    bool valuation_ok = false;
    std::string valuation_issue;
};

namespace {

// Validates that a single valuation extends v_p to the field; see valuation().
std::string check_valuation(const FieldSpec& spec) {
    if (!spec.prime) {
        return "no prime p supplied";
    }
    const long p = *spec.prime;
    if (spec.kind == FieldSpec::Kind::Rationals) {
        return {};
    }
    if (!spec.gen_valuation) {
        return "extension field without gen_valuation";
    }
    const std::size_t n = spec.minpoly.size() - 1;
    const Rational s = *spec.gen_valuation;
    if (spec.minpoly[0] == 0) {
        return "minpoly has zero constant term";
    }
    if (padic_valuation(spec.minpoly[0], p) != s * Rational(static_cast<long>(n))) {
        return "gen_valuation inconsistent with v(minpoly(0))";
    }
    for (std::size_t i = 1; i < n; ++i) {
        const Rational& c = spec.minpoly[i];
        if (c != 0 && padic_valuation(c, p) < s * Rational(static_cast<long>(n - i))) {
            return "Newton polygon of minpoly is not a single segment of slope gen_valuation";
        }
    }
    mpz_class e = s.get_den();
    if (e == static_cast<long>(n)) {
        return {}; // totally ramified: Eisenstein-type, unique extension
    }
    if (e == 1 && n <= 3) {
        if (p > 100000) {
            return "residue-field check skipped for large p";
        }
        // h(x) = p^{-n s} m(p^s x) has unit constant term; no root mod p means
        // irreducible mod p (n <= 3), hence a single unramified place.
        const long k = s.get_num().get_si();
        std::vector<mpz_class> h(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            Rational scale = 1;
            const long ex = k * static_cast<long>(i) - k * static_cast<long>(n);
            for (long t = 0; t < std::labs(ex); ++t) {
                scale *= p;
            }
            if (ex < 0) {
                scale = 1 / scale;
            }
            Rational hc = spec.minpoly[i] * scale;
            mpz_class num = hc.get_num() % p;
            mpz_class den = hc.get_den() % p;
            mpz_class inv;
            mpz_class pz = p;
            mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
            h[i] = (num * inv) % p;
        }
        for (long a = 0; a < p; ++a) {
            mpz_class acc = 0;
            for (std::size_t i = n + 1; i-- > 0;) {
                acc = (acc * a + h[i]) % p;
            }
            if (acc == 0) {
                return "p splits or ramifies with several places; one slope function is not defined";
            }
        }
        return {};
    }
    return "cannot certify a unique extension of v_p to this field";
}

} // namespace

Field Field::from_spec(FieldSpec spec) {
    auto impl = std::make_shared<Impl>();
    if (spec.prime && *spec.prime < 2) {
        throw Error(ErrorKind::ParseError, "prime p must be >= 2");
    }
    if (spec.prime) {
        for (long d = 2; d * d <= *spec.prime; ++d) {
            if (*spec.prime % d == 0) {
                throw Error(ErrorKind::ParseError, "p = " + std::to_string(*spec.prime) + " is not prime");
            }
        }
    }
    if (spec.kind == FieldSpec::Kind::Rationals) {
        spec.minpoly = {Rational(0), Rational(1)};
        spec.gen_valuation.reset();
        impl->degree = 1;
    } else {
        if (spec.minpoly.size() < 2) {
            throw Error(ErrorKind::ParseError, "minpoly must have degree >= 1");
        }
        if (spec.minpoly.back() != 1) {
            throw Error(ErrorKind::ParseError, "minpoly must be monic");
        }
        if (screen_reducible(spec.minpoly)) {
            throw Error(ErrorKind::PreconditionFailed, "minpoly is reducible over Q");
        }
        impl->degree = spec.minpoly.size() - 1;
    }
    impl->valuation_issue = check_valuation(spec);
    impl->valuation_ok = impl->valuation_issue.empty();
    impl->spec = std::move(spec);
    Field f;
    f.impl_ = std::move(impl);
    return f;
}

Field Field::rationals(std::optional<long> prime) {
    FieldSpec s;
    s.kind = FieldSpec::Kind::Rationals;
    s.prime = prime;
    return from_spec(std::move(s));
}

Field Field::extension(std::vector<Rational> minpoly, std::optional<long> prime, std::optional<Rational> gen_valuation) {
    FieldSpec s;
    s.kind = FieldSpec::Kind::Extension;
    s.minpoly = std::move(minpoly);
    s.prime = prime;
    s.gen_valuation = std::move(gen_valuation);
    return from_spec(std::move(s));
}

const FieldSpec& Field::spec() const { return impl_->spec; }
std::size_t Field::degree() const { return impl_->degree; }

bool Field::operator==(const Field& other) const {
    return impl_ == other.impl_ || impl_->spec == other.impl_->spec;
}

Elem Field::zero() const { return Elem(*this, std::vector<Rational>(degree(), Rational(0))); }

Elem Field::one() const { return from_rational(1); }

Elem Field::gen() const {
    if (is_rationals()) {
        throw Error(ErrorKind::ParseError, "the rationals have no generator g");
    }
    std::vector<Rational> c(degree(), Rational(0));
    if (degree() == 1) {
        c[0] = -spec().minpoly[0];
    } else {
        c[1] = 1;
    }
    return Elem(*this, std::move(c));
}

Elem Field::from_rational(const Rational& r) const {
    std::vector<Rational> c(degree(), Rational(0));
    c[0] = r;
    return Elem(*this, std::move(c));
}

Elem Field::from_int(long v) const { return from_rational(Rational(v)); }

Elem Field::parse(std::string_view text) const {
    auto coeffs = parse_expression(*this, text, false);
    return coeffs.empty() ? zero() : coeffs[0];
}

// ---------------------------------------------------------------------------
// Elem

Elem::Elem(Field field, std::vector<Rational> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != field_.degree()) {
        throw Error(ErrorKind::ShapeMismatch, "element coefficient length differs from field degree");
    }
}

void Elem::check_same(const Elem& b) const {
    if (!(field_ == b.field_)) {
        throw Error(ErrorKind::FieldMismatch, "operands live in different fields");
    }
}

bool Elem::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& r) { return r == 0; });
}

bool Elem::is_one() const {
    if (coeffs_[0] != 1) {
        return false;
    }
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& r) { return r == 0; });
}

bool Elem::as_rational(Rational& out) const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        if (coeffs_[i] != 0) {
            return false;
        }
    }
    out = coeffs_[0];
    return true;
}

Elem Elem::operator+(const Elem& b) const {
    check_same(b);
    Elem r = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        r.coeffs_[i] += b.coeffs_[i];
    }
    return r;
}

Elem Elem::operator-(const Elem& b) const {
    check_same(b);
    Elem r = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        r.coeffs_[i] -= b.coeffs_[i];
    }
    return r;
}

Elem Elem::operator-() const {
    Elem r = *this;
    for (auto& c : r.coeffs_) {
        c = -c;
    }
    return r;
}

Elem Elem::operator*(const Elem& b) const {
    check_same(b);
    const std::size_t n = coeffs_.size();
    if (n == 1) {
        return Elem(field_, {coeffs_[0] * b.coeffs_[0]});
    }
    std::vector<Rational> prod(2 * n - 1, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (coeffs_[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            prod[i + j] += coeffs_[i] * b.coeffs_[j];
        }
    }
    const auto& m = field_.spec().minpoly;
    for (std::size_t k = 2 * n - 1; k-- > n;) {
        if (prod[k] == 0) {
            continue;
        }
        Rational c = prod[k];
        for (std::size_t i = 0; i < n; ++i) {
            prod[k - n + i] -= c * m[i];
        }
        prod[k] = 0;
    }
    prod.resize(n);
    return Elem(field_, std::move(prod));
}

Elem Elem::inverse() const {
    if (is_zero()) {
        throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    }
    const std::size_t n = coeffs_.size();
    if (n == 1) {
        return Elem(field_, {1 / coeffs_[0]});
    }
    // Column j of the multiplication matrix is this * g^j.
    QMat mult(n, std::vector<Rational>(n));
    Elem basis = field_.one();
    Elem g(field_, [&] {
        std::vector<Rational> c(n, Rational(0));
        c[1] = 1;
        return c;
    }());
    for (std::size_t j = 0; j < n; ++j) {
        Elem col = *this * basis;
        for (std::size_t i = 0; i < n; ++i) {
            mult[i][j] = col.coeffs_[i];
        }
        basis = basis * g;
    }
    std::vector<Rational> e0(n, Rational(0));
    e0[0] = 1;
    auto sol = q_solve(std::move(mult), std::move(e0));
    if (!sol) {
        throw Error(ErrorKind::DivisionByZero, "element is a zero divisor (minpoly reducible?)");
    }
    return Elem(field_, std::move(*sol));
}

Elem Elem::operator/(const Elem& b) const {
    check_same(b);
    return *this * b.inverse();
}

Elem& Elem::operator+=(const Elem& b) { return *this = *this + b; }
Elem& Elem::operator-=(const Elem& b) { return *this = *this - b; }
Elem& Elem::operator*=(const Elem& b) { return *this = *this * b; }

Elem Elem::pow(long e) const {
    if (e < 0) {
        return inverse().pow(-e);
    }
    Elem result = field_.one();
    Elem base = *this;
    while (e > 0) {
        if (e & 1) {
            result *= base;
        }
        base *= base;
        e >>= 1;
    }
    return result;
}

Rational Elem::norm() const {
    const std::size_t n = coeffs_.size();
    if (n == 1) {
        return coeffs_[0];
    }
    QMat mult(n, std::vector<Rational>(n));
    std::vector<Rational> gc(n, Rational(0));
    gc[1] = 1;
    Elem g(field_, gc);
    Elem basis = field_.one();
    for (std::size_t j = 0; j < n; ++j) {
        Elem col = *this * basis;
        for (std::size_t i = 0; i < n; ++i) {
            mult[i][j] = col.coeffs_[i];
        }
        basis = basis * g;
    }
    return q_determinant(std::move(mult));
}

Rational Elem::valuation() const {
    if (!field_.impl_->valuation_ok) {
        throw Error(ErrorKind::ValuationUnavailable, field_.impl_->valuation_issue);
    }
    if (is_zero()) {
        throw Error(ErrorKind::ValuationUnavailable, "valuation of zero");
    }
    // With a unique place above p all conjugates share one valuation.
    Rational v = padic_valuation(norm(), *field_.spec().prime);
    return v / Rational(static_cast<long>(coeffs_.size()));
}

std::size_t Elem::term_count() const {
    return static_cast<std::size_t>(
        std::count_if(coeffs_.begin(), coeffs_.end(), [](const Rational& r) { return r != 0; }));
}

std::string Elem::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const Rational& c = coeffs_[i];
        if (c == 0) {
            continue;
        }
        Rational mag = abs(c);
        if (first) {
            if (c < 0) {
                out << "-";
            }
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (i == 0) {
            out << rational_to_string(mag);
            continue;
        }
        if (mag != 1) {
            out << rational_to_string(mag) << "*";
        }
        out << "g";
        if (i > 1) {
            out << "^" << i;
        }
    }
    if (first) {
        return "0";
    }
    return out.str();
}

bool Elem::operator==(const Elem& b) const { return field_ == b.field_ && coeffs_ == b.coeffs_; }

Elem field_arith(const Elem& a, const Elem& b, ArithOp op) {
    switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
    }
    throw Error(ErrorKind::InternalInconsistency, "unknown arithmetic op");
}

// ---------------------------------------------------------------------------
// Shared grammar parser: polynomials in T with field coefficients.

namespace {

using TPoly = std::vector<Elem>;

class ExprParser {
public:
    ExprParser(const Field& f, std::string_view text, bool allow_t) : f_(f), s_(text), allow_t_(allow_t) {}

    TPoly run() {
        TPoly v = expression();
        skip_ws();
        if (pos_ != s_.size()) {
            fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        }
        return trim(std::move(v));
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::ParseError, msg + " in '" + std::string(s_) + "'");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    TPoly trim(TPoly p) const {
        while (!p.empty() && p.back().is_zero()) {
            p.pop_back();
        }
        return p;
    }

    TPoly add(const TPoly& a, const TPoly& b, bool subtract) const {
        TPoly r(std::max(a.size(), b.size()), f_.zero());
        for (std::size_t i = 0; i < a.size(); ++i) {
            r[i] = a[i];
        }
        for (std::size_t i = 0; i < b.size(); ++i) {
            r[i] = subtract ? r[i] - b[i] : r[i] + b[i];
        }
        return trim(std::move(r));
    }

    TPoly mul(const TPoly& a, const TPoly& b) const {
        if (a.empty() || b.empty()) {
            return {};
        }
        TPoly r(a.size() + b.size() - 1, f_.zero());
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                r[i + j] += a[i] * b[j];
            }
        }
        return trim(std::move(r));
    }

    TPoly expression() {
        TPoly acc;
        bool negate = false;
        if (eat('-')) {
            negate = true;
        } else {
            eat('+');
        }
        acc = term();
        if (negate) {
            acc = add({}, acc, true);
        }
        while (true) {
            if (eat('+')) {
                acc = add(acc, term(), false);
            } else if (eat('-')) {
                acc = add(acc, term(), true);
            } else {
                return acc;
            }
        }
    }

    TPoly term() {
        TPoly acc = factor();
        while (true) {
            if (eat('*')) {
                acc = mul(acc, factor());
            } else if (eat('/')) {
                TPoly d = factor();
                if (d.size() > 1) {
                    fail("division by a polynomial in T");
                }
                if (d.empty()) {
                    throw Error(ErrorKind::DivisionByZero, "division by zero in '" + std::string(s_) + "'");
                }
                Elem inv = d[0].inverse();
                for (auto& c : acc) {
                    c = c * inv;
                }
            } else {
                return acc;
            }
        }
    }

    TPoly factor() {
        if (eat('-')) {
            return add({}, factor(), true);
        }
        TPoly base = primary();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("expected exponent");
            }
            long e = std::stol(std::string(s_.substr(start, pos_ - start)));
            TPoly r{f_.one()};
            for (long i = 0; i < e; ++i) {
                r = mul(r, base);
            }
            return r;
        }
        return base;
    }

    TPoly primary() {
        skip_ws();
        if (pos_ >= s_.size()) {
            fail("unexpected end of input");
        }
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            TPoly v = expression();
            if (!eat(')')) {
                fail("missing ')'");
            }
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            Rational r(mpz_class(std::string(s_.substr(start, pos_ - start))));
            return trim({f_.from_rational(r)});
        }
        if (c == 'g') {
            ++pos_;
            return trim({f_.gen()});
        }
        if (c == 'T') {
            ++pos_;
            if (!allow_t_) {
                fail("variable T not allowed in a field element");
            }
            return {f_.zero(), f_.one()};
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    const Field& f_;
    std::string_view s_;
    bool allow_t_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<Elem> parse_expression(const Field& f, std::string_view text, bool allow_t) {
    return ExprParser(f, text, allow_t).run();
}

// ---------------------------------------------------------------------------
// Vectors

Vector zero_vector(const Field& f, std::size_t n) { return Vector(n, f.zero()); }

bool is_zero(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](const Elem& e) { return e.is_zero(); });
}

Vector operator+(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::ShapeMismatch, "vector sizes differ");
    }
    Vector r = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] += b[i];
    }
    return r;
}

Vector operator-(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::ShapeMismatch, "vector sizes differ");
    }
    Vector r = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] -= b[i];
    }
    return r;
}

Vector operator*(const Elem& s, const Vector& v) {
    Vector r = v;
    for (auto& e : r) {
        e = s * e;
    }
    return r;
}

Elem dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size() || a.empty()) {
        if (a.size() == b.size()) {
            throw Error(ErrorKind::ShapeMismatch, "dot product of empty vectors has no field");
        }
        throw Error(ErrorKind::ShapeMismatch, "vector sizes differ");
    }
    Elem acc = a[0].field().zero();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_zero() && !b[i].is_zero()) {
            acc += a[i] * b[i];
        }
    }
    return acc;
}

Vector concat(const std::vector<Vector>& parts) {
    Vector r;
    for (const auto& p : parts) {
        r.insert(r.end(), p.begin(), p.end());
    }
    return r;
}

Vector slice(const Vector& v, std::size_t offset, std::size_t len) {
    if (offset + len > v.size()) {
        throw Error(ErrorKind::ShapeMismatch, "slice out of range");
    }
    return Vector(v.begin() + static_cast<std::ptrdiff_t>(offset),
                  v.begin() + static_cast<std::ptrdiff_t>(offset + len));
}

Vector kron(const Vector& a, const Vector& b) {
    Vector r;
    r.reserve(a.size() * b.size());
    for (const auto& x : a) {
        for (const auto& y : b) {
            r.push_back(x * y);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), entries_(rows * cols, field_.zero()) {}

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
    : field_(std::move(field)), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw Error(ErrorKind::ShapeMismatch, "entry count differs from rows*cols");
    }
}

Matrix Matrix::identity(const Field& f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = f.one();
    }
    return m;
}

Matrix Matrix::scalar(const Elem& s, std::size_t n) {
    Matrix m(s.field(), n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = s;
    }
    return m;
}

Matrix Matrix::from_columns(const Field& f, std::size_t rows, const std::vector<Vector>& cols) {
    Matrix m(f, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) {
            throw Error(ErrorKind::ShapeMismatch, "column length differs from row count");
        }
        for (std::size_t i = 0; i < rows; ++i) {
            m.at(i, j) = cols[j][i];
        }
    }
    return m;
}

Matrix Matrix::from_rows(const Field& f, std::size_t cols, const std::vector<Vector>& rows) {
    Matrix m(f, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) {
            throw Error(ErrorKind::ShapeMismatch, "row length differs from column count");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m.at(i, j) = rows[i][j];
        }
    }
    return m;
}

Vector Matrix::column(std::size_t j) const {
    Vector v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        v.push_back(at(i, j));
    }
    return v;
}

Vector Matrix::row(std::size_t i) const {
    return Vector(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

std::vector<Vector> Matrix::columns() const {
    std::vector<Vector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        out.push_back(column(j));
    }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t.at(j, i) = at(i, j);
        }
    }
    return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) {
        throw Error(ErrorKind::ShapeMismatch, "block out of range");
    }
    Matrix b(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            b.at(i, j) = at(r0 + i, c0 + j);
        }
    }
    return b;
}

bool Matrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Elem& e) { return e.is_zero(); });
}

Matrix Matrix::pow(std::size_t e) const {
    if (!is_square()) {
        throw Error(ErrorKind::ShapeMismatch, "power of a non-square matrix");
    }
    Matrix result = identity(field_, rows_);
    Matrix base = *this;
    while (e > 0) {
        if (e & 1U) {
            result = result * base;
        }
        e >>= 1U;
        if (e > 0) {
            base = base * base;
        }
    }
    return result;
}

Matrix Matrix::operator+(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) {
        throw Error(ErrorKind::ShapeMismatch, "matrix sum of different shapes");
    }
    Matrix r = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        r.entries_[k] += b.entries_[k];
    }
    return r;
}

Matrix Matrix::operator-(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) {
        throw Error(ErrorKind::ShapeMismatch, "matrix difference of different shapes");
    }
    Matrix r = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        r.entries_[k] -= b.entries_[k];
    }
    return r;
}

Matrix Matrix::operator-() const {
    Matrix r = *this;
    for (auto& e : r.entries_) {
        e = -e;
    }
    return r;
}

Matrix Matrix::operator*(const Matrix& b) const {
    if (cols_ != b.rows_) {
        throw Error(ErrorKind::ShapeMismatch, "matrix product: inner dimensions differ");
    }
    Matrix r(field_, rows_, b.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Elem& a = at(i, k);
            if (a.is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols_; ++j) {
                const Elem& bb = b.at(k, j);
                if (!bb.is_zero()) {
                    r.at(i, j) += a * bb;
                }
            }
        }
    }
    return r;
}

Vector Matrix::operator*(const Vector& v) const {
    if (v.size() != cols_) {
        throw Error(ErrorKind::ShapeMismatch, "matrix-vector product: length differs from column count");
    }
    Vector r = zero_vector(field_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!v[j].is_zero() && !at(i, j).is_zero()) {
                r[i] += at(i, j) * v[j];
            }
        }
    }
    return r;
}

bool Matrix::operator==(const Matrix& b) const {
    return rows_ == b.rows_ && cols_ == b.cols_ && entries_ == b.entries_;
}

Matrix operator*(const Elem& s, const Matrix& m) {
    std::vector<Elem> e = m.entries();
    for (auto& x : e) {
        x = s * x;
    }
    return Matrix(m.field(), m.rows(), m.cols(), std::move(e));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Elem& x = a.at(i, j);
            if (x.is_zero()) {
                continue;
            }
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    r.at(i * b.rows() + k, j * b.cols() + l) = x * b.at(k, l);
                }
            }
        }
    }
    return r;
}

Matrix hstack(const std::vector<Matrix>& blocks) {
    if (blocks.empty()) {
        throw Error(ErrorKind::ShapeMismatch, "hstack of nothing");
    }
    std::size_t rows = blocks[0].rows(), cols = 0;
    for (const auto& b : blocks) {
        if (b.rows() != rows) {
            throw Error(ErrorKind::ShapeMismatch, "hstack: row counts differ");
        }
        cols += b.cols();
    }
    Matrix r(blocks[0].field(), rows, cols);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                r.at(i, off + j) = b.at(i, j);
            }
        }
        off += b.cols();
    }
    return r;
}

Matrix vstack(const std::vector<Matrix>& blocks) {
    if (blocks.empty()) {
        throw Error(ErrorKind::ShapeMismatch, "vstack of nothing");
    }
    std::size_t cols = blocks[0].cols(), rows = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols) {
            throw Error(ErrorKind::ShapeMismatch, "vstack: column counts differ");
        }
        rows += b.rows();
    }
    Matrix r(blocks[0].field(), rows, cols);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                r.at(off + i, j) = b.at(i, j);
            }
        }
        off += b.rows();
    }
    return r;
}

Matrix block_diag(const std::vector<Matrix>& blocks) {
    if (blocks.empty()) {
        throw Error(ErrorKind::ShapeMismatch, "block_diag of nothing");
    }
    std::size_t rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix r(blocks[0].field(), rows, cols);
    std::size_t ro = 0, co = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                r.at(ro + i, co + j) = b.at(i, j);
            }
        }
        ro += b.rows();
        co += b.cols();
    }
    return r;
}

// ---------------------------------------------------------------------------
// Elimination

Echelon rref(const Matrix& m) {
    Matrix a = m;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
        std::size_t piv = row;
        while (piv < a.rows() && a.at(piv, c).is_zero()) {
            ++piv;
        }
        if (piv == a.rows()) {
            continue;
        }
        if (piv != row) {
            for (std::size_t k = 0; k < a.cols(); ++k) {
                std::swap(a.at(piv, k), a.at(row, k));
            }
        }
        Elem inv = a.at(row, c).inverse();
        for (std::size_t k = c; k < a.cols(); ++k) {
            if (!a.at(row, k).is_zero()) {
                a.at(row, k) = a.at(row, k) * inv;
            }
        }
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == row || a.at(r, c).is_zero()) {
                continue;
            }
            Elem f = a.at(r, c);
            for (std::size_t k = c; k < a.cols(); ++k) {
                if (!a.at(row, k).is_zero()) {
                    a.at(r, k) -= f * a.at(row, k);
                }
            }
        }
        pivots.push_back(c);
        ++row;
    }
    return {std::move(a), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

Matrix kernel(const Matrix& m) {
    Echelon e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) {
        is_pivot[p] = true;
    }
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) {
            continue;
        }
        Vector v = zero_vector(m.field(), m.cols());
        v[free] = m.field().one();
        for (std::size_t r = 0; r < e.pivots.size(); ++r) {
            v[e.pivots[r]] = -e.reduced.at(r, free);
        }
        basis.push_back(std::move(v));
    }
    return Matrix::from_columns(m.field(), m.cols(), basis);
}

Elem determinant(const Matrix& m) {
    if (!m.is_square()) {
        throw Error(ErrorKind::ShapeMismatch, "determinant of a non-square matrix");
    }
    Matrix a = m;
    const std::size_t n = a.rows();
    Elem det = m.field().one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a.at(piv, c).is_zero()) {
            ++piv;
        }
        if (piv == n) {
            return m.field().zero();
        }
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(a.at(piv, k), a.at(c, k));
            }
            det = -det;
        }
        det *= a.at(c, c);
        Elem inv = a.at(c, c).inverse();
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a.at(r, c).is_zero()) {
                continue;
            }
            Elem f = a.at(r, c) * inv;
            for (std::size_t k = c; k < n; ++k) {
                a.at(r, k) -= f * a.at(c, k);
            }
        }
    }
    return det;
}

Matrix inverse(const Matrix& m) {
    if (!m.is_square()) {
        throw Error(ErrorKind::ShapeMismatch, "inverse of a non-square matrix");
    }
    const std::size_t n = m.rows();
    Echelon e = rref(hstack({m, Matrix::identity(m.field(), n)}));
    if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) {
        throw Error(ErrorKind::DivisionByZero, "matrix is singular");
    }
    return e.reduced.block(0, n, n, n);
}

bool is_invertible(const Matrix& m) { return m.is_square() && rank(m) == m.rows(); }

Matrix column_space(const Matrix& m) {
    Echelon e = rref(m.transpose());
    return e.reduced.block(0, 0, e.pivots.size(), m.rows()).transpose();
}

Matrix subspace_sum(const Matrix& a, const Matrix& b) { return column_space(hstack({a, b})); }

Matrix subspace_intersection(const Matrix& a, const Matrix& b) {
    if (a.cols() == 0 || b.cols() == 0) {
        return Matrix(a.field(), a.rows(), 0);
    }
    Matrix k = kernel(hstack({a, -b}));
    Matrix coeffs = k.block(0, 0, a.cols(), k.cols());
    return column_space(a * coeffs);
}

bool subspace_contains(const Matrix& space, const Vector& v) {
    if (is_zero(v)) {
        return true;
    }
    if (space.cols() == 0) {
        return false;
    }
    return rank(hstack({space, Matrix::from_columns(space.field(), space.rows(), {v})})) == rank(space);
}

bool subspace_contains(const Matrix& space, const Matrix& sub) {
    if (sub.cols() == 0 || sub.is_zero()) {
        return true;
    }
    if (space.cols() == 0) {
        return false;
    }
    return rank(hstack({space, sub})) == rank(space);
}

SolveResult solve_or_image(const Matrix& m, const Matrix& target) {
    if (m.rows() != target.rows()) {
        throw Error(ErrorKind::ShapeMismatch, "solve: target rows differ from matrix rows");
    }
    const std::size_t n = m.cols();
    Echelon e = rref(hstack({m, target}));
    SolveResult out;
    // A pivot landing in the target block means the system is inconsistent.
    bool consistent = e.pivots.empty() || e.pivots.back() < n;
    if (consistent) {
        Matrix x(m.field(), n, target.cols());
        for (std::size_t r = 0; r < e.pivots.size(); ++r) {
            for (std::size_t j = 0; j < target.cols(); ++j) {
                x.at(e.pivots[r], j) = e.reduced.at(r, n + j);
            }
        }
        out.solvable = true;
        out.solution = std::move(x);
        return out;
    }
    Matrix left = kernel(m.transpose());
    for (std::size_t k = 0; k < left.cols(); ++k) {
        Vector y = left.column(k);
        for (std::size_t j = 0; j < target.cols(); ++j) {
            if (!dot(y, target.column(j)).is_zero()) {
                out.certificate = std::move(y);
                return out;
            }
        }
    }
    throw Error(ErrorKind::InternalInconsistency, "inconsistent system without a separating functional");
}

std::optional<Vector> solve_vector(const Matrix& m, const Vector& target) {
    if (target.size() != m.rows()) {
        throw Error(ErrorKind::ShapeMismatch, "solve: target length differs from matrix rows");
    }
    if (m.rows() == 0) {
        return zero_vector(m.field(), m.cols());
    }
    SolveResult r = solve_or_image(m, Matrix::from_columns(m.field(), m.rows(), {target}));
    if (!r.solvable) {
        return std::nullopt;
    }
    return r.solution->column(0);
}

} // namespace fpsyn
