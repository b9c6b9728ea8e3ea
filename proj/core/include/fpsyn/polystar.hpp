#pragma once

// Polynomials with constant term 1, the composed product, Bezout pairs and
// evaluation at operators.

#include <string>
#include <string_view>
#include <vector>

#include "fpsyn/exactfield.hpp"

namespace fpsyn {

/// Univariate polynomial, ascending coefficients, no trailing zeros.
using UPoly = std::vector<Elem>;

UPoly upoly_trim(UPoly p);
UPoly upoly_add(const UPoly& a, const UPoly& b);
UPoly upoly_sub(const UPoly& a, const UPoly& b);
UPoly upoly_mul(const UPoly& a, const UPoly& b);
UPoly upoly_scale(const Elem& s, const UPoly& a);
/// Long division by a nonzero divisor; returns {quotient, remainder}.
std::pair<UPoly, UPoly> upoly_divmod(const UPoly& a, const UPoly& b);
Elem upoly_eval(const Field& f, const UPoly& p, const Elem& x);
/// Canonical text, e.g. "1 - 2*T + (1 + g)*T^2".
std::string upoly_to_string(const Field& f, const UPoly& p, std::string_view var = "T");

class OnePoly {
public:
    OnePoly(Field field, std::vector<Elem> coeffs);

    static OnePoly one(const Field& f);
    static OnePoly parse(const Field& f, std::string_view text);

    [[nodiscard]] const Field& field() const { return field_; }
    [[nodiscard]] const std::vector<Elem>& coeffs() const { return coeffs_; }
    [[nodiscard]] std::size_t degree() const { return coeffs_.size() - 1; }
    [[nodiscard]] Elem eval(const Elem& x) const;
    [[nodiscard]] std::string to_string() const;

    OnePoly operator*(const OnePoly& b) const;
    bool operator==(const OnePoly& b) const { return coeffs_ == b.coeffs_; }

private:
    Field field_;
    std::vector<Elem> coeffs_;
};

/// Dense table; coeff(i, j) multiplies T1^i T2^j.
class BivarPoly {
public:
    explicit BivarPoly(Field field) : field_(std::move(field)) {}
    BivarPoly(Field field, std::vector<std::vector<Elem>> table);

    [[nodiscard]] const Field& field() const { return field_; }
    /// Rows indexed by the T1 exponent.
    [[nodiscard]] const std::vector<std::vector<Elem>>& table() const { return table_; }
    [[nodiscard]] Elem coeff(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const Elem& value);
    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] std::string to_string() const;

    BivarPoly operator+(const BivarPoly& b) const;
    BivarPoly operator-(const BivarPoly& b) const;
    BivarPoly operator*(const BivarPoly& b) const;
    bool operator==(const BivarPoly& b) const;

    static BivarPoly in_t1(const Field& f, const UPoly& p);
    static BivarPoly in_t2(const Field& f, const UPoly& p);
    /// p(T1 * T2).
    static BivarPoly in_product(const Field& f, const UPoly& p);

private:
    void normalize();
    Field field_;
    std::vector<std::vector<Elem>> table_;
};

/// Composed product: root multiset is the pairwise products of the roots.
OnePoly star(const OnePoly& p, const OnePoly& q);

struct BezoutPair {
    BivarPoly a;
    BivarPoly b;
};

/// Canonical pair with a(T1,T2) P(T1) + b(T1,T2) Q(T2) = (P*Q)(T1 T2).
BezoutPair bezout_star(const OnePoly& p, const OnePoly& q);
/// Expands both sides of the defining identity.
bool bezout_identity_holds(const OnePoly& p, const OnePoly& q, const BezoutPair& ab);

/// P(scale * M).
Matrix eval_at_operator(const OnePoly& p, const Matrix& m, const Elem& scale);
Matrix eval_at_operator(const UPoly& p, const Matrix& m, const Elem& scale);
/// sum_ij c_ij kron(X1^i, X2^j).
Matrix eval_bivar(const BivarPoly& a, const Matrix& x1, const Matrix& x2);

/// T^d P(1/T) normalized to constant term 1.
OnePoly reflect(const OnePoly& p);
/// P(T) = P'(T^d); throws NoSuchFactorization otherwise.
OnePoly factor_through_power(const OnePoly& p, std::size_t d);

} // namespace fpsyn
