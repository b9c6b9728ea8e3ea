#pragma once

// Exact coefficient fields (Q or Q[g]/(m)) and dense linear algebra over them.

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpsyn/error.hpp"

namespace fpsyn {

using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string rational_to_string(const Rational& r);

/// p-adic valuation of a nonzero rational.
Rational padic_valuation(const Rational& r, long p);

struct FieldSpec {
    enum class Kind { Rationals, Extension };
    Kind kind = Kind::Rationals;
    /// Monic minimal polynomial of the generator g, ascending coefficients.
    std::vector<Rational> minpoly;
    std::optional<long> prime;
    std::optional<Rational> gen_valuation;

    bool operator==(const FieldSpec&) const = default;
};

class Elem;

/// Shared, immutable handle to a coefficient field.
class Field {
public:
    /// The rationals, optionally with a prime for valuations.
    static Field rationals(std::optional<long> prime = std::nullopt);
    /// Q[g]/(minpoly). Runs the small-degree irreducibility screen.
    static Field extension(std::vector<Rational> minpoly, std::optional<long> prime = std::nullopt,
                           std::optional<Rational> gen_valuation = std::nullopt);
    static Field from_spec(FieldSpec spec);

    [[nodiscard]] const FieldSpec& spec() const;
    [[nodiscard]] std::size_t degree() const;
    [[nodiscard]] bool is_rationals() const { return spec().kind == FieldSpec::Kind::Rationals; }

    [[nodiscard]] Elem zero() const;
    [[nodiscard]] Elem one() const;
    [[nodiscard]] Elem gen() const;
    [[nodiscard]] Elem from_rational(const Rational& r) const;
    [[nodiscard]] Elem from_int(long v) const;
    [[nodiscard]] Elem parse(std::string_view text) const;

    bool operator==(const Field& other) const;

private:
    struct Impl;
    Field() = default;
    std::shared_ptr<const Impl> impl_;
    friend class Elem;
};

/// An element in the power basis of the generator. Coefficient vector always
/// has length degree(); rationals are kept canonical by GMP.
class Elem {
public:
    Elem(Field field, std::vector<Rational> coeffs);

    [[nodiscard]] const Field& field() const { return field_; }
    [[nodiscard]] const std::vector<Rational>& coeffs() const { return coeffs_; }

    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] bool is_one() const;
    /// True when the element lies in Q; fills `out` in that case.
    bool as_rational(Rational& out) const;

    Elem operator+(const Elem& b) const;
    Elem operator-(const Elem& b) const;
    Elem operator*(const Elem& b) const;
    Elem operator/(const Elem& b) const;
    Elem operator-() const;
    Elem& operator+=(const Elem& b);
    Elem& operator-=(const Elem& b);
    Elem& operator*=(const Elem& b);

    [[nodiscard]] Elem inverse() const;
    [[nodiscard]] Elem pow(long e) const;
    /// Norm down to Q (determinant of multiplication).
    [[nodiscard]] Rational norm() const;
    /// Valuation normalized by v(p) = 1.
    [[nodiscard]] Rational valuation() const;

    [[nodiscard]] std::string to_string() const;
    /// Number of nonzero power-basis terms; used when deciding on parentheses.
    [[nodiscard]] std::size_t term_count() const;

    bool operator==(const Elem& b) const;

private:
    void check_same(const Elem& b) const;
    Field field_;
    std::vector<Rational> coeffs_;
};

/// Parse an expression in the shared grammar (rationals, `g`, `T`, `+ - * ^`,
/// parentheses) into coefficients of ascending powers of T. With
/// `allow_t == false` any occurrence of T is a ParseError.
std::vector<Elem> parse_expression(const Field& f, std::string_view text, bool allow_t);

enum class ArithOp { Add, Sub, Mul, Div };
Elem field_arith(const Elem& a, const Elem& b, ArithOp op);

using Vector = std::vector<Elem>;

Vector zero_vector(const Field& f, std::size_t n);
bool is_zero(const Vector& v);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const Elem& s, const Vector& v);
Elem dot(const Vector& a, const Vector& b);
Vector concat(const std::vector<Vector>& parts);
Vector slice(const Vector& v, std::size_t offset, std::size_t len);
/// Tensor product of coordinate vectors (matches kron of matrices).
Vector kron(const Vector& a, const Vector& b);

class Matrix {
public:
    Matrix(Field field, std::size_t rows, std::size_t cols);
    Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Elem> entries);

    static Matrix identity(const Field& f, std::size_t n);
    static Matrix from_columns(const Field& f, std::size_t rows, const std::vector<Vector>& cols);
    static Matrix from_rows(const Field& f, std::size_t cols, const std::vector<Vector>& rows);
    static Matrix scalar(const Elem& s, std::size_t n);

    [[nodiscard]] const Field& field() const { return field_; }
    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] const std::vector<Elem>& entries() const { return entries_; }

    Elem& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    [[nodiscard]] const Elem& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    [[nodiscard]] Vector column(std::size_t j) const;
    [[nodiscard]] Vector row(std::size_t i) const;
    [[nodiscard]] std::vector<Vector> columns() const;
    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] bool is_square() const { return rows_ == cols_; }
    [[nodiscard]] Matrix pow(std::size_t e) const;

    Matrix operator+(const Matrix& b) const;
    Matrix operator-(const Matrix& b) const;
    Matrix operator*(const Matrix& b) const;
    Matrix operator-() const;
    Vector operator*(const Vector& v) const;
    bool operator==(const Matrix& b) const;

private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Elem> entries_;
};

Matrix operator*(const Elem& s, const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix hstack(const std::vector<Matrix>& blocks);
Matrix vstack(const std::vector<Matrix>& blocks);
/// Block-diagonal assembly.
Matrix block_diag(const std::vector<Matrix>& blocks);

struct Echelon {
    Matrix reduced;
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form; pivot is the first nonzero entry found scanning
/// down each column.
Echelon rref(const Matrix& m);
std::size_t rank(const Matrix& m);
/// Columns form a basis of ker m (one vector per free column, in order).
Matrix kernel(const Matrix& m);
Elem determinant(const Matrix& m);
Matrix inverse(const Matrix& m);
bool is_invertible(const Matrix& m);

/// Canonical basis (as columns) of the column span: the transposed nonzero
/// rows of rref(m^T). Two matrices span the same space iff this agrees.
Matrix column_space(const Matrix& m);
Matrix subspace_sum(const Matrix& a, const Matrix& b);
Matrix subspace_intersection(const Matrix& a, const Matrix& b);
bool subspace_contains(const Matrix& space, const Vector& v);
bool subspace_contains(const Matrix& space, const Matrix& sub);

struct SolveResult {
    bool solvable = false;
    /// cols(M) x cols(target) when solvable.
    std::optional<Matrix> solution;
    /// Row functional y with y*M = 0 and y*target != 0 when not solvable.
    std::optional<Vector> certificate;
};

/// Solve M X = target, or certify that some column of target leaves im(M).
SolveResult solve_or_image(const Matrix& m, const Matrix& target);
std::optional<Vector> solve_vector(const Matrix& m, const Vector& target);

} // namespace fpsyn
