#pragma once

// Linearized filtered (phi, N)-modules.

#include <string>
#include <vector>

#include "fpsyn/exactfield.hpp"
#include "fpsyn/polystar.hpp"

namespace fpsyn {

/// One jump of a decreasing filtration: Fil^i for every i in (previous index, index]
/// is the span of `basis` (columns in D_K coordinates).
struct FilStep {
    long index = 0;
    Matrix basis;
};

/// A decreasing, exhaustive, separated filtration on an n-dimensional space,
/// kept as jumps with canonical bases, sorted by increasing index.
class Filtration {
public:
    Filtration(Field field, std::size_t dim, std::vector<FilStep> steps);
    /// Builds the canonical jump list from samples (i, F(i)) covering every jump.
    static Filtration from_samples(Field field, std::size_t dim, std::vector<FilStep> samples);
    /// Fil^i = all for i <= index, 0 above.
    static Filtration single_jump(const Field& field, std::size_t dim, long index);

    [[nodiscard]] const std::vector<FilStep>& steps() const { return steps_; }
    [[nodiscard]] std::size_t dim() const { return dim_; }
    /// Canonical basis of Fil^i.
    [[nodiscard]] Matrix at(long i) const;
    [[nodiscard]] Filtration shifted(long by) const;
    bool operator==(const Filtration& b) const;

private:
    Field field_;
    std::size_t dim_;
    std::vector<FilStep> steps_;
};

struct FilPhiNModule {
    Field field;
    long p = 2;
    long f = 1;
    std::size_t n = 0;
    Matrix phi;
    Matrix N;
    Matrix iota;
    Filtration fil;

    [[nodiscard]] Elem q() const;
    [[nodiscard]] Matrix fil_basis(long i) const { return fil.at(i); }
};

FilPhiNModule make_module(Field field, long p, long f, Matrix phi, Matrix N, Matrix iota, std::vector<FilStep> fil);
/// n = 1, Phi = 1, N = 0, Fil^0 = all, Fil^1 = 0.
FilPhiNModule unit_module(const Field& field, long p, long f = 1);
/// unit twisted by 1: Phi = q^-1, Fil^-1 = all, Fil^0 = 0.
FilPhiNModule qp1_model(const Field& field, long p, long f = 1);

struct CheckItem {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckItem> items;
    [[nodiscard]] bool ok() const;
    [[nodiscard]] std::string first_failure() const;
};

ValidationReport validate(const FilPhiNModule& d);
/// Throws InvalidModule naming the first failed check.
void require_valid(const FilPhiNModule& d);

FilPhiNModule tate_twist(const FilPhiNModule& d, long r);
FilPhiNModule tensor(const FilPhiNModule& a, const FilPhiNModule& b);
/// D*(1) in the dual basis; pairs with D into the Qp(1)-model via the dot product.
FilPhiNModule dual_twist(const FilPhiNModule& d);

struct HodgeNewton {
    Rational t_h;
    Rational t_n;
};

Rational hodge_number(const Filtration& fil);
HodgeNewton hodge_newton(const FilPhiNModule& d);

struct SubobjectCheck {
    std::vector<std::size_t> eigen_indices;
    Rational t_h;
    Rational t_n;
    bool ok = false;
};

struct WAReport {
    bool weakly_admissible = false;
    std::vector<Elem> eigenvalues;
    std::vector<SubobjectCheck> subobjects;
    std::vector<std::string> violations;
};

WAReport check_weak_admissibility(const FilPhiNModule& d);

/// Monic characteristic polynomial, ascending coefficients.
UPoly characteristic_polynomial(const Matrix& m);
/// chi(T) / chi(0) for invertible m; annihilates m.
OnePoly annihilating_poly(const Matrix& m);
/// Distinct rational roots of a polynomial with rational coefficients.
std::vector<Rational> rational_roots(const UPoly& p);

} // namespace fpsyn
