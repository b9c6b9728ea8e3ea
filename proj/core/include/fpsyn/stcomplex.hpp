#pragma once

// The three-term complexes C_{st,L,P}(D), their cohomology and products.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "fpsyn/cochain.hpp"
#include "fpsyn/phinmod.hpp"
#include "fpsyn/polystar.hpp"

namespace fpsyn {

/// Degree 0: (u, v) with v in coordinates of the canonical Fil^0 basis.
/// Degree 1: (w, x, y). Degree 2: z.
struct StComplex {
    FilPhiNModule module;
    OnePoly P;
    Matrix fil0;
    Matrix d0;
    Matrix d1;

    [[nodiscard]] std::size_t dim(int k) const;
    /// C^k -> C^{k+1}, with zero maps outside 0..1.
    [[nodiscard]] Matrix differential(int k) const;
};

using StComplexPtr = std::shared_ptr<const StComplex>;

StComplexPtr st_build(const FilPhiNModule& d, const OnePoly& p);

struct StClass {
    StComplexPtr complex;
    int degree = 0;
    Vector cocycle;

    [[nodiscard]] Vector component(const std::string& name) const;
    /// v as a vector of D_K.
    [[nodiscard]] Vector v_ambient() const;
};

/// Assemble a cochain from named components (v given in D_K coordinates and
/// required to lie in Fil^0). Throws PreconditionFailed when not a cocycle.
StClass make_st_class(const StComplexPtr& c, int degree, const std::map<std::string, Vector>& components);
StClass st_class_from_vector(const StComplexPtr& c, int degree, Vector cocycle);

struct StCohomology {
    std::array<CohomologyGroup, 3> groups;
    [[nodiscard]] std::array<std::size_t, 3> dims() const;
    [[nodiscard]] StClass rep(const StComplexPtr& c, int degree, std::size_t index) const;
};

StCohomology st_cohomology(const StComplex& c);
bool st_is_coboundary(const StComplex& c, int degree, const Vector& v);

/// The product table; lambda defaults to 0 and ab to bezout_star(P1, P2).
StClass st_cup(const StClass& c1, const StClass& c2, const Elem& lambda, const std::optional<BezoutPair>& ab = std::nullopt);
StClass st_cup(const StClass& c1, const StClass& c2, const Elem& lambda, const std::optional<BezoutPair>& ab,
               const StComplexPtr& target);

bool is_convenient(const FilPhiNModule& d, const OnePoly& p);

/// D_K / Fil^0 with canonical coset representatives (zero at the pivots of Fil^0).
struct FilQuotient {
    Matrix sub;
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> free_coords;

    explicit FilQuotient(Matrix fil0);
    [[nodiscard]] Vector reduce(const Vector& y) const;
    [[nodiscard]] Vector coords(const Vector& y) const;
    [[nodiscard]] Vector from_coords(const Vector& c) const;
};

/// y in D_K -> class of (0, 0, y).
StClass convenient_forward(const StComplexPtr& c, const Vector& y);
/// class of (w, x, y) -> y - iota(P(Phi)^-1 w), reduced modulo Fil^0.
Vector convenient_inverse(const StClass& c);

/// y - P(q^-1)^-1 iota w on the Qp(1)-model.
Elem trace_qp1(const StClass& c);

/// The chain map to the complex for P*Q.
StClass change_of_P(const StClass& c, const OnePoly& q);
StClass change_of_P(const StClass& c, const OnePoly& q, const StComplexPtr& target);

/// D tensor D*(1) -> the Qp(1)-model: sum_i e_i (x) e_i^*.
Matrix contraction(const Field& f, std::size_t n);

struct PairingEntry {
    std::size_t h1_index = 0;
    std::size_t h0_index = 0;
    std::string perturbation;
    Elem left;
    Elem right;
    bool equal = false;
};

struct PairingReport {
    Elem lambda;
    BezoutPair ab;
    std::vector<PairingEntry> entries;
    [[nodiscard]] bool all_equal() const;
};

/// <convenient_inverse(c), eta> against trace_qp1(contract(c cup eta)) for
/// c in H^1(D, P) and eta in H^0(D*(1), Q).
PairingReport pairing_check(const FilPhiNModule& d, const OnePoly& p, const OnePoly& q, const Elem& lambda);

} // namespace fpsyn
