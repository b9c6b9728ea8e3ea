#pragma once

// Synthetic Hyodo-Kato data, their P-syntomic complexes, products, descent
// pieces, the trace and the triple symbol.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpsyn/cochain.hpp"
#include "fpsyn/phinmod.hpp"
#include "fpsyn/polystar.hpp"
#include "fpsyn/stcomplex.hpp"

namespace fpsyn {

/// Finite bounded DGA concentrated in degrees 0..top.
struct DGAComplex {
    std::vector<std::size_t> dims;
    /// d[k] : degree k -> degree k+1, for k = 0..top-1.
    std::vector<Matrix> d;
    /// (i, j) -> matrix of shape dims[i+j] x (dims[i] * dims[j]) acting on kron(a, b).
    /// Missing entries are zero.
    std::map<std::pair<int, int>, Matrix> mult;
    Vector unit;

    [[nodiscard]] int top() const { return static_cast<int>(dims.size()) - 1; }
    [[nodiscard]] std::size_t dim(int k) const;
    /// Degree k -> k+1 with zero maps outside the stored range.
    [[nodiscard]] Matrix diff(const Field& f, int k) const;
    [[nodiscard]] Matrix mult_matrix(const Field& f, int i, int j) const;
    [[nodiscard]] Vector multiply(const Field& f, int i, const Vector& a, int j, const Vector& b) const;
    [[nodiscard]] CohomologyGroup cohomology(const Field& f, int k) const;
};

struct HKDatum {
    Field field;
    long p = 2;
    long f = 1;
    DGAComplex A;
    DGAComplex B;
    /// Per degree of A: Phi[k], N[k] square; iota[k] : A^k -> B^k.
    std::vector<Matrix> phi;
    std::vector<Matrix> N;
    std::vector<Matrix> iota;
    /// Per degree of B.
    std::vector<Filtration> fil;

    [[nodiscard]] Elem q() const;
    [[nodiscard]] Matrix phi_at(int k) const;
    [[nodiscard]] Matrix n_at(int k) const;
    [[nodiscard]] Matrix iota_at(int k) const;
    [[nodiscard]] Matrix fil_at(int k, long i) const;
};

using HKDatumPtr = std::shared_ptr<const HKDatum>;

ValidationReport validate(const HKDatum& d);
/// Throws InvalidDatum naming the first failed check.
void require_valid(const HKDatum& d);

/// H^j(A) with induced Phi, N; D_K = H^j(B) in its representative basis.
FilPhiNModule induced_module(const HKDatum& d, int j);

struct SynComplex {
    HKDatumPtr datum;
    OnePoly P;
    long r = 0;
    int top = 0;
    /// Canonical basis of Fil^r B^n per degree.
    std::vector<Matrix> fil_r;
    std::vector<Matrix> diffs;

    [[nodiscard]] std::size_t dim(int n) const;
    [[nodiscard]] Matrix differential(int n) const;
    /// Offsets of (u, v, w, x, y, z) in degree n; the seventh entry is the total.
    [[nodiscard]] std::vector<std::size_t> offsets(int n) const;
};

using SynComplexPtr = std::shared_ptr<const SynComplex>;

SynComplexPtr syn_build(const HKDatumPtr& d, const OnePoly& p, long r);

struct SynClass {
    SynComplexPtr complex;
    int degree = 0;
    Vector cochain;

    /// One of u, v, w, x, y, z (v in Fil^r coordinates).
    [[nodiscard]] Vector component(const std::string& name) const;
    [[nodiscard]] Vector v_ambient() const;
};

/// Components by name; v given as a vector of B^n lying in Fil^r.
SynClass make_syn_cochain(const SynComplexPtr& c, int n, const std::map<std::string, Vector>& parts);
bool syn_is_cocycle(const SynClass& c);

CohomologyGroup syn_cohomology(const SynComplex& c, int n);
std::vector<std::size_t> syn_dims(const SynComplex& c);
bool syn_is_coboundary(const SynClass& c);

/// Bilinear products left^i x right^j -> target^{i+j} on both sides of two data.
struct Pairing {
    HKDatumPtr left;
    HKDatumPtr right;
    HKDatumPtr target;
    std::map<std::pair<int, int>, Matrix> multA;
    std::map<std::pair<int, int>, Matrix> multB;

    static Pairing self(const HKDatumPtr& d);
    [[nodiscard]] Vector mulA(int i, const Vector& a, int j, const Vector& b) const;
    [[nodiscard]] Vector mulB(int i, const Vector& a, int j, const Vector& b) const;
};

SynClass syn_cup(const SynClass& c1, const SynClass& c2, const Elem& lambda,
                 const std::optional<BezoutPair>& ab = std::nullopt);
SynClass syn_cup(const SynClass& c1, const SynClass& c2, const Elem& lambda, const std::optional<BezoutPair>& ab,
                 const Pairing& pairing, const SynComplexPtr& target = nullptr);

/// (w, x) by Q(Phi_r), z by Q(q Phi_r), into the complex for P * Q.
SynClass syn_change_of_P(const SynClass& c, const OnePoly& q, const SynComplexPtr& target = nullptr);
/// The datum with Phi^d and q^d.
HKDatum datum_power(const HKDatum& d, long level);
/// Identity on cochains, from (d, P) to (datum_power(d, level), P') with P(T) = P'(T^level).
SynClass syn_change_of_level(const SynClass& c, long level, const SynComplexPtr& target = nullptr);

/// Knight's move map for HK degree j: H^0_st(D^j(r)) -> H^2_st(D^{j-1}(r)) in the bases below.
using KnightMaps = std::map<int, Matrix>;

struct GradedPiece {
    std::size_t dim = 0;
    std::vector<Vector> basis;
};

struct DescentGradeds {
    int degree = 0;
    std::array<GradedPiece, 3> pieces;
    [[nodiscard]] std::size_t total() const;
};

/// Basis of H^0_st(D^j(r), P) as vectors of H^j(A) coordinates.
Matrix descent_h0_basis(const HKDatum& d, const OnePoly& p, long r, int j);
/// Size of the quotient H^j(A) / (im P(qPhi_r) + im N).
std::size_t descent_h2_dim(const HKDatum& d, const OnePoly& p, long r, int j);
DescentGradeds descent_gradeds(const HKDatum& d, const OnePoly& p, long r, int i, const KnightMaps& knight = {});

struct CurveDatum {
    HKDatumPtr X;
    /// Compact-support companion; null in the proper case.
    HKDatumPtr Xc;
    /// Per degree, A- and B-side maps Xc -> X.
    std::vector<Matrix> to_X_A;
    std::vector<Matrix> to_X_B;
    /// Xc^i x X^j -> Xc^{i+j}.
    std::map<std::pair<int, int>, Matrix> actA;
    std::map<std::pair<int, int>, Matrix> actB;
    /// Functional on the top degree of B on the compact side.
    Vector trace;

    [[nodiscard]] bool proper() const { return Xc == nullptr; }
    [[nodiscard]] const HKDatumPtr& compact() const { return Xc ? Xc : X; }
    [[nodiscard]] Pairing action() const;
};

void require_valid(const CurveDatum& c);

/// tr(y) - P(q^-1)^-1 tr(iota w) on a class of degree top + 1.
Elem syn_trace(const CurveDatum& curve, const SynClass& c);

/// Which projection a lift must hit.
enum class LiftSide { HK, dR };

struct LiftTarget {
    LiftSide side = LiftSide::HK;
    /// A cocycle of A^n or B^n.
    Vector cocycle;
};

SynClass lift_to_syn(const SynComplexPtr& c, int n, const LiftTarget& target);
/// Dimension of the classes in H^n_syn whose projection vanishes.
std::size_t lift_ambiguity(const SynComplex& c, int n, LiftSide side);

struct TripleInputs {
    LiftTarget eta;
    LiftTarget omega1;
    LiftTarget omega2;
    OnePoly P0;
    OnePoly P1;
    OnePoly P2;
    Elem lambda;
    KnightMaps knight;
};

struct TripleResult {
    Elem value;
    SynClass eta_lift;
    SynClass omega1_lift;
    SynClass omega2_lift;
    SynClass product;
};

/// Checks every bullet of the assumption, throwing AssumptionViolated.
void check_triple_assumption(const CurveDatum& curve, const TripleInputs& in);
TripleResult triple_symbol(const CurveDatum& curve, const TripleInputs& in);
/// As above with caller-chosen lifts (cocycles over the right complexes).
Elem triple_symbol_from_lifts(const CurveDatum& curve, const SynClass& eta, const SynClass& omega1,
                              const SynClass& omega2, const Elem& lambda);

struct AltResult {
    Elem value;
    /// Representative of the product with u = v = 0, sign-adjusted for HK degree 1.
    Vector w;
    Vector x;
    Vector y;
};

AltResult triple_symbol_alt(const CurveDatum& curve, const TripleInputs& in);

} // namespace fpsyn
