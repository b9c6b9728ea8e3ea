#include "fpsyn/syncomplex.hpp"

#include <algorithm>
#include <set>

namespace fpsyn {

// ---------------------------------------------------------------------------
// DGA

std::size_t DGAComplex::dim(int k) const {
    if (k < 0 || k > top()) {
        return 0;
    }
    return dims[static_cast<std::size_t>(k)];
}

Matrix DGAComplex::diff(const Field& f, int k) const {
    if (k >= 0 && k < top() && static_cast<std::size_t>(k) < d.size()) {
        return d[static_cast<std::size_t>(k)];
    }
    return Matrix(f, dim(k + 1), dim(k));
}

Matrix DGAComplex::mult_matrix(const Field& f, int i, int j) const {
    auto it = mult.find({i, j});
    if (it != mult.end()) {
        return it->second;
    }
    return Matrix(f, dim(i + j), dim(i) * dim(j));
}

Vector DGAComplex::multiply(const Field& f, int i, const Vector& a, int j, const Vector& b) const {
    return mult_matrix(f, i, j) * kron(a, b);
}

CohomologyGroup DGAComplex::cohomology(const Field& f, int k) const {
    return compute_cohomology(diff(f, k - 1), diff(f, k), static_cast<std::size_t>(std::max(k, 0)));
}

// ---------------------------------------------------------------------------
// Datum

Elem HKDatum::q() const { return field.from_int(p).pow(f); }

Matrix HKDatum::phi_at(int k) const {
    if (k < 0 || k > A.top()) {
        return Matrix(field, 0, 0);
    }
    return phi[static_cast<std::size_t>(k)];
}

Matrix HKDatum::n_at(int k) const {
    if (k < 0 || k > A.top()) {
        return Matrix(field, 0, 0);
    }
    return N[static_cast<std::size_t>(k)];
}

Matrix HKDatum::iota_at(int k) const {
    if (k < 0 || k > A.top() || k > B.top()) {
        return Matrix(field, B.dim(k), A.dim(k));
    }
    return iota[static_cast<std::size_t>(k)];
}

Matrix HKDatum::fil_at(int k, long i) const {
    if (k < 0 || k > B.top()) {
        return Matrix(field, 0, 0);
    }
    return fil[static_cast<std::size_t>(k)].at(i);
}

namespace {

std::string deg_str(int k) { return std::to_string(k); }

std::string dga_shape_issue(const Field& f, const DGAComplex& g, const std::string& side) {
    if (g.dims.empty()) {
        return side + ": no degrees";
    }
    if (g.d.size() != static_cast<std::size_t>(g.top())) {
        return side + ": expected " + std::to_string(g.top()) + " differentials";
    }
    for (int k = 0; k < g.top(); ++k) {
        const Matrix& m = g.d[static_cast<std::size_t>(k)];
        if (m.rows() != g.dim(k + 1) || m.cols() != g.dim(k)) {
            return side + ": d in degree " + deg_str(k) + " has the wrong shape";
        }
    }
    for (const auto& [ij, m] : g.mult) {
        auto [i, j] = ij;
        if (i < 0 || j < 0 || i + j > g.top()) {
            return side + ": product (" + deg_str(i) + "," + deg_str(j) + ") out of range";
        }
        if (m.rows() != g.dim(i + j) || m.cols() != g.dim(i) * g.dim(j)) {
            return side + ": product (" + deg_str(i) + "," + deg_str(j) + ") has the wrong shape";
        }
    }
    if (g.unit.size() != g.dim(0)) {
        return side + ": unit must lie in degree 0";
    }
    (void)f;
    return {};
}

/// Empty string when the DGA axioms hold, else the failing axiom.
std::string dga_axiom_issue(const Field& f, const DGAComplex& g, const std::string& side) {
    const int top = g.top();
    for (int k = 0; k + 1 < top; ++k) {
        if (!(g.diff(f, k + 1) * g.diff(f, k)).is_zero()) {
            return side + ": d^2 != 0 in degree " + deg_str(k);
        }
    }
    if (!is_zero(g.diff(f, 0) * g.unit) || is_zero(g.unit)) {
        return side + ": unit is not a nonzero cocycle";
    }
    for (int k = 0; k <= top; ++k) {
        Matrix id = Matrix::identity(f, g.dim(k));
        Matrix u = Matrix::from_columns(f, g.dim(0), {g.unit});
        if (!(g.mult_matrix(f, 0, k) * kron(u, id) == id) || !(g.mult_matrix(f, k, 0) * kron(id, u) == id)) {
            return side + ": unit does not act as identity in degree " + deg_str(k);
        }
    }
    for (int i = 0; i <= top; ++i) {
        for (int j = 0; i + j <= top; ++j) {
            for (int k = 0; i + j + k <= top; ++k) {
                Matrix li = Matrix::identity(f, g.dim(i));
                Matrix lk = Matrix::identity(f, g.dim(k));
                Matrix lhs = g.mult_matrix(f, i + j, k) * kron(g.mult_matrix(f, i, j), lk);
                Matrix rhs = g.mult_matrix(f, i, j + k) * kron(li, g.mult_matrix(f, j, k));
                if (!(lhs == rhs)) {
                    return side + ": product not associative in degrees (" + deg_str(i) + "," + deg_str(j) + "," +
                           deg_str(k) + ")";
                }
            }
        }
    }
    for (int i = 0; i <= top; ++i) {
        for (int j = 0; i + j < top; ++j) {
            Matrix li = Matrix::identity(f, g.dim(i));
            Matrix lj = Matrix::identity(f, g.dim(j));
            Matrix lhs = g.diff(f, i + j) * g.mult_matrix(f, i, j);
            Matrix rhs = g.mult_matrix(f, i + 1, j) * kron(g.diff(f, i), lj);
            Matrix second = g.mult_matrix(f, i, j + 1) * kron(li, g.diff(f, j));
            rhs = (i % 2 == 0) ? rhs + second : rhs - second;
            if (!(lhs == rhs)) {
                return side + ": Leibniz rule fails in degrees (" + deg_str(i) + "," + deg_str(j) + ")";
            }
        }
    }
    return {};
}

void add(ValidationReport& rep, const std::string& name, const std::string& issue) {
    rep.items.push_back({name, issue.empty(), issue});
}

std::set<long> fil_indices(const HKDatum& d, int k) {
    std::set<long> out;
    if (k < 0 || k > d.B.top()) {
        return out;
    }
    for (const auto& s : d.fil[static_cast<std::size_t>(k)].steps()) {
        out.insert(s.index);
    }
    return out;
}

} // namespace

ValidationReport validate(const HKDatum& d) {
    ValidationReport rep;
    const Field& f = d.field;
    std::string shape = dga_shape_issue(f, d.A, "A");
    if (shape.empty()) {
        shape = dga_shape_issue(f, d.B, "B");
    }
    if (shape.empty()) {
        const auto na = static_cast<std::size_t>(d.A.top() + 1);
        if (d.phi.size() != na || d.N.size() != na || d.iota.size() != na) {
            shape = "Phi, N and iota must be given for every degree of A";
        } else if (d.fil.size() != static_cast<std::size_t>(d.B.top() + 1)) {
            shape = "a filtration must be given for every degree of B";
        } else if (d.B.top() != d.A.top()) {
            shape = "A and B must span the same degrees";
        } else {
            for (int k = 0; k <= d.A.top() && shape.empty(); ++k) {
                const auto uk = static_cast<std::size_t>(k);
                std::size_t a = d.A.dim(k);
                if (d.phi[uk].rows() != a || d.phi[uk].cols() != a || d.N[uk].rows() != a || d.N[uk].cols() != a) {
                    shape = "Phi or N in degree " + deg_str(k) + " is not square of size dim A^k";
                } else if (d.iota[uk].rows() != d.B.dim(k) || d.iota[uk].cols() != a) {
                    shape = "iota in degree " + deg_str(k) + " is not dim B^k x dim A^k";
                } else if (d.fil[uk].dim() != d.B.dim(k)) {
                    shape = "filtration in degree " + deg_str(k) + " has the wrong ambient dimension";
                }
            }
        }
    }
    add(rep, "shapes", shape);
    if (!shape.empty()) {
        return rep;
    }
    add(rep, "A is a DGA", dga_axiom_issue(f, d.A, "A"));
    add(rep, "B is a DGA", dga_axiom_issue(f, d.B, "B"));
    if (!rep.ok()) {
        return rep;
    }
    const int top = d.A.top();
    const Elem q = d.q();

    std::string issue;
    for (int k = 0; k <= top && issue.empty(); ++k) {
        if (!is_invertible(d.phi_at(k))) {
            issue = "Phi not invertible in degree " + deg_str(k);
        } else if (k < top && !(d.A.diff(f, k) * d.phi_at(k) == d.phi_at(k + 1) * d.A.diff(f, k))) {
            issue = "Phi does not commute with d in degree " + deg_str(k);
        }
    }
    add(rep, "Phi invertible chain map", issue);
    issue.clear();
    for (int k = 0; k < top && issue.empty(); ++k) {
        if (!(d.A.diff(f, k) * d.n_at(k) == d.n_at(k + 1) * d.A.diff(f, k))) {
            issue = "N does not commute with d in degree " + deg_str(k);
        }
    }
    add(rep, "N chain map", issue);
    issue.clear();
    for (int k = 0; k <= top && issue.empty(); ++k) {
        if (!(d.n_at(k) * d.phi_at(k) == q * (d.phi_at(k) * d.n_at(k)))) {
            issue = "fails in degree " + deg_str(k);
        }
    }
    add(rep, "N*Phi = q*Phi*N", issue);
    issue.clear();
    for (int k = 0; k < top && issue.empty(); ++k) {
        if (!(d.B.diff(f, k) * d.iota_at(k) == d.iota_at(k + 1) * d.A.diff(f, k))) {
            issue = "iota does not commute with d in degree " + deg_str(k);
        }
    }
    add(rep, "iota chain map", issue);

    issue.clear();
    if (!(d.phi_at(0) * d.A.unit == d.A.unit)) {
        issue = "Phi(1) != 1";
    } else if (!is_zero(d.n_at(0) * d.A.unit)) {
        issue = "N(1) != 0";
    } else if (!(d.iota_at(0) * d.A.unit == d.B.unit)) {
        issue = "iota(1) != 1";
    }
    for (int i = 0; i <= top && issue.empty(); ++i) {
        for (int j = 0; i + j <= top && issue.empty(); ++j) {
            Matrix ma = d.A.mult_matrix(f, i, j);
            Matrix mb = d.B.mult_matrix(f, i, j);
            Matrix li = Matrix::identity(f, d.A.dim(i));
            Matrix lj = Matrix::identity(f, d.A.dim(j));
            std::string where = " in degrees (" + deg_str(i) + "," + deg_str(j) + ")";
            if (!(d.phi_at(i + j) * ma == ma * kron(d.phi_at(i), d.phi_at(j)))) {
                issue = "Phi not multiplicative" + where;
            } else if (!(d.n_at(i + j) * ma == ma * (kron(d.n_at(i), lj) + kron(li, d.n_at(j))))) {
                issue = "N not a derivation" + where;
            } else if (!(d.iota_at(i + j) * ma == mb * kron(d.iota_at(i), d.iota_at(j)))) {
                issue = "iota not multiplicative" + where;
            }
        }
    }
    add(rep, "multiplicativity", issue);

    issue.clear();
    for (int k = 0; k <= top && issue.empty(); ++k) {
        CohomologyGroup ha = d.A.cohomology(f, k);
        CohomologyGroup hb = d.B.cohomology(f, k);
        if (ha.dim() != hb.dim()) {
            issue = "H^" + deg_str(k) + " dimensions differ";
            break;
        }
        if (ha.dim() == 0) {
            continue;
        }
        std::vector<Vector> cols;
        for (const auto& c : ha.reps.columns()) {
            cols.push_back(*hb.coordinates(d.iota_at(k) * c));
        }
        if (!is_invertible(Matrix::from_columns(f, hb.dim(), cols))) {
            issue = "induced map on H^" + deg_str(k) + " is not invertible";
        }
    }
    add(rep, "iota quasi-isomorphism", issue);

    issue.clear();
    for (int k = 0; k <= top && issue.empty(); ++k) {
        const Filtration& fk = d.fil[static_cast<std::size_t>(k)];
        if (fk.dim() > 0 && (fk.steps().empty() || fk.steps().front().basis.cols() != fk.dim())) {
            issue = "lowest step in degree " + deg_str(k) + " is not all of B^" + deg_str(k);
        }
    }
    add(rep, "filtration exhaustive", issue);
    issue.clear();
    for (int k = 0; k < top && issue.empty(); ++k) {
        std::set<long> idx = fil_indices(d, k);
        std::set<long> next = fil_indices(d, k + 1);
        idx.insert(next.begin(), next.end());
        for (long i : idx) {
            Matrix src = d.fil_at(k, i);
            if (src.cols() == 0) {
                continue;
            }
            Matrix img = d.B.diff(f, k) * src;
            Matrix dst = d.fil_at(k + 1, i);
            if (!img.is_zero() && (dst.cols() == 0 || !subspace_contains(dst, img))) {
                issue = "d does not preserve Fil^" + std::to_string(i) + " in degree " + deg_str(k);
                break;
            }
        }
    }
    add(rep, "filtration by subcomplexes", issue);
    issue.clear();
    for (int i = 0; i <= top && issue.empty(); ++i) {
        for (int j = 0; i + j <= top && issue.empty(); ++j) {
            for (long a : fil_indices(d, i)) {
                for (long b : fil_indices(d, j)) {
                    Matrix fa = d.fil_at(i, a);
                    Matrix fb = d.fil_at(j, b);
                    if (fa.cols() == 0 || fb.cols() == 0) {
                        continue;
                    }
                    Matrix prod = d.B.mult_matrix(f, i, j) * kron(fa, fb);
                    Matrix dst = d.fil_at(i + j, a + b);
                    if (!prod.is_zero() && (dst.cols() == 0 || !subspace_contains(dst, prod))) {
                        issue = "Fil^" + std::to_string(a) + " * Fil^" + std::to_string(b) + " not in Fil^" +
                                std::to_string(a + b) + " for degrees (" + deg_str(i) + "," + deg_str(j) + ")";
                    }
                }
            }
        }
    }
    add(rep, "filtration multiplicative", issue);
    return rep;
}

void require_valid(const HKDatum& d) {
    ValidationReport rep = validate(d);
    if (!rep.ok()) {
        throw Error(ErrorKind::InvalidDatum, "datum check failed: " + rep.first_failure());
    }
}

// ---------------------------------------------------------------------------
// Induced modules

namespace {

Matrix class_coords(const CohomologyGroup& g, const Matrix& cols) {
    const Field& f = cols.field();
    std::vector<Vector> out;
    for (const auto& c : cols.columns()) {
        auto x = g.coordinates(c);
        if (!x) {
            throw Error(ErrorKind::InternalInconsistency, "expected a cocycle");
        }
        out.push_back(*x);
    }
    return Matrix::from_columns(f, g.dim(), out);
}

} // namespace

FilPhiNModule induced_module(const HKDatum& d, int j) {
    const Field& f = d.field;
    CohomologyGroup ha = d.A.cohomology(f, j);
    CohomologyGroup hb = d.B.cohomology(f, j);
    const std::size_t n = ha.dim();
    if (hb.dim() != n) {
        throw Error(ErrorKind::ComparisonNotIso, "H^" + deg_str(j) + "(A) and H^" + deg_str(j) + "(B) differ in dimension");
    }
    FilPhiNModule out{f, d.p, d.f, n, Matrix(f, n, n), Matrix(f, n, n), Matrix(f, n, n), Filtration(f, n, {})};
    if (j < 0 || j > d.A.top() || n == 0) {
        return out;
    }
    out.phi = class_coords(ha, d.phi_at(j) * ha.reps);
    out.N = class_coords(ha, d.n_at(j) * ha.reps);
    out.iota = class_coords(hb, d.iota_at(j) * ha.reps);
    if (!is_invertible(out.iota)) {
        throw Error(ErrorKind::ComparisonNotIso, "iota is not invertible on H^" + deg_str(j));
    }
    std::vector<FilStep> samples;
    for (long i : fil_indices(d, j)) {
        Matrix sub = d.fil_at(j, i);
        Matrix closed = sub.cols() == 0 ? sub : subspace_intersection(sub, hb.cocycles);
        samples.push_back({i, closed.cols() == 0 ? Matrix(f, n, 0) : class_coords(hb, closed)});
    }
    out.fil = Filtration::from_samples(f, n, std::move(samples));
    require_valid(out);
    return out;
}

// ---------------------------------------------------------------------------
// The syntomic complex

namespace {

void place(Matrix& m, std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            m.at(r0 + i, c0 + j) += b.at(i, j);
        }
    }
}

Matrix p_of(const HKDatum& d, const OnePoly& p, int k, long e) {
    if (d.A.dim(k) == 0) {
        return Matrix(d.field, 0, 0);
    }
    return eval_at_operator(p, d.phi_at(k), d.q().pow(e));
}

Matrix fil_coords_map(const Field& f, const Matrix& src, const Matrix& dst, const Matrix& dmap) {
    Matrix out(f, dst.cols(), src.cols());
    for (std::size_t j = 0; j < src.cols(); ++j) {
        Vector img = dmap * src.column(j);
        if (is_zero(img)) {
            continue;
        }
        auto x = dst.cols() == 0 ? std::nullopt : solve_vector(dst, img);
        if (!x) {
            throw Error(ErrorKind::InvalidDatum, "d does not preserve Fil^r");
        }
        for (std::size_t i = 0; i < x->size(); ++i) {
            out.at(i, j) = (*x)[i];
        }
    }
    return out;
}

} // namespace

std::vector<std::size_t> SynComplex::offsets(int n) const {
    const DGAComplex& A = datum->A;
    const DGAComplex& B = datum->B;
    std::size_t fr = (n >= 0 && n <= top) ? fil_r[static_cast<std::size_t>(n)].cols() : 0;
    std::vector<std::size_t> sizes{A.dim(n), fr, A.dim(n - 1), A.dim(n - 1), B.dim(n - 1), A.dim(n - 2)};
    std::vector<std::size_t> out{0};
    for (std::size_t s : sizes) {
        out.push_back(out.back() + s);
    }
    return out;
}

std::size_t SynComplex::dim(int n) const {
    if (n < 0 || n > top) {
        return 0;
    }
    return offsets(n).back();
}

Matrix SynComplex::differential(int n) const {
    if (n >= 0 && n < top) {
        return diffs[static_cast<std::size_t>(n)];
    }
    return Matrix(datum->field, dim(n + 1), dim(n));
}

SynComplexPtr syn_build(const HKDatumPtr& dp, const OnePoly& p, long r) {
    const HKDatum& d = *dp;
    require_valid(d);
    if (!(p.field() == d.field)) {
        throw Error(ErrorKind::FieldMismatch, "polynomial and datum over different fields");
    }
    if (r < 0) {
        throw Error(ErrorKind::PreconditionFailed, "twist r must be >= 0");
    }
    const Field& f = d.field;
    auto out = std::make_shared<SynComplex>(SynComplex{dp, p, r, d.A.top() + 2, {}, {}});
    for (int n = 0; n <= out->top; ++n) {
        out->fil_r.push_back(n <= d.B.top() ? d.fil_at(n, r) : Matrix(f, 0, 0));
    }
    for (int n = 0; n < out->top; ++n) {
        auto co = out->offsets(n);
        auto ro = out->offsets(n + 1);
        Matrix m(f, ro.back(), co.back());
        const Matrix& fn = out->fil_r[static_cast<std::size_t>(n)];
        const Matrix& fn1 = out->fil_r[static_cast<std::size_t>(n + 1)];
        // u' = du, v' = dv
        place(m, ro[0], co[0], d.A.diff(f, n));
        if (fn.cols() > 0) {
            place(m, ro[1], co[1], fil_coords_map(f, fn, fn1, d.B.diff(f, n)));
        }
        // w' = P(Phi_r) u - dw, x' = N u - dx
        place(m, ro[2], co[0], p_of(d, p, n, -r));
        place(m, ro[2], co[2], -d.A.diff(f, n - 1));
        place(m, ro[3], co[0], d.n_at(n));
        place(m, ro[3], co[3], -d.A.diff(f, n - 1));
        // y' = iota u - v - dy
        place(m, ro[4], co[0], d.iota_at(n));
        if (fn.cols() > 0) {
            place(m, ro[4], co[1], -fn);
        }
        place(m, ro[4], co[4], -d.B.diff(f, n - 1));
        // z' = dz - N w + P(q Phi_r) x
        place(m, ro[5], co[5], d.A.diff(f, n - 2));
        place(m, ro[5], co[2], -d.n_at(n - 1));
        place(m, ro[5], co[3], p_of(d, p, n - 1, 1 - r));
        out->diffs.push_back(std::move(m));
    }
    for (int n = 0; n + 1 < out->top; ++n) {
        if (!(out->differential(n + 1) * out->differential(n)).is_zero()) {
            throw Error(ErrorKind::InternalInconsistency, "syn d^2 != 0 in degree " + std::to_string(n));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cochains and cohomology

Vector SynClass::component(const std::string& name) const {
    static const std::vector<std::string> names{"u", "v", "w", "x", "y", "z"};
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw Error(ErrorKind::ParseError, "unknown component '" + name + "'");
    }
    auto k = static_cast<std::size_t>(it - names.begin());
    auto off = complex->offsets(degree);
    return slice(cochain, off[k], off[k + 1] - off[k]);
}

Vector SynClass::v_ambient() const {
    const Field& f = complex->datum->field;
    const std::size_t b = complex->datum->B.dim(degree);
    if (degree < 0 || degree > complex->top || complex->fil_r[static_cast<std::size_t>(degree)].cols() == 0) {
        return zero_vector(f, b);
    }
    return complex->fil_r[static_cast<std::size_t>(degree)] * component("v");
}

SynClass make_syn_cochain(const SynComplexPtr& c, int n, const std::map<std::string, Vector>& parts) {
    if (n < 0 || n > c->top) {
        throw Error(ErrorKind::DegreeOutOfRange, "syn degree " + std::to_string(n) + " outside 0.." + std::to_string(c->top));
    }
    const HKDatum& d = *c->datum;
    const Field& f = d.field;
    std::map<std::string, std::size_t> sizes{{"u", d.A.dim(n)},     {"v", d.B.dim(n)},     {"w", d.A.dim(n - 1)},
                                             {"x", d.A.dim(n - 1)}, {"y", d.B.dim(n - 1)}, {"z", d.A.dim(n - 2)}};
    for (const auto& [name, vec] : parts) {
        auto it = sizes.find(name);
        if (it == sizes.end()) {
            throw Error(ErrorKind::ParseError, "unknown component '" + name + "'");
        }
        if (vec.size() != it->second) {
            throw Error(ErrorKind::ShapeMismatch,
                        "component '" + name + "' must have length " + std::to_string(it->second));
        }
    }
    auto get = [&](const std::string& name) {
        auto it = parts.find(name);
        return it == parts.end() ? zero_vector(f, sizes.at(name)) : it->second;
    };
    const Matrix& fr = c->fil_r[static_cast<std::size_t>(n)];
    Vector v = get("v");
    Vector vc;
    if (fr.cols() == 0) {
        if (!is_zero(v)) {
            throw Error(ErrorKind::PreconditionFailed, "v is not in Fil^" + std::to_string(c->r) + " B^" + std::to_string(n));
        }
    } else {
        auto x = solve_vector(fr, v);
        if (!x) {
            throw Error(ErrorKind::PreconditionFailed, "v is not in Fil^" + std::to_string(c->r) + " B^" + std::to_string(n));
        }
        vc = *x;
    }
    return {c, n, concat({get("u"), vc, get("w"), get("x"), get("y"), get("z")})};
}

bool syn_is_cocycle(const SynClass& c) { return is_zero(c.complex->differential(c.degree) * c.cochain); }

CohomologyGroup syn_cohomology(const SynComplex& c, int n) {
    return compute_cohomology(c.differential(n - 1), c.differential(n), static_cast<std::size_t>(std::max(n, 0)));
}

std::vector<std::size_t> syn_dims(const SynComplex& c) {
    std::vector<std::size_t> out;
    for (int n = 0; n <= c.top; ++n) {
        out.push_back(syn_cohomology(c, n).dim());
    }
    return out;
}

bool syn_is_coboundary(const SynClass& c) {
    if (is_zero(c.cochain)) {
        return true;
    }
    Matrix din = c.complex->differential(c.degree - 1);
    return din.cols() > 0 && solve_vector(din, c.cochain).has_value();
}

// ---------------------------------------------------------------------------
// Products

Pairing Pairing::self(const HKDatumPtr& d) { return {d, d, d, d->A.mult, d->B.mult}; }

namespace {

Vector table_mul(const Field& f, const std::map<std::pair<int, int>, Matrix>& tab, std::size_t out_dim, int i,
                 const Vector& a, int j, const Vector& b) {
    if (i < 0 || j < 0 || a.empty() || b.empty()) {
        return zero_vector(f, out_dim);
    }
    auto it = tab.find({i, j});
    if (it == tab.end()) {
        return zero_vector(f, out_dim);
    }
    return it->second * kron(a, b);
}

} // namespace

Vector Pairing::mulA(int i, const Vector& a, int j, const Vector& b) const {
    return table_mul(target->field, multA, target->A.dim(i + j), i, a, j, b);
}

Vector Pairing::mulB(int i, const Vector& a, int j, const Vector& b) const {
    return table_mul(target->field, multB, target->B.dim(i + j), i, a, j, b);
}

namespace {

/// Operator q^e Phi on degree k of a datum.
struct Op {
    const HKDatum* d;
    int k;
    long e;
};

std::vector<Vector> powers(const Op& op, const Vector& v, std::size_t n) {
    std::vector<Vector> out{v};
    if (v.empty()) {
        return out;
    }
    Matrix m = op.d->q().pow(op.e) * op.d->phi_at(op.k);
    for (std::size_t i = 1; i < n; ++i) {
        out.push_back(m * out.back());
    }
    return out;
}

/// sum c_kl (X1^k s) * (X2^l t) through the A-side product of the pairing.
Vector bivar_apply(const Pairing& pr, const BivarPoly& poly, const Op& x1, const Vector& s, const Op& x2,
                   const Vector& t) {
    const Field& f = pr.target->field;
    const int i = x1.k;
    const int j = x2.k;
    Vector acc = zero_vector(f, pr.target->A.dim(i + j));
    if (s.empty() || t.empty() || i < 0 || j < 0 || poly.is_zero()) {
        return acc;
    }
    const auto& tab = poly.table();
    std::size_t deg2 = 0;
    for (const auto& row : tab) {
        deg2 = std::max(deg2, row.size());
    }
    auto ps = powers(x1, s, tab.size());
    auto pt = powers(x2, t, deg2);
    for (std::size_t k = 0; k < tab.size(); ++k) {
        for (std::size_t l = 0; l < tab[k].size(); ++l) {
            if (!tab[k][l].is_zero()) {
                acc = acc + tab[k][l] * pr.mulA(i, ps[k], j, pt[l]);
            }
        }
    }
    return acc;
}

} // namespace

SynClass syn_cup(const SynClass& c1, const SynClass& c2, const Elem& lambda, const std::optional<BezoutPair>& ab) {
    if (c1.complex->datum != c2.complex->datum) {
        throw Error(ErrorKind::DatumMismatch, "syn_cup of classes over different data");
    }
    return syn_cup(c1, c2, lambda, ab, Pairing::self(c1.complex->datum), nullptr);
}

SynClass syn_cup(const SynClass& c1, const SynClass& c2, const Elem& lambda, const std::optional<BezoutPair>& ab_in,
                 const Pairing& pr, const SynComplexPtr& target_in) {
    const SynComplex& k1 = *c1.complex;
    const SynComplex& k2 = *c2.complex;
    if (k1.datum != pr.left || k2.datum != pr.right) {
        throw Error(ErrorKind::DatumMismatch, "classes do not live over the data of the pairing");
    }
    const HKDatum& L = *pr.left;
    const HKDatum& R = *pr.right;
    const HKDatum& T = *pr.target;
    if (!(L.q() == R.q()) || !(L.q() == T.q())) {
        throw Error(ErrorKind::DatumMismatch, "paired data have different q");
    }
    if (!syn_is_cocycle(c1) || !syn_is_cocycle(c2)) {
        throw Error(ErrorKind::PreconditionFailed, "syn_cup needs cocycles");
    }
    const Field& f = T.field;
    const int i = c1.degree;
    const int j = c2.degree;
    const int n = i + j;
    OnePoly pstar = star(k1.P, k2.P);
    const long r = k1.r + k2.r;
    SynComplexPtr target = target_in ? target_in : syn_build(pr.target, pstar, r);
    if (target->datum != pr.target || !(target->P == pstar) || target->r != r) {
        throw Error(ErrorKind::DatumMismatch, "target complex is not the one for P1*P2 and r1+r2");
    }
    if (n > target->top) {
        throw Error(ErrorKind::DegreeOutOfRange, "product degree " + std::to_string(n) + " exceeds the complex");
    }
    BezoutPair ab = ab_in ? *ab_in : bezout_star(k1.P, k2.P);
    const long r1 = k1.r;
    const long r2 = k2.r;

    Vector u1 = c1.component("u"), w1 = c1.component("w"), x1 = c1.component("x"), y1 = c1.component("y"),
           z1 = c1.component("z"), v1 = c1.v_ambient();
    Vector u2 = c2.component("u"), w2 = c2.component("w"), x2 = c2.component("x"), y2 = c2.component("y"),
           z2 = c2.component("z"), v2 = c2.v_ambient();
    const Elem sgn = (i % 2 == 0) ? f.one() : -f.one();
    const Elem one_minus = f.one() - lambda;

    Vector uu = pr.mulA(i, u1, j, u2);
    Vector vv = pr.mulB(i, v1, j, v2);
    Vector ww = bivar_apply(pr, ab.a, {&L, i - 1, -r1}, w1, {&R, j, -r2}, u2) +
                sgn * bivar_apply(pr, ab.b, {&L, i, -r1}, u1, {&R, j - 1, -r2}, w2);
    Vector xx = pr.mulA(i - 1, x1, j, u2) + sgn * pr.mulA(i, u1, j - 1, x2);
    Vector right_mix = j <= R.B.top() ? one_minus * (R.iota_at(j) * u2) + lambda * v2 : Vector{};
    Vector left_mix = i <= L.B.top() ? lambda * (L.iota_at(i) * u1) + one_minus * v1 : Vector{};
    Vector yy = pr.mulB(i - 1, y1, j, right_mix) + sgn * pr.mulB(i, left_mix, j - 1, y2);
    Vector zz = bivar_apply(pr, ab.a, {&L, i - 2, 1 - r1}, z1, {&R, j, -r2}, u2) -
                sgn * bivar_apply(pr, ab.a, {&L, i - 1, -r1}, w1, {&R, j - 1, 1 - r2}, x2) +
                sgn * bivar_apply(pr, ab.b, {&L, i - 1, 1 - r1}, x1, {&R, j - 1, -r2}, w2) +
                bivar_apply(pr, ab.b, {&L, i, -r1}, u1, {&R, j - 2, 1 - r2}, z2);

    std::map<std::string, Vector> parts{{"u", uu}, {"v", vv}, {"w", ww}, {"x", xx}, {"y", yy}, {"z", zz}};
    SynClass out = make_syn_cochain(target, n, parts);
    if (!syn_is_cocycle(out)) {
        throw Error(ErrorKind::InternalInconsistency, "syn_cup produced a non-cocycle");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Change of P and of level

SynClass syn_change_of_P(const SynClass& c, const OnePoly& q, const SynComplexPtr& target_in) {
    const SynComplex& k = *c.complex;
    const HKDatum& d = *k.datum;
    SynComplexPtr target = target_in ? target_in : syn_build(k.datum, k.P * q, k.r);
    if (target->datum != k.datum || !(target->P == k.P * q) || target->r != k.r) {
        throw Error(ErrorKind::DatumMismatch, "target complex is not the one for P*Q");
    }
    const int n = c.degree;
    Vector w = c.component("w");
    Vector z = c.component("z");
    if (!w.empty()) {
        w = p_of(d, q, n - 1, -k.r) * w;
    }
    if (!z.empty()) {
        z = p_of(d, q, n - 2, 1 - k.r) * z;
    }
    auto off = k.offsets(n);
    Vector uv = slice(c.cochain, 0, off[2]);
    return {target, n, concat({uv, w, c.component("x"), c.component("y"), z})};
}

HKDatum datum_power(const HKDatum& d, long level) {
    if (level < 1) {
        throw Error(ErrorKind::PreconditionFailed, "level must be >= 1");
    }
    HKDatum out = d;
    out.f = d.f * level;
    for (auto& m : out.phi) {
        m = m.pow(static_cast<std::size_t>(level));
    }
    return out;
}

SynClass syn_change_of_level(const SynClass& c, long level, const SynComplexPtr& target_in) {
    const SynComplex& k = *c.complex;
    OnePoly p2 = factor_through_power(k.P, static_cast<std::size_t>(level));
    SynComplexPtr target =
        target_in ? target_in : syn_build(std::make_shared<const HKDatum>(datum_power(*k.datum, level)), p2, k.r);
    if (!(target->P == p2) || target->r != k.r || target->dim(c.degree) != k.dim(c.degree)) {
        throw Error(ErrorKind::DatumMismatch, "target complex does not match the level change");
    }
    return {target, c.degree, c.cochain};
}

// ---------------------------------------------------------------------------
// Descent filtration

std::size_t DescentGradeds::total() const { return pieces[0].dim + pieces[1].dim + pieces[2].dim; }

namespace {

/// Columns of `space` (a subspace of k^n) spanning a complement of `sub` inside it.
Matrix complement_in(const Matrix& space, const Matrix& sub) {
    const Field& f = space.field();
    const std::size_t n = space.rows();
    Matrix span = sub.cols() == 0 ? Matrix(f, n, 0) : column_space(sub);
    std::size_t r = span.cols() == 0 ? 0 : rank(span);
    std::vector<Vector> out;
    for (const auto& c : space.columns()) {
        Matrix trial = hstack({span, Matrix::from_columns(f, n, {c})});
        std::size_t tr = rank(trial);
        if (tr > r) {
            out.push_back(c);
            span = trial;
            r = tr;
        }
    }
    return Matrix::from_columns(f, n, out);
}

Matrix h0_basis(const FilPhiNModule& m, const OnePoly& p, long r) {
    const Field& f = m.field;
    if (m.n == 0) {
        return Matrix(f, 0, 0);
    }
    Matrix cond = vstack({eval_at_operator(p, m.phi, m.q().pow(-r)), m.N});
    Matrix ker = kernel(cond);
    Matrix fil = m.fil.at(r);
    Matrix pre = fil.cols() == 0 ? Matrix(f, m.n, 0) : inverse(m.iota) * fil;
    if (ker.cols() == 0 || pre.cols() == 0) {
        return Matrix(f, m.n, 0);
    }
    return subspace_intersection(ker, pre);
}

Matrix h2_relations(const FilPhiNModule& m, const OnePoly& p, long r) {
    return hstack({eval_at_operator(p, m.phi, m.q().pow(1 - r)), m.N});
}

const Matrix* knight_for(const KnightMaps& k, int j) {
    auto it = k.find(j);
    return it == k.end() ? nullptr : &it->second;
}

void check_knight_shape(const Matrix* k, std::size_t rows, std::size_t cols, int j) {
    if (k != nullptr && (k->rows() != rows || k->cols() != cols)) {
        throw Error(ErrorKind::ShapeMismatch, "knight map for j = " + std::to_string(j) + " must be " +
                                                  std::to_string(rows) + " x " + std::to_string(cols));
    }
}

} // namespace

Matrix descent_h0_basis(const HKDatum& d, const OnePoly& p, long r, int j) {
    return h0_basis(induced_module(d, j), p, r);
}

std::size_t descent_h2_dim(const HKDatum& d, const OnePoly& p, long r, int j) {
    FilPhiNModule m = induced_module(d, j);
    if (m.n == 0) {
        return 0;
    }
    return m.n - rank(h2_relations(m, p, r));
}

DescentGradeds descent_gradeds(const HKDatum& d, const OnePoly& p, long r, int i, const KnightMaps& knight) {
    require_valid(d);
    const Field& f = d.field;
    DescentGradeds out;
    out.degree = i;

    // Fil^0 / Fil^1: kernel of the knight map on H^0_st(D^i(r)).
    FilPhiNModule mi = induced_module(d, i);
    Matrix h0 = h0_basis(mi, p, r);
    const std::size_t h2_prev = descent_h2_dim(d, p, r, i - 1);
    const Matrix* ki = knight_for(knight, i);
    check_knight_shape(ki, h2_prev, h0.cols(), i);
    if (h0.cols() > 0) {
        Matrix coords = (ki == nullptr || ki->rows() == 0) ? Matrix::identity(f, h0.cols()) : kernel(*ki);
        out.pieces[0].basis = coords.cols() == 0 ? std::vector<Vector>{} : (h0 * coords).columns();
        out.pieces[0].dim = coords.cols();
    }

    // Fil^1 / Fil^2: {(x, y, z) : N x = P(Phi_{r-1}) y} / {(P(Phi_r) x, N x, iota x)}.
    FilPhiNModule m1 = induced_module(d, i - 1);
    const std::size_t n1 = m1.n;
    if (n1 > 0) {
        FilQuotient quot(m1.fil.at(r).cols() == 0 ? Matrix(f, n1, 0) : m1.fil.at(r));
        const std::size_t k = quot.free_coords.size();
        Matrix rel = hstack({m1.N, -eval_at_operator(p, m1.phi, m1.q().pow(1 - r))});
        Matrix xy = kernel(rel);
        std::vector<Vector> space;
        for (const auto& c : xy.columns()) {
            space.push_back(concat({c, zero_vector(f, k)}));
        }
        for (std::size_t a = 0; a < k; ++a) {
            Vector e = zero_vector(f, 2 * n1 + k);
            e[2 * n1 + a] = f.one();
            space.push_back(e);
        }
        Matrix pphi = eval_at_operator(p, m1.phi, m1.q().pow(-r));
        std::vector<Vector> image;
        for (std::size_t a = 0; a < n1; ++a) {
            Vector e = zero_vector(f, n1);
            e[a] = f.one();
            image.push_back(concat({pphi * e, m1.N * e, quot.coords(m1.iota * e)}));
        }
        Matrix sm = Matrix::from_columns(f, 2 * n1 + k, space);
        Matrix comp = complement_in(sm, Matrix::from_columns(f, 2 * n1 + k, image));
        std::vector<Vector> reps;
        for (const auto& c : comp.columns()) {
            reps.push_back(concat({slice(c, 0, 2 * n1), quot.from_coords(slice(c, 2 * n1, k))}));
        }
        out.pieces[1].basis = reps;
        out.pieces[1].dim = reps.size();
    }

    // Fil^2: cokernel of the knight map H^0_st(D^{i-1}(r)) -> H^2_st(D^{i-2}(r)).
    FilPhiNModule m2 = induced_module(d, i - 2);
    if (m2.n > 0) {
        FilQuotient quot(h2_relations(m2, p, r));
        const std::size_t h2 = quot.free_coords.size();
        Matrix h0prev = h0_basis(m1, p, r);
        const Matrix* kp = knight_for(knight, i - 1);
        check_knight_shape(kp, h2, h0prev.cols(), i - 1);
        Matrix img = (kp == nullptr || kp->cols() == 0) ? Matrix(f, h2, 0) : *kp;
        Matrix comp = complement_in(Matrix::identity(f, h2), img);
        std::vector<Vector> reps;
        for (const auto& c : comp.columns()) {
            reps.push_back(quot.from_coords(c));
        }
        out.pieces[2].basis = reps;
        out.pieces[2].dim = reps.size();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curves and the trace

Pairing CurveDatum::action() const {
    if (proper()) {
        return Pairing::self(X);
    }
    return {Xc, X, Xc, actA, actB};
}

void require_valid(const CurveDatum& c) {
    if (!c.X) {
        throw Error(ErrorKind::InvalidDatum, "curve without a datum");
    }
    require_valid(*c.X);
    const HKDatum& xc = *c.compact();
    if (!c.proper()) {
        require_valid(xc);
        const HKDatum& x = *c.X;
        const Field& f = x.field;
        if (!(xc.q() == x.q()) || xc.A.top() != x.A.top()) {
            throw Error(ErrorKind::InvalidDatum, "companion has a different q or degree range");
        }
        const auto n = static_cast<std::size_t>(x.A.top() + 1);
        if (c.to_X_A.size() != n || c.to_X_B.size() != n) {
            throw Error(ErrorKind::InvalidDatum, "companion map must be given in every degree");
        }
        for (int k = 0; k <= x.A.top(); ++k) {
            const Matrix& ma = c.to_X_A[static_cast<std::size_t>(k)];
            const Matrix& mb = c.to_X_B[static_cast<std::size_t>(k)];
            std::string where = " in degree " + std::to_string(k);
            if (ma.rows() != x.A.dim(k) || ma.cols() != xc.A.dim(k) || mb.rows() != x.B.dim(k) ||
                mb.cols() != xc.B.dim(k)) {
                throw Error(ErrorKind::InvalidDatum, "companion map has the wrong shape" + where);
            }
            if (!(ma * xc.phi_at(k) == x.phi_at(k) * ma) || !(ma * xc.n_at(k) == x.n_at(k) * ma) ||
                !(mb * xc.iota_at(k) == x.iota_at(k) * ma)) {
                throw Error(ErrorKind::InvalidDatum, "companion map does not commute with Phi, N, iota" + where);
            }
            if (k < x.A.top() && (!(ma.cols() == 0 || x.A.diff(f, k) * ma == c.to_X_A[static_cast<std::size_t>(k + 1)] *
                                                                               xc.A.diff(f, k)) ||
                                  !(mb.cols() == 0 || x.B.diff(f, k) * mb == c.to_X_B[static_cast<std::size_t>(k + 1)] *
                                                                               xc.B.diff(f, k)))) {
                throw Error(ErrorKind::InvalidDatum, "companion map is not a chain map" + where);
            }
        }
        for (int i = 0; i <= x.A.top(); ++i) {
            for (int j = 0; i + j <= x.A.top(); ++j) {
                std::string where = " in degrees (" + std::to_string(i) + "," + std::to_string(j) + ")";
                auto shape_ok = [&](const std::map<std::pair<int, int>, Matrix>& t, const DGAComplex& l,
                                    const DGAComplex& r) {
                    auto it = t.find({i, j});
                    return it == t.end() || (it->second.rows() == l.dim(i + j) && it->second.cols() == l.dim(i) * r.dim(j));
                };
                if (!shape_ok(c.actA, xc.A, x.A) || !shape_ok(c.actB, xc.B, x.B)) {
                    throw Error(ErrorKind::InvalidDatum, "action table has the wrong shape" + where);
                }
                Pairing pr = c.action();
                Matrix ma = pr.multA.count({i, j}) ? pr.multA.at({i, j}) : Matrix(f, xc.A.dim(i + j), xc.A.dim(i) * x.A.dim(j));
                Matrix mb = pr.multB.count({i, j}) ? pr.multB.at({i, j}) : Matrix(f, xc.B.dim(i + j), xc.B.dim(i) * x.B.dim(j));
                if (!(xc.phi_at(i + j) * ma == ma * kron(xc.phi_at(i), x.phi_at(j)))) {
                    throw Error(ErrorKind::InvalidDatum, "action not compatible with Phi" + where);
                }
                Matrix li = Matrix::identity(f, xc.A.dim(i));
                Matrix lj = Matrix::identity(f, x.A.dim(j));
                if (!(xc.n_at(i + j) * ma == ma * (kron(xc.n_at(i), lj) + kron(li, x.n_at(j))))) {
                    throw Error(ErrorKind::InvalidDatum, "action not compatible with N" + where);
                }
                if (!(xc.iota_at(i + j) * ma == mb * kron(xc.iota_at(i), x.iota_at(j)))) {
                    throw Error(ErrorKind::InvalidDatum, "action not compatible with iota" + where);
                }
            }
        }
    }
    const int top = xc.B.top();
    if (c.trace.size() != xc.B.dim(top)) {
        throw Error(ErrorKind::InvalidDatum, "trace must be a functional on the top degree of B");
    }
    Matrix tr = Matrix::from_rows(xc.field, c.trace.size(), {c.trace});
    if (top > 0 && !(tr * xc.B.diff(xc.field, top - 1)).is_zero()) {
        throw Error(ErrorKind::InvalidDatum, "trace does not vanish on exact forms");
    }
}

Elem syn_trace(const CurveDatum& curve, const SynClass& c) {
    const HKDatum& xc = *curve.compact();
    const SynComplex& k = *c.complex;
    const Field& f = xc.field;
    if (k.datum != curve.compact()) {
        throw Error(ErrorKind::DatumMismatch, "class does not live on the compact-support datum");
    }
    const int top = xc.A.top();
    if (c.degree != top + 1) {
        throw Error(ErrorKind::DegreeOutOfRange, "trace lives in degree " + std::to_string(top + 1));
    }
    if (!syn_is_cocycle(c)) {
        throw Error(ErrorKind::PreconditionFailed, "trace needs a cocycle");
    }
    CohomologyGroup htop = xc.A.cohomology(f, top);
    if (htop.dim() != 1) {
        throw Error(ErrorKind::TopCohomologyNotALine,
                    "H^" + std::to_string(top) + " has dimension " + std::to_string(htop.dim()));
    }
    FilPhiNModule m = tate_twist(induced_module(xc, top), k.r);
    bool model = m.N.is_zero() && m.phi.at(0, 0) == xc.q().inverse() && m.fil.at(-1).cols() == 1 &&
                 m.fil.at(0).cols() == 0;
    if (!model) {
        throw Error(ErrorKind::TopCohomologyNotALine,
                    "top cohomology twisted by r = " + std::to_string(k.r) + " is not the Qp(1)-model");
    }
    if (k.P.eval(f.one()).is_zero()) {
        throw Error(ErrorKind::PolynomialVanishes, "P(1) = 0");
    }
    Elem pq = k.P.eval(xc.q().inverse());
    if (pq.is_zero()) {
        throw Error(ErrorKind::PolynomialVanishes, "P(q^-1) = 0");
    }
    if (dot(curve.trace, xc.iota_at(top) * htop.reps.column(0)).is_zero()) {
        throw Error(ErrorKind::TopCohomologyNotALine, "trace vanishes on top cohomology");
    }
    return dot(curve.trace, c.component("y")) - pq.inverse() * dot(curve.trace, xc.iota_at(top) * c.component("w"));
}

// ---------------------------------------------------------------------------
// Lifts

namespace {

Matrix projection(const SynComplex& c, int n, LiftSide side) {
    const HKDatum& d = *c.datum;
    auto off = c.offsets(n);
    const Field& f = d.field;
    if (side == LiftSide::HK) {
        Matrix m(f, d.A.dim(n), off.back());
        for (std::size_t i = 0; i < d.A.dim(n); ++i) {
            m.at(i, i) = f.one();
        }
        return m;
    }
    Matrix m(f, d.B.dim(n), off.back());
    const Matrix& fr = c.fil_r[static_cast<std::size_t>(n)];
    for (std::size_t i = 0; i < fr.rows(); ++i) {
        for (std::size_t j = 0; j < fr.cols(); ++j) {
            m.at(i, off[1] + j) = fr.at(i, j);
        }
    }
    return m;
}

std::string vec_str(const Vector& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + v[i].to_string();
    }
    return s + "]";
}

} // namespace

SynClass lift_to_syn(const SynComplexPtr& c, int n, const LiftTarget& target) {
    const HKDatum& d = *c->datum;
    const Field& f = d.field;
    if (n < 0 || n > c->top) {
        throw Error(ErrorKind::DegreeOutOfRange, "lift degree out of range");
    }
    const DGAComplex& side = target.side == LiftSide::HK ? d.A : d.B;
    if (target.cocycle.size() != side.dim(n)) {
        throw Error(ErrorKind::ShapeMismatch, "target class has the wrong length");
    }
    if (!is_zero(side.diff(f, n) * target.cocycle)) {
        throw Error(ErrorKind::PreconditionFailed, "target is not a cocycle");
    }
    Matrix cocycles = kernel(c->differential(n));
    if (is_zero(target.cocycle)) {
        return {c, n, zero_vector(f, c->dim(n))};
    }
    Matrix proj = projection(*c, n, target.side);
    Matrix m = hstack({cocycles.cols() == 0 ? Matrix(f, proj.rows(), 0) : proj * cocycles, side.diff(f, n - 1)});
    SolveResult res = solve_or_image(m, Matrix::from_columns(f, target.cocycle.size(), {target.cocycle}));
    if (!res.solvable) {
        throw Error(ErrorKind::ObstructionNonzero, "target class does not lift; obstruction functional " +
                                                       vec_str(res.certificate ? *res.certificate : Vector{}));
    }
    Vector coeff = slice(res.solution->column(0), 0, cocycles.cols());
    return {c, n, coeff.empty() ? zero_vector(f, c->dim(n)) : cocycles * coeff};
}

std::size_t lift_ambiguity(const SynComplex& c, int n, LiftSide side) {
    const HKDatum& d = *c.datum;
    CohomologyGroup h = syn_cohomology(c, n);
    if (h.dim() == 0) {
        return 0;
    }
    CohomologyGroup target = side == LiftSide::HK ? d.A.cohomology(d.field, n) : d.B.cohomology(d.field, n);
    if (target.dim() == 0) {
        return h.dim();
    }
    Matrix proj = projection(c, n, side) * h.reps;
    Matrix coords(d.field, target.dim(), h.dim());
    for (std::size_t j = 0; j < h.dim(); ++j) {
        Vector x = *target.coordinates(proj.column(j));
        for (std::size_t i = 0; i < x.size(); ++i) {
            coords.at(i, j) = x[i];
        }
    }
    return h.dim() - rank(coords);
}

// ---------------------------------------------------------------------------
// The triple symbol

namespace {

[[noreturn]] void violated(const std::string& bullet) {
    throw Error(ErrorKind::AssumptionViolated, "assumption fails: " + bullet);
}

Vector hk_coords(const HKDatum& d, const FilPhiNModule& m, int j, const LiftTarget& t) {
    const Field& f = d.field;
    const DGAComplex& side = t.side == LiftSide::HK ? d.A : d.B;
    if (t.cocycle.size() != side.dim(j)) {
        throw Error(ErrorKind::ShapeMismatch, "class has the wrong length");
    }
    auto c = side.cohomology(f, j).coordinates(t.cocycle);
    if (!c) {
        throw Error(ErrorKind::PreconditionFailed, "class is not a cocycle");
    }
    return t.side == LiftSide::HK ? *c : inverse(m.iota) * *c;
}

Vector dr_cochain(const HKDatum& d, int j, const LiftTarget& t) {
    return t.side == LiftSide::HK ? d.iota_at(j) * t.cocycle : t.cocycle;
}

bool in_h0(const FilPhiNModule& m, const OnePoly& p, long r, const Vector& a) {
    if (!is_zero(eval_at_operator(p, m.phi, m.q().pow(-r)) * a) || !is_zero(m.N * a)) {
        return false;
    }
    Vector img = m.iota * a;
    Matrix fil = m.fil.at(r);
    return is_zero(img) || (fil.cols() > 0 && subspace_contains(fil, img));
}

OnePoly total_poly(const TripleInputs& in) { return star(star(in.P0, in.P1), in.P2); }

} // namespace

void check_triple_assumption(const CurveDatum& curve, const TripleInputs& in) {
    require_valid(curve);
    const HKDatum& x = *curve.X;
    const HKDatum& xc = *curve.compact();
    const Field& f = x.field;
    FilPhiNModule mc = induced_module(xc, 1);
    FilPhiNModule m = induced_module(x, 1);
    if (!in_h0(mc, in.P0, 0, hk_coords(xc, mc, 1, in.eta))) {
        violated("eta is not in H^0_st(D^1_c(0), P_0)");
    }
    const std::array<const LiftTarget*, 2> omegas{&in.omega1, &in.omega2};
    const std::array<const OnePoly*, 2> polys{&in.P1, &in.P2};
    for (std::size_t k = 0; k < 2; ++k) {
        const std::string name = "omega_" + std::to_string(k + 1);
        Vector a = hk_coords(x, m, 1, *omegas[k]);
        if (!in_h0(m, *polys[k], 1, a)) {
            violated(name + " is not in H^0_st(D^1(1), P_" + std::to_string(k + 1) + ")");
        }
        auto it = in.knight.find(1);
        if (it != in.knight.end()) {
            Matrix h0 = h0_basis(m, *polys[k], 1);
            check_knight_shape(&it->second, descent_h2_dim(x, *polys[k], 1, 0), h0.cols(), 1);
            if (h0.cols() > 0 && !is_zero(a)) {
                Vector coords = *solve_vector(h0, a);
                if (!is_zero(it->second * coords)) {
                    violated(name + " is not in the kernel of the knight's move map");
                }
            }
        }
    }
    OnePoly p = total_poly(in);
    if (p.eval(f.one()).is_zero()) {
        violated("(P_0 ⋆ P_1 ⋆ P_2)(1) = 0");
    }
    if (p.eval(x.q().inverse()).is_zero()) {
        violated("(P_0 ⋆ P_1 ⋆ P_2)(q^-1) = 0");
    }
    Pairing pr = curve.action();
    CohomologyGroup h2 = xc.B.cohomology(f, 2);
    Vector eta_dr = dr_cochain(xc, 1, in.eta);
    for (std::size_t k = 0; k < 2; ++k) {
        Vector prod = pr.mulB(1, eta_dr, 1, dr_cochain(x, 1, *omegas[k]));
        if (!h2.is_coboundary(prod)) {
            violated("eta ∪ omega_" + std::to_string(k + 1) + " != 0 in H^2_dR");
        }
    }
    if (curve.proper() && (in.P0.eval(f.one()).is_zero() || in.P0.eval(x.q()).is_zero())) {
        violated("proper case needs P_0(1) != 0 and P_0(q) != 0");
    }
}

Elem triple_symbol_from_lifts(const CurveDatum& curve, const SynClass& eta, const SynClass& omega1,
                              const SynClass& omega2, const Elem& lambda) {
    SynClass w = syn_cup(omega1, omega2, lambda);
    SynClass t = syn_cup(eta, w, lambda, std::nullopt, curve.action());
    return syn_trace(curve, t);
}

TripleResult triple_symbol(const CurveDatum& curve, const TripleInputs& in) {
    check_triple_assumption(curve, in);
    SynClass eta = lift_to_syn(syn_build(curve.compact(), in.P0, 0), 1, in.eta);
    SynClass o1 = lift_to_syn(syn_build(curve.X, in.P1, 1), 1, in.omega1);
    SynClass o2 = lift_to_syn(syn_build(curve.X, in.P2, 1), 1, in.omega2);
    SynClass w = syn_cup(o1, o2, in.lambda);
    SynClass t = syn_cup(eta, w, in.lambda, std::nullopt, curve.action());
    return {syn_trace(curve, t), eta, o1, o2, t};
}

AltResult triple_symbol_alt(const CurveDatum& curve, const TripleInputs& in) {
    check_triple_assumption(curve, in);
    const HKDatum& x = *curve.X;
    const HKDatum& xc = *curve.compact();
    const Field& f = x.field;
    SynClass o1 = lift_to_syn(syn_build(curve.X, in.P1, 1), 1, in.omega1);
    SynClass o2 = lift_to_syn(syn_build(curve.X, in.P2, 1), 1, in.omega2);
    SynClass w = syn_cup(o1, o2, in.lambda);
    const SynComplex& k = *w.complex;

    // Subtract d(u', v', 0, ...) so that the product has u = v = 0.
    auto src = k.offsets(1);
    auto dst = k.offsets(2);
    Matrix d1 = k.differential(1);
    Matrix block = d1.block(0, 0, dst[2], src[2]);
    Vector head = slice(w.cochain, 0, dst[2]);
    Vector adjusted = w.cochain;
    if (!is_zero(head)) {
        auto sol = block.cols() == 0 ? std::nullopt : solve_vector(block, head);
        if (!sol) {
            violated("omega_1 ∪ omega_2 does not reduce to Fil^1 of the descent filtration");
        }
        Vector full = concat({*sol, zero_vector(f, src.back() - src[2])});
        adjusted = adjusted - d1 * full;
    }
    SynClass red{w.complex, 2, adjusted};
    // HK degree 1 carries the Koszul sign in the descent identification.
    const Elem minus = -f.one();
    AltResult out{f.zero(), minus * red.component("w"), minus * red.component("x"), minus * red.component("y")};

    FilPhiNModule mc = induced_module(xc, 1);
    CohomologyGroup hc = xc.A.cohomology(f, 1);
    Vector a = hk_coords(xc, mc, 1, in.eta);
    OnePoly p12 = star(in.P1, in.P2);
    Matrix rop = eval_at_operator(p12, inverse(mc.phi), x.q().inverse());
    Matrix ker = kernel(eval_at_operator(in.P0, mc.phi, f.one()));
    Matrix rk = ker.cols() == 0 ? Matrix(f, mc.n, 0) : rop * ker;
    if (ker.cols() > 0 && rank(rk) != ker.cols()) {
        throw Error(ErrorKind::OperatorNotInvertible, "(P_1 ⋆ P_2)(q^-1 Phi^-1) is not bijective on ker P_0(Phi)");
    }
    Vector t = zero_vector(f, mc.n);
    if (!is_zero(a)) {
        auto s = solve_vector(rk, a);
        if (!s) {
            throw Error(ErrorKind::InternalInconsistency, "eta outside ker P_0(Phi)");
        }
        t = ker * *s;
    }
    Pairing pr = curve.action();
    Vector eta_dr = dr_cochain(xc, 1, in.eta);
    Vector t_dr = xc.iota_at(1) * (hc.reps * t);
    Vector first = pr.mulB(1, eta_dr, 1, out.y);
    Vector second = pr.mulB(1, t_dr, 1, x.iota_at(1) * out.w);
    out.value = dot(curve.trace, first) - dot(curve.trace, second);
    return out;
}

} // namespace fpsyn
