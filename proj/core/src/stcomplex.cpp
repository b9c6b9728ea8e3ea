#include "fpsyn/stcomplex.hpp"

#include <algorithm>

namespace fpsyn {

std::size_t StComplex::dim(int k) const {
    switch (k) {
    case 0: return module.n + fil0.cols();
    case 1: return 3 * module.n;
    case 2: return module.n;
    default: return 0;
    }
}

Matrix StComplex::differential(int k) const {
    if (k == 0) {
        return d0;
    }
    if (k == 1) {
        return d1;
    }
    return Matrix(module.field, dim(k + 1), dim(k));
}

StComplexPtr st_build(const FilPhiNModule& d, const OnePoly& p) {
    require_valid(d);
    if (!(p.field() == d.field)) {
        throw Error(ErrorKind::FieldMismatch, "polynomial and module over different fields");
    }
    const Field& f = d.field;
    const std::size_t n = d.n;
    Matrix fil0 = d.fil.at(0);
    const std::size_t k = fil0.cols();
    Elem q = d.q();
    Matrix p_phi = eval_at_operator(p, d.phi, f.one());
    Matrix p_qphi = eval_at_operator(p, d.phi, q);
    Matrix zero_nk(f, n, k);
    Matrix d0 = vstack({hstack({p_phi, zero_nk}), hstack({d.N, zero_nk}), hstack({d.iota, -fil0})});
    Matrix d1 = hstack({d.N, -p_qphi, Matrix(f, n, n)});
    if (!(d1 * d0).is_zero()) {
        throw Error(ErrorKind::InternalInconsistency, "d1 d0 != 0 on a validated module");
    }
    return std::make_shared<const StComplex>(StComplex{d, p, std::move(fil0), std::move(d0), std::move(d1)});
}

// ---------------------------------------------------------------------------
// Classes

Vector StClass::component(const std::string& name) const {
    const std::size_t n = complex->module.n;
    const std::size_t k = complex->fil0.cols();
    if (degree == 0) {
        if (name == "u") {
            return slice(cocycle, 0, n);
        }
        if (name == "v") {
            return slice(cocycle, n, k);
        }
    } else if (degree == 1) {
        if (name == "w") {
            return slice(cocycle, 0, n);
        }
        if (name == "x") {
            return slice(cocycle, n, n);
        }
        if (name == "y") {
            return slice(cocycle, 2 * n, n);
        }
    } else if (degree == 2 && name == "z") {
        return cocycle;
    }
    throw Error(ErrorKind::DegreeOutOfRange, "no component '" + name + "' in degree " + std::to_string(degree));
}

Vector StClass::v_ambient() const { return complex->fil0 * component("v"); }

namespace {

void check_degree(int degree) {
    if (degree < 0 || degree > 2) {
        throw Error(ErrorKind::DegreeOutOfRange, "st degree must be 0, 1 or 2, got " + std::to_string(degree));
    }
}

Vector fil0_coords(const StComplex& c, const Vector& v) {
    if (c.fil0.cols() == 0) {
        if (!is_zero(v)) {
            throw Error(ErrorKind::PreconditionFailed, "v is not in Fil^0 D_K (Fil^0 = 0)");
        }
        return {};
    }
    auto x = solve_vector(c.fil0, v);
    if (!x) {
        throw Error(ErrorKind::PreconditionFailed, "v is not in Fil^0 D_K");
    }
    return *x;
}

bool is_cocycle(const StComplex& c, int degree, const Vector& v) {
    if (degree == 2) {
        return true;
    }
    return is_zero(c.differential(degree) * v);
}

} // namespace

StClass st_class_from_vector(const StComplexPtr& c, int degree, Vector cocycle) {
    check_degree(degree);
    if (cocycle.size() != c->dim(degree)) {
        throw Error(ErrorKind::ShapeMismatch, "cochain length differs from C^" + std::to_string(degree));
    }
    if (!is_cocycle(*c, degree, cocycle)) {
        throw Error(ErrorKind::PreconditionFailed, "cochain is not a cocycle");
    }
    return {c, degree, std::move(cocycle)};
}

StClass make_st_class(const StComplexPtr& c, int degree, const std::map<std::string, Vector>& components) {
    check_degree(degree);
    const Field& f = c->module.field;
    const std::size_t n = c->module.n;
    auto get = [&](const std::string& name) {
        auto it = components.find(name);
        if (it == components.end()) {
            return zero_vector(f, n);
        }
        if (it->second.size() != n) {
            throw Error(ErrorKind::ShapeMismatch, "component '" + name + "' must have length " + std::to_string(n));
        }
        return it->second;
    };
    static const std::map<int, std::vector<std::string>> allowed{{0, {"u", "v"}}, {1, {"w", "x", "y"}}, {2, {"z"}}};
    for (const auto& [name, _] : components) {
        const auto& ok = allowed.at(degree);
        if (std::find(ok.begin(), ok.end(), name) == ok.end()) {
            throw Error(ErrorKind::ParseError, "component '" + name + "' not present in degree " + std::to_string(degree));
        }
    }
    Vector v;
    if (degree == 0) {
        v = concat({get("u"), fil0_coords(*c, get("v"))});
    } else if (degree == 1) {
        v = concat({get("w"), get("x"), get("y")});
    } else {
        v = get("z");
    }
    return st_class_from_vector(c, degree, std::move(v));
}

std::array<std::size_t, 3> StCohomology::dims() const {
    return {groups[0].dim(), groups[1].dim(), groups[2].dim()};
}

StClass StCohomology::rep(const StComplexPtr& c, int degree, std::size_t index) const {
    check_degree(degree);
    const auto& g = groups[static_cast<std::size_t>(degree)];
    if (index >= g.dim()) {
        throw Error(ErrorKind::DegreeOutOfRange, "class index out of range");
    }
    return {c, degree, g.reps.column(index)};
}

StCohomology st_cohomology(const StComplex& c) {
    const Field& f = c.module.field;
    StCohomology h{{compute_cohomology(Matrix(f, c.dim(0), 0), c.d0, 0), compute_cohomology(c.d0, c.d1, 1),
                    compute_cohomology(c.d1, Matrix(f, 0, c.dim(2)), 2)}};
    return h;
}

bool st_is_coboundary(const StComplex& c, int degree, const Vector& v) {
    check_degree(degree);
    if (degree == 0) {
        return is_zero(v);
    }
    return subspace_contains(c.differential(degree - 1), v);
}

// ---------------------------------------------------------------------------
// Products

StClass st_cup(const StClass& c1, const StClass& c2, const Elem& lambda, const std::optional<BezoutPair>& ab) {
    return st_cup(c1, c2, lambda, ab, nullptr);
}

StClass st_cup(const StClass& c1, const StClass& c2, const Elem& lambda, const std::optional<BezoutPair>& ab_in,
               const StComplexPtr& target_in) {
    const StComplex& k1 = *c1.complex;
    const StComplex& k2 = *c2.complex;
    if (!(k1.module.field == k2.module.field)) {
        throw Error(ErrorKind::FieldMismatch, "cup of classes over different fields");
    }
    if (c1.degree + c2.degree > 2) {
        throw Error(ErrorKind::DegreeOutOfRange, "degrees " + std::to_string(c1.degree) + " + " +
                                                     std::to_string(c2.degree) + " exceed 2");
    }
    if (!is_cocycle(k1, c1.degree, c1.cocycle) || !is_cocycle(k2, c2.degree, c2.cocycle)) {
        throw Error(ErrorKind::PreconditionFailed, "cup inputs must be cocycles");
    }
    const Field& f = k1.module.field;
    StComplexPtr target = target_in ? target_in : st_build(tensor(k1.module, k2.module), star(k1.P, k2.P));
    BezoutPair ab = ab_in ? *ab_in : bezout_star(k1.P, k2.P);
    const Matrix& phi1 = k1.module.phi;
    const Matrix& phi2 = k2.module.phi;
    const Elem q = k1.module.q();
    const Matrix qphi1 = q * phi1;
    const Matrix qphi2 = q * phi2;
    const Elem one = f.one();
    const int deg = c1.degree + c2.degree;
    const std::size_t n = target->module.n;
    Vector out;
    auto pick = [](const StClass& c, const char* name) { return c.component(name); };

    if (c1.degree == 0 && c2.degree == 0) {
        Vector u = kron(pick(c1, "u"), pick(c2, "u"));
        Vector v = kron(c1.v_ambient(), c2.v_ambient());
        out = concat({u, fil0_coords(*target, v)});
    } else if (c1.degree == 0 && c2.degree == 1) {
        Vector u = pick(c1, "u");
        Vector mix = lambda * (k1.module.iota * u) + (one - lambda) * c1.v_ambient();
        out = concat({eval_bivar(ab.b, phi1, phi2) * kron(u, pick(c2, "w")), kron(u, pick(c2, "x")),
                      kron(mix, pick(c2, "y"))});
    } else if (c1.degree == 1 && c2.degree == 0) {
        Vector u2 = pick(c2, "u");
        Vector mix = (one - lambda) * (k2.module.iota * u2) + lambda * c2.v_ambient();
        out = concat({eval_bivar(ab.a, phi1, phi2) * kron(pick(c1, "w"), u2), kron(pick(c1, "x"), u2),
                      kron(pick(c1, "y"), mix)});
    } else if (c1.degree == 0 && c2.degree == 2) {
        out = eval_bivar(ab.b, phi1, qphi2) * kron(pick(c1, "u"), pick(c2, "z"));
    } else if (c1.degree == 2 && c2.degree == 0) {
        out = eval_bivar(ab.a, qphi1, phi2) * kron(pick(c1, "z"), pick(c2, "u"));
    } else {
        Vector first = eval_bivar(ab.a, phi1, qphi2) * kron(pick(c1, "w"), pick(c2, "x"));
        Vector second = eval_bivar(ab.b, qphi1, phi2) * kron(pick(c1, "x"), pick(c2, "w"));
        out = second - first;
    }
    (void)n;
    if (!is_cocycle(*target, deg, out)) {
        throw Error(ErrorKind::InternalInconsistency, "cup product of cocycles is not a cocycle");
    }
    return {target, deg, std::move(out)};
}

// ---------------------------------------------------------------------------
// Convenient modules

bool is_convenient(const FilPhiNModule& d, const OnePoly& p) {
    if (!d.N.is_zero()) {
        return false;
    }
    return is_invertible(eval_at_operator(p, d.phi, d.field.one())) && is_invertible(eval_at_operator(p, d.phi, d.q()));
}

FilQuotient::FilQuotient(Matrix fil0) : sub(column_space(fil0)) {
    std::vector<bool> is_pivot(sub.rows(), false);
    for (std::size_t k = 0; k < sub.cols(); ++k) {
        for (std::size_t i = 0; i < sub.rows(); ++i) {
            if (!sub.at(i, k).is_zero()) {
                pivots.push_back(i);
                is_pivot[i] = true;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < sub.rows(); ++i) {
        if (!is_pivot[i]) {
            free_coords.push_back(i);
        }
    }
}

Vector FilQuotient::reduce(const Vector& y) const {
    Vector r = y;
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        Elem c = r[pivots[k]];
        if (!c.is_zero()) {
            r = r - c * sub.column(k);
        }
    }
    return r;
}

Vector FilQuotient::coords(const Vector& y) const {
    Vector r = reduce(y);
    Vector out;
    for (auto i : free_coords) {
        out.push_back(r[i]);
    }
    return out;
}

Vector FilQuotient::from_coords(const Vector& c) const {
    if (c.size() != free_coords.size()) {
        throw Error(ErrorKind::ShapeMismatch, "quotient coordinates have the wrong length");
    }
    const Field& f = sub.field();
    Vector y = zero_vector(f, sub.rows());
    for (std::size_t k = 0; k < free_coords.size(); ++k) {
        y[free_coords[k]] = c[k];
    }
    return y;
}

StClass convenient_forward(const StComplexPtr& c, const Vector& y) {
    if (!is_convenient(c->module, c->P)) {
        throw Error(ErrorKind::NotConvenient, "module is not convenient for P");
    }
    const Field& f = c->module.field;
    const std::size_t n = c->module.n;
    if (y.size() != n) {
        throw Error(ErrorKind::ShapeMismatch, "y must lie in D_K");
    }
    return st_class_from_vector(c, 1, concat({zero_vector(f, n), zero_vector(f, n), y}));
}

Vector convenient_inverse(const StClass& c) {
    const StComplex& k = *c.complex;
    if (!is_convenient(k.module, k.P)) {
        throw Error(ErrorKind::NotConvenient, "module is not convenient for P");
    }
    if (c.degree != 1) {
        throw Error(ErrorKind::DegreeOutOfRange, "convenient isomorphism lives in degree 1");
    }
    Matrix p_phi = eval_at_operator(k.P, k.module.phi, k.module.field.one());
    Vector y = c.component("y") - k.module.iota * (inverse(p_phi) * c.component("w"));
    return FilQuotient(k.fil0).reduce(y);
}

Elem trace_qp1(const StClass& c) {
    const StComplex& k = *c.complex;
    const FilPhiNModule& m = k.module;
    const Field& f = m.field;
    bool model = m.n == 1 && m.N.is_zero() && m.phi.at(0, 0) == m.q().inverse() && m.fil.at(-1).cols() == 1 &&
                 m.fil.at(0).cols() == 0;
    if (!model) {
        throw Error(ErrorKind::PreconditionFailed, "class does not live on the Qp(1)-model");
    }
    if (c.degree != 1) {
        throw Error(ErrorKind::DegreeOutOfRange, "trace is defined on degree-1 classes");
    }
    if (k.P.eval(f.one()).is_zero()) {
        throw Error(ErrorKind::PolynomialVanishes, "P(1) = 0");
    }
    Elem pq = k.P.eval(m.q().inverse());
    if (pq.is_zero()) {
        throw Error(ErrorKind::PolynomialVanishes, "P(q^-1) = 0");
    }
    return c.component("y")[0] - pq.inverse() * m.iota.at(0, 0) * c.component("w")[0];
}

StClass change_of_P(const StClass& c, const OnePoly& q) { return change_of_P(c, q, nullptr); }

StClass change_of_P(const StClass& c, const OnePoly& q, const StComplexPtr& target_in) {
    const StComplex& k = *c.complex;
    StComplexPtr target = target_in ? target_in : st_build(k.module, k.P * q);
    const Field& f = k.module.field;
    Vector out;
    if (c.degree == 0) {
        out = c.cocycle;
    } else if (c.degree == 1) {
        out = concat({eval_at_operator(q, k.module.phi, f.one()) * c.component("w"), c.component("x"), c.component("y")});
    } else {
        out = eval_at_operator(q, k.module.phi, k.module.q()) * c.component("z");
    }
    return {target, c.degree, std::move(out)};
}

Matrix contraction(const Field& f, std::size_t n) {
    Matrix c(f, 1, n * n);
    for (std::size_t i = 0; i < n; ++i) {
        c.at(0, i * n + i) = f.one();
    }
    return c;
}

bool PairingReport::all_equal() const {
    return std::all_of(entries.begin(), entries.end(), [](const PairingEntry& e) { return e.equal; });
}

PairingReport pairing_check(const FilPhiNModule& d, const OnePoly& p, const OnePoly& q, const Elem& lambda) {
    require_valid(d);
    const Field& f = d.field;
    if (!d.N.is_zero()) {
        throw Error(ErrorKind::PreconditionFailed, "D is not crystalline (N != 0)");
    }
    if (!is_convenient(d, p)) {
        throw Error(ErrorKind::PreconditionFailed, "D is not convenient for P (P(Phi) or P(q*Phi) not invertible)");
    }
    OnePoly pq = star(p, q);
    if (pq.eval(f.one()).is_zero()) {
        throw Error(ErrorKind::PreconditionFailed, "(P⋆Q)(1) = 0");
    }
    if (pq.eval(d.q().inverse()).is_zero()) {
        throw Error(ErrorKind::PreconditionFailed, "(P⋆Q)(q^-1) = 0");
    }
    FilPhiNModule dual = dual_twist(d);
    StComplexPtr c1 = st_build(d, p);
    StComplexPtr c2 = st_build(dual, q);
    StComplexPtr target = st_build(tensor(d, dual), pq);
    StComplexPtr model = st_build(qp1_model(f, d.p, d.f), pq);
    BezoutPair ab = bezout_star(p, q);
    StCohomology h1 = st_cohomology(*c1);
    StCohomology h0 = st_cohomology(*c2);
    Matrix contract = contraction(f, d.n);

    PairingReport rep{lambda, ab, {}};
    for (std::size_t i = 0; i < h1.groups[1].dim(); ++i) {
        StClass base = h1.rep(c1, 1, i);
        std::vector<std::pair<std::string, StClass>> variants{{"rep", base}};
        for (std::size_t k = 0; k < c1->dim(0); ++k) {
            Vector e = zero_vector(f, c1->dim(0));
            e[k] = f.one();
            variants.push_back({"rep + d0(e" + std::to_string(k) + ")",
                                StClass{c1, 1, base.cocycle + c1->d0 * e}});
        }
        for (std::size_t j = 0; j < h0.groups[0].dim(); ++j) {
            StClass eta = h0.rep(c2, 0, j);
            for (const auto& [label, c] : variants) {
                Elem left = dot(convenient_inverse(c), eta.v_ambient());
                StClass prod = st_cup(c, eta, lambda, ab, target);
                Vector w = contract * prod.component("w");
                Vector x = contract * prod.component("x");
                Vector y = contract * prod.component("y");
                StClass reduced = st_class_from_vector(model, 1, concat({w, x, y}));
                Elem right = trace_qp1(reduced);
                rep.entries.push_back({i, j, label, left, right, left == right});
            }
        }
    }
    return rep;
}

} // namespace fpsyn
