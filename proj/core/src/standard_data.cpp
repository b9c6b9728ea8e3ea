#include "fpsyn/standard_data.hpp"

#include <set>

namespace fpsyn {

namespace {

Matrix m1(const Field& f, const Elem& v) { return Matrix(f, 1, 1, {v}); }

DGAComplex unit_dga(const Field& f) {
    DGAComplex g;
    g.dims = {1};
    g.mult.insert_or_assign({0, 0}, m1(f, f.one()));
    g.unit = {f.one()};
    return g;
}

Matrix pad(const Matrix& m, std::size_t rows, std::size_t cols) {
    Matrix out(m.field(), rows, cols);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out.at(i, j) = m.at(i, j);
        }
    }
    return out;
}

/// The unit acts on degree k of size n from both sides.
void set_unit_products(const Field& f, DGAComplex& g, int k) {
    const std::size_t n = g.dim(k);
    Matrix left(f, n, g.dim(0) * n);
    Matrix right(f, n, n * g.dim(0));
    for (std::size_t a = 0; a < n; ++a) {
        left.at(a, a) = f.one();
        right.at(a, a * g.dim(0)) = f.one();
    }
    if (k == 0) {
        g.mult.insert_or_assign({0, 0}, left);
        return;
    }
    g.mult.insert_or_assign({0, k}, left);
    g.mult.insert_or_assign({k, 0}, right);
}

void extend_dga(const Field& f, DGAComplex& g, int k) {
    std::vector<std::size_t> old = g.dims;
    g.dims[static_cast<std::size_t>(k)] += 1;
    g.dims[static_cast<std::size_t>(k + 1)] += 1;
    for (int i = 0; i < g.top(); ++i) {
        Matrix nd = pad(g.d[static_cast<std::size_t>(i)], g.dim(i + 1), g.dim(i));
        if (i == k) {
            nd.at(g.dim(k + 1) - 1, g.dim(k) - 1) = f.one();
        }
        g.d[static_cast<std::size_t>(i)] = nd;
    }
    std::map<std::pair<int, int>, Matrix> mult;
    for (const auto& [ij, m] : g.mult) {
        auto [i, j] = ij;
        Matrix nm(f, g.dim(i + j), g.dim(i) * g.dim(j));
        const std::size_t oj = old[static_cast<std::size_t>(j)];
        for (std::size_t row = 0; row < m.rows(); ++row) {
            for (std::size_t col = 0; col < m.cols(); ++col) {
                std::size_t a = col / oj;
                std::size_t b = col % oj;
                nm.at(row, a * g.dim(j) + b) = m.at(row, col);
            }
        }
        mult.insert_or_assign(ij, nm);
    }
    g.mult = mult;
    g.unit.push_back(f.zero());
    // The unit is the first basis vector; it fixes the new vectors from both sides.
    for (int deg : {k, k + 1}) {
        const std::size_t idx = g.dim(deg) - 1;
        Matrix& left = g.mult.try_emplace({0, deg}, Matrix(f, g.dim(deg), g.dim(0) * g.dim(deg))).first->second;
        left.at(idx, idx) = f.one();
        if (deg != 0) {
            Matrix& right = g.mult.try_emplace({deg, 0}, Matrix(f, g.dim(deg), g.dim(deg) * g.dim(0))).first->second;
            right.at(idx, idx * g.dim(0)) = f.one();
        } else {
            left.at(idx, idx * g.dim(0)) = f.one();
        }
    }
}

Filtration extend_fil(const Field& f, const Filtration& fil, long fil_index) {
    const std::size_t n = fil.dim() + 1;
    std::set<long> idx{fil_index};
    for (const auto& s : fil.steps()) {
        idx.insert(s.index);
    }
    std::vector<FilStep> samples;
    for (long i : idx) {
        Matrix b = pad(fil.at(i), n, fil.at(i).cols());
        if (i <= fil_index) {
            Vector g = zero_vector(f, n);
            g[n - 1] = f.one();
            b = hstack({b, Matrix::from_columns(f, n, {g})});
        }
        samples.push_back({i, b});
    }
    return Filtration::from_samples(f, n, samples);
}

} // namespace

HKDatum point_datum(const Field& f, long p, long fpow) {
    HKDatum d{f, p, fpow, unit_dga(f), unit_dga(f), {m1(f, f.one())}, {m1(f, f.zero())}, {m1(f, f.one())},
              {Filtration::single_jump(f, 1, 0)}};
    require_valid(d);
    return d;
}

HKDatum datum_from_module(const FilPhiNModule& m) {
    const Field& f = m.field;
    const std::size_t n = m.n;
    DGAComplex g = unit_dga(f);
    g.dims = {1, n};
    g.d = {Matrix(f, n, 1)};
    set_unit_products(f, g, 1);
    HKDatum d{f,
              m.p,
              m.f,
              g,
              g,
              {m1(f, f.one()), m.phi},
              {m1(f, f.zero()), m.N},
              {m1(f, f.one()), m.iota},
              {Filtration::single_jump(f, 1, 0), m.fil}};
    require_valid(d);
    return d;
}

HKDatum tate_curve_datum(const Field& f, long p, long fpow) {
    Elem q = f.from_int(p).pow(fpow);
    Matrix phi(f, 2, 2, {f.one(), f.zero(), f.zero(), q});
    Matrix n(f, 2, 2, {f.zero(), f.one(), f.zero(), f.zero()});
    Vector e1{f.zero(), f.one()};
    FilPhiNModule m = make_module(f, p, fpow, phi, n, Matrix::identity(f, 2),
                                  {{0, Matrix::identity(f, 2)}, {1, Matrix::from_columns(f, 2, {e1})}});
    return datum_from_module(m);
}

HKDatum with_acyclic_pair(const HKDatum& d, int k, const Elem& gamma, long fil_index) {
    if (k < 0 || k >= d.A.top()) {
        throw Error(ErrorKind::DegreeOutOfRange, "acyclic pair needs degrees k and k+1 inside the datum");
    }
    const Field& f = d.field;
    HKDatum out = d;
    extend_dga(f, out.A, k);
    extend_dga(f, out.B, k);
    for (int deg : {k, k + 1}) {
        auto u = static_cast<std::size_t>(deg);
        std::size_t na = out.A.dim(deg);
        std::size_t nb = out.B.dim(deg);
        out.phi[u] = pad(d.phi[u], na, na);
        out.phi[u].at(na - 1, na - 1) = gamma;
        out.N[u] = pad(d.N[u], na, na);
        out.iota[u] = pad(d.iota[u], nb, na);
        out.iota[u].at(nb - 1, na - 1) = f.one();
        out.fil[u] = extend_fil(f, d.fil[u], fil_index);
    }
    require_valid(out);
    return out;
}

CurveDatum genus_one_curve(const Field& f, long p, long fpow, const Elem& alpha) {
    const Elem q = f.from_int(p).pow(fpow);
    DGAComplex g = unit_dga(f);
    g.dims = {1, 2, 1};
    g.d = {Matrix(f, 2, 1), Matrix(f, 1, 2)};
    set_unit_products(f, g, 1);
    set_unit_products(f, g, 2);
    // kron order (a, b) -> 2a + b: e1e1, e1e2, e2e1, e2e2
    g.mult.insert_or_assign({1, 1}, Matrix(f, 1, 4, {f.zero(), f.one(), -f.one(), f.zero()}));
    Matrix phi1(f, 2, 2, {alpha, f.zero(), f.zero(), q / alpha});
    Vector e1{f.one(), f.zero()};
    std::vector<Filtration> fil{Filtration::single_jump(f, 1, 0),
                                Filtration(f, 2, {{0, Matrix::identity(f, 2)}, {1, Matrix::from_columns(f, 2, {e1})}}),
                                Filtration::single_jump(f, 1, 1)};
    HKDatum x{f,
              p,
              fpow,
              g,
              g,
              {m1(f, f.one()), phi1, m1(f, q)},
              {m1(f, f.zero()), Matrix(f, 2, 2), m1(f, f.zero())},
              {m1(f, f.one()), Matrix::identity(f, 2), m1(f, f.one())},
              fil};
    require_valid(x);
    CurveDatum c;
    c.X = std::make_shared<const HKDatum>(x);
    c.trace = {f.one()};
    return c;
}

CurveDatum delta_torus_curve(long p) {
    Field f = Field::extension({Rational(p), Rational(0), Rational(1)}, p, Rational(1, 2));
    const Elem q = f.from_int(p);
    const Elem z = f.zero();
    const Elem o = f.one();
    const Elem g = f.gen();
    DGAComplex a = unit_dga(f);
    a.dims = {1, 3, 2};
    a.d = {Matrix(f, 3, 1), Matrix(f, 2, 3, {o, o, -o, o, o, -o})};
    set_unit_products(f, a, 1);
    set_unit_products(f, a, 2);
    // (phi cup psi)(U) = phi(a) psi(b), (phi cup psi)(L) = phi(b) psi(a)
    Matrix cup(f, 2, 9);
    cup.at(0, 1) = o;
    cup.at(1, 3) = o;
    a.mult.insert_or_assign({1, 1}, cup);
    // Phi swaps the two loops: a <- b, b <- -q a.
    Matrix phi1(f, 3, 3, {z, o, z, -q, z, z, z, o + q, -q});
    Matrix phi2(f, 2, 2, {z, -q, -q, z});
    Vector omega{o, g, o + g};
    Vector gamma{z, z, o};
    std::vector<Filtration> fil{
        Filtration::single_jump(f, 1, 0),
        Filtration(f, 3,
                   {{0, Matrix::identity(f, 3)}, {1, Matrix::from_columns(f, 3, {omega, gamma})},
                    {2, Matrix::from_columns(f, 3, {gamma})}}),
        Filtration(f, 2, {{1, Matrix::identity(f, 2)}, {2, Matrix::from_columns(f, 2, {Vector{o, o}})}})};
    HKDatum x{f,
              p,
              1,
              a,
              a,
              {m1(f, o), phi1, phi2},
              {m1(f, z), Matrix(f, 3, 3), Matrix(f, 2, 2)},
              {m1(f, o), Matrix::identity(f, 3), Matrix::identity(f, 2)},
              fil};
    require_valid(x);
    CurveDatum c;
    c.X = std::make_shared<const HKDatum>(x);
    c.trace = {o, -o};
    return c;
}

} // namespace fpsyn
