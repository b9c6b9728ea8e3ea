#include "fpsyn/phinmod.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fpsyn {

// ---------------------------------------------------------------------------
// Filtration

Filtration::Filtration(Field field, std::size_t dim, std::vector<FilStep> steps)
    : field_(std::move(field)), dim_(dim), steps_(std::move(steps)) {
    for (auto& s : steps_) {
        if (s.basis.rows() != dim_) {
            throw Error(ErrorKind::ShapeMismatch, "filtration basis at index " + std::to_string(s.index) + " has " +
                                                      std::to_string(s.basis.rows()) + " rows, expected " +
                                                      std::to_string(dim_));
        }
        s.basis = column_space(s.basis);
    }
    std::stable_sort(steps_.begin(), steps_.end(), [](const FilStep& a, const FilStep& b) { return a.index < b.index; });
}

Filtration Filtration::from_samples(Field field, std::size_t dim, std::vector<FilStep> samples) {
    for (auto& s : samples) {
        s.basis = column_space(s.basis);
    }
    std::sort(samples.begin(), samples.end(), [](const FilStep& a, const FilStep& b) { return a.index < b.index; });
    std::vector<FilStep> out;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (k + 1 < samples.size() && samples[k + 1].index == samples[k].index) {
            continue;
        }
        bool same_as_next = k + 1 < samples.size() && samples[k + 1].basis == samples[k].basis;
        if (same_as_next || samples[k].basis.cols() == 0) {
            continue;
        }
        out.push_back(samples[k]);
    }
    return Filtration(std::move(field), dim, std::move(out));
}

Filtration Filtration::single_jump(const Field& field, std::size_t dim, long index) {
    if (dim == 0) {
        return Filtration(field, 0, {});
    }
    return Filtration(field, dim, {FilStep{index, Matrix::identity(field, dim)}});
}

Matrix Filtration::at(long i) const {
    for (const auto& s : steps_) {
        if (s.index >= i) {
            return s.basis;
        }
    }
    return Matrix(field_, dim_, 0);
}

Filtration Filtration::shifted(long by) const {
    std::vector<FilStep> s = steps_;
    for (auto& st : s) {
        st.index += by;
    }
    return Filtration(field_, dim_, std::move(s));
}

bool Filtration::operator==(const Filtration& b) const {
    if (dim_ != b.dim_ || steps_.size() != b.steps_.size()) {
        return false;
    }
    for (std::size_t k = 0; k < steps_.size(); ++k) {
        if (steps_[k].index != b.steps_[k].index || !(steps_[k].basis == b.steps_[k].basis)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Construction

Elem FilPhiNModule::q() const {
    mpz_class qq;
    mpz_ui_pow_ui(qq.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(f));
    return field.from_rational(Rational(qq));
}

FilPhiNModule make_module(Field field, long p, long f, Matrix phi, Matrix N, Matrix iota, std::vector<FilStep> fil) {
    if (p < 2) {
        throw Error(ErrorKind::InvalidModule, "p must be a prime >= 2");
    }
    if (f < 1) {
        throw Error(ErrorKind::InvalidModule, "f must be >= 1");
    }
    std::size_t n = phi.rows();
    Filtration filt(field, n, std::move(fil));
    return FilPhiNModule{std::move(field), p, f, n, std::move(phi), std::move(N), std::move(iota), std::move(filt)};
}

FilPhiNModule unit_module(const Field& field, long p, long f) {
    Matrix one = Matrix::identity(field, 1);
    return FilPhiNModule{field, p, f, 1, one, Matrix(field, 1, 1), one, Filtration::single_jump(field, 1, 0)};
}

FilPhiNModule qp1_model(const Field& field, long p, long f) { return tate_twist(unit_module(field, p, f), 1); }

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::ok() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.passed; });
}

std::string ValidationReport::first_failure() const {
    for (const auto& c : items) {
        if (!c.passed) {
            return c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
        }
    }
    return {};
}

ValidationReport validate(const FilPhiNModule& d) {
    ValidationReport rep;
    const std::size_t n = d.n;
    bool shapes = d.phi.rows() == n && d.phi.cols() == n && d.N.rows() == n && d.N.cols() == n &&
                  d.iota.rows() == n && d.iota.cols() == n && d.fil.dim() == n;
    rep.items.push_back({"shapes", shapes, shapes ? "" : "Phi, N, iota must be n x n"});
    if (!shapes) {
        return rep;
    }
    Elem q = d.q();
    bool rel = d.N * d.phi == q * (d.phi * d.N);
    rep.items.push_back({"N*Phi = q*Phi*N", rel, ""});
    bool nil = n == 0 || d.N.pow(n).is_zero();
    rep.items.push_back({"N nilpotent", nil, ""});
    rep.items.push_back({"Phi invertible", is_invertible(d.phi), ""});
    rep.items.push_back({"iota invertible", is_invertible(d.iota), ""});
    const auto& steps = d.fil.steps();
    bool exhaustive = n == 0 || (!steps.empty() && steps.front().basis.cols() == n);
    rep.items.push_back({"filtration exhaustive", exhaustive, exhaustive ? "" : "lowest listed step is not all of D_K"});
    bool strict = true;
    std::string why;
    for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
        if (steps[k].index == steps[k + 1].index) {
            strict = false;
            why = "index " + std::to_string(steps[k].index) + " listed twice";
            break;
        }
        if (!subspace_contains(steps[k].basis, steps[k + 1].basis) ||
            steps[k + 1].basis.cols() >= steps[k].basis.cols()) {
            strict = false;
            why = "Fil at index " + std::to_string(steps[k + 1].index) + " is not strictly inside the previous step";
            break;
        }
    }
    if (!steps.empty() && steps.back().basis.cols() == 0) {
        strict = false;
        why = "zero step listed";
    }
    rep.items.push_back({"filtration strictly decreasing", strict, why});
    return rep;
}

void require_valid(const FilPhiNModule& d) {
    ValidationReport rep = validate(d);
    if (!rep.ok()) {
        throw Error(ErrorKind::InvalidModule, "module check failed: " + rep.first_failure());
    }
}

// ---------------------------------------------------------------------------
// Operations

FilPhiNModule tate_twist(const FilPhiNModule& d, long r) {
    FilPhiNModule out = d;
    out.phi = d.q().pow(-r) * d.phi;
    out.fil = d.fil.shifted(-r);
    return out;
}

FilPhiNModule tensor(const FilPhiNModule& a, const FilPhiNModule& b) {
    if (!(a.field == b.field)) {
        throw Error(ErrorKind::FieldMismatch, "tensor of modules over different fields");
    }
    if (a.p != b.p || a.f != b.f) {
        throw Error(ErrorKind::FieldMismatch, "tensor of modules with different q");
    }
    const Field& f = a.field;
    const std::size_t n = a.n * b.n;
    Matrix ia = Matrix::identity(f, a.n), ib = Matrix::identity(f, b.n);
    std::set<long> candidates;
    for (const auto& s : a.fil.steps()) {
        for (const auto& t : b.fil.steps()) {
            candidates.insert(s.index + t.index);
        }
    }
    std::vector<FilStep> samples;
    for (long i : candidates) {
        Matrix acc(f, n, 0);
        for (const auto& s : a.fil.steps()) {
            Matrix other = b.fil.at(i - s.index);
            if (other.cols() == 0) {
                continue;
            }
            acc = subspace_sum(acc, kron(s.basis, other));
        }
        samples.push_back({i, acc});
    }
    FilPhiNModule out{f,
                      a.p,
                      a.f,
                      n,
                      kron(a.phi, b.phi),
                      kron(a.N, ib) + kron(ia, b.N),
                      kron(a.iota, b.iota),
                      Filtration::from_samples(f, n, std::move(samples))};
    return out;
}

FilPhiNModule dual_twist(const FilPhiNModule& d) {
    const Field& f = d.field;
    Elem qinv = d.q().inverse();
    std::set<long> candidates;
    for (const auto& s : d.fil.steps()) {
        candidates.insert(-s.index - 1);
        candidates.insert(-s.index);
    }
    std::vector<FilStep> samples;
    for (long i : candidates) {
        Matrix sub = d.fil.at(-i);
        // Annihilator under the dot product: kernel of sub^T.
        Matrix perp = sub.cols() == 0 ? Matrix::identity(f, d.n) : kernel(sub.transpose());
        samples.push_back({i, perp});
    }
    FilPhiNModule out{f,
                      d.p,
                      d.f,
                      d.n,
                      qinv * inverse(d.phi.transpose()),
                      -d.N.transpose(),
                      inverse(d.iota.transpose()),
                      Filtration::from_samples(f, d.n, std::move(samples))};
    return out;
}

Rational hodge_number(const Filtration& fil) {
    Rational t = 0;
    const auto& s = fil.steps();
    for (std::size_t k = 0; k < s.size(); ++k) {
        std::size_t next = k + 1 < s.size() ? s[k + 1].basis.cols() : 0;
        t += Rational(s[k].index) * Rational(static_cast<long>(s[k].basis.cols() - next));
    }
    return t;
}

HodgeNewton hodge_newton(const FilPhiNModule& d) {
    Rational tn = d.n == 0 ? Rational(0) : determinant(d.phi).valuation() / Rational(d.f);
    return {hodge_number(d.fil), tn};
}

// ---------------------------------------------------------------------------
// Characteristic polynomials and weak admissibility

UPoly characteristic_polynomial(const Matrix& m) {
    if (!m.is_square()) {
        throw Error(ErrorKind::ShapeMismatch, "characteristic polynomial of a non-square matrix");
    }
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
    const Field& f = m.field();
    const std::size_t n = m.rows();
    UPoly c(n + 1, f.zero());
    c[n] = f.one();
    Matrix mk = Matrix::identity(f, n);
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix am = m * mk;
        Elem tr = f.zero();
        for (std::size_t i = 0; i < n; ++i) {
            tr += am.at(i, i);
        }
        c[n - k] = -(tr / f.from_int(static_cast<long>(k)));
        mk = am + Matrix::scalar(c[n - k], n);
    }
    return c;
}

OnePoly annihilating_poly(const Matrix& m) {
    UPoly chi = characteristic_polynomial(m);
    if (chi[0].is_zero()) {
        throw Error(ErrorKind::OperatorNotInvertible, "matrix is singular; no annihilating polynomial with constant term 1");
    }
    return OnePoly(m.field(), upoly_scale(chi[0].inverse(), chi));
}

std::vector<Rational> rational_roots(const UPoly& p) {
    UPoly t = upoly_trim(p);
    std::vector<Rational> coeffs;
    for (const auto& c : t) {
        Rational r;
        if (!c.as_rational(r)) {
            throw Error(ErrorKind::UnsupportedModule, "characteristic polynomial has irrational coefficients");
        }
        coeffs.push_back(r);
    }
    std::vector<Rational> roots;
    if (coeffs.size() <= 1) {
        return roots;
    }
    std::size_t low = 0;
    while (coeffs[low] == 0) {
        ++low;
    }
    if (low > 0) {
        roots.push_back(0);
    }
    std::vector<Rational> red(coeffs.begin() + static_cast<std::ptrdiff_t>(low), coeffs.end());
    if (red.size() <= 1) {
        return roots;
    }
    mpz_class den = 1;
    for (const auto& c : red) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    }
    std::vector<mpz_class> z;
    for (const auto& c : red) {
        z.push_back(Rational(c * Rational(den)).get_num());
    }
    auto divisors = [](mpz_class v) {
        v = abs(v);
        if (v > mpz_class("1000000000000")) {
            throw Error(ErrorKind::UnsupportedModule, "characteristic polynomial coefficients too large for the root search");
        }
        std::vector<mpz_class> out;
        for (mpz_class d = 1; d * d <= v; ++d) {
            if (v % d == 0) {
                out.push_back(d);
                if (d * d != v) {
                    out.push_back(v / d);
                }
            }
        }
        return out;
    };
    std::set<Rational> found;
    for (const auto& a : divisors(z.front())) {
        for (const auto& b : divisors(z.back())) {
            for (int sgn : {1, -1}) {
                Rational x(a * sgn, b);
                x.canonicalize();
                Rational acc = 0;
                for (std::size_t k = red.size(); k-- > 0;) {
                    acc = acc * x + red[k];
                }
                if (acc == 0) {
                    found.insert(x);
                }
            }
        }
    }
    roots.insert(roots.end(), found.begin(), found.end());
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {

Rational induced_hodge(const FilPhiNModule& d, const Matrix& sub_dk) {
    Rational t = 0;
    const auto& s = d.fil.steps();
    std::vector<std::size_t> dims;
    for (const auto& st : s) {
        dims.push_back(subspace_intersection(sub_dk, st.basis).cols());
    }
    for (std::size_t k = 0; k < s.size(); ++k) {
        std::size_t next = k + 1 < s.size() ? dims[k + 1] : 0;
        t += Rational(s[k].index) * Rational(static_cast<long>(dims[k] - next));
    }
    return t;
}

} // namespace

WAReport check_weak_admissibility(const FilPhiNModule& d) {
    require_valid(d);
    WAReport rep;
    const Field& f = d.field;
    const std::size_t n = d.n;
    if (n > 12) {
        throw Error(ErrorKind::UnsupportedModule, "subobject enumeration limited to dimension <= 12");
    }
    UPoly chi = characteristic_polynomial(d.phi);
    std::vector<Rational> roots = rational_roots(chi);
    if (roots.size() != n) {
        throw Error(ErrorKind::UnsupportedModule,
                    "Phi is not split with pairwise distinct eigenvalues over the coefficient field");
    }
    // Distinct roots give a simple spectrum; each eigenspace is a line.
    std::vector<Vector> lines;
    for (const auto& r : roots) {
        Elem lambda = f.from_rational(r);
        rep.eigenvalues.push_back(lambda);
        Matrix k = kernel(d.phi - Matrix::scalar(lambda, n));
        if (k.cols() != 1) {
            throw Error(ErrorKind::UnsupportedModule, "eigenspace is not a line");
        }
        lines.push_back(k.column(0));
    }
    std::vector<Rational> vals;
    for (const auto& e : rep.eigenvalues) {
        vals.push_back(e.valuation());
    }
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<Vector> cols;
        SubobjectCheck sc;
        Rational tn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                cols.push_back(lines[i]);
                sc.eigen_indices.push_back(i);
                tn += vals[i];
            }
        }
        Matrix sub = Matrix::from_columns(f, n, cols);
        if (!subspace_contains(sub, d.N * sub)) {
            continue;
        }
        sc.t_n = tn / Rational(d.f);
        sc.t_h = induced_hodge(d, d.iota * sub);
        bool full = cols.size() == n;
        sc.ok = full ? sc.t_n == sc.t_h : sc.t_n >= sc.t_h;
        if (!sc.ok) {
            std::string idx;
            for (auto i : sc.eigen_indices) {
                idx += (idx.empty() ? "" : ",") + rep.eigenvalues[i].to_string();
            }
            if (full) {
                rep.violations.push_back("t_N(D) = " + rational_to_string(sc.t_n) + " differs from t_H(D) = " +
                                         rational_to_string(sc.t_h));
            } else {
                rep.violations.push_back("subobject spanned by eigenvalues {" + idx + "}: t_N = " +
                                         rational_to_string(sc.t_n) + " < t_H = " + rational_to_string(sc.t_h));
            }
        }
        rep.subobjects.push_back(std::move(sc));
    }
    rep.weakly_admissible = rep.violations.empty();
    return rep;
}

} // namespace fpsyn
