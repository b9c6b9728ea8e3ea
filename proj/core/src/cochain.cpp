#include "fpsyn/cochain.hpp"

namespace fpsyn {

bool CohomologyGroup::is_cocycle(const Vector& v) const { return subspace_contains(cocycles, v); }

bool CohomologyGroup::is_coboundary(const Vector& v) const { return subspace_contains(boundaries, v); }

std::optional<Vector> CohomologyGroup::coordinates(const Vector& v) const {
    if (!is_cocycle(v)) {
        return std::nullopt;
    }
    if (dim() == 0) {
        return Vector{};
    }
    Matrix m = boundaries.cols() == 0 ? reps : hstack({reps, boundaries});
    auto x = solve_vector(m, v);
    if (!x) {
        throw Error(ErrorKind::InternalInconsistency, "cocycle outside reps + boundaries");
    }
    return slice(*x, 0, dim());
}

CohomologyGroup compute_cohomology(const Matrix& d_in, const Matrix& d_out, std::size_t degree) {
    const Field& f = d_out.field();
    const std::size_t n = d_out.cols();
    if (d_in.rows() != n) {
        throw Error(ErrorKind::ShapeMismatch, "consecutive differentials do not compose");
    }
    Matrix cocycles = kernel(d_out);
    Matrix boundaries = d_in.cols() == 0 ? Matrix(f, n, 0) : column_space(d_in);
    std::vector<Vector> reps;
    Matrix span = boundaries;
    std::size_t r = rank(span);
    for (std::size_t j = 0; j < cocycles.cols(); ++j) {
        Vector c = cocycles.column(j);
        Matrix trial = hstack({span, Matrix::from_columns(f, n, {c})});
        std::size_t tr = rank(trial);
        if (tr > r) {
            reps.push_back(c);
            span = trial;
            r = tr;
        }
    }
    return {degree, cocycles, boundaries, Matrix::from_columns(f, n, reps)};
}

} // namespace fpsyn
