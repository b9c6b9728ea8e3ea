#pragma once

// Cohomology of a finite cochain complex at one spot.

#include <optional>

#include "fpsyn/exactfield.hpp"

namespace fpsyn {

struct CohomologyGroup {
    std::size_t degree = 0;
    /// Basis of cocycles (columns).
    Matrix cocycles;
    /// Canonical basis of coboundaries (columns).
    Matrix boundaries;
    /// Representatives: kernel columns, in order, that are new modulo the image.
    Matrix reps;

    [[nodiscard]] std::size_t dim() const { return reps.cols(); }
    [[nodiscard]] bool is_cocycle(const Vector& v) const;
    [[nodiscard]] bool is_coboundary(const Vector& v) const;
    /// Class coordinates in the `reps` basis; nullopt when v is not a cocycle.
    [[nodiscard]] std::optional<Vector> coordinates(const Vector& v) const;
};

/// d_in: C^{k-1} -> C^k, d_out: C^k -> C^{k+1}.
CohomologyGroup compute_cohomology(const Matrix& d_in, const Matrix& d_out, std::size_t degree);

} // namespace fpsyn
