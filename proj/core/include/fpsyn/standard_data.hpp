#pragma once

// Small reference data used by tests, benchmarks and the shipped examples.

#include "fpsyn/syncomplex.hpp"

namespace fpsyn {

/// A = B = the ground field in degree 0, Phi = 1, N = 0, Fil^0 = all, Fil^1 = 0.
HKDatum point_datum(const Field& f, long p, long fpow = 1);

/// Degrees 0 and 1 with zero differential; H^1 has Phi = diag(1, q), N e1 = e0,
/// Fil^0 = all, Fil^1 = <e1>, Fil^2 = 0.
HKDatum tate_curve_datum(const Field& f, long p, long fpow = 1);

/// Degrees 0 and 1 with zero differential and H^1 equal to the given module.
HKDatum datum_from_module(const FilPhiNModule& d);

/// Adds an acyclic pair g -> dg in degrees (k, k+1) with Phi(g) = gamma g and
/// Fil^i B containing g exactly for i <= fil_index. All products with g vanish.
HKDatum with_acyclic_pair(const HKDatum& d, int k, const Elem& gamma, long fil_index);

/// Proper genus-one model: H^1 = <e1, e2> with Phi = diag(alpha, q/alpha),
/// e1 e2 = t = -e2 e1, Phi(t) = q t, N = 0, Fil^1 H^1 = <e1>, trace t -> 1.
CurveDatum genus_one_curve(const Field& f, long p, long fpow, const Elem& alpha);

/// One-vertex torus with edges a, b, c = a + b and faces U, L over Q(g), g^2 = -p,
/// with the ordered cup product, which is not graded commutative on cochains.
/// Phi swaps the loops (a <- b, b <- -p a), so omega = a* + g b* + (1 + g) c* is an
/// eigenvector for g; Fil^1 B^1 = <omega, c*>, Fil^2 B^1 = <c*>, Fil^2 B^2 = <U* + L*>.
/// omega cup omega = g (U* + L*) is a nonzero coboundary.
CurveDatum delta_torus_curve(long p);

} // namespace fpsyn
