#pragma once

// Hand-rolled random generators for property tests. Seeds are fixed so every
// run exercises the same instances.

#include <random>
#include <vector>

#include "fpsyn/exactfield.hpp"
#include "fpsyn/phinmod.hpp"
#include "fpsyn/polystar.hpp"

namespace fpsyn::testgen {

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    Rational rational(long range = 5) {
        long num = integer(-range, range);
        long den = integer(1, 3);
        Rational r(num, den);
        r.canonicalize();
        return r;
    }

    Rational nonzero_rational(long range = 5) {
        Rational r = rational(range);
        while (r == 0) {
            r = rational(range);
        }
        return r;
    }

    Elem elem(const Field& f, long range = 5) {
        std::vector<Rational> c;
        for (std::size_t i = 0; i < f.degree(); ++i) {
            c.push_back(rational(range));
        }
        return Elem(f, c);
    }

    Elem nonzero_elem(const Field& f, long range = 5) {
        Elem e = elem(f, range);
        while (e.is_zero()) {
            e = elem(f, range);
        }
        return e;
    }

    Matrix matrix(const Field& f, std::size_t rows, std::size_t cols, long range = 3) {
        Matrix m(f, rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                if (integer(0, 2) != 0) {
                    m.at(i, j) = elem(f, range);
                }
            }
        }
        return m;
    }

    Matrix invertible(const Field& f, std::size_t n, long range = 2) {
        while (true) {
            Matrix m = matrix(f, n, n, range);
            if (is_invertible(m)) {
                return m;
            }
        }
    }

    OnePoly one_poly(const Field& f, std::size_t max_degree, long range = 4) {
        std::size_t d = static_cast<std::size_t>(integer(0, static_cast<long>(max_degree)));
        std::vector<Elem> c{f.one()};
        for (std::size_t k = 1; k <= d; ++k) {
            c.push_back(k == d ? nonzero_elem(f, range) : elem(f, range));
        }
        return OnePoly(f, c);
    }

    /// Random decreasing filtration on an n-dimensional space.
    Filtration filtration(const Field& f, std::size_t n) {
        if (n == 0) {
            return Filtration(f, 0, {});
        }
        Matrix basis = invertible(f, n, 2);
        std::vector<std::size_t> dims{n};
        while (dims.back() > 1 && coin()) {
            dims.push_back(static_cast<std::size_t>(integer(1, static_cast<long>(dims.back()) - 1)));
        }
        long index = integer(-2, 1);
        std::vector<FilStep> steps;
        for (std::size_t d : dims) {
            steps.push_back({index, basis.block(0, 0, n, d)});
            index += integer(1, 2);
        }
        return Filtration(f, n, steps);
    }

    /// Valid module built from N-chains e_0 <- e_1 <- ... with Phi e_j = lambda q^j e_j,
    /// conjugated by a random change of basis.
    FilPhiNModule module(const Field& f, long p, std::size_t n, bool crystalline = false, long fpow = 1) {
        Elem q = f.from_int(1);
        for (long k = 0; k < fpow; ++k) {
            q = q * f.from_int(p);
        }
        Matrix phi(f, n, n), nn(f, n, n);
        std::size_t at = 0;
        while (at < n) {
            std::size_t len = crystalline ? 1 : static_cast<std::size_t>(integer(1, static_cast<long>(n - at)));
            Elem lambda = nonzero_elem(f, 4);
            for (std::size_t j = 0; j < len; ++j) {
                phi.at(at + j, at + j) = lambda * q.pow(static_cast<long>(j));
                if (j > 0) {
                    nn.at(at + j - 1, at + j) = f.one();
                }
            }
            at += len;
        }
        Matrix s = invertible(f, n, 2);
        Matrix si = inverse(s);
        return FilPhiNModule{f, p, fpow, n, s * phi * si, s * nn * si, invertible(f, n, 2), filtration(f, n)};
    }

    std::mt19937& engine() { return rng_; }

private:
    std::mt19937 rng_;
};

} // namespace fpsyn::testgen
