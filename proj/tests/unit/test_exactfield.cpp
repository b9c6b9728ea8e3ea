#include <gtest/gtest.h>

#include "fpsyn/exactfield.hpp"
#include "generators.hpp"

using namespace fpsyn;

namespace {

Field sqrt2() { return Field::extension({Rational(-2), Rational(0), Rational(1)}); }

Matrix qmat(std::size_t rows, std::size_t cols, std::vector<long> entries) {
    Field q = Field::rationals();
    std::vector<Elem> e;
    for (long v : entries) {
        e.push_back(q.from_int(v));
    }
    return Matrix(q, rows, cols, e);
}

} // namespace

// Oracles worked out by hand before running anything.
TEST(ExactFieldOracle, GeneratorSquaresToTwo) {
    Field f = sqrt2();
    EXPECT_EQ(f.gen() * f.gen(), f.from_int(2));
}

TEST(ExactFieldOracle, InverseOfGenerator) {
    Field f = sqrt2();
    EXPECT_EQ(f.gen().inverse(), f.parse("g/2"));
    EXPECT_EQ(f.gen().inverse().to_string(), "1/2*g");
}

TEST(ExactFieldOracle, RationalSum) {
    Field q = Field::rationals();
    EXPECT_EQ((q.parse("2/3") + q.parse("1/6")).to_string(), "5/6");
    EXPECT_EQ(field_arith(q.parse("2/3"), q.parse("1/6"), ArithOp::Add), q.parse("5/6"));
}

TEST(ExactFieldOracle, DivisionByZero) {
    Field q = Field::rationals();
    try {
        (void)field_arith(q.one(), q.zero(), ArithOp::Div);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
    }
}

TEST(ExactFieldOracle, KernelExamples) {
    Matrix k = kernel(qmat(2, 2, {1, 1, 1, 1}));
    ASSERT_EQ(k.cols(), 1U);
    EXPECT_EQ(k.at(0, 0).to_string(), "-1");
    EXPECT_EQ(k.at(1, 0).to_string(), "1");
    EXPECT_EQ(kernel(qmat(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1})).cols(), 0U);
    EXPECT_EQ(kernel(qmat(2, 3, {0, 0, 0, 0, 0, 0})).cols(), 3U);
}

TEST(ExactFieldOracle, SolveOrImage) {
    SolveResult r = solve_or_image(qmat(1, 1, {2}), qmat(1, 1, {3}));
    ASSERT_TRUE(r.solvable);
    EXPECT_EQ(r.solution->at(0, 0).to_string(), "3/2");

    SolveResult bad = solve_or_image(qmat(1, 1, {0}), qmat(1, 1, {1}));
    ASSERT_FALSE(bad.solvable);
    ASSERT_TRUE(bad.certificate.has_value());
    EXPECT_FALSE((*bad.certificate)[0].is_zero());

    Matrix t = qmat(2, 2, {4, -1, 7, 2});
    SolveResult id = solve_or_image(qmat(2, 2, {1, 0, 0, 1}), t);
    ASSERT_TRUE(id.solvable);
    EXPECT_EQ(*id.solution, t);
}

TEST(ExactFieldOracle, SolveShapeMismatch) {
    try {
        (void)solve_or_image(qmat(2, 2, {1, 0, 0, 1}), qmat(3, 1, {1, 2, 3}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
    }
}

TEST(ExactFieldOracle, Valuations) {
    Field q3 = Field::rationals(3);
    EXPECT_EQ(q3.parse("9/2").valuation(), Rational(2));
    EXPECT_EQ(q3.one().valuation(), Rational(0));
    Field r = Field::extension({Rational(-3), Rational(0), Rational(1)}, 3, Rational(1, 2));
    EXPECT_EQ(r.gen().pow(3).valuation(), Rational(3, 2));
}

TEST(ExactFieldOracle, ValuationRejections) {
    // x^2 - 2 at p = 7: 7 splits (3^2 = 2 mod 7), so two places.
    Field split = Field::extension({Rational(-2), Rational(0), Rational(1)}, 7, Rational(0));
    EXPECT_THROW((void)split.gen().valuation(), Error);
    // x^2 - 2 at p = 5: inert, fine.
    Field inert = Field::extension({Rational(-2), Rational(0), Rational(1)}, 5, Rational(0));
    EXPECT_EQ((inert.gen() + inert.from_int(5)).valuation(), Rational(0));
    // Without a prime there is nothing to measure.
    EXPECT_THROW((void)Field::rationals().one().valuation(), Error);
}

TEST(ExactFieldOracle, ReducibleMinpolyScreened) {
    EXPECT_THROW(Field::extension({Rational(-1), Rational(0), Rational(1)}), Error);
    // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
    EXPECT_THROW(Field::extension({Rational(4), Rational(0), Rational(0), Rational(0), Rational(1)}), Error);
    // x^4 - 2x^2 + 1 = (x^2 - 1)^2 has roots; x^4 + 2x^2 + 1 = (x^2 + 1)^2 does not.
    EXPECT_THROW(Field::extension({Rational(1), Rational(0), Rational(2), Rational(0), Rational(1)}), Error);
    EXPECT_NO_THROW(Field::extension({Rational(-2), Rational(0), Rational(0), Rational(0), Rational(1)}));
}

TEST(ExactFieldOracle, ParsePrintRoundTrip) {
    Field f = Field::extension({Rational(-2), Rational(0), Rational(0), Rational(1)});
    for (const char* text : {"0", "1/2 + 3*g", "-g^2", "1/2 - g + 7/3*g^2", "(1 + g)^3", "-(g - 1)*(g + 1)"}) {
        Elem e = f.parse(text);
        EXPECT_EQ(f.parse(e.to_string()), e) << text;
    }
    EXPECT_EQ(f.parse("(1 + g)^3").to_string(), "3 + 3*g + 3*g^2");
    EXPECT_THROW((void)f.parse("1 +"), Error);
    EXPECT_THROW((void)f.parse("T"), Error);
    EXPECT_THROW((void)Field::rationals().parse("g"), Error);
}

TEST(ExactFieldOracle, LinearAlgebraBasics) {
    Matrix m = qmat(3, 3, {2, 1, 0, 1, 3, 1, 0, 1, 4});
    EXPECT_EQ(determinant(m).to_string(), "18");
    EXPECT_EQ(m * inverse(m), Matrix::identity(m.field(), 3));
    Matrix a = qmat(3, 2, {1, 0, 0, 1, 0, 0});
    Matrix b = qmat(3, 2, {0, 0, 1, 0, 0, 1});
    Matrix meet = subspace_intersection(a, b);
    EXPECT_EQ(meet.cols(), 1U);
    EXPECT_EQ(subspace_sum(a, b).cols(), 3U);
    EXPECT_EQ(column_space(qmat(2, 2, {2, 4, 1, 2})), column_space(qmat(2, 1, {4, 2})));
    EXPECT_EQ(kron(qmat(1, 2, {1, 2}), qmat(2, 1, {3, 4})), qmat(2, 2, {3, 6, 4, 8}));
}

// Properties over random instances.
TEST(ExactFieldProperty, RankNullity) {
    testgen::Gen gen(11);
    Field f = sqrt2();
    for (int t = 0; t < 60; ++t) {
        std::size_t r = static_cast<std::size_t>(gen.integer(1, 4));
        std::size_t c = static_cast<std::size_t>(gen.integer(1, 4));
        Matrix m = gen.matrix(f, r, c);
        Matrix k = kernel(m);
        EXPECT_EQ(rank(m) + k.cols(), c);
        EXPECT_TRUE((m * k).is_zero());
        EXPECT_EQ(rank(k), k.cols());
    }
}

TEST(ExactFieldProperty, FieldAxioms) {
    testgen::Gen gen(12);
    Field f = Field::extension({Rational(1), Rational(1), Rational(0), Rational(1)});
    for (int t = 0; t < 60; ++t) {
        Elem a = gen.elem(f), b = gen.elem(f), c = gen.elem(f);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        if (!a.is_zero()) {
            EXPECT_TRUE((a * a.inverse()).is_one());
        }
    }
}

TEST(ExactFieldProperty, ValuationMultiplicative) {
    testgen::Gen gen(13);
    Field f = Field::extension({Rational(-3), Rational(0), Rational(1)}, 3, Rational(1, 2));
    for (int t = 0; t < 60; ++t) {
        Elem a = gen.nonzero_elem(f, 9), b = gen.nonzero_elem(f, 9);
        EXPECT_EQ((a * b).valuation(), a.valuation() + b.valuation());
    }
}

TEST(ExactFieldProperty, SolveCertificates) {
    testgen::Gen gen(14);
    Field f = Field::rationals();
    for (int t = 0; t < 60; ++t) {
        Matrix m = gen.matrix(f, 3, static_cast<std::size_t>(gen.integer(1, 3)));
        Matrix target = gen.matrix(f, 3, 1);
        SolveResult r = solve_or_image(m, target);
        if (r.solvable) {
            EXPECT_EQ(m * *r.solution, target);
        } else {
            Vector y = *r.certificate;
            Matrix yrow = Matrix::from_rows(f, 3, {y});
            EXPECT_TRUE((yrow * m).is_zero());
            EXPECT_FALSE((yrow * target).is_zero());
        }
    }
}
