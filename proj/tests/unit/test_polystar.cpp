#include <gtest/gtest.h>

#include "fpsyn/polystar.hpp"
#include "generators.hpp"

using namespace fpsyn;

namespace {

Field Q() { return Field::rationals(); }
OnePoly P(const std::string& s) { return OnePoly::parse(Q(), s); }

} // namespace

TEST(StarOracle, SingleRoots) {
    EXPECT_EQ(star(P("1 - 2*T"), P("1 - 3*T")).to_string(), "1 - 6*T");
}

TEST(StarOracle, IdentityFactor) {
    EXPECT_EQ(star(P("1 - T"), P("1 + 3*T + 5*T^2")), P("1 + 3*T + 5*T^2"));
}

TEST(StarOracle, MinusOneSquared) {
    EXPECT_EQ(star(P("1 + T"), P("1 + T")), P("1 - T"));
}

TEST(StarOracle, SquareRootsScaled) {
    // roots +-1 times 2; (1 - 2T)(1 + 2T)
    EXPECT_EQ(star(P("1 - T^2"), P("1 - 2*T")), P("(1 - 2*T)*(1 + 2*T)"));
    EXPECT_EQ(star(P("1 - T^2"), P("1 - 2*T")).to_string(), "1 - 4*T^2");
}

TEST(StarOracle, ConstantPolynomial) {
    EXPECT_EQ(star(P("1"), P("1 - 5*T + T^2")), P("1"));
    EXPECT_EQ(star(P("1 + T"), P("1")), P("1"));
}

TEST(StarOracle, RepeatedRootsMultiset) {
    // (1 - T)^2 has root 1 twice; each pairs with 2 -> (1 - 2T)^2
    EXPECT_EQ(star(P("(1 - T)^2"), P("1 - 2*T")), P("(1 - 2*T)^2"));
}

TEST(StarOracle, OverExtension) {
    Field f = Field::extension({Rational(-2), Rational(0), Rational(1)});
    OnePoly a = OnePoly::parse(f, "1 - g*T");
    OnePoly b = OnePoly::parse(f, "1 + g*T");
    EXPECT_EQ(star(a, b).to_string(), "1 + 2*T");
    EXPECT_EQ(OnePoly::parse(f, "1 + (1 + g)*T - g*T^2").to_string(), "1 + (1 + g)*T - g*T^2");
}

TEST(BezoutOracle, SpecExamples) {
    // 3 T2 (1 - 2 T1) + (1 - 3 T2) = 1 - 6 T1 T2 is one valid pair; ours must satisfy the identity.
    BezoutPair ab = bezout_star(P("1 - 2*T"), P("1 - 3*T"));
    EXPECT_TRUE(bezout_identity_holds(P("1 - 2*T"), P("1 - 3*T"), ab));
    EXPECT_EQ(ab.a.to_string(), "3*T2");
    EXPECT_EQ(ab.b.to_string(), "1");
    BezoutPair id = bezout_star(P("1 - T"), P("1 - T"));
    EXPECT_EQ(id.a.to_string(), "T2");
    EXPECT_EQ(id.b.to_string(), "1");
    EXPECT_TRUE(bezout_identity_holds(P("1"), P("1 - T"), bezout_star(P("1"), P("1 - T"))));
    EXPECT_TRUE(bezout_identity_holds(P("1 + T"), P("1"), bezout_star(P("1 + T"), P("1"))));
}

TEST(EvalOracle, SpecExamples) {
    Field q = Q();
    EXPECT_TRUE(eval_at_operator(P("1 - T"), Matrix::identity(q, 2), q.one()).is_zero());
    Matrix m(q, 1, 1, {q.parse("1/3")});
    EXPECT_EQ(eval_at_operator(P("1 - 2*T"), m, q.one()).at(0, 0).to_string(), "1/3");
    Matrix nil(q, 2, 2, {q.zero(), q.one(), q.zero(), q.zero()});
    EXPECT_EQ(eval_at_operator(P("1 + T^2"), nil, q.one()), Matrix::identity(q, 2));
    EXPECT_THROW((void)eval_at_operator(P("1 + T"), Matrix(q, 2, 3), q.one()), Error);
}

TEST(ReflectOracle, Basic) {
    EXPECT_EQ(reflect(P("1 - 2*T")), P("1 - 1/2*T"));
    EXPECT_EQ(reflect(P("1 - 5*T + 6*T^2")), P("1 - 5/6*T + 1/6*T^2"));
}

TEST(LevelOracle, FactorThroughPower) {
    EXPECT_EQ(factor_through_power(P("1 - 4*T^2"), 2), P("1 - 4*T"));
    EXPECT_THROW((void)factor_through_power(P("1 - T - T^2"), 2), Error);
}

TEST(StarProperty, Laws) {
    testgen::Gen gen(21);
    Field q = Q();
    for (int t = 0; t < 40; ++t) {
        OnePoly a = gen.one_poly(q, 2), b = gen.one_poly(q, 2), c = gen.one_poly(q, 2);
        EXPECT_EQ(star(star(a, b), c), star(a, star(b, c)));
        EXPECT_EQ(star(a, b), star(b, a));
        EXPECT_EQ(star(P("1 - T"), b), b);
        EXPECT_EQ(star(a, b).degree(), a.degree() * b.degree());
    }
}

TEST(StarProperty, SplitRootsMultiply) {
    testgen::Gen gen(22);
    Field q = Q();
    for (int t = 0; t < 30; ++t) {
        std::vector<Elem> ra, rb;
        OnePoly a = OnePoly::one(q), b = OnePoly::one(q);
        for (long k = gen.integer(1, 2); k > 0; --k) {
            Elem r = gen.nonzero_elem(q, 4);
            ra.push_back(r);
            a = a * OnePoly(q, {q.one(), -r});
        }
        for (long k = gen.integer(1, 2); k > 0; --k) {
            Elem r = gen.nonzero_elem(q, 4);
            rb.push_back(r);
            b = b * OnePoly(q, {q.one(), -r});
        }
        OnePoly s = star(a, b);
        for (const auto& x : ra) {
            for (const auto& y : rb) {
                EXPECT_TRUE(s.eval((x * y).inverse()).is_zero());
            }
        }
    }
}

TEST(BezoutProperty, IdentityOnRandomPairs) {
    testgen::Gen gen(23);
    Field f = Field::extension({Rational(-3), Rational(0), Rational(1)});
    for (int t = 0; t < 60; ++t) {
        OnePoly a = gen.one_poly(f, 3, 2), b = gen.one_poly(f, 3, 2);
        EXPECT_TRUE(bezout_identity_holds(a, b, bezout_star(a, b)));
    }
}
