#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "torheight/linalg.hpp"

using namespace torheight;

TEST_CASE("rational parsing and printing") {
    CHECK(ratToString(parseRat("3/6")) == "1/2");
    CHECK(ratToString(parseRat("-4/2")) == "-2");
    CHECK(ratToString(parseRat("7")) == "7");
    CHECK(parseRat("123456789012345678901234567890/3") ==
          parseRat("41152263004115226300411522630"));
    CHECK_THROWS(parseRat(""));
    CHECK_THROWS(parseRat("x"));
}

TEST_CASE("exact arithmetic inverse") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
        long num = static_cast<long>(rng() % 2001) - 1000;
        long den = static_cast<long>(rng() % 999) + 1;
        if (num == 0) continue;
        Rat q = ratOf(num, den);
        CHECK(q * (1 / q) == 1);
    }
}

TEST_CASE("primitive vectors") {
    CHECK(primitiveVector(zvec({2, 4})) == zvec({1, 2}));
    CHECK(primitiveVector(zvec({-3, 0, 6})) == zvec({-1, 0, 2}));
    CHECK(primitiveVector(zvec({1, 1})) == zvec({1, 1}));
    CHECK_THROWS_WITH(primitiveVector(zvec({0, 0})), "zero has no primitive representative");
}

TEST_CASE("primitive is idempotent") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        ZVec v(3);
        for (auto& e : v) e = static_cast<long>(rng() % 41) - 20;
        if (isZero(v)) continue;
        ZVec p = primitiveVector(v);
        CHECK(primitiveVector(p) == p);
    }
}

TEST_CASE("lattice index examples") {
    CHECK(*latticeIndex({zvec({2})}, 1) == 2);
    CHECK(*latticeIndex({zvec({1, 0}), zvec({0, 1})}, 2) == 1);
    CHECK(*latticeIndex({zvec({2, 0}), zvec({1, 2})}, 2) == 4);
    CHECK(!latticeIndex({zvec({1, 2})}, 2).has_value());
    CHECK(!latticeIndex({zvec({1, 0, 0}), zvec({0, 1, 0})}, 3).has_value());
}

TEST_CASE("lattice index equals |det| for random square generators") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        size_t n = 1 + trial % 3;
        ZMat g(n, ZVec(n));
        QMat gq(n, QVec(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                long e = static_cast<long>(rng() % 11) - 5;
                g[i][j] = e;
                gq[i][j] = e;
            }
        Rat det = determinant(gq);
        auto idx = latticeIndex(g, n);
        if (det == 0) {
            CHECK(!idx.has_value());
        } else {
            REQUIRE(idx.has_value());
            CHECK(Rat(*idx) == abs(det));
        }
    }
}

TEST_CASE("kernel and solve") {
    QMat m = {qvec({1, 2, 3}), qvec({2, 4, 6})};
    auto k = kernelBasis(m);
    CHECK(k.size() == 2);
    for (const auto& v : k) CHECK(dot(m[0], v) == 0);

    auto x = solveLinear({qvec({2, 0}), qvec({0, 4})}, qvec({1, 2}));
    REQUIRE(x.has_value());
    CHECK((*x)[0] == ratOf(1, 2));
    CHECK((*x)[1] == ratOf(1, 2));
    CHECK(!solveLinear({qvec({1, 1}), qvec({1, 1})}, qvec({0, 1})).has_value());
}

TEST_CASE("saturated lattice basis") {
    // span of (2,2) over Q meets Z^2 in Z(1,1)
    auto b = saturatedLatticeBasis({qvec({2, 2})}, 2);
    REQUIRE(b.size() == 1);
    CHECK(primitiveVector(b[0]) == zvec({1, 1}));

    // plane x+y+z=0 meets Z^3 in a rank-2 saturated lattice of index 1
    auto b2 = saturatedLatticeBasis({qvec({1, -1, 0}), qvec({0, 1, -1})}, 3);
    REQUIRE(b2.size() == 2);
    for (const auto& v : b2) {
        Int s = v[0] + v[1] + v[2];
        CHECK(s == 0);
    }
    // (1,-1,0) must be an integer combination of the basis
    auto idx = latticeIndexInBasis(b2, {qvec({1, -1, 0}), qvec({0, 1, -1})});
    REQUIRE(idx.has_value());
    CHECK(*idx == 1);
}

TEST_CASE("value group membership") {
    ValueGroup div = ValueGroup::divisible();
    CHECK(div.contains(ratOf(7, 13)));
    ValueGroup z = ValueGroup::discrete(1);
    CHECK(z.contains(ratOf(-3)));
    CHECK(!z.contains(ratOf(1, 2)));
    ValueGroup half = ValueGroup::discrete(ratOf(1, 2));
    CHECK(half.contains(ratOf(3, 2)));
    CHECK(!half.contains(ratOf(1, 3)));
    CHECK_THROWS(ValueGroup::discrete(ratOf(-1)));
}
