#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "torheight/toric.hpp"

using namespace torheight;

namespace {

ConcavePA minForm1d(std::initializer_list<std::pair<long, long>> slopeConst) {
    std::vector<AffineForm> pieces;
    for (auto [s, c] : slopeConst) pieces.push_back({qvec({s}), Rat(c)});
    return canonicalMinForm(pieces, 1);
}

// dilated standard simplex d*conv{0, e_1, ..., e_n}
Polytope dilatedSimplex(size_t n, long d) {
    std::vector<QVec> verts;
    verts.push_back(QVec(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        QVec v(n, Rat(0));
        v[i] = d;
        verts.push_back(v);
    }
    return convexHull(verts);
}

ConcavePA randomConcaveLattice(std::mt19937_64& rng, size_t dim) {
    while (true) {
        size_t count = 2 + rng() % 5;
        std::vector<AffineForm> pieces;
        for (size_t i = 0; i < count; ++i) {
            QVec slope(dim);
            for (auto& s : slope) s = ratOf(static_cast<long>(rng() % 7) - 3);
            pieces.push_back({slope, ratOf(static_cast<long>(rng() % 9) - 4)});
        }
        ConcavePA f = canonicalMinForm(pieces, dim);
        if (f.pieces.size() >= 2 && stabilitySet(f).dim == dim) return f;
    }
}

}  // namespace

TEST_CASE("support function of segments and simplices") {
    SupportFunctionData seg = supportFunctionOfPolytope(convexHull({qvec({0}), qvec({1})}));
    CHECK(seg.evaluate(qvec({1})) == 0);
    CHECK(seg.evaluate(qvec({-1})) == -1);
    CHECK(seg.strictlyConcave);

    SupportFunctionData simp = supportFunctionOfPolytope(dilatedSimplex(2, 1));
    CHECK(simp.evaluate(qvec({1, 1})) == 0);
    CHECK(simp.evaluate(qvec({-1, 0})) == -1);
    CHECK(simp.evaluate(qvec({-1, -2})) == -2);

    // conv{(0,0),(2,0),(0,2)}: min(0, 2u1, 2u2) evaluated on sample rays
    SupportFunctionData big = supportFunctionOfPolytope(dilatedSimplex(2, 2));
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b) {
            QVec u = qvec({a, b});
            Rat expect = std::min({Rat(0), Rat(2 * u[0]), Rat(2 * u[1])});
            CHECK(big.evaluate(u) == expect);
        }
}

TEST_CASE("support function of a lower-dimensional lattice polytope") {
    // segment from (0,0) to (1,1) inside the plane: full-dimensional in
    // its affine lattice, where it becomes [0,1]
    Polytope diag = convexHull({qvec({0, 0}), qvec({1, 1})});
    SupportFunctionData sf = supportFunctionOfPolytope(diag);
    CHECK(sf.fan.ambientRank == 1);
    CHECK(sf.strictlyConcave);
    CHECK(degree(sf) == 1);
    CHECK_THROWS_WITH(supportFunctionOfPolytope(convexHull({qvec({0}), QVec{ratOf(1, 2)}})),
                      "support function needs a lattice polytope");
}

TEST_CASE("divisor coefficients") {
    SupportFunctionData line = supportFunctionOfPolytope(convexHull({qvec({0}), qvec({1})}));
    ToricDivisorReport rep = weilDivisorCoefficients(line);
    REQUIRE(rep.rayCoefficients.size() == 2);
    CHECK(rep.rayCoefficients[0].first == zvec({-1}));
    CHECK(rep.rayCoefficients[0].second == 1);
    CHECK(rep.rayCoefficients[1].first == zvec({1}));
    CHECK(rep.rayCoefficients[1].second == 0);
    CHECK(rep.basePointFree);
    CHECK(rep.ample);

    // projective plane: rays e1, e2, -e1-e2 with coefficients 0, 0, 1
    SupportFunctionData plane = supportFunctionOfPolytope(dilatedSimplex(2, 1));
    ToricDivisorReport rp = weilDivisorCoefficients(plane);
    REQUIRE(rp.rayCoefficients.size() == 3);
    for (const auto& [ray, c] : rp.rayCoefficients) {
        if (ray == zvec({-1, -1})) CHECK(c == 1);
        else CHECK(c == 0);
    }

    // constant zero support function on the same fan: all coefficients 0
    SupportFunctionData zero = classifySupportFunction(
        plane.fan, std::vector<QVec>(plane.fan.maximal.size(), qvec({0, 0})));
    for (const auto& [ray, c] : weilDivisorCoefficients(zero).rayCoefficients) CHECK(c == 0);
    CHECK(zero.concave);
    CHECK(!zero.strictlyConcave);
}

TEST_CASE("degree formula for twisted projective spaces and products") {
    // d-th twist of projective n-space: degree d^n
    for (size_t n = 1; n <= 3; ++n)
        for (long d = 1; d <= 4; ++d) {
            SupportFunctionData sf = supportFunctionOfPolytope(dilatedSimplex(n, d));
            Rat expect = 1;
            for (size_t i = 0; i < n; ++i) expect *= d;
            CHECK(degree(sf) == expect);
        }
    // product of two lines with bidegree (a,b): degree 2ab
    for (long a = 1; a <= 3; ++a)
        for (long b = 1; b <= 3; ++b) {
            Polytope rect = convexHull({qvec({0, 0}), qvec({a, 0}), qvec({0, b}), qvec({a, b})});
            CHECK(degree(supportFunctionOfPolytope(rect)) == 2 * a * b);
        }
}

TEST_CASE("degree rejects non-concave data") {
    Cone right = Cone::fromRays({qvec({1})}, 1);
    Cone left = Cone::fromRays({qvec({-1})}, 1);
    Fan fan = Fan::build({right, left});
    std::vector<QVec> slopes(2);
    for (size_t i = 0; i < 2; ++i)
        slopes[i] = fan.cones[fan.maximal[i]].contains(qvec({1})) ? qvec({1}) : qvec({-1});
    SupportFunctionData bad = classifySupportFunction(fan, slopes);
    CHECK_THROWS_WITH(degree(bad), "degree needs a concave support function");
}

TEST_CASE("orbit multiplicities") {
    ConcavePA f = canonicalMinForm({{qvec({0}), Rat(0)}, {qvec({2}), Rat(-1)}}, 1);
    // induced complex has the vertex {1/2}
    const PolyComplex& pi = f.inducedComplex;
    Polytope half = convexHull({QVec{ratOf(1, 2)}});
    ValueGroup z = ValueGroup::discrete(1);
    CHECK(orbitMultiplicity(pi, half, z).mult == 2);
    CHECK(orbitMultiplicity(pi, half, ValueGroup::divisible()).mult == 1);
    CHECK(orbitMultiplicity(pi, half, ValueGroup::discrete(ratOf(1, 2))).mult == 1);

    ConcavePA g = minForm1d({{0, 0}, {1, 0}});
    Polytope origin = convexHull({qvec({0})});
    CHECK(orbitMultiplicity(g.inducedComplex, origin, z).mult == 1);
    CHECK_THROWS_WITH(orbitMultiplicity(g.inducedComplex, half, z),
                      "cell does not belong to the complex");
}

TEST_CASE("vertical cycle degrees") {
    ValueGroup z = ValueGroup::discrete(1);
    ConcavePA f = minForm1d({{0, 0}, {1, 0}});
    LatticeFunction lf = LatticeFunction::fromConcave(f, z);
    Polytope origin = convexHull({qvec({0})});
    CHECK(verticalCycleDegree(lf, origin, qvec({0})) == 1);

    // the ray [0, inf) is a full-dimensional cell: degree 0
    Polyhedron ray = Polyhedron::fromHalfspaces({{qvec({1}), Rat(0)}}, 1);
    CHECK(verticalCycleDegree(lf, ray, qvec({2})) == 0);
    CHECK_THROWS_WITH(verticalCycleDegree(lf, ray, qvec({0})), "v not interior");

    // vertex at 1/2 with multiplicity 2: degree 1!*2/2 = 1
    ConcavePA g = canonicalMinForm({{qvec({0}), Rat(0)}, {qvec({2}), Rat(-1)}}, 1);
    LatticeFunction lg = LatticeFunction::fromConcave(g, z);
    Polytope half = convexHull({QVec{ratOf(1, 2)}});
    CHECK(verticalCycleDegree(lg, half, QVec{ratOf(1, 2)}) == 1);
}

TEST_CASE("vertical degree is invariant under affine shifts of the function") {
    ValueGroup z = ValueGroup::discrete(1);
    ConcavePA f = canonicalMinForm(
        {{qvec({0, 0}), Rat(0)}, {qvec({1, 0}), Rat(0)}, {qvec({0, 1}), Rat(0)}}, 2);
    LatticeFunction lf = LatticeFunction::fromConcave(f, z);
    Polytope origin = convexHull({qvec({0, 0})});
    Rat d0 = verticalCycleDegree(lf, origin, qvec({0, 0}));
    CHECK(d0 == 1);
    // phi - <m, .> - l has the same complex and shifted sup-differentials
    std::vector<AffineForm> shifted;
    for (const auto& p : f.pieces) shifted.push_back({add(p.slope, qvec({2, -1})), p.constant - 3});
    LatticeFunction ls = LatticeFunction::fromConcave(canonicalMinForm(shifted, 2), z);
    CHECK(verticalCycleDegree(ls, origin, qvec({0, 0})) == d0);
}

TEST_CASE("toric local height examples") {
    SupportFunctionData line = supportFunctionOfPolytope(convexHull({qvec({0}), qvec({1})}));
    // canonical metric: zero
    CHECK(toricLocalHeight(line, line.minForm()).value == 0);
    // psi = min(1, u): 2 * integral of (m-1) over [0,1] = -1
    LocalHeight h = toricLocalHeight(line, minForm1d({{0, 1}, {1, 0}}));
    CHECK(h.value == -1);
    CHECK(h.dimension == 1);
    // psi = Psi - c has roof constant c: height 2c
    for (long c = -3; c <= 3; ++c) {
        LocalHeight hc = toricLocalHeight(line, minForm1d({{0, -c}, {1, -c}}));
        CHECK(hc.value == 2 * c);
    }
    // mismatched recession
    CHECK_THROWS_WITH(toricLocalHeight(line, minForm1d({{0, 0}, {2, 0}})),
                      "psi is not a metric for Psi");
}

TEST_CASE("canonical nullity, scaling law and twist invariance") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        size_t dim = 1 + trial % 2;
        ConcavePA psi = randomConcaveLattice(rng, dim);
        SupportFunctionData bigPsi = supportFunctionFromMinForm(recessionFunction(psi).homogeneous);
        // canonical metric gives zero
        CHECK(toricLocalHeight(bigPsi, bigPsi.minForm()).value == 0);
        Rat base = toricLocalHeight(bigPsi, psi).value;

        // scaling: psi + c drops the height by (n+1)! * c * vol
        Rat c = ratOf(static_cast<long>(rng() % 9) - 4);
        std::vector<AffineForm> shifted;
        for (const auto& p : psi.pieces) shifted.push_back({p.slope, p.constant + c});
        Rat fact = 1;
        for (size_t i = 2; i <= dim + 1; ++i) fact *= Rat(i);
        Rat vol = volume(bigPsi.stabilityPolytope(), VolumeMode::Ambient);
        CHECK(toricLocalHeight(bigPsi, canonicalMinForm(shifted, dim)).value ==
              base - fact * c * vol);

        // twist: translate every slope by a lattice vector
        QVec m0(dim);
        for (auto& x : m0) x = ratOf(static_cast<long>(rng() % 7) - 3);
        std::vector<AffineForm> twistedPsi, twistedBig;
        for (const auto& p : psi.pieces) twistedPsi.push_back({add(p.slope, m0), p.constant});
        ConcavePA psiT = canonicalMinForm(twistedPsi, dim);
        SupportFunctionData bigT = supportFunctionFromMinForm(recessionFunction(psiT).homogeneous);
        CHECK(toricLocalHeight(bigT, psiT).value == base);
    }
}

TEST_CASE("local height with discrete value group enforces rationality") {
    SupportFunctionData line = supportFunctionOfPolytope(convexHull({qvec({0}), qvec({1})}));
    ConcavePA psi = canonicalMinForm({{qvec({0}), ratOf(1, 2)}, {qvec({1}), Rat(0)}}, 1);
    CHECK_THROWS_WITH(toricLocalHeight(line, psi, ValueGroup::discrete(1)),
                      "psi is not Gamma-rational");
    CHECK(toricLocalHeight(line, psi, ValueGroup::discrete(ratOf(1, 2))).value == ratOf(-1, 2));
}

TEST_CASE("tropical pushforward measure") {
    // psi = min(0,u): atom at 0, mass 1
    DiscreteMeasure m1 = tropPushforwardMeasure(minForm1d({{0, 0}, {1, 0}}));
    REQUIRE(m1.atoms.size() == 1);
    CHECK(m1.atoms[0].point == qvec({0}));
    CHECK(m1.atoms[0].mass == 1);
    // psi = min(0,u1,u2): atom at origin, mass 2!*(1/2) = 1
    ConcavePA plane = canonicalMinForm(
        {{qvec({0, 0}), Rat(0)}, {qvec({1, 0}), Rat(0)}, {qvec({0, 1}), Rat(0)}}, 2);
    DiscreteMeasure m2 = tropPushforwardMeasure(plane);
    REQUIRE(m2.atoms.size() == 1);
    CHECK(m2.atoms[0].mass == 1);
    // psi = min(1,u): atom at 1
    DiscreteMeasure m3 = tropPushforwardMeasure(minForm1d({{0, 1}, {1, 0}}));
    REQUIRE(m3.atoms.size() == 1);
    CHECK(m3.atoms[0].point == qvec({1}));

    // mass/degree consistency on random functions
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        size_t dim = 1 + trial % 2;
        ConcavePA psi = randomConcaveLattice(rng, dim);
        SupportFunctionData rec = supportFunctionFromMinForm(recessionFunction(psi).homogeneous);
        CHECK(tropPushforwardMeasure(psi).totalMass() == degree(rec));
    }
}

TEST_CASE("roof restriction to faces of the fan") {
    SupportFunctionData line = supportFunctionOfPolytope(convexHull({qvec({0}), qvec({1})}));
    ConcavePA psi = minForm1d({{0, 1}, {1, 0}});

    // trivial cone: the full roof on [0,1]
    Cone trivial = Cone::fromRays({}, 1);
    ConcaveOnPolytope full = roofRestrictToFace(psi, line, trivial);
    CHECK(full.domain.sameSet(convexHull({qvec({0}), qvec({1})})));
    CHECK(full.evaluate(QVec{ratOf(1, 2)}) == ratOf(-1, 2));

    // sigma = [0,inf): F = {0}, m_sigma = 0, value psi^dual(0) = -1
    Cone right = Cone::fromRays({qvec({1})}, 1);
    ConcaveOnPolytope r0 = roofRestrictToFace(psi, line, right);
    CHECK(r0.domain.dim == 0);
    CHECK(r0.evaluate(qvec({0})) == -1);

    // sigma = (-inf,0]: F = {1}, m_sigma = 1, value psi^dual(1) = 0 at 0
    Cone left = Cone::fromRays({qvec({-1})}, 1);
    ConcaveOnPolytope r1 = roofRestrictToFace(psi, line, left);
    CHECK(r1.domain.dim == 0);
    CHECK(r1.domain.vertices[0] == qvec({0}));
    CHECK(r1.evaluate(qvec({0})) == 0);

    // a cone outside the fan
    Cone wrong = Cone::fromRays({qvec({1, 0})}, 2);
    SupportFunctionData square = supportFunctionOfPolytope(
        convexHull({qvec({0, 0}), qvec({1, 0}), qvec({0, 1}), qvec({1, 1})}));
    Cone notInFan = Cone::fromRays({qvec({1, 2})}, 2);
    ConcavePA psi2 = square.minForm();
    CHECK_THROWS_WITH(roofRestrictToFace(psi2, square, notInFan), "sigma not in the fan");

    // edge restriction on the square: sigma = ray e1, F = {0} x [0,1]
    ConcaveOnPolytope edge = roofRestrictToFace(psi2, square, wrong);
    CHECK(edge.domain.sameSet(convexHull({qvec({0, 0}), qvec({0, 1})})));
    CHECK(edge.evaluate(QVec{Rat(0), ratOf(1, 2)}) == 0);
}
