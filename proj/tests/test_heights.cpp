#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "torheight/heights.hpp"

using namespace torheight;

namespace {

RoofInstance lineInstance() {
    RoofInstance inst;
    inst.dimension = 1;
    inst.exponents = {zvec({0}), zvec({1})};
    return inst;
}

Place finitePlace(const std::string& id, const Rat& weight, const Rat& height,
                  std::vector<long> orders) {
    Place p;
    p.kind = Place::Kind::Finite;
    p.id = id;
    p.weight = weight;
    p.height = height;
    p.orders = std::move(orders);
    return p;
}

Place pointPlace(const std::string& id, const Rat& weight, QVec lambdas) {
    Place p;
    p.kind = Place::Kind::PointValue;
    p.id = id;
    p.weight = weight;
    p.lambdas = std::move(lambdas);
    return p;
}

// tent profile on [0, length): 0 at 0, peak at length/2
std::vector<std::pair<Rat, Rat>> tentProfile(const Rat& length, const Rat& peak) {
    return {{Rat(0), Rat(0)}, {length / 2, peak}};
}

Place circlePlace(const std::string& id, const Rat& weight, const Rat& length,
                  std::vector<std::vector<std::pair<Rat, Rat>>> profiles) {
    Place p;
    p.kind = Place::Kind::Circle;
    p.id = id;
    p.weight = weight;
    p.length = length;
    p.lambdaFunctions = std::move(profiles);
    return p;
}

}  // namespace

TEST_CASE("instance validation") {
    RoofInstance inst = lineInstance();
    CHECK_NOTHROW(inst.validate());

    RoofInstance bad = inst;
    bad.exponents = {zvec({1}), zvec({0})};
    CHECK_THROWS_WITH(bad.validate(), "first exponent must be zero");

    RoofInstance sparse = inst;
    sparse.exponents = {zvec({0}), zvec({2})};
    CHECK_THROWS_WITH(sparse.validate(), "exponents must generate the full lattice");

    RoofInstance plane;
    plane.dimension = 2;
    plane.exponents = {zvec({0, 0}), zvec({1, 0}), zvec({0, 1})};
    CHECK_NOTHROW(plane.validate());

    RoofInstance withBadOrder = inst;
    withBadOrder.places = {finitePlace("v", 1, 1, {1, -1})};
    CHECK_THROWS_WITH(withBadOrder.validate(), "order of the constant section must be zero");
}

TEST_CASE("roof from a finite place") {
    RoofInstance inst = lineInstance();
    // lambda = (0, 1): linear roof from 0 to 1, integral 1/2
    auto [roof, integral] = roofFromLift(inst, finitePlace("v", 1, 1, {0, -1}));
    CHECK(integral == ratOf(1, 2));
    CHECK(roof.evaluate(QVec{ratOf(1, 2)}) == ratOf(1, 2));

    // all-zero lambdas: zero roof
    auto [zroof, zint] = roofFromLift(inst, finitePlace("w", 1, 2, {0, 0}));
    CHECK(zint == 0);

    // finite and point-value paths agree (lambda = -h * ord)
    auto [proof, pint] = roofFromLift(inst, pointPlace("p", 1, {Rat(0), Rat(1)}));
    CHECK(pint == ratOf(1, 2));
    REQUIRE(roof.cells.size() == proof.cells.size());
    for (size_t i = 0; i < roof.cells.size(); ++i) CHECK(roof.cells[i].sameSet(proof.cells[i]));
}

TEST_CASE("roof tent from a point-value place") {
    RoofInstance inst;
    inst.dimension = 1;
    inst.exponents = {zvec({0}), zvec({1}), zvec({2})};
    auto [roof, integral] = roofFromLift(inst, pointPlace("p", 1, {Rat(0), Rat(1), Rat(0)}));
    CHECK(integral == 1);
    CHECK(roof.evaluate(qvec({1})) == 1);
}

TEST_CASE("circle place: tent profile gives exactly 1/8") {
    RoofInstance inst = lineInstance();
    Place p = circlePlace("c", 1, 1, {{{Rat(0), Rat(0)}}, tentProfile(1, ratOf(1, 2))});
    // lambda_1(u) = min(u, 1-u): I(u) = lambda_1(u)/2, integral 1/8
    PlaceIntegral v = circlePlaceIntegral(inst, p);
    CHECK(v.exact);
    CHECK(v.exactValue == ratOf(1, 8));
}

TEST_CASE("circle place with constant profiles reduces to the point value") {
    RoofInstance inst = lineInstance();
    Place p = circlePlace("c", 1, 3, {{{Rat(0), Rat(0)}}, {{Rat(1), ratOf(5, 7)}}});
    PlaceIntegral v = circlePlaceIntegral(inst, p);
    CHECK(v.exact);
    auto [roof, expect] = roofFromLift(inst, pointPlace("p", 1, {Rat(0), ratOf(5, 7)}));
    CHECK(v.exactValue == expect);
}

TEST_CASE("circle place with an activating envelope vertex") {
    // length 2, m = {0,1,2}, lambda_1 = tent peaking at u=1 with height 1:
    // I(u) = max(lambda_1(u), 0) since the tent vertex activates for u>0
    RoofInstance inst;
    inst.dimension = 1;
    inst.exponents = {zvec({0}), zvec({1}), zvec({2})};
    Place p = circlePlace("c", 1, 2,
                          {{{Rat(0), Rat(0)}}, tentProfile(2, Rat(1)), {{Rat(0), Rat(0)}}});
    PlaceIntegral v = circlePlaceIntegral(inst, p);
    // I(u) = lambda_1(u) (tent area with peak lambda_1 over [0,2]);
    // integral over the period = 1, probability average = 1/2
    CHECK(v.exact);
    CHECK(v.exactValue == ratOf(1, 2));

    // dense Simpson oracle at step 1e-4
    auto profile = [](double u) { return u <= 1.0 ? u : 2.0 - u; };
    double acc = 0;
    int steps = 20000;
    double h = 2.0 / steps;
    for (int i = 0; i < steps; ++i) {
        double a = i * h, b = a + h, m = (a + b) / 2;
        acc += h / 6 * (profile(a) + 4 * profile(m) + profile(b));
    }
    CHECK(std::abs(acc / 2.0 - ratToDouble(v.exactValue)) < 1e-10);
}

TEST_CASE("circle exactness is stable under halving the subintervals") {
    RoofInstance inst = lineInstance();
    Place p = circlePlace("c", 1, 1, {{{Rat(0), Rat(0)}}, tentProfile(1, ratOf(1, 2))});
    PlaceIntegral v = circlePlaceIntegral(inst, p);
    REQUIRE(v.exact);
    // refine: same function described with twice the breakpoints
    Place q = circlePlace("c", 1, 1,
                          {{{Rat(0), Rat(0)}},
                           {{Rat(0), Rat(0)},
                            {ratOf(1, 4), ratOf(1, 4)},
                            {ratOf(1, 2), ratOf(1, 2)},
                            {ratOf(3, 4), ratOf(1, 4)}}});
    PlaceIntegral w = circlePlaceIntegral(inst, q);
    REQUIRE(w.exact);
    CHECK(w.exactValue == v.exactValue);
}

TEST_CASE("sampled place") {
    RoofInstance inst = lineInstance();
    Place p;
    p.kind = Place::Kind::Sampled;
    p.id = "arch";
    p.weight = 1;
    p.nodes = {{1.0, {0.0, 0.0}}};
    CHECK(sampledPlaceIntegral(inst, p) == 0.0);

    p.nodes = {{1.0, {0.0, 1.0}}};
    CHECK(sampledPlaceIntegral(inst, p) == doctest::Approx(0.5).epsilon(1e-12));

    p.nodes = {{0.5, {0.0, 0.0}}, {0.5, {0.0, 1.0}}};
    CHECK(sampledPlaceIntegral(inst, p) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("global height of the elliptic desk instance is 5/4") {
    RoofInstance inst = lineInstance();
    inst.places = {finitePlace("v", 1, 1, {0, -1}),
                   circlePlace("c", 1, 1, {{{Rat(0), Rat(0)}}, tentProfile(1, ratOf(1, 2))})};
    HeightReport rep = globalHeight(inst);
    REQUIRE(rep.exactTotal.has_value());
    CHECK(*rep.exactTotal == ratOf(5, 4));
    CHECK(rep.factor == 2);
    REQUIRE(rep.perPlace.size() == 2);
    CHECK(rep.perPlace[0].exactValue == ratOf(1, 2));
    CHECK(rep.perPlace[1].exactValue == ratOf(1, 8));
}

TEST_CASE("global height trivia") {
    RoofInstance inst = lineInstance();
    inst.places = {pointPlace("a", 1, {Rat(0), Rat(0)})};
    CHECK(*globalHeight(inst).exactTotal == 0);

    // single point-value place with weight mu and lambda (0, t): mu * t
    for (long t = -2; t <= 3; ++t) {
        RoofInstance one = lineInstance();
        Rat mu = ratOf(3, 7);
        one.places = {pointPlace("p", mu, {Rat(0), Rat(t)})};
        if (t >= 0) {
            CHECK(*globalHeight(one).exactTotal == mu * Rat(t));
        } else {
            // envelope of (0,0),(1,t): integral t/2, total 2*mu*t/2
            CHECK(*globalHeight(one).exactTotal == mu * Rat(t));
        }
    }
}

TEST_CASE("global height mixes exact and sampled places") {
    RoofInstance inst = lineInstance();
    Place s;
    s.kind = Place::Kind::Sampled;
    s.id = "arch";
    s.weight = 1;
    s.nodes = {{1.0, {0.0, 1.0}}};
    inst.places = {finitePlace("v", 1, 1, {0, -1}), s};
    HeightReport rep = globalHeight(inst);
    CHECK(!rep.exactTotal.has_value());
    CHECK(rep.total == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("lattice translation invariance") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 15; ++trial) {
        RoofInstance inst;
        inst.dimension = 2;
        inst.exponents = {zvec({0, 0}), zvec({1, 0}), zvec({0, 1}), zvec({1, 1})};
        QVec lambdas = {Rat(0)};
        for (int j = 0; j < 3; ++j) lambdas.push_back(ratOf(static_cast<long>(rng() % 9) - 4, 2));
        inst.places = {pointPlace("p", 1, lambdas)};
        Rat base = *globalHeight(inst).exactTotal;

        // translate exponents; the constant-section convention forces a
        // direct envelope comparison instead of instance revalidation
        ZVec m0 = zvec({static_cast<long>(rng() % 5) - 2, static_cast<long>(rng() % 5) - 2});
        std::vector<std::pair<QVec, Rat>> lifted, shifted;
        for (size_t j = 0; j < inst.exponents.size(); ++j) {
            lifted.emplace_back(toQVec(inst.exponents[j]), lambdas[j]);
            ZVec t = inst.exponents[j];
            for (size_t c = 0; c < 2; ++c) t[c] += m0[c];
            shifted.emplace_back(toQVec(t), lambdas[j]);
        }
        CHECK(integrateCellwise(upperEnvelope(lifted)) ==
              integrateCellwise(upperEnvelope(shifted)));
        CHECK(base == 6 * integrateCellwise(upperEnvelope(lifted)));
    }
}

TEST_CASE("envelope monotonicity in single lambdas") {
    std::mt19937_64 rng(67);
    RoofInstance inst;
    inst.dimension = 1;
    inst.exponents = {zvec({0}), zvec({1}), zvec({2}), zvec({3})};
    for (int trial = 0; trial < 20; ++trial) {
        QVec lambdas = {Rat(0)};
        for (int j = 0; j < 3; ++j) lambdas.push_back(ratOf(static_cast<long>(rng() % 9) - 4, 2));
        Rat before = roofFromLift(inst, pointPlace("p", 1, lambdas)).second;
        size_t bump = 1 + rng() % 3;
        lambdas[bump] += ratOf(1 + static_cast<long>(rng() % 4), 2);
        Rat after = roofFromLift(inst, pointPlace("p", 1, lambdas)).second;
        CHECK(after >= before);
    }
}

TEST_CASE("section independence of the global height") {
    // shifting every lambda_j(w) by c(w) with sum of weight*c zero leaves
    // the height unchanged
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 15; ++trial) {
        RoofInstance inst = lineInstance();
        QVec l1 = {Rat(0), ratOf(static_cast<long>(rng() % 9) - 4, 2)};
        QVec l2 = {Rat(0), ratOf(static_cast<long>(rng() % 9) - 4, 3)};
        inst.places = {pointPlace("a", 1, l1), pointPlace("b", 2, l2)};
        Rat base = *globalHeight(inst).exactTotal;

        Rat c1 = ratOf(static_cast<long>(rng() % 7) - 3);
        Rat c2 = -c1 / 2;  // weights 1 and 2: 1*c1 + 2*c2 = 0
        // shifting all lambdas of a place by c shifts its integral by
        // c * vol(polytope); with zero weighted sum the total is unchanged
        RoofInstance shifted = inst;
        for (auto& x : shifted.places[0].lambdas) x += c1;
        for (auto& x : shifted.places[1].lambdas) x += c2;
        // restore the constant-section convention by re-normalizing:
        // lambda_0 must stay zero, so compare via raw envelopes instead
        Rat s1 = integrateCellwise(upperEnvelope(
            {{qvec({0}), shifted.places[0].lambdas[0]}, {qvec({1}), shifted.places[0].lambdas[1]}}));
        Rat s2 = integrateCellwise(upperEnvelope(
            {{qvec({0}), shifted.places[1].lambdas[0]}, {qvec({1}), shifted.places[1].lambdas[1]}}));
        Rat total = 2 * (1 * s1 + 2 * s2);
        CHECK(total == base);
    }
}

TEST_CASE("product formula check") {
    std::vector<Rat> w = {1, 1};
    auto r = productFormulaCheck({PlaceValue::of(Rat(1)), PlaceValue::of(Rat(-1))}, w);
    CHECK(r.compatible);
    CHECK(*r.exactResidual == 0);

    auto bad = productFormulaCheck({PlaceValue::of(Rat(1))}, {Rat(1)});
    CHECK(!bad.compatible);
    CHECK(*bad.exactResidual == 1);

    // circle place supplies its probability-measure average: the average
    // of the tent of height 2 over one period is 1
    RoofInstance inst = lineInstance();
    Place c = circlePlace("c", 1, 1, {{{Rat(0), Rat(0)}}, tentProfile(1, Rat(2))});
    // average value of profile 1: tent peak 2 -> mean 1; oracle via exact
    // circle machinery on a two-exponent instance whose roof reproduces
    // the profile average: I(u) = lambda_1(u)/2
    PlaceIntegral avgHalf = circlePlaceIntegral(inst, c);
    REQUIRE(avgHalf.exact);
    Rat average = 2 * avgHalf.exactValue;  // undo the /2 from the roof
    CHECK(average == 1);
    auto ok = productFormulaCheck({PlaceValue::of(Rat(-1)), PlaceValue::of(average)}, w);
    CHECK(ok.compatible);

    auto mixed = productFormulaCheck({PlaceValue::of(Rat(-1)), PlaceValue::of(1.0)}, w);
    CHECK(mixed.compatible);
    CHECK(!mixed.exactResidual.has_value());
}

TEST_CASE("concurrent evaluation is deterministic") {
    RoofInstance inst = lineInstance();
    for (int i = 0; i < 12; ++i) {
        Place p = pointPlace("p" + std::to_string(i), ratOf(1, i + 1), {Rat(0), Rat(i % 5)});
        inst.places.push_back(p);
    }
    HeightReport a = globalHeight(inst);
    HeightReport b = globalHeight(inst);
    REQUIRE(a.exactTotal.has_value());
    CHECK(*a.exactTotal == *b.exactTotal);
    for (size_t i = 0; i < a.perPlace.size(); ++i)
        CHECK(a.perPlace[i].exactValue == b.perPlace[i].exactValue);
}
