#pragma once

#include <optional>
#include <string>

#include "torheight/toric.hpp"

namespace torheight {

// One place of the weighted place system. The engine never sees the base
// variety: callers precompute orders, point values, skeleton profiles and
// quadrature nodes.
struct Place {
    enum class Kind { Finite, PointValue, Circle, Sampled };
    Kind kind = Kind::PointValue;
    std::string id;
    Rat weight = 0;  // >= 0

    // Finite: lambda_j = -height * orders[j]
    Rat height = 0;  // >= 0
    std::vector<long> orders;

    // PointValue
    QVec lambdas;

    // Circle: periodic piecewise-linear profiles on [0, length) per
    // exponent, given by strictly increasing breakpoints (u, value) with
    // linear interpolation and wraparound
    Rat length = 0;
    std::vector<std::vector<std::pair<Rat, Rat>>> lambdaFunctions;

    // Sampled: float quadrature nodes, subweights summing to 1
    struct Node {
        double subweight = 0;
        std::vector<double> lambdas;
    };
    std::vector<Node> nodes;
};

// A fibration instance: monomial exponents m_0 = 0, ..., m_r generating
// Z^n as a group, plus the weighted places.
struct RoofInstance {
    size_t dimension = 0;
    std::vector<ZVec> exponents;
    std::vector<Place> places;

    void validate() const;  // throws std::invalid_argument with a reason
    Polytope polytope() const;
};

// value + exactness of a single place integral
struct PlaceIntegral {
    Rat exactValue = 0;  // meaningful when exact
    double value = 0;
    bool exact = false;
};

// Roof of a Finite or PointValue place: upper envelope of (m_j, lambda_j)
// with its exact integral over conv{m_j}.
std::pair<ConcaveOnPolytope, Rat> roofFromLift(const RoofInstance& instance, const Place& place);

// Probability-measure integral (1/length) * int_0^length I(u) du of the
// roof integral I(u) along the skeleton circle. Exact on subintervals
// where the envelope combinatorics is constant (trapezoid); adaptive
// Simpson fallback at the given tolerance otherwise.
PlaceIntegral circlePlaceIntegral(const RoofInstance& instance, const Place& place,
                                  double tolerance = 1e-9);

// Weighted quadrature over the nodes; each node's roof integral is exact
// after snapping the float lambdas to rationals at 1e-12 resolution.
double sampledPlaceIntegral(const RoofInstance& instance, const Place& place);

struct HeightReport {
    Polytope polytope;
    struct Entry {
        std::string id;
        Rat exactValue = 0;
        double value = 0;
        bool exact = false;
    };
    std::vector<Entry> perPlace;  // in instance order
    Rat factor = 1;               // (n+1)!
    double total = 0;
    std::optional<Rat> exactTotal;  // when every place is exact
};

// total = (n+1)! * sum of weight * place integral. Places evaluate
// concurrently (capped by TORHEIGHT_THREADS); aggregation is in instance
// order and therefore deterministic.
HeightReport globalHeight(const RoofInstance& instance, double tolerance = 1e-9);

// One value per place for the product-formula residual.
struct PlaceValue {
    bool exact = true;
    Rat rational = 0;
    double approx = 0;

    static PlaceValue of(const Rat& r) { return {true, r, ratToDouble(r)}; }
    static PlaceValue of(double d) { return {false, 0, d}; }
};

struct ProductFormulaResult {
    double residual = 0;
    std::optional<Rat> exactResidual;
    bool compatible = false;  // |residual| <= 1e-9 (exact zero when rational)
};
ProductFormulaResult productFormulaCheck(const std::vector<PlaceValue>& values,
                                         const std::vector<Rat>& weights);

}  // namespace torheight
