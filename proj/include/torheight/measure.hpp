#pragma once

#include "torheight/concave.hpp"

namespace torheight {

// Finite sum of point masses with exact rational weights.
struct DiscreteMeasure {
    struct Atom {
        QVec point;
        Rat mass;
    };
    std::vector<Atom> atoms;  // sorted by point, nonzero masses

    Rat totalMass() const;
    // exact integral of a piecewise-affine function against the measure
    Rat integrate(const ConcavePA& f) const;
    DiscreteMeasure scaled(const Rat& c) const;
};

// Real Monge-Ampere measure of a concave piecewise-affine function: one
// atom per vertex v of the induced complex with mass vol(sup-differential
// at v). Total mass equals the volume of the stability set.
DiscreteMeasure maMeasure(const ConcavePA& f);

// Exact integral of g over its domain, cell by cell (Haar measure with
// covolume one on the saturated lattice of aff(domain); a point has
// measure one).
Rat integrateCellwise(const ConcaveOnPolytope& g);

// Same, restricted to a sub-polytope of the domain, measured by the
// saturated lattice of aff(restriction).
Rat integrateCellwiseOver(const ConcaveOnPolytope& g, const Polytope& restriction);

// Both sides of the boundary integral identity tying the measure to the
// dual: -\int f dMA(f) = (n+1)\int_D f* + sum over facets F of D of
// <F, v_F> \int_F f*, with v_F the primitive inner normal and <F, v_F>
// its constant value on F. Requires a full-dimensional stability set.
struct IntegralIdentity {
    Rat lhs;
    Rat rhs;
};
IntegralIdentity dualIntegralIdentity(const ConcavePA& f);

}  // namespace torheight
