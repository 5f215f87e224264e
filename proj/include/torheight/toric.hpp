#pragma once

#include "torheight/measure.hpp"

namespace torheight {

// Gamma-rational concave piecewise-affine function together with the
// value group and the smallest denominator clearing it to a lattice
// function. The induced complex must be Gamma-rational.
struct LatticeFunction {
    ConcavePA function;
    ValueGroup gamma;
    Int denominator = 1;

    static LatticeFunction fromConcave(const ConcavePA& f, const ValueGroup& gamma);
};

// Coefficients of the divisor attached to a support function: one entry
// -Psi(v) per primitive ray generator v of the fan.
struct ToricDivisorReport {
    std::vector<std::pair<ZVec, Rat>> rayCoefficients;  // sorted by ray
    bool basePointFree = false;  // Psi concave
    bool ample = false;          // Psi strictly concave
};
ToricDivisorReport weilDivisorCoefficients(const SupportFunctionData& psi);

// n! * vol(stability polytope); an integer for lattice slopes.
Rat degree(const SupportFunctionData& psi);

// mult(cell) = [M(cell) : Mtilde(cell)] where M(cell) is the saturated
// lattice orthogonal to the cell's direction space and Mtilde its
// sublattice of functionals with values in Gamma on the cell.
struct OrbitReport {
    Polyhedron cell;
    ZMat latticeBasis;  // basis of M(cell)
    Int mult = 1;
};
OrbitReport orbitMultiplicity(const PolyComplex& pi, const Polyhedron& cell,
                              const ValueGroup& gamma);

// Degree of the vertical cycle attached to a k-cell of the complex of
// phi: (n-k)! * vol_{M(cell)}(sup-differential at an interior point)
// divided by mult(cell); zero for full-dimensional cells.
Rat verticalCycleDegree(const LatticeFunction& phi, const Polyhedron& cell, const QVec& v);

// (n+1)! * integral of the roof psi^dual over the stability polytope,
// with the relative Haar measure on its affine hull; the dimension of
// the stability polytope accompanies the value.
struct LocalHeight {
    Rat value;
    size_t dimension = 0;
};
LocalHeight toricLocalHeight(const SupportFunctionData& bigPsi, const ConcavePA& psi,
                             const ValueGroup& gamma = ValueGroup::divisible());

// n! * maMeasure(psi): tropical pushforward of the Monge-Ampere measure;
// total mass equals degree(rec(psi)).
DiscreteMeasure tropPushforwardMeasure(const ConcavePA& psi);

// Roof of the restriction to the orbit closure of a cone sigma of the
// fan: m -> psi^dual(m + m_sigma) on F_sigma - m_sigma, where F_sigma is
// the face of the stability polytope picked out by sigma and m_sigma a
// defining slope on sigma (zero for the trivial cone).
ConcaveOnPolytope roofRestrictToFace(const ConcavePA& psi, const SupportFunctionData& bigPsi,
                                     const Cone& sigma);

}  // namespace torheight
