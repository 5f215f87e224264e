#pragma once

#include <functional>

#include "torheight/polyhedra.hpp"

namespace torheight {

// u -> <slope, u> + constant
struct AffineForm {
    QVec slope;
    Rat constant;

    Rat eval(const QVec& u) const { return dot(slope, u) + constant; }
    bool operator==(const AffineForm& o) const { return slope == o.slope && constant == o.constant; }
};

// Concave piecewise-affine function on N_R as a reduced min of affine
// forms. Canonical after canonicalMinForm: every piece attains the min on
// a full-dimensional region, no duplicates, pieces sorted. The induced
// complex of maximal linearity domains is computed at canonicalization.
struct ConcavePA {
    size_t ambientRank = 0;
    std::vector<AffineForm> pieces;
    PolyComplex inducedComplex;
    // piece index for each maximal cell of the induced complex
    std::vector<size_t> pieceOfMaximalCell;

    Rat evaluate(const QVec& u) const;
    bool operator==(const ConcavePA& o) const {
        return ambientRank == o.ambientRank && pieces == o.pieces;
    }
    bool isGammaRational(const ValueGroup& gamma) const;
    // smallest positive integer e with integral slopes and constants in
    // Gamma after scaling by e; only meaningful for discrete Gamma
    Int rationalityDenominator(const ValueGroup& gamma) const;
};

ConcavePA canonicalMinForm(const std::vector<AffineForm>& pieces, size_t ambientRank);

// conv of the slopes (A.12): the stability set of the function.
Polytope stabilitySet(const ConcavePA& f);

// conv of the slopes active at u; a face of the stability set.
Polytope supDifferential(const ConcavePA& f, const QVec& u);

// Concave function on a polytope, affine on the cells of a regular
// subdivision. Houses Legendre-Fenchel duals and roof functions.
struct ConcaveOnPolytope {
    Polytope domain;
    std::vector<Polytope> cells;
    std::vector<AffineForm> cellForms;
    std::vector<std::pair<QVec, Rat>> lift;  // generating lifted points
    std::vector<bool> liftActive;            // on the upper hull?

    Rat evaluate(const QVec& m) const;
    // vertices of the subdivision (dedup over cells)
    std::vector<QVec> subdivisionVertices() const;
};

// Upper envelope of the lifted points (m_j, lambda_j): the concave
// function on conv{m_j} whose graph is the upper hull.
ConcaveOnPolytope upperEnvelope(const std::vector<std::pair<QVec, Rat>>& lifted);

// f^dual(m) = inf_u (<m,u> - f(u)) on the stability set; equals the upper
// envelope of the points (m_i, -l_i).
ConcaveOnPolytope legendreDual(const ConcavePA& f);

// Inverse direction: g on Delta dualizes back to min over subdivision
// vertices v of <v,u> - g(v). Dual of dual is the identity on canonical
// forms.
ConcavePA legendreDualBack(const ConcaveOnPolytope& g);

// Support function data on a fan: a defining slope per maximal cone.
struct SupportFunctionData {
    Fan fan;
    std::vector<QVec> slopes;  // aligned with fan.maximal
    bool virtualSupport = false;
    bool concave = false;
    bool strictlyConcave = false;

    Rat evaluate(const QVec& u) const;
    // min-of-slopes form (homogeneous ConcavePA); equals the function
    // itself exactly when concave
    ConcavePA minForm() const;
    Polytope stabilityPolytope() const;
};

// Psi_Delta(u) = min over vertices of <m,u> on the normal fan.
SupportFunctionData supportFunctionOfPolytope(const Polytope& delta);

// Homogeneous concave min-form with full-dimensional stability set ->
// support function on the normal fan.
SupportFunctionData supportFunctionFromMinForm(const ConcavePA& homogeneous);

// Raw construction from explicit fan + slopes; flags computed, face
// agreement validated.
SupportFunctionData classifySupportFunction(const Fan& fan, const std::vector<QVec>& maximalSlopes);

struct RecessionFunction {
    ConcavePA homogeneous;  // min over the slopes of f
    // present when the stability set is full-dimensional
    std::optional<SupportFunctionData> support;
};
RecessionFunction recessionFunction(const ConcavePA& f);

struct ApproxOptions {
    long snapDenominator = 1000000;
    double innerTolerance = 1e-9;
};

struct ApproxResult {
    ConcavePA function;
    double dualErrorBound = 0.0;
};

// Gamma-rational piecewise-affine approximation of a blackbox concave
// function with known stability polytope and a bound on |psi - Psi|.
// Samples the dual on the (1/k)-refined lattice points of delta.
ApproxResult approximateConcave(const std::function<double(const std::vector<double>&)>& psi,
                                const Polytope& delta, double psiMinusSupportBound, long k,
                                const ApproxOptions& opts = {});

}  // namespace torheight
