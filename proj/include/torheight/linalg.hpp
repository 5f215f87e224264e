#pragma once

#include <optional>

#include "torheight/rational.hpp"

namespace torheight {

// Dense row-major rational matrix helpers used by the polyhedral kernel.
using QMat = std::vector<QVec>;
using ZMat = std::vector<ZVec>;

size_t rankOf(QMat m);

// Rank of {rows[i] - rows[0]}: dimension of the affine span of the rows.
size_t affineRank(const QMat& points);

Rat determinant(QMat m);

// Basis of {x : m x = 0}.
QMat kernelBasis(const QMat& m);

// One solution of m x = rhs, or nullopt when inconsistent. Free variables
// are set to zero after row reduction (deterministic).
std::optional<QVec> solveLinear(const QMat& m, const QVec& rhs);

// v / gcd(entries). Errors on the zero vector.
ZVec primitiveVector(const ZVec& v);

// Smallest positive multiple of a rational vector with integer coprime
// entries. Errors on the zero vector.
ZVec primitiveOfRational(const QVec& v);

// Basis of the saturated lattice Z^n ∩ span_Q(rows): every integer point
// of the rational row span. Returns an empty list for a zero span.
ZMat saturatedLatticeBasis(const QMat& spanRows, size_t ambientRank);

// Basis of {x in Z^n : m x = 0} (automatically saturated).
ZMat integerKernelBasis(const ZMat& m, size_t cols);

// Index [L : L'] where L has basis `latticeBasis` and L' is generated by
// `generators` (all in ambient coordinates, generators must lie in L ⊗ Q).
// Returns nullopt ("infinite") when the generators do not span L ⊗ Q.
std::optional<Int> latticeIndexInBasis(const ZMat& latticeBasis, const QMat& generators);

// Index of the span of `generators` inside Z^n; nullopt when rank-deficient.
std::optional<Int> latticeIndex(const ZMat& generators, size_t ambientRank);

// |det| of the integer row span via Hermite-style elimination (no division);
// nullopt when the rows do not have full column rank. Used as the second
// route for the lattice-index cross-check.
std::optional<Int> hermiteIndex(ZMat rows, size_t ambientRank);

}  // namespace torheight
