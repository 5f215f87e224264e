#pragma once

#include <map>
#include <optional>

#include "torheight/linalg.hpp"

namespace torheight {

// {u : <normal, u> >= offset}
struct Halfspace {
    QVec normal;
    Rat offset;
};

// {u : <normal, u> = offset}
struct Hyperplane {
    QVec normal;
    Rat offset;
};

// A nonempty rational polyhedron with both descriptions kept consistent.
// V-rep: conv(vertices) + cone(rays) + span(lineality). When the lineality
// space is nontrivial the "vertices" are canonical representatives of the
// minimal faces.
class Polyhedron {
public:
    size_t ambientRank = 0;
    std::vector<QVec> vertices;
    std::vector<ZVec> rays;       // primitive
    std::vector<ZVec> lineality;  // primitive basis
    std::vector<Halfspace> halfspaces;  // irredundant
    std::vector<Hyperplane> equations;  // affine hull
    size_t dim = 0;

    static Polyhedron fromPoints(const std::vector<QVec>& points,
                                 const std::vector<QVec>& rayDirs = {},
                                 const std::vector<QVec>& linDirs = {});
    static Polyhedron fromHalfspaces(const std::vector<Halfspace>& hs, size_t rank);

    bool isBounded() const { return rays.empty() && lineality.empty(); }
    bool isPointed() const { return lineality.empty(); }
    bool isLattice() const;  // all vertices integral (and bounded)

    bool contains(const QVec& u) const;
    // relative-interior sample point: average of vertices plus the ray sum
    QVec interiorPoint() const;

    // All k-dimensional faces. Faces of an unbounded polyhedron may be
    // unbounded; the empty face is not returned.
    std::vector<Polyhedron> faces(size_t k) const;
    std::vector<Polyhedron> facets() const { return dim == 0 ? std::vector<Polyhedron>{} : faces(dim - 1); }

    // Primitive inner normal of a facet of a full-dimensional polyhedron.
    ZVec facetInnerNormal(const Polyhedron& facet) const;

    // Exact set equality via canonical V-representations.
    bool sameSet(const Polyhedron& other) const;

    // Canonical sort key (vertices, rays, lineality), used for dedupe.
    std::string canonicalKey() const;

    Polyhedron translate(const QVec& shift) const;

    // Intersection; nullopt when empty.
    static std::optional<Polyhedron> intersect(const Polyhedron& a, const Polyhedron& b);
};

using Polytope = Polyhedron;  // bounded case; invariants checked by callers via isBounded()

Polytope convexHull(const std::vector<QVec>& points);

enum class VolumeMode { Ambient, Relative };

// Exact volume. Ambient mode: Haar measure with covolume one for Z^n,
// zero for lower-dimensional polytopes. Relative mode: measure induced by
// the saturated lattice of the linear space parallel to aff(P); a point
// has relative volume 1.
Rat volume(const Polytope& p, VolumeMode mode);

// Simplices (lists of vertices) triangulating P, by lexicographic pulling.
std::vector<std::vector<QVec>> triangulate(const Polytope& p);

// Coordinates of P inside aff(P) w.r.t. a saturated lattice basis of the
// parallel linear space, with base point = lex-min vertex.
struct RelativeCoords {
    QVec base;
    ZMat latticeBasis;  // rows: ambient coordinates of the basis
    std::vector<QVec> toRelative(const std::vector<QVec>& pts) const;
    QVec toAmbient(const QVec& rel) const;
};
RelativeCoords relativeCoords(const Polyhedron& p);

// A polyhedral cone with apex 0; rays primitive.
struct Cone {
    size_t ambientRank = 0;
    std::vector<ZVec> rays;
    std::vector<ZVec> lineality;
    std::vector<Halfspace> halfspaces;
    std::vector<Hyperplane> equations;
    size_t dim = 0;

    static Cone fromRays(const std::vector<QVec>& rayDirs, size_t rank,
                         const std::vector<QVec>& linDirs = {});
    Polyhedron asPolyhedron() const;
    static Cone fromPolyhedron(const Polyhedron& p);

    bool contains(const QVec& u) const;
    bool isPointed() const { return lineality.empty(); }
    std::string canonicalKey() const;
    std::vector<Cone> faces(size_t k) const;
};

struct Fan {
    size_t ambientRank = 0;
    std::vector<Cone> cones;        // closed under faces, deduped
    std::vector<size_t> maximal;    // indices of inclusion-maximal cones
    bool complete = false;
    bool stronglyConvex = false;

    // Builds the face closure, checks that pairwise intersections are
    // common faces, and computes the flags. Throws on a non-fan.
    // verify=false skips the pairwise check for cone sets that are fans
    // by construction (normal fans, cone(Π)).
    static Fan build(const std::vector<Cone>& generatorCones, bool verify = true);

    // Index of the cone whose relative interior contains u.
    size_t coneContaining(const QVec& u) const;
};

// Normal fan with the two-way face correspondence.
struct NormalFan {
    Fan fan;
    // faceOfCone[i] = face of the polytope corresponding to fan.cones[i]
    std::vector<Polytope> faceOfCone;
    // index into fan.cones for each face key of the polytope
    std::map<std::string, size_t> coneOfFaceKey;
};
NormalFan normalFan(const Polytope& delta);

struct PolyComplex {
    size_t ambientRank = 0;
    std::vector<Polyhedron> cells;  // closed under faces, deduped
    std::vector<size_t> maximal;
    bool complete = false;

    static PolyComplex build(const std::vector<Polyhedron>& generatorCells, bool verify = true);
    bool isGammaRational(const ValueGroup& gamma) const;
    std::vector<QVec> vertexSet() const;
};

Cone recessionCone(const Polyhedron& p);
// Recession fan of a polyhedral complex; throws "recession is not a fan"
// when the collected cones violate the fan axioms.
Fan recessionFan(const PolyComplex& pc);

// cone(Λ) ⊂ N_R × R: closure of R_{>0}·(Λ × {1}).
Cone coneOver(const Polyhedron& p);
// cone(Π): cones over all cells plus rec(Λ) × {0}.
Fan coneOver(const PolyComplex& pc);

// Slice of a cone in N_R × R at last coordinate = 1 (nullopt when empty).
std::optional<Polyhedron> sliceAtHeightOne(const Cone& c);

}  // namespace torheight
