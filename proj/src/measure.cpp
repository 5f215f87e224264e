#include "torheight/measure.hpp"

#include <algorithm>
#include <sstream>

namespace torheight {

Rat DiscreteMeasure::totalMass() const {
    Rat s = 0;
    for (const auto& a : atoms) s += a.mass;
    return s;
}

Rat DiscreteMeasure::integrate(const ConcavePA& f) const {
    Rat s = 0;
    for (const auto& a : atoms) s += a.mass * f.evaluate(a.point);
    return s;
}

DiscreteMeasure DiscreteMeasure::scaled(const Rat& c) const {
    DiscreteMeasure out;
    if (c == 0) return out;
    for (const auto& a : atoms) out.atoms.push_back({a.point, c * a.mass});
    return out;
}

static bool pointLess(const QVec& a, const QVec& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

DiscreteMeasure maMeasure(const ConcavePA& f) {
    DiscreteMeasure mu;
    for (const auto& v : f.inducedComplex.vertexSet()) {
        Rat mass = volume(supDifferential(f, v), VolumeMode::Ambient);
        if (mass != 0) mu.atoms.push_back({v, mass});
    }
    std::sort(mu.atoms.begin(), mu.atoms.end(),
              [](const DiscreteMeasure::Atom& a, const DiscreteMeasure::Atom& b) {
                  return pointLess(a.point, b.point);
              });
    return mu;
}

Rat integrateCellwiseOver(const ConcaveOnPolytope& g, const Polytope& restriction) {
    if (!restriction.isBounded()) throw std::invalid_argument("integration domain must be bounded");
    size_t d = restriction.dim;
    if (d == 0) return g.evaluate(restriction.vertices[0]);

    RelativeCoords rc = relativeCoords(restriction);
    Rat total = 0;
    Rat dFact = 1;
    for (size_t i = 2; i <= d; ++i) dFact *= Rat(i);
    for (size_t ci = 0; ci < g.cells.size(); ++ci) {
        auto inter = Polyhedron::intersect(g.cells[ci], restriction);
        if (!inter || inter->dim != d) continue;
        for (const auto& simplex : triangulate(*inter)) {
            auto rel = rc.toRelative(simplex);
            QMat edges;
            for (size_t i = 1; i < rel.size(); ++i) edges.push_back(sub(rel[i], rel[0]));
            Rat vol = abs(determinant(edges)) / dFact;
            if (vol == 0) continue;
            Rat mean = 0;
            for (const auto& v : simplex) mean += g.cellForms[ci].eval(v);
            mean /= Rat(simplex.size());
            total += vol * mean;
        }
    }
    return total;
}

Rat integrateCellwise(const ConcaveOnPolytope& g) { return integrateCellwiseOver(g, g.domain); }

IntegralIdentity dualIntegralIdentity(const ConcavePA& f) {
    size_t n = f.ambientRank;
    Polytope delta = stabilitySet(f);
    if (delta.dim != n)
        throw std::invalid_argument("identity requires a full-dimensional stability set");

    IntegralIdentity out;
    out.lhs = -maMeasure(f).integrate(f);

    ConcaveOnPolytope dual = legendreDual(f);
    out.rhs = Rat(n + 1) * integrateCellwise(dual);
    for (const auto& facet : delta.facets()) {
        ZVec nrm = delta.facetInnerNormal(facet);
        Rat offset = dot(facet.vertices[0], nrm);
        out.rhs += offset * integrateCellwiseOver(dual, facet);
    }
    return out;
}

}  // namespace torheight
