#include "torheight/toric.hpp"

#include <algorithm>
#include <map>

namespace torheight {

namespace {

// rationality over the divisible closure of Gamma: integral normals with
// rational offsets. Offsets outside Gamma itself are allowed; their
// failure to pair into Gamma is what the multiplicity measures.
bool cellGammaRational(const Polyhedron& c, const ValueGroup&) {
    for (const auto& h : c.halfspaces)
        for (const auto& x : h.normal)
            if (x.get_den() != 1) return false;
    for (const auto& e : c.equations)
        for (const auto& x : e.normal)
            if (x.get_den() != 1) return false;
    return true;
}

// basis of the saturated lattice orthogonal to the direction space of the cell
ZMat orthogonalLatticeBasis(const Polyhedron& cell) {
    QMat dirs;
    for (size_t i = 1; i < cell.vertices.size(); ++i)
        dirs.push_back(sub(cell.vertices[i], cell.vertices[0]));
    for (const auto& r : cell.rays) dirs.push_back(toQVec(r));
    for (const auto& l : cell.lineality) dirs.push_back(toQVec(l));
    QMat orth = dirs.empty() ? QMat{} : kernelBasis(dirs);
    if (dirs.empty()) {
        orth.clear();
        for (size_t i = 0; i < cell.ambientRank; ++i) {
            QVec e(cell.ambientRank, Rat(0));
            e[i] = 1;
            orth.push_back(e);
        }
    }
    return saturatedLatticeBasis(orth, cell.ambientRank);
}

bool inRelativeInterior(const Polyhedron& cell, const QVec& v) {
    if (!cell.contains(v)) return false;
    for (const auto& h : cell.halfspaces)
        if (dot(h.normal, v) == h.offset) return false;
    return true;
}

}  // namespace

LatticeFunction LatticeFunction::fromConcave(const ConcavePA& f, const ValueGroup& gamma) {
    LatticeFunction lf;
    lf.function = f;
    lf.gamma = gamma;
    lf.denominator = f.rationalityDenominator(gamma);
    return lf;
}

ToricDivisorReport weilDivisorCoefficients(const SupportFunctionData& psi) {
    ToricDivisorReport rep;
    rep.basePointFree = psi.concave;
    rep.ample = psi.strictlyConcave;
    for (const auto& c : psi.fan.cones) {
        if (c.dim != 1 || !c.lineality.empty()) continue;
        const ZVec& v = c.rays[0];
        rep.rayCoefficients.emplace_back(v, -psi.evaluate(toQVec(v)));
    }
    std::sort(rep.rayCoefficients.begin(), rep.rayCoefficients.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return rep;
}

Rat degree(const SupportFunctionData& psi) {
    if (!psi.concave) throw std::invalid_argument("degree needs a concave support function");
    size_t n = psi.fan.ambientRank;
    Rat fact = 1;
    for (size_t i = 2; i <= n; ++i) fact *= Rat(i);
    Rat d = fact * volume(psi.stabilityPolytope(), VolumeMode::Ambient);
    bool latticeSlopes = true;
    for (const auto& s : psi.slopes)
        for (const auto& x : s)
            if (x.get_den() != 1) latticeSlopes = false;
    if (latticeSlopes && d.get_den() != 1) throw std::logic_error("degree is not an integer");
    return d;
}

OrbitReport orbitMultiplicity(const PolyComplex& pi, const Polyhedron& cell,
                              const ValueGroup& gamma) {
    bool found = false;
    std::string key = cell.canonicalKey();
    for (const auto& c : pi.cells)
        if (c.canonicalKey() == key) found = true;
    if (!found) throw std::invalid_argument("cell does not belong to the complex");
    if (!cellGammaRational(cell, gamma))
        throw std::invalid_argument("cell is not Gamma-rational");

    OrbitReport rep;
    rep.cell = cell;
    rep.latticeBasis = orthogonalLatticeBasis(cell);
    rep.mult = 1;
    if (gamma.mode == ValueGroup::Mode::Divisible || rep.latticeBasis.empty()) return rep;

    // Mtilde = {m in M(cell) : <m, u0> in Gamma}; the pairing is constant
    // on the cell, so one representative point suffices
    const QVec& u0 = cell.vertices[0];
    std::vector<Rat> pairings;
    Int q = 1;
    for (const auto& b : rep.latticeBasis) {
        Rat d = dot(u0, b) / gamma.base;
        pairings.push_back(d);
        q = lcm(q, d.get_den());
    }
    Int g = q;
    for (const auto& d : pairings) {
        Rat a = d * Rat(q);
        g = gcd(g, a.get_num());
    }
    rep.mult = q / g;
    return rep;
}

Rat verticalCycleDegree(const LatticeFunction& phi, const Polyhedron& cell, const QVec& v) {
    if (!inRelativeInterior(cell, v))
        throw std::invalid_argument("v not interior");
    OrbitReport orbit = orbitMultiplicity(phi.function.inducedComplex, cell, phi.gamma);
    size_t r = orbit.latticeBasis.size();
    if (r == 0) return 0;  // full-dimensional cell: zero-dimensional cycle

    auto degAt = [&](const QVec& pt) -> Rat {
        Polytope d = supDifferential(phi.function, pt);
        // coordinates of the sup-differential in the basis of M(cell)
        QMat sys(cell.ambientRank, QVec(r));
        for (size_t c = 0; c < cell.ambientRank; ++c)
            for (size_t i = 0; i < r; ++i) sys[c][i] = Rat(orbit.latticeBasis[i][c]);
        std::vector<QVec> coords;
        for (const auto& vert : d.vertices) {
            auto x = solveLinear(sys, sub(vert, d.vertices[0]));
            if (!x) throw std::logic_error("sup-differential not parallel to M(cell)");
            coords.push_back(*x);
        }
        Rat fact = 1;
        for (size_t i = 2; i <= r; ++i) fact *= Rat(i);
        return fact * volume(convexHull(coords), VolumeMode::Ambient) / Rat(orbit.mult);
    };

    Rat deg = degAt(v);
    // the value must not depend on the interior point chosen
    QVec second = cell.interiorPoint();
    if (inRelativeInterior(cell, second) && degAt(second) != deg)
        throw std::logic_error("vertical degree depends on the sample point");
    return deg;
}

LocalHeight toricLocalHeight(const SupportFunctionData& bigPsi, const ConcavePA& psi,
                             const ValueGroup& gamma) {
    if (!psi.isGammaRational(gamma))
        throw std::invalid_argument("psi is not Gamma-rational");
    RecessionFunction rec = recessionFunction(psi);
    if (!(rec.homogeneous == bigPsi.minForm()))
        throw std::invalid_argument("psi is not a metric for Psi");
    size_t n = psi.ambientRank;
    Rat fact = 1;
    for (size_t i = 2; i <= n + 1; ++i) fact *= Rat(i);
    ConcaveOnPolytope roof = legendreDual(psi);
    return {fact * integrateCellwise(roof), roof.domain.dim};
}

DiscreteMeasure tropPushforwardMeasure(const ConcavePA& psi) {
    size_t n = psi.ambientRank;
    Rat fact = 1;
    for (size_t i = 2; i <= n; ++i) fact *= Rat(i);
    return maMeasure(psi).scaled(fact);
}

ConcaveOnPolytope roofRestrictToFace(const ConcavePA& psi, const SupportFunctionData& bigPsi,
                                     const Cone& sigma) {
    std::string key = sigma.canonicalKey();
    bool found = false;
    for (const auto& c : bigPsi.fan.cones)
        if (c.canonicalKey() == key) found = true;
    if (!found) throw std::invalid_argument("sigma not in the fan");

    RecessionFunction rec = recessionFunction(psi);
    if (!(rec.homogeneous == bigPsi.minForm()))
        throw std::invalid_argument("psi is not a metric for Psi");

    size_t n = psi.ambientRank;
    // defining slope on sigma (zero for the trivial cone, matching the
    // canonical choice there)
    QVec mSigma(n, Rat(0));
    if (sigma.dim > 0) {
        // lexicographically smallest defining slope among the maximal
        // cones containing sigma (deterministic choice)
        bool have = false;
        for (size_t i = 0; i < bigPsi.fan.maximal.size(); ++i) {
            const Cone& mc = bigPsi.fan.cones[bigPsi.fan.maximal[i]];
            bool inside = true;
            for (const auto& r : sigma.rays)
                if (!mc.contains(toQVec(r))) inside = false;
            for (const auto& l : sigma.lineality)
                if (!mc.contains(toQVec(l)) || !mc.contains(scale(Rat(-1), toQVec(l)))) inside = false;
            if (inside && (!have || bigPsi.slopes[i] < mSigma)) {
                mSigma = bigPsi.slopes[i];
                have = true;
            }
        }
        if (!have) throw std::logic_error("no maximal cone contains sigma");
    }

    ConcaveOnPolytope roof = legendreDual(psi);
    // face of the stability polytope selected by sigma: argmin of <.,u>
    // over all directions u of sigma
    Polytope face = roof.domain;
    std::vector<QVec> dirs;
    for (const auto& r : sigma.rays) dirs.push_back(toQVec(r));
    for (const auto& l : sigma.lineality) {
        dirs.push_back(toQVec(l));
        dirs.push_back(scale(Rat(-1), toQVec(l)));
    }
    for (const auto& u : dirs) {
        Rat best = dot(face.vertices[0], u);
        for (const auto& vert : face.vertices) best = std::min(best, dot(vert, u));
        std::vector<QVec> keep;
        for (const auto& vert : face.vertices)
            if (dot(vert, u) == best) keep.push_back(vert);
        face = convexHull(keep);
    }

    ConcaveOnPolytope out;
    QVec shift = scale(Rat(-1), mSigma);
    out.domain = face.translate(shift);
    std::map<std::string, bool> seen;
    for (size_t ci = 0; ci < roof.cells.size(); ++ci) {
        auto inter = Polyhedron::intersect(roof.cells[ci], face);
        if (!inter || inter->dim != face.dim) continue;
        Polytope cell = inter->translate(shift);
        if (!seen.emplace(cell.canonicalKey(), true).second) continue;
        const AffineForm& f = roof.cellForms[ci];
        out.cells.push_back(cell);
        out.cellForms.push_back({f.slope, f.constant + dot(f.slope, mSigma)});
        for (const auto& vert : cell.vertices) {
            out.lift.emplace_back(vert, out.cellForms.back().eval(vert));
            out.liftActive.push_back(true);
        }
    }
    if (out.cells.empty()) throw std::logic_error("face restriction produced no cells");
    return out;
}

}  // namespace torheight
