#include "torheight/polyhedra.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace torheight {

namespace {

std::string vecKey(const QVec& v) {
    std::ostringstream os;
    for (const auto& e : v) os << ratToString(e) << ",";
    return os.str();
}

std::string vecKey(const ZVec& v) {
    std::ostringstream os;
    for (const auto& e : v) os << e.get_str() << ",";
    return os.str();
}

bool lexLess(const QVec& a, const QVec& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

// Canonical reduced basis of the span of the rows: rref, primitive rows.
std::vector<ZVec> canonicalSpanBasis(const QMat& rows) {
    QMat m;
    for (const auto& r : rows)
        if (!isZero(r)) m.push_back(r);
    if (m.empty()) return {};
    // row reduce
    QMat red = m;
    std::vector<ZVec> out;
    {
        size_t nrows = red.size(), ncols = red[0].size(), row = 0;
        for (size_t col = 0; col < ncols && row < nrows; ++col) {
            size_t sel = row;
            while (sel < nrows && red[sel][col] == 0) ++sel;
            if (sel == nrows) continue;
            std::swap(red[row], red[sel]);
            Rat inv = 1 / red[row][col];
            for (size_t j = col; j < ncols; ++j) red[row][j] *= inv;
            for (size_t i = 0; i < nrows; ++i) {
                if (i == row || red[i][col] == 0) continue;
                Rat f = red[i][col];
                for (size_t j = col; j < ncols; ++j) red[i][j] -= f * red[row][j];
            }
            ++row;
        }
        for (size_t i = 0; i < row; ++i) out.push_back(primitiveOfRational(red[i]));
    }
    return out;
}

struct RayEnumResult {
    std::vector<ZVec> lineality;  // canonical basis
    std::vector<ZVec> rays;       // primitive, deduped
};

// Extreme rays and lineality of the cone {y in R^d : a·y >= 0 for all a}.
RayEnumResult enumerateExtremeRays(const QMat& ineqsIn, size_t d) {
    RayEnumResult res;
    QMat ineqs;
    {
        std::set<std::string> seen;
        for (const auto& a : ineqsIn) {
            if (a.size() != d) throw std::invalid_argument("inequality rank mismatch");
            if (isZero(a)) continue;
            ZVec p = primitiveOfRational(a);
            std::string k = vecKey(p);
            if (seen.insert(k).second) ineqs.push_back(toQVec(p));
        }
    }
    if (ineqs.empty()) {
        for (size_t i = 0; i < d; ++i) {
            ZVec e(d, Int(0));
            e[i] = 1;
            res.lineality.push_back(e);
        }
        return res;
    }
    {
        QMat lin = kernelBasis(ineqs);
        res.lineality = canonicalSpanBasis(lin);
    }
    // work inside W = rowspace(ineqs); pointed there
    std::vector<ZVec> wBasis = canonicalSpanBasis(ineqs);
    size_t r = wBasis.size();
    if (r == 0) return res;
    size_t m = ineqs.size();
    QMat proj(m, QVec(r));
    for (size_t i = 0; i < m; ++i)
        for (size_t k = 0; k < r; ++k) proj[i][k] = dot(ineqs[i], wBasis[k]);

    std::set<std::string> seenRays;
    std::vector<size_t> idx(r > 0 ? r - 1 : 0);
    auto tryCandidate = [&](const QVec& z) {
        int sign = 0;
        for (size_t i = 0; i < m; ++i) {
            Rat s = dot(proj[i], z);
            if (s > 0) {
                if (sign < 0) return;
                sign = 1;
            } else if (s < 0) {
                if (sign > 0) return;
                sign = -1;
            }
        }
        if (sign == 0) return;  // would be lineality; impossible in pointed part
        QVec y(d, Rat(0));
        for (size_t k = 0; k < r; ++k) {
            Rat c = sign > 0 ? z[k] : -z[k];
            for (size_t j = 0; j < d; ++j) y[j] += c * wBasis[k][j];
        }
        ZVec prim = primitiveOfRational(y);
        if (seenRays.insert(vecKey(prim)).second) res.rays.push_back(prim);
    };

    if (r == 1) {
        tryCandidate(QVec{Rat(1)});
        return res;
    }
    // all subsets of size r-1 of the projected inequality rows
    std::vector<size_t> comb(r - 1);
    for (size_t i = 0; i < r - 1; ++i) comb[i] = i;
    while (true) {
        QMat sub;
        for (size_t i : comb) sub.push_back(proj[i]);
        QMat ker = kernelBasis(sub);
        if (ker.size() == 1) tryCandidate(ker[0]);
        // next combination
        size_t pos = r - 1;
        while (pos > 0) {
            --pos;
            if (comb[pos] != m - (r - 1) + pos) break;
        }
        if (comb[pos] == m - (r - 1) + pos) break;
        ++comb[pos];
        for (size_t i = pos + 1; i < r - 1; ++i) comb[i] = comb[i - 1] + 1;
        if (r - 1 == 0) break;
    }
    return res;
}

struct HRep {
    std::vector<Halfspace> halfspaces;
    std::vector<Hyperplane> equations;
};

// Irredundant H-rep of conv(points) + cone(rays) + span(lins) via the dual cone.
HRep dualDescription(const std::vector<QVec>& points, const std::vector<ZVec>& rays,
                     const std::vector<ZVec>& lins, size_t n) {
    QMat rows;
    for (const auto& p : points) {
        QVec r = p;
        r.push_back(Rat(1));
        rows.push_back(std::move(r));
    }
    for (const auto& ray : rays) {
        QVec r = toQVec(ray);
        r.push_back(Rat(0));
        rows.push_back(std::move(r));
    }
    for (const auto& l : lins) {
        QVec r = toQVec(l);
        r.push_back(Rat(0));
        rows.push_back(r);
        for (auto& e : r) e = -e;
        rows.push_back(std::move(r));
    }
    RayEnumResult dual = enumerateExtremeRays(rows, n + 1);
    HRep h;
    for (const auto& eq : dual.lineality) {
        QVec a(eq.begin(), eq.begin() + n);
        if (isZero(a)) continue;  // would force 1 = 0; cannot happen with a point present
        h.equations.push_back({a, Rat(-eq[n])});
    }
    for (const auto& ray : dual.rays) {
        QVec a(ray.begin(), ray.begin() + n);
        if (isZero(a)) continue;  // the trivial homogenization inequality
        h.halfspaces.push_back({a, Rat(-ray[n])});
    }
    return h;
}

struct VRep {
    std::vector<QVec> vertices;
    std::vector<ZVec> rays;
    std::vector<ZVec> lineality;
};

// V-rep of {u : halfspaces, equations}; nullopt when empty.
std::optional<VRep> vertexEnumeration(const std::vector<Halfspace>& hs,
                                      const std::vector<Hyperplane>& eqs, size_t n) {
    QMat rows;
    for (const auto& h : hs) {
        QVec r = h.normal;
        r.push_back(-h.offset);
        rows.push_back(std::move(r));
    }
    for (const auto& e : eqs) {
        QVec r = e.normal;
        r.push_back(-e.offset);
        rows.push_back(r);
        for (auto& x : r) x = -x;
        rows.push_back(std::move(r));
    }
    {
        QVec t(n + 1, Rat(0));
        t[n] = 1;
        rows.push_back(std::move(t));
    }
    RayEnumResult gen = enumerateExtremeRays(rows, n + 1);
    VRep v;
    for (const auto& l : gen.lineality) {
        // last coordinate vanishes on the lineality (t >= 0 is a constraint)
        ZVec dir(l.begin(), l.begin() + n);
        v.lineality.push_back(primitiveVector(dir));
    }
    for (const auto& g : gen.rays) {
        if (g[n] > 0) {
            QVec p(n);
            Rat t(g[n]);
            for (size_t i = 0; i < n; ++i) p[i] = Rat(g[i]) / t;
            v.vertices.push_back(std::move(p));
        } else {
            ZVec dir(g.begin(), g.begin() + n);
            if (!isZero(dir)) v.rays.push_back(primitiveVector(dir));
        }
    }
    if (v.vertices.empty()) return std::nullopt;
    std::sort(v.vertices.begin(), v.vertices.end(), lexLess);
    auto zless = [](const ZVec& a, const ZVec& b) {
        for (size_t i = 0; i < a.size(); ++i) {
            if (cmp(a[i], b[i]) < 0) return true;
            if (cmp(a[i], b[i]) > 0) return false;
        }
        return false;
    };
    std::sort(v.rays.begin(), v.rays.end(), zless);
    return v;
}

void sortHRep(HRep& h) {
    auto hkey = [](const Halfspace& hh) { return vecKey(hh.normal) + "|" + ratToString(hh.offset); };
    std::sort(h.halfspaces.begin(), h.halfspaces.end(),
              [&](const Halfspace& a, const Halfspace& b) { return hkey(a) < hkey(b); });
    // canonical sign for equations: first nonzero coefficient positive
    for (auto& e : h.equations) {
        for (const auto& c : e.normal) {
            if (c == 0) continue;
            if (c < 0) {
                for (auto& x : e.normal) x = -x;
                e.offset = -e.offset;
            }
            break;
        }
    }
    auto ekey = [](const Hyperplane& ee) { return vecKey(ee.normal) + "|" + ratToString(ee.offset); };
    std::sort(h.equations.begin(), h.equations.end(),
              [&](const Hyperplane& a, const Hyperplane& b) { return ekey(a) < ekey(b); });
}

// scale each halfspace so the normal is a primitive integer vector
void normalizeHalfspaces(HRep& h) {
    for (auto& hs : h.halfspaces) {
        ZVec prim = primitiveOfRational(hs.normal);
        // find the positive scale factor
        size_t i = 0;
        while (hs.normal[i] == 0) ++i;
        Rat factor = Rat(prim[i]) / hs.normal[i];
        hs.normal = toQVec(prim);
        hs.offset *= factor;
    }
    for (auto& eq : h.equations) {
        ZVec prim = primitiveOfRational(eq.normal);
        size_t i = 0;
        while (eq.normal[i] == 0) ++i;
        Rat factor = Rat(prim[i]) / eq.normal[i];
        eq.normal = toQVec(prim);
        eq.offset *= factor;
    }
}

}  // namespace

Polyhedron Polyhedron::fromPoints(const std::vector<QVec>& points, const std::vector<QVec>& rayDirs,
                                  const std::vector<QVec>& linDirs) {
    if (points.empty()) throw std::invalid_argument("convex hull of empty point set");
    size_t n = points[0].size();
    for (const auto& p : points)
        if (p.size() != n) throw std::invalid_argument("mixed ambient ranks");
    std::vector<ZVec> rays, lins;
    for (const auto& r : rayDirs) {
        if (r.size() != n || isZero(r)) throw std::invalid_argument("bad ray direction");
        rays.push_back(primitiveOfRational(r));
    }
    for (const auto& l : linDirs) {
        if (l.size() != n || isZero(l)) throw std::invalid_argument("bad lineality direction");
        lins.push_back(primitiveOfRational(l));
    }
    HRep h = dualDescription(points, rays, lins, n);
    normalizeHalfspaces(h);
    sortHRep(h);
    auto v = vertexEnumeration(h.halfspaces, h.equations, n);
    if (!v) throw std::logic_error("vertex enumeration lost a nonempty polyhedron");
    Polyhedron p;
    p.ambientRank = n;
    p.vertices = v->vertices;
    p.rays = v->rays;
    p.lineality = v->lineality;
    p.halfspaces = h.halfspaces;
    p.equations = h.equations;
    p.dim = n - canonicalSpanBasis([&] {
                QMat eqRows;
                for (const auto& e : h.equations) eqRows.push_back(e.normal);
                return eqRows;
            }()).size();
    return p;
}

static std::optional<Polyhedron> fromHalfspacesImpl(const std::vector<Halfspace>& hs, size_t rank,
                                                    const std::vector<Hyperplane>& eqs = {}) {
    for (const auto& h : hs) {
        if (h.normal.size() != rank) throw std::invalid_argument("halfspace rank mismatch");
        if (isZero(h.normal)) throw std::invalid_argument("halfspace with zero normal");
    }
    auto v = vertexEnumeration(hs, eqs, rank);
    if (!v) return std::nullopt;
    std::vector<QVec> rayQ, linQ;
    for (const auto& r : v->rays) rayQ.push_back(toQVec(r));
    for (const auto& l : v->lineality) linQ.push_back(toQVec(l));
    return Polyhedron::fromPoints(v->vertices, rayQ, linQ);
}

Polyhedron Polyhedron::fromHalfspaces(const std::vector<Halfspace>& hs, size_t rank) {
    auto p = fromHalfspacesImpl(hs, rank);
    if (!p) throw std::invalid_argument("empty polyhedron");
    return *p;
}

bool Polyhedron::isLattice() const {
    if (!isBounded()) return false;
    for (const auto& v : vertices)
        for (const auto& c : v)
            if (c.get_den() != 1) return false;
    return true;
}

bool Polyhedron::contains(const QVec& u) const {
    if (u.size() != ambientRank) throw std::invalid_argument("rank mismatch");
    for (const auto& e : equations)
        if (dot(e.normal, u) != e.offset) return false;
    for (const auto& h : halfspaces)
        if (dot(h.normal, u) < h.offset) return false;
    return true;
}

QVec Polyhedron::interiorPoint() const {
    QVec p(ambientRank, Rat(0));
    for (const auto& v : vertices) p = add(p, v);
    p = scale(Rat(1) / Rat(Int(vertices.size())), p);
    for (const auto& r : rays) p = add(p, toQVec(r));
    return p;
}

std::vector<Polyhedron> Polyhedron::faces(size_t k) const {
    if (k > dim) throw std::invalid_argument("face dimension out of range");
    // incidence sets per irredundant halfspace
    struct FaceSet {
        std::set<size_t> verts, rays_;
    };
    auto faceKeyOf = [](const FaceSet& f) {
        std::ostringstream os;
        for (size_t i : f.verts) os << i << ",";
        os << "|";
        for (size_t i : f.rays_) os << i << ",";
        return os.str();
    };
    std::vector<FaceSet> frontier;
    {
        FaceSet whole;
        for (size_t i = 0; i < vertices.size(); ++i) whole.verts.insert(i);
        for (size_t i = 0; i < rays.size(); ++i) whole.rays_.insert(i);
        frontier.push_back(whole);
    }
    std::vector<FaceSet> facetSets;
    for (const auto& h : halfspaces) {
        FaceSet f;
        for (size_t i = 0; i < vertices.size(); ++i)
            if (dot(h.normal, vertices[i]) == h.offset) f.verts.insert(i);
        for (size_t i = 0; i < rays.size(); ++i)
            if (dot(h.normal, rays[i]) == 0) f.rays_.insert(i);
        if (!f.verts.empty()) facetSets.push_back(f);
    }
    std::map<std::string, FaceSet> all;
    all[faceKeyOf(frontier[0])] = frontier[0];
    for (const auto& f : facetSets) all.emplace(faceKeyOf(f), f);
    // closure under intersection with facets
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<FaceSet> current;
        for (const auto& [key, f] : all) current.push_back(f);
        for (const auto& f : current) {
            for (const auto& g : facetSets) {
                FaceSet inter;
                std::set_intersection(f.verts.begin(), f.verts.end(), g.verts.begin(), g.verts.end(),
                                      std::inserter(inter.verts, inter.verts.begin()));
                std::set_intersection(f.rays_.begin(), f.rays_.end(), g.rays_.begin(), g.rays_.end(),
                                      std::inserter(inter.rays_, inter.rays_.begin()));
                if (inter.verts.empty()) continue;
                if (all.emplace(faceKeyOf(inter), inter).second) changed = true;
            }
        }
    }
    std::vector<Polyhedron> out;
    for (const auto& [key, f] : all) {
        QMat pts;
        for (size_t i : f.verts) pts.push_back(vertices[i]);
        QMat affPts = pts;
        std::vector<QVec> rayQ, linQ;
        for (size_t i : f.rays_) {
            rayQ.push_back(toQVec(rays[i]));
            affPts.push_back(add(pts[0], rayQ.back()));
        }
        for (const auto& l : lineality) {
            linQ.push_back(toQVec(l));
            affPts.push_back(add(pts[0], linQ.back()));
        }
        if (affineRank(affPts) != k) continue;
        out.push_back(Polyhedron::fromPoints(pts, rayQ, linQ));
    }
    return out;
}

ZVec Polyhedron::facetInnerNormal(const Polyhedron& facet) const {
    if (dim != ambientRank)
        throw std::invalid_argument("facet normals require a full-dimensional polyhedron");
    for (const auto& h : halfspaces) {
        bool tight = true;
        for (const auto& v : facet.vertices)
            if (dot(h.normal, v) != h.offset) { tight = false; break; }
        for (const auto& r : facet.rays)
            if (tight && dot(h.normal, r) != 0) tight = false;
        if (tight) return primitiveOfRational(h.normal);
    }
    throw std::invalid_argument("not a facet of this polyhedron");
}

std::string Polyhedron::canonicalKey() const {
    std::ostringstream os;
    for (const auto& v : vertices) os << vecKey(v) << ";";
    os << "#";
    for (const auto& r : rays) os << vecKey(r) << ";";
    os << "#";
    QMat lin;
    for (const auto& l : lineality) lin.push_back(toQVec(l));
    for (const auto& l : canonicalSpanBasis(lin)) os << vecKey(l) << ";";
    return os.str();
}

bool Polyhedron::sameSet(const Polyhedron& other) const {
    return ambientRank == other.ambientRank && canonicalKey() == other.canonicalKey();
}

Polyhedron Polyhedron::translate(const QVec& shift) const {
    std::vector<QVec> pts;
    for (const auto& v : vertices) pts.push_back(add(v, shift));
    std::vector<QVec> rayQ, linQ;
    for (const auto& r : rays) rayQ.push_back(toQVec(r));
    for (const auto& l : lineality) linQ.push_back(toQVec(l));
    return fromPoints(pts, rayQ, linQ);
}

std::optional<Polyhedron> Polyhedron::intersect(const Polyhedron& a, const Polyhedron& b) {
    if (a.ambientRank != b.ambientRank) throw std::invalid_argument("rank mismatch");
    std::vector<Halfspace> hs = a.halfspaces;
    hs.insert(hs.end(), b.halfspaces.begin(), b.halfspaces.end());
    std::vector<Hyperplane> eqs = a.equations;
    eqs.insert(eqs.end(), b.equations.begin(), b.equations.end());
    return fromHalfspacesImpl(hs, a.ambientRank, eqs);
}

Polytope convexHull(const std::vector<QVec>& points) {
    Polytope p = Polyhedron::fromPoints(points);
    return p;
}

RelativeCoords relativeCoords(const Polyhedron& p) {
    RelativeCoords rc;
    rc.base = p.vertices.front();  // vertices are sorted, so lex-min
    QMat span;
    for (const auto& v : p.vertices) span.push_back(sub(v, rc.base));
    for (const auto& r : p.rays) span.push_back(toQVec(r));
    for (const auto& l : p.lineality) span.push_back(toQVec(l));
    rc.latticeBasis = saturatedLatticeBasis(span, p.ambientRank);
    return rc;
}

std::vector<QVec> RelativeCoords::toRelative(const std::vector<QVec>& pts) const {
    size_t r = latticeBasis.size();
    size_t n = base.size();
    QMat bt(n, QVec(r));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < n; ++j) bt[j][i] = Rat(latticeBasis[i][j]);
    std::vector<QVec> out;
    for (const auto& p : pts) {
        auto x = solveLinear(bt, sub(p, base));
        if (!x) throw std::invalid_argument("point outside the affine hull");
        out.push_back(*x);
    }
    return out;
}

QVec RelativeCoords::toAmbient(const QVec& rel) const {
    QVec p = base;
    for (size_t i = 0; i < latticeBasis.size(); ++i)
        for (size_t j = 0; j < p.size(); ++j) p[j] += rel[i] * latticeBasis[i][j];
    return p;
}

std::vector<std::vector<QVec>> triangulate(const Polytope& p) {
    if (!p.isBounded()) throw std::invalid_argument("cannot triangulate an unbounded polyhedron");
    if (p.vertices.size() == p.dim + 1) return {p.vertices};
    const QVec apex = p.vertices.front();  // lex-min
    std::vector<std::vector<QVec>> out;
    for (const auto& f : p.facets()) {
        bool containsApex = false;
        for (const auto& v : f.vertices)
            if (v == apex) { containsApex = true; break; }
        if (containsApex) continue;
        for (auto simplex : triangulate(f)) {
            simplex.push_back(apex);
            out.push_back(std::move(simplex));
        }
    }
    return out;
}

static Rat simplexVolume(const std::vector<QVec>& simplex, const RelativeCoords* rc) {
    // full-dimensional simplex volume |det| / d!
    std::vector<QVec> pts = rc ? rc->toRelative(simplex) : simplex;
    size_t d = pts.size() - 1;
    QMat m;
    for (size_t i = 1; i < pts.size(); ++i) m.push_back(sub(pts[i], pts[0]));
    Rat det = determinant(std::move(m));
    Rat v = abs(det);
    Int fact = 1;
    for (size_t i = 2; i <= d; ++i) fact *= Int(i);
    return v / Rat(fact);
}

Rat volume(const Polytope& p, VolumeMode mode) {
    if (!p.isBounded()) throw std::invalid_argument("volume of an unbounded polyhedron");
    if (mode == VolumeMode::Ambient) {
        if (p.dim < p.ambientRank) return 0;
        Rat total = 0;
        for (const auto& s : triangulate(p)) total += simplexVolume(s, nullptr);
        return total;
    }
    if (p.dim == 0) return 1;
    RelativeCoords rc = relativeCoords(p);
    Rat total = 0;
    for (const auto& s : triangulate(p)) total += simplexVolume(s, &rc);
    return total;
}

// --- cones ---

Cone Cone::fromRays(const std::vector<QVec>& rayDirs, size_t rank, const std::vector<QVec>& linDirs) {
    QVec origin(rank, Rat(0));
    return fromPolyhedron(Polyhedron::fromPoints({origin}, rayDirs, linDirs));
}

Polyhedron Cone::asPolyhedron() const {
    QVec origin(ambientRank, Rat(0));
    std::vector<QVec> rayQ, linQ;
    for (const auto& r : rays) rayQ.push_back(toQVec(r));
    for (const auto& l : lineality) linQ.push_back(toQVec(l));
    return Polyhedron::fromPoints({origin}, rayQ, linQ);
}

Cone Cone::fromPolyhedron(const Polyhedron& p) {
    Cone c;
    c.ambientRank = p.ambientRank;
    c.rays = p.rays;
    c.lineality = p.lineality;
    c.halfspaces = p.halfspaces;
    c.equations = p.equations;
    c.dim = p.dim;
    for (const auto& v : p.vertices)
        if (!isZero(v)) throw std::invalid_argument("cone apex must be the origin");
    return c;
}

bool Cone::contains(const QVec& u) const {
    for (const auto& e : equations)
        if (dot(e.normal, u) != e.offset) return false;
    for (const auto& h : halfspaces)
        if (dot(h.normal, u) < h.offset) return false;
    return true;
}

std::string Cone::canonicalKey() const { return asPolyhedron().canonicalKey(); }

std::vector<Cone> Cone::faces(size_t k) const {
    std::vector<Cone> out;
    for (const auto& f : asPolyhedron().faces(k)) out.push_back(Cone::fromPolyhedron(f));
    return out;
}

namespace {

// inner ⊆ outer, checked on the V-rep generators of inner
bool containsAllGenerators(const Polyhedron& outer, const Polyhedron& inner) {
    for (const auto& v : inner.vertices)
        if (!outer.contains(v)) return false;
    auto inRecession = [&](const ZVec& dir, bool bothSigns) {
        for (const auto& h : outer.halfspaces) {
            Rat s = dot(h.normal, dir);
            if (s < 0 || (bothSigns && s != 0)) return false;
        }
        for (const auto& e : outer.equations)
            if (dot(e.normal, dir) != 0) return false;
        return true;
    };
    for (const auto& r : inner.rays)
        if (!inRecession(r, false)) return false;
    for (const auto& l : inner.lineality)
        if (!inRecession(l, true)) return false;
    return true;
}

}  // namespace

Fan Fan::build(const std::vector<Cone>& generatorCones, bool verify) {
    if (generatorCones.empty()) throw std::invalid_argument("fan needs at least one cone");
    Fan fan;
    fan.ambientRank = generatorCones[0].ambientRank;
    std::map<std::string, Cone> byKey;
    for (const auto& c : generatorCones) {
        if (c.ambientRank != fan.ambientRank) throw std::invalid_argument("mixed ambient ranks");
        byKey.emplace(c.canonicalKey(), c);
        for (size_t k = 0; k < c.dim; ++k)
            for (const auto& f : c.faces(k)) byKey.emplace(f.canonicalKey(), f);
    }
    for (auto& [key, c] : byKey) fan.cones.push_back(c);
    std::vector<Polyhedron> asPoly;
    for (const auto& c : fan.cones) asPoly.push_back(c.asPolyhedron());
    if (verify) {
        // pairwise intersections must be common faces
        std::set<std::string> keys;
        for (const auto& c : fan.cones) keys.insert(c.canonicalKey());
        for (size_t i = 0; i < fan.cones.size(); ++i) {
            for (size_t j = i + 1; j < fan.cones.size(); ++j) {
                auto inter = Polyhedron::intersect(asPoly[i], asPoly[j]);
                if (!inter) throw std::logic_error("cone intersection cannot be empty");
                if (!keys.count(inter->canonicalKey()))
                    throw std::invalid_argument("cone intersection is not a common face");
            }
        }
    }
    // maximal cones: not contained in any higher-dimensional cone
    for (size_t i = 0; i < fan.cones.size(); ++i) {
        bool isFace = false;
        for (size_t j = 0; j < fan.cones.size() && !isFace; ++j) {
            if (i == j || fan.cones[j].dim <= fan.cones[i].dim) continue;
            if (containsAllGenerators(asPoly[j], asPoly[i])) isFace = true;
        }
        if (!isFace) fan.maximal.push_back(i);
    }
    fan.stronglyConvex = true;
    for (const auto& c : fan.cones)
        if (!c.lineality.empty()) fan.stronglyConvex = false;
    // completeness: every facet of a maximal cone is shared by exactly one other maximal cone
    size_t n = fan.ambientRank;
    if (n == 0) {
        fan.complete = true;
        return fan;
    }
    bool allFull = !fan.maximal.empty();
    for (size_t i : fan.maximal)
        if (fan.cones[i].dim != n) allFull = false;
    if (allFull) {
        std::map<std::string, size_t> ridgeCount;
        for (size_t i : fan.maximal)
            for (const auto& f : fan.cones[i].faces(n - 1)) ridgeCount[f.canonicalKey()]++;
        fan.complete = true;
        for (const auto& [key, count] : ridgeCount)
            if (count != 2) fan.complete = false;
        if (fan.maximal.size() == 1 && n > 0) {
            // a single maximal cone is complete only if it is the whole space
            fan.complete = fan.cones[fan.maximal[0]].dim == n &&
                           fan.cones[fan.maximal[0]].halfspaces.empty() &&
                           fan.cones[fan.maximal[0]].equations.empty();
        }
    }
    return fan;
}

size_t Fan::coneContaining(const QVec& u) const {
    size_t best = cones.size();
    for (size_t i = 0; i < cones.size(); ++i) {
        if (!cones[i].contains(u)) continue;
        if (best == cones.size() || cones[i].dim < cones[best].dim) best = i;
    }
    if (best == cones.size()) throw std::invalid_argument("point outside the fan support");
    return best;
}

NormalFan normalFan(const Polytope& delta) {
    if (!delta.isBounded()) throw std::invalid_argument("normal fan of an unbounded polyhedron");
    if (delta.dim != delta.ambientRank)
        throw std::invalid_argument("normal fan requires a full-dimensional polytope");
    size_t n = delta.ambientRank;
    auto facetList = delta.facets();
    std::vector<ZVec> innerNormals;
    for (const auto& f : facetList) innerNormals.push_back(delta.facetInnerNormal(f));

    std::vector<Cone> cones;
    std::vector<Polytope> facePerCone;
    for (size_t k = 0; k <= delta.dim; ++k) {
        for (const auto& face : delta.faces(k)) {
            std::vector<QVec> gens;
            for (size_t i = 0; i < facetList.size(); ++i) {
                // facet contains the face?
                bool containsFace = true;
                for (const auto& v : face.vertices) {
                    if (dot(toQVec(innerNormals[i]), v) !=
                        dot(toQVec(innerNormals[i]), facetList[i].vertices[0])) {
                        containsFace = false;
                        break;
                    }
                }
                if (containsFace) gens.push_back(toQVec(innerNormals[i]));
            }
            Cone c = gens.empty() ? Cone::fromRays({}, n) : Cone::fromRays(gens, n);
            cones.push_back(c);
            facePerCone.push_back(face);
        }
    }
    NormalFan nf;
    nf.fan = Fan::build(cones, /*verify=*/false);
    // realign the correspondence with the deduped fan cones
    std::map<std::string, Polytope> faceByConeKey;
    for (size_t i = 0; i < cones.size(); ++i) faceByConeKey.emplace(cones[i].canonicalKey(), facePerCone[i]);
    for (const auto& c : nf.fan.cones) {
        auto it = faceByConeKey.find(c.canonicalKey());
        if (it == faceByConeKey.end()) throw std::logic_error("normal fan correspondence incomplete");
        nf.faceOfCone.push_back(it->second);
    }
    for (size_t i = 0; i < nf.fan.cones.size(); ++i)
        nf.coneOfFaceKey[nf.faceOfCone[i].canonicalKey()] = i;
    return nf;
}

PolyComplex PolyComplex::build(const std::vector<Polyhedron>& generatorCells, bool verify) {
    if (generatorCells.empty()) throw std::invalid_argument("complex needs at least one cell");
    PolyComplex pc;
    pc.ambientRank = generatorCells[0].ambientRank;
    std::map<std::string, Polyhedron> byKey;
    for (const auto& c : generatorCells) {
        if (c.ambientRank != pc.ambientRank) throw std::invalid_argument("mixed ambient ranks");
        byKey.emplace(c.canonicalKey(), c);
        for (size_t k = 0; k < c.dim; ++k)
            for (const auto& f : c.faces(k)) byKey.emplace(f.canonicalKey(), f);
    }
    for (auto& [key, c] : byKey) pc.cells.push_back(c);
    if (verify) {
        std::set<std::string> keys;
        for (const auto& c : pc.cells) keys.insert(c.canonicalKey());
        for (size_t i = 0; i < pc.cells.size(); ++i) {
            for (size_t j = i + 1; j < pc.cells.size(); ++j) {
                auto inter = Polyhedron::intersect(pc.cells[i], pc.cells[j]);
                if (!inter) continue;
                if (!keys.count(inter->canonicalKey()))
                    throw std::invalid_argument("cell intersection is not a common face");
            }
        }
    }
    for (size_t i = 0; i < pc.cells.size(); ++i) {
        bool isFace = false;
        for (size_t j = 0; j < pc.cells.size() && !isFace; ++j) {
            if (i == j || pc.cells[j].dim <= pc.cells[i].dim) continue;
            if (containsAllGenerators(pc.cells[j], pc.cells[i])) isFace = true;
        }
        if (!isFace) pc.maximal.push_back(i);
    }
    size_t n = pc.ambientRank;
    bool allFull = !pc.maximal.empty();
    for (size_t i : pc.maximal)
        if (pc.cells[i].dim != n) allFull = false;
    pc.complete = false;
    if (allFull) {
        if (n == 0) {
            pc.complete = true;
        } else if (pc.maximal.size() == 1) {
            pc.complete = pc.cells[pc.maximal[0]].halfspaces.empty() &&
                          pc.cells[pc.maximal[0]].equations.empty();
        } else {
            std::map<std::string, size_t> ridgeCount;
            for (size_t i : pc.maximal)
                for (const auto& f : pc.cells[i].faces(n - 1)) ridgeCount[f.canonicalKey()]++;
            pc.complete = true;
            for (const auto& [key, count] : ridgeCount)
                if (count != 2) pc.complete = false;
        }
    }
    return pc;
}

bool PolyComplex::isGammaRational(const ValueGroup& gamma) const {
    for (const auto& c : cells) {
        for (const auto& h : c.halfspaces) {
            for (const auto& x : h.normal)
                if (x.get_den() != 1) return false;
            if (!gamma.contains(h.offset)) return false;
        }
        for (const auto& e : c.equations) {
            for (const auto& x : e.normal)
                if (x.get_den() != 1) return false;
            if (!gamma.contains(e.offset)) return false;
        }
    }
    return true;
}

std::vector<QVec> PolyComplex::vertexSet() const {
    std::set<std::string> seen;
    std::vector<QVec> out;
    for (const auto& c : cells) {
        if (c.dim != 0 || !c.lineality.empty() || !c.rays.empty()) continue;
        const QVec& v = c.vertices[0];
        if (seen.insert(vecKey(v)).second) out.push_back(v);
    }
    std::sort(out.begin(), out.end(), lexLess);
    return out;
}

Cone recessionCone(const Polyhedron& p) {
    std::vector<Halfspace> hs;
    for (const auto& h : p.halfspaces) hs.push_back({h.normal, Rat(0)});
    for (const auto& e : p.equations) {
        hs.push_back({e.normal, Rat(0)});
        QVec neg = e.normal;
        for (auto& x : neg) x = -x;
        hs.push_back({neg, Rat(0)});
    }
    if (hs.empty()) {
        std::vector<QVec> lins;
        for (size_t i = 0; i < p.ambientRank; ++i) {
            QVec e(p.ambientRank, Rat(0));
            e[i] = 1;
            lins.push_back(e);
        }
        return Cone::fromRays({}, p.ambientRank, lins);
    }
    return Cone::fromPolyhedron(Polyhedron::fromHalfspaces(hs, p.ambientRank));
}

Fan recessionFan(const PolyComplex& pc) {
    std::vector<Cone> cones;
    for (const auto& c : pc.cells) cones.push_back(recessionCone(c));
    try {
        return Fan::build(cones);
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("recession is not a fan");
    }
}

Cone coneOver(const Polyhedron& p) {
    if (!p.lineality.empty()) throw std::invalid_argument("cone over a non-strongly-convex polyhedron");
    size_t n = p.ambientRank;
    std::vector<QVec> rays;
    for (const auto& v : p.vertices) {
        QVec r = v;
        r.push_back(Rat(1));
        rays.push_back(std::move(r));
    }
    for (const auto& r : p.rays) {
        QVec q = toQVec(r);
        q.push_back(Rat(0));
        rays.push_back(std::move(q));
    }
    return Cone::fromRays(rays, n + 1);
}

Fan coneOver(const PolyComplex& pc) {
    std::vector<Cone> cones;
    for (const auto& c : pc.cells) {
        cones.push_back(coneOver(c));
        Cone rec = recessionCone(c);
        std::vector<QVec> rays;
        for (const auto& r : rec.rays) {
            QVec q = toQVec(r);
            q.push_back(Rat(0));
            rays.push_back(std::move(q));
        }
        cones.push_back(Cone::fromRays(rays, pc.ambientRank + 1));
    }
    return Fan::build(cones, /*verify=*/false);
}

std::optional<Polyhedron> sliceAtHeightOne(const Cone& c) {
    size_t n = c.ambientRank - 1;
    std::vector<Halfspace> hs;
    std::vector<Hyperplane> eqs;
    for (const auto& h : c.halfspaces) {
        QVec a(h.normal.begin(), h.normal.begin() + n);
        Rat off = h.offset - h.normal[n];
        if (isZero(a)) continue;
        hs.push_back({a, off});
    }
    for (const auto& e : c.equations) {
        QVec a(e.normal.begin(), e.normal.begin() + n);
        Rat off = e.offset - e.normal[n];
        if (isZero(a)) {
            if (off != 0) return std::nullopt;
            continue;
        }
        eqs.push_back({a, off});
    }
    return fromHalfspacesImpl(hs, n, eqs);
}

}  // namespace torheight
