#include "torheight/concave.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace torheight {

Rat ConcavePA::evaluate(const QVec& u) const {
    if (pieces.empty()) throw std::logic_error("uninitialized concave function");
    Rat best = pieces[0].eval(u);
    for (size_t i = 1; i < pieces.size(); ++i) best = std::min(best, pieces[i].eval(u));
    return best;
}

bool ConcavePA::isGammaRational(const ValueGroup& gamma) const {
    for (const auto& p : pieces) {
        for (const auto& c : p.slope)
            if (c.get_den() != 1) return false;
        if (!gamma.contains(p.constant)) return false;
    }
    return true;
}

Int ConcavePA::rationalityDenominator(const ValueGroup& gamma) const {
    Int e = 1;
    for (const auto& p : pieces) {
        for (const auto& c : p.slope) e = lcm(e, c.get_den());
        if (gamma.mode == ValueGroup::Mode::Discrete) {
            Rat r = p.constant / gamma.base;
            e = lcm(e, r.get_den());
        }
    }
    return e;
}

static std::string pieceKey(const AffineForm& p) {
    std::ostringstream os;
    for (const auto& c : p.slope) os << ratToString(c) << ",";
    os << ";" << ratToString(p.constant);
    return os.str();
}

static bool pieceLess(const AffineForm& a, const AffineForm& b) {
    for (size_t i = 0; i < a.slope.size(); ++i)
        if (a.slope[i] != b.slope[i]) return a.slope[i] < b.slope[i];
    return a.constant < b.constant;
}

ConcavePA canonicalMinForm(const std::vector<AffineForm>& piecesIn, size_t ambientRank) {
    if (ambientRank == 0) throw std::invalid_argument("ambient rank must be positive");
    if (piecesIn.empty()) throw std::invalid_argument("min-form needs at least one piece");
    for (const auto& p : piecesIn)
        if (p.slope.size() != ambientRank) throw std::invalid_argument("piece rank mismatch");

    // keep the lowest constant per slope, then dedupe
    std::map<std::string, AffineForm> bySlope;
    for (const auto& p : piecesIn) {
        std::ostringstream os;
        for (const auto& c : p.slope) os << ratToString(c) << ",";
        auto [it, fresh] = bySlope.emplace(os.str(), p);
        if (!fresh && p.constant < it->second.constant) it->second = p;
    }
    std::vector<AffineForm> cand;
    for (auto& [k, p] : bySlope) cand.push_back(p);

    // activity region of piece i: where it attains the min
    std::vector<AffineForm> kept;
    std::vector<Polyhedron> regions;
    for (size_t i = 0; i < cand.size(); ++i) {
        std::vector<Halfspace> hs;
        for (size_t j = 0; j < cand.size(); ++j) {
            if (j == i) continue;
            QVec nrm = sub(cand[j].slope, cand[i].slope);
            hs.push_back({nrm, cand[i].constant - cand[j].constant});
        }
        Polyhedron region;
        try {
            region = Polyhedron::fromHalfspaces(hs, ambientRank);
        } catch (const std::invalid_argument&) {
            continue;  // empty region: piece never active
        }
        if (region.dim == ambientRank) {
            kept.push_back(cand[i]);
            regions.push_back(region);
        }
    }
    if (kept.empty()) throw std::logic_error("min-form has no full-dimensional activity region");

    ConcavePA f;
    f.ambientRank = ambientRank;
    std::vector<size_t> order(kept.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return pieceLess(kept[a], kept[b]); });
    std::map<std::string, size_t> pieceOfRegionKey;
    for (size_t r = 0; r < order.size(); ++r) {
        f.pieces.push_back(kept[order[r]]);
        pieceOfRegionKey[regions[order[r]].canonicalKey()] = r;
    }
    f.inducedComplex = PolyComplex::build(regions, /*verify=*/false);
    for (size_t mi : f.inducedComplex.maximal)
        f.pieceOfMaximalCell.push_back(pieceOfRegionKey.at(f.inducedComplex.cells[mi].canonicalKey()));
    return f;
}

Polytope stabilitySet(const ConcavePA& f) {
    std::vector<QVec> slopes;
    for (const auto& p : f.pieces) slopes.push_back(p.slope);
    return convexHull(slopes);
}

Polytope supDifferential(const ConcavePA& f, const QVec& u) {
    Rat best = f.evaluate(u);
    std::vector<QVec> active;
    for (const auto& p : f.pieces)
        if (p.eval(u) == best) active.push_back(p.slope);
    return convexHull(active);
}

Rat ConcaveOnPolytope::evaluate(const QVec& m) const {
    for (size_t i = 0; i < cells.size(); ++i)
        if (cells[i].contains(m)) return cellForms[i].eval(m);
    throw std::invalid_argument("point outside the domain");
}

std::vector<QVec> ConcaveOnPolytope::subdivisionVertices() const {
    std::map<std::string, QVec> seen;
    for (const auto& c : cells)
        for (const auto& v : c.vertices) {
            std::ostringstream os;
            for (const auto& x : v) os << ratToString(x) << ",";
            seen.emplace(os.str(), v);
        }
    std::vector<QVec> out;
    for (auto& [k, v] : seen) out.push_back(v);
    return out;
}

ConcaveOnPolytope upperEnvelope(const std::vector<std::pair<QVec, Rat>>& lifted) {
    if (lifted.empty()) throw std::invalid_argument("envelope needs at least one lifted point");
    size_t n = lifted[0].first.size();

    // max height per distinct location; only those can reach the upper hull
    std::map<std::string, std::pair<QVec, Rat>> best;
    std::vector<QVec> locations;
    for (const auto& [m, lam] : lifted) {
        if (m.size() != n) throw std::invalid_argument("lifted point rank mismatch");
        std::ostringstream os;
        for (const auto& x : m) os << ratToString(x) << ",";
        auto [it, fresh] = best.emplace(os.str(), std::make_pair(m, lam));
        if (!fresh && lam > it->second.second) it->second.second = lam;
        locations.push_back(m);
    }

    ConcaveOnPolytope g;
    g.domain = convexHull(locations);
    size_t d = g.domain.dim;
    RelativeCoords rc = relativeCoords(g.domain);

    if (d == 0) {
        Rat top = best.begin()->second.second;
        g.cells = {g.domain};
        g.cellForms = {{QVec(n, Rat(0)), top}};
    } else {
        std::vector<QVec> liftRel;
        {
            std::vector<QVec> locs;
            std::vector<Rat> lams;
            for (auto& [k, p] : best) {
                locs.push_back(p.first);
                lams.push_back(p.second);
            }
            auto rel = rc.toRelative(locs);
            for (size_t i = 0; i < rel.size(); ++i) {
                QVec lr = rel[i];
                lr.push_back(lams[i]);
                liftRel.push_back(lr);
            }
        }
        Polytope hull = convexHull(liftRel);

        struct CellData {
            Polytope cell;
            AffineForm form;
        };
        std::vector<CellData> cellData;

        auto ambientForm = [&](const QVec& relSlope, const Rat& relConst) {
            QMat eqs;
            for (const auto& row : rc.latticeBasis) eqs.push_back(toQVec(row));
            auto s = solveLinear(eqs, relSlope);
            if (!s) throw std::logic_error("envelope slope lift failed");
            return AffineForm{*s, relConst - dot(*s, rc.base)};
        };

        if (hull.dim <= d) {
            // all lifted points affinely dependent: the envelope is affine
            QMat sys;
            QVec rhs;
            for (const auto& lr : liftRel) {
                QVec row(lr.begin(), lr.end() - 1);
                row.push_back(Rat(1));
                sys.push_back(row);
                rhs.push_back(lr.back());
            }
            auto sol = solveLinear(sys, rhs);
            if (!sol) throw std::logic_error("flat envelope is not affine");
            QVec relSlope(sol->begin(), sol->end() - 1);
            cellData.push_back({g.domain, ambientForm(relSlope, sol->back())});
        } else {
            for (const auto& facet : hull.facets()) {
                ZVec nrm = hull.facetInnerNormal(facet);
                Rat c = Rat(nrm.back());
                if (c >= 0) continue;  // keep only the upper facets
                Rat b = dot(toQVec(nrm), facet.vertices[0]);
                QVec a(nrm.size() - 1);
                for (size_t i = 0; i + 1 < nrm.size(); ++i) a[i] = Rat(nrm[i]);
                // on the facet: a.x + c t = b, so t = (b - a.x)/c
                QVec relSlope = scale(-1 / c, a);
                Rat relConst = b / c;
                std::vector<QVec> cellVertsAmb;
                for (const auto& v : facet.vertices) {
                    QVec x(v.begin(), v.end() - 1);
                    cellVertsAmb.push_back(rc.toAmbient(x));
                }
                cellData.push_back({convexHull(cellVertsAmb), ambientForm(relSlope, relConst)});
            }
        }
        std::sort(cellData.begin(), cellData.end(), [](const CellData& x, const CellData& y) {
            return x.cell.canonicalKey() < y.cell.canonicalKey();
        });
        for (auto& cd : cellData) {
            g.cells.push_back(cd.cell);
            g.cellForms.push_back(cd.form);
        }
    }

    g.lift = lifted;
    for (const auto& [m, lam] : lifted) g.liftActive.push_back(g.evaluate(m) == lam);
    return g;
}

ConcaveOnPolytope legendreDual(const ConcavePA& f) {
    std::vector<std::pair<QVec, Rat>> lifted;
    for (const auto& p : f.pieces) lifted.emplace_back(p.slope, -p.constant);
    return upperEnvelope(lifted);
}

ConcavePA legendreDualBack(const ConcaveOnPolytope& g) {
    size_t n = g.domain.ambientRank;
    std::vector<AffineForm> pieces;
    for (const auto& v : g.subdivisionVertices()) pieces.push_back({v, -g.evaluate(v)});
    return canonicalMinForm(pieces, n);
}

Rat SupportFunctionData::evaluate(const QVec& u) const {
    for (size_t i = 0; i < fan.maximal.size(); ++i)
        if (fan.cones[fan.maximal[i]].contains(u)) return dot(slopes[i], u);
    throw std::invalid_argument("point not covered by the fan");
}

ConcavePA SupportFunctionData::minForm() const {
    std::vector<AffineForm> pieces;
    for (const auto& s : slopes) pieces.push_back({s, Rat(0)});
    return canonicalMinForm(pieces, fan.ambientRank);
}

Polytope SupportFunctionData::stabilityPolytope() const { return convexHull(slopes); }

// normal-fan support data of a full-dimensional polytope (no lattice check)
static SupportFunctionData supportDataFullDim(const Polytope& delta) {
    NormalFan nf = normalFan(delta);
    SupportFunctionData sf;
    sf.fan = nf.fan;
    for (size_t mi : sf.fan.maximal) {
        const Polytope& face = nf.faceOfCone[mi];
        if (face.dim != 0) throw std::logic_error("maximal normal cone without vertex");
        sf.slopes.push_back(face.vertices[0]);
    }
    sf.concave = true;
    sf.strictlyConcave = true;
    sf.virtualSupport = false;
    return sf;
}

SupportFunctionData supportFunctionOfPolytope(const Polytope& delta) {
    if (!delta.isBounded()) throw std::invalid_argument("support function needs a polytope");
    if (!delta.isLattice()) throw std::invalid_argument("support function needs a lattice polytope");
    if (delta.dim == delta.ambientRank) return supportDataFullDim(delta);
    // lower-dimensional: translate into the saturated lattice of its
    // affine hull, where it is full-dimensional
    if (delta.dim == 0) throw std::invalid_argument("polytope must have positive dimension");
    RelativeCoords rc = relativeCoords(delta);
    return supportDataFullDim(convexHull(rc.toRelative(delta.vertices)));
}

SupportFunctionData supportFunctionFromMinForm(const ConcavePA& homogeneous) {
    for (const auto& p : homogeneous.pieces)
        if (p.constant != 0) throw std::invalid_argument("min-form is not homogeneous");
    Polytope delta = stabilitySet(homogeneous);
    if (delta.dim != homogeneous.ambientRank)
        throw std::invalid_argument("stability set is not full-dimensional");
    return supportDataFullDim(delta);
}

SupportFunctionData classifySupportFunction(const Fan& fan, const std::vector<QVec>& maximalSlopes) {
    if (maximalSlopes.size() != fan.maximal.size())
        throw std::invalid_argument("one slope per maximal cone required");
    SupportFunctionData sf;
    sf.fan = fan;
    sf.slopes = maximalSlopes;
    // well defined: slopes must agree on shared faces (tested on the shared
    // ray generators and the lineality space)
    size_t k = fan.maximal.size();
    for (size_t i = 0; i < k; ++i) {
        const Cone& ci = fan.cones[fan.maximal[i]];
        for (size_t j = i + 1; j < k; ++j) {
            const Cone& cj = fan.cones[fan.maximal[j]];
            for (const auto& r : ci.rays)
                if (cj.contains(toQVec(r)) &&
                    dot(maximalSlopes[i], r) != dot(maximalSlopes[j], r))
                    throw std::invalid_argument("slopes disagree on a shared face");
            for (const auto& l : ci.lineality)
                if (dot(maximalSlopes[i], l) != dot(maximalSlopes[j], l))
                    throw std::invalid_argument("slopes disagree on a shared face");
        }
    }
    sf.concave = true;
    for (size_t i = 0; i < k && sf.concave; ++i) {
        const Cone& ci = fan.cones[fan.maximal[i]];
        for (size_t j = 0; j < k && sf.concave; ++j) {
            if (j == i) continue;
            for (const auto& r : ci.rays)
                if (dot(maximalSlopes[j], r) < dot(maximalSlopes[i], r)) {
                    sf.concave = false;
                    break;
                }
        }
    }
    sf.virtualSupport = !sf.concave;
    sf.strictlyConcave = false;
    if (sf.concave) {
        Polytope delta = sf.stabilityPolytope();
        if (delta.dim == fan.ambientRank) {
            NormalFan nf = normalFan(delta);
            std::set<std::string> a, b;
            for (size_t mi : fan.maximal) a.insert(fan.cones[mi].canonicalKey());
            for (size_t mi : nf.fan.maximal) b.insert(nf.fan.cones[mi].canonicalKey());
            sf.strictlyConcave = (a == b);
        }
    }
    return sf;
}

RecessionFunction recessionFunction(const ConcavePA& f) {
    RecessionFunction out;
    std::vector<AffineForm> pieces;
    for (const auto& p : f.pieces) pieces.push_back({p.slope, Rat(0)});
    out.homogeneous = canonicalMinForm(pieces, f.ambientRank);
    if (stabilitySet(f).dim == f.ambientRank)
        out.support = supportFunctionFromMinForm(out.homogeneous);
    return out;
}

// ---- blackbox approximation ----

namespace {

double goldenSection(const std::function<double(double)>& h, double lo, double hi, double tol) {
    const double inv = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - inv * (b - a), x2 = a + inv * (b - a);
    double f1 = h(x1), f2 = h(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv * (b - a);
            f1 = h(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv * (b - a);
            f2 = h(x2);
        }
    }
    return (a + b) / 2;
}

}  // namespace

ApproxResult approximateConcave(const std::function<double(const std::vector<double>&)>& psi,
                                const Polytope& delta, double psiMinusSupportBound, long k,
                                const ApproxOptions& opts) {
    if (k <= 0) throw std::invalid_argument("grid refinement must be positive");
    if (!delta.isBounded()) throw std::invalid_argument("stability set must be bounded");
    size_t n = delta.ambientRank;

    // grid points of (1/k)Z^n inside delta
    std::vector<long> lo(n), hi(n);
    for (size_t i = 0; i < n; ++i) {
        Rat mn = delta.vertices[0][i], mx = mn;
        for (const auto& v : delta.vertices) {
            mn = std::min(mn, v[i]);
            mx = std::max(mx, v[i]);
        }
        lo[i] = static_cast<long>(std::ceil(ratToDouble(mn) * k - 1e-9));
        hi[i] = static_cast<long>(std::floor(ratToDouble(mx) * k + 1e-9));
    }
    std::vector<QVec> grid;
    std::vector<long> idx(lo);
    while (true) {
        QVec m(n);
        for (size_t i = 0; i < n; ++i) m[i] = ratOf(idx[i], k);
        if (delta.contains(m)) grid.push_back(m);
        size_t pos = 0;
        while (pos < n && ++idx[pos] > hi[pos]) {
            idx[pos] = lo[pos];
            ++pos;
        }
        if (pos == n) break;
    }
    if (grid.empty()) throw std::logic_error("empty sampling grid");

    const double R = 16.0 * (psiMinusSupportBound + 1.0);
    std::vector<std::pair<QVec, Rat>> lifted;
    for (const auto& m : grid) {
        std::vector<double> md(n), u(n, 0.0);
        for (size_t i = 0; i < n; ++i) md[i] = ratToDouble(m[i]);
        auto h = [&](const std::vector<double>& pt) {
            double s = -psi(pt);
            for (size_t i = 0; i < n; ++i) s += md[i] * pt[i];
            return s;
        };
        // h is convex; coordinate-wise golden-section descent
        for (int cycle = 0; cycle < 8; ++cycle) {
            for (size_t i = 0; i < n; ++i) {
                auto h1 = [&](double x) {
                    std::vector<double> pt = u;
                    pt[i] = x;
                    return h(pt);
                };
                u[i] = goldenSection(h1, -R, R, opts.innerTolerance);
            }
        }
        lifted.emplace_back(m, snapToRational(h(u), opts.snapDenominator));
    }

    ApproxResult out;
    out.function = legendreDualBack(upperEnvelope(lifted));
    out.dualErrorBound = R / static_cast<double>(k) +
                         0.5 / static_cast<double>(opts.snapDenominator) + opts.innerTolerance;
    return out;
}

}  // namespace torheight
