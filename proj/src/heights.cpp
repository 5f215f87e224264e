#include "torheight/heights.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <sstream>
#include <thread>

namespace torheight {

void RoofInstance::validate() const {
    if (dimension == 0) throw std::invalid_argument("dimension must be positive");
    if (exponents.empty()) throw std::invalid_argument("at least one exponent required");
    for (const auto& m : exponents)
        if (m.size() != dimension) throw std::invalid_argument("exponent rank mismatch");
    if (!isZero(exponents[0])) throw std::invalid_argument("first exponent must be zero");
    auto idx = latticeIndex(exponents, dimension);
    if (!idx || *idx != 1)
        throw std::invalid_argument("exponents must generate the full lattice");

    size_t r = exponents.size();
    for (const auto& p : places) {
        if (p.weight < 0) throw std::invalid_argument("place weight must be nonnegative");
        switch (p.kind) {
            case Place::Kind::Finite:
                if (p.height < 0) throw std::invalid_argument("finite place height must be nonnegative");
                if (p.orders.size() != r) throw std::invalid_argument("orders length mismatch");
                if (p.orders[0] != 0)
                    throw std::invalid_argument("order of the constant section must be zero");
                break;
            case Place::Kind::PointValue:
                if (p.lambdas.size() != r) throw std::invalid_argument("lambdas length mismatch");
                if (p.lambdas[0] != 0)
                    throw std::invalid_argument("lambda of the constant section must be zero");
                break;
            case Place::Kind::Circle: {
                if (p.length <= 0) throw std::invalid_argument("zero length");
                if (p.lambdaFunctions.size() != r)
                    throw std::invalid_argument("lambda profiles length mismatch");
                for (size_t j = 0; j < r; ++j) {
                    const auto& bps = p.lambdaFunctions[j];
                    if (bps.empty()) throw std::invalid_argument("empty lambda profile");
                    for (size_t i = 0; i < bps.size(); ++i) {
                        if (bps[i].first < 0 || bps[i].first >= p.length)
                            throw std::invalid_argument("breakpoint outside [0, length)");
                        if (i > 0 && bps[i].first <= bps[i - 1].first)
                            throw std::invalid_argument("breakpoints must be strictly increasing");
                        if (j == 0 && bps[i].second != 0)
                            throw std::invalid_argument("lambda of the constant section must be zero");
                    }
                }
                break;
            }
            case Place::Kind::Sampled: {
                if (p.nodes.empty()) throw std::invalid_argument("empty nodes");
                double wsum = 0;
                for (const auto& node : p.nodes) {
                    if (node.subweight < 0)
                        throw std::invalid_argument("subweights must be nonnegative");
                    wsum += node.subweight;
                    if (node.lambdas.size() != r)
                        throw std::invalid_argument("node lambdas length mismatch");
                    if (node.lambdas[0] != 0.0)
                        throw std::invalid_argument("lambda of the constant section must be zero");
                }
                if (std::abs(wsum - 1.0) > 1e-9)
                    throw std::invalid_argument("subweights must sum to one");
                break;
            }
        }
    }
}

Polytope RoofInstance::polytope() const {
    std::vector<QVec> pts;
    for (const auto& m : exponents) pts.push_back(toQVec(m));
    return convexHull(pts);
}

namespace {

ConcaveOnPolytope envelopeOf(const RoofInstance& instance, const QVec& lambdas) {
    std::vector<std::pair<QVec, Rat>> lifted;
    for (size_t j = 0; j < instance.exponents.size(); ++j)
        lifted.emplace_back(toQVec(instance.exponents[j]), lambdas[j]);
    return upperEnvelope(lifted);
}

Rat envelopeIntegral(const RoofInstance& instance, const QVec& lambdas) {
    return integrateCellwise(envelopeOf(instance, lambdas));
}

// value of the periodic piecewise-linear profile at parameter u in [0, length)
Rat profileAt(const std::vector<std::pair<Rat, Rat>>& bps, const Rat& length, Rat u) {
    // reduce into [0, length)
    Rat k = u / length;
    Int fl = k.get_num() / k.get_den();
    if (Rat(fl) > k) fl -= 1;  // floor for negatives
    u -= Rat(fl) * length;
    if (bps.size() == 1) return bps[0].second;
    // segment [lo, hi] containing u, with wraparound
    size_t i = 0;
    while (i < bps.size() && bps[i].first <= u) ++i;
    Rat uLo, vLo, uHi, vHi;
    if (i == 0) {  // before the first breakpoint: wrap the last one back
        uLo = bps.back().first - length;
        vLo = bps.back().second;
        uHi = bps[0].first;
        vHi = bps[0].second;
    } else if (i == bps.size()) {  // after the last: wrap the first forward
        uLo = bps.back().first;
        vLo = bps.back().second;
        uHi = bps[0].first + length;
        vHi = bps[0].second;
    } else {
        uLo = bps[i - 1].first;
        vLo = bps[i - 1].second;
        uHi = bps[i].first;
        vHi = bps[i].second;
    }
    return vLo + (vHi - vLo) * (u - uLo) / (uHi - uLo);
}

QVec circleLambdas(const Place& place, const Rat& u) {
    QVec l;
    for (const auto& bps : place.lambdaFunctions)
        l.push_back(profileAt(bps, place.length, u));
    return l;
}

// combinatorial fingerprint of the regular subdivision: per cell, the
// sorted lift indices lying on its affine graph
std::string envelopeSignature(const ConcaveOnPolytope& g) {
    std::ostringstream os;
    for (size_t c = 0; c < g.cells.size(); ++c) {
        os << "[";
        for (size_t j = 0; j < g.lift.size(); ++j)
            if (g.cells[c].contains(g.lift[j].first) &&
                g.cellForms[c].eval(g.lift[j].first) == g.lift[j].second)
                os << j << ",";
        os << "]";
    }
    return os.str();
}

struct CircleResolver {
    const RoofInstance& instance;
    const Place& place;
    double tolerance;
    static constexpr int kMaxDepth = 40;

    Rat integralAt(const Rat& u) const {
        return envelopeIntegral(instance, circleLambdas(place, u));
    }
    std::string signatureAt(const Rat& u) const {
        return envelopeSignature(envelopeOf(instance, circleLambdas(place, u)));
    }

    double simpson(double a, double fa, double b, double fb, double m, double fm,
                   double whole, double eps, int depth) const {
        double lm = (a + m) / 2, rm = (m + b) / 2;
        double flm = ratToDouble(integralAt(snapToRational(lm, 1000000000000L)));
        double frm = ratToDouble(integralAt(snapToRational(rm, 1000000000000L)));
        double left = (m - a) / 6 * (fa + 4 * flm + fm);
        double right = (b - m) / 6 * (fm + 4 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps)
            return left + right + (left + right - whole) / 15;
        return simpson(a, fa, m, fm, lm, flm, left, eps / 2, depth - 1) +
               simpson(m, fm, b, fb, rm, frm, right, eps / 2, depth - 1);
    }

    // integral of I over [lo, hi]
    PlaceIntegral resolve(const Rat& lo, const Rat& hi, int depth) const {
        PlaceIntegral out;
        if (lo >= hi) {
            out.exact = true;
            return out;
        }
        Rat mid = (lo + hi) / 2;
        Rat iLo = integralAt(lo), iHi = integralAt(hi), iMid = integralAt(mid);
        // affinity certificate: constant combinatorics at three interior
        // samples and exact midpoint-average agreement
        Rat q1 = lo + (hi - lo) / 4, q3 = lo + 3 * (hi - lo) / 4;
        if (2 * iMid == iLo + iHi && signatureAt(mid) == signatureAt(q1) &&
            signatureAt(mid) == signatureAt(q3)) {
            out.exact = true;
            out.exactValue = (iLo + iHi) / 2 * (hi - lo);
            out.value = ratToDouble(out.exactValue);
            return out;
        }
        if (depth < kMaxDepth) {
            PlaceIntegral a = resolve(lo, mid, depth + 1);
            PlaceIntegral b = resolve(mid, hi, depth + 1);
            out.exact = a.exact && b.exact;
            if (out.exact) {
                out.exactValue = a.exactValue + b.exactValue;
                out.value = ratToDouble(out.exactValue);
            } else {
                out.value = (a.exact ? ratToDouble(a.exactValue) : a.value) +
                            (b.exact ? ratToDouble(b.exactValue) : b.value);
            }
            return out;
        }
        out.exact = false;
        double a = ratToDouble(lo), b = ratToDouble(hi);
        double fa = ratToDouble(iLo), fb = ratToDouble(iHi), fm = ratToDouble(iMid);
        double whole = (b - a) / 6 * (fa + 4 * fm + fb);
        out.value = simpson(a, fa, b, fb, (a + b) / 2, fm, whole, tolerance, 24);
        return out;
    }
};

size_t threadCap() {
    if (const char* env = std::getenv("TORHEIGHT_THREADS")) {
        long v = std::atol(env);
        if (v > 0) return static_cast<size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace

std::pair<ConcaveOnPolytope, Rat> roofFromLift(const RoofInstance& instance, const Place& place) {
    instance.validate();
    QVec lambdas;
    if (place.kind == Place::Kind::Finite) {
        for (long o : place.orders) lambdas.push_back(-place.height * Rat(o));
    } else if (place.kind == Place::Kind::PointValue) {
        lambdas = place.lambdas;
    } else {
        throw std::invalid_argument("roof lift needs a finite or point-value place");
    }
    if (lambdas.size() != instance.exponents.size())
        throw std::invalid_argument("lambda length mismatch");
    ConcaveOnPolytope roof = envelopeOf(instance, lambdas);
    Rat integral = integrateCellwise(roof);
    return {std::move(roof), integral};
}

PlaceIntegral circlePlaceIntegral(const RoofInstance& instance, const Place& place,
                                  double tolerance) {
    instance.validate();
    if (place.kind != Place::Kind::Circle)
        throw std::invalid_argument("not a circle place");
    if (place.length <= 0) throw std::invalid_argument("zero length");
    if (tolerance <= 0) throw std::invalid_argument("tolerance must be positive");

    // all breakpoints of all profiles partition the period
    std::vector<Rat> cuts;
    for (const auto& bps : place.lambdaFunctions)
        for (const auto& [u, v] : bps) cuts.push_back(u);
    cuts.push_back(0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(place.length);

    CircleResolver resolver{instance, place, tolerance};
    PlaceIntegral total;
    total.exact = true;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        PlaceIntegral part = resolver.resolve(cuts[i], cuts[i + 1], 0);
        if (total.exact && part.exact) {
            total.exactValue += part.exactValue;
        } else {
            if (total.exact) total.value = ratToDouble(total.exactValue);
            total.exact = false;
            total.value += part.exact ? ratToDouble(part.exactValue) : part.value;
        }
    }
    if (total.exact) {
        total.exactValue /= place.length;
        total.value = ratToDouble(total.exactValue);
    } else {
        total.value /= ratToDouble(place.length);
        total.exactValue = 0;
    }
    return total;
}

double sampledPlaceIntegral(const RoofInstance& instance, const Place& place) {
    instance.validate();
    if (place.kind != Place::Kind::Sampled)
        throw std::invalid_argument("not a sampled place");
    if (place.nodes.empty()) throw std::invalid_argument("empty nodes");
    double total = 0;
    for (const auto& node : place.nodes) {
        QVec lambdas;
        for (double x : node.lambdas) lambdas.push_back(snapToRational(x, 1000000000000L));
        total += node.subweight * ratToDouble(envelopeIntegral(instance, lambdas));
    }
    return total;
}

HeightReport globalHeight(const RoofInstance& instance, double tolerance) {
    instance.validate();
    HeightReport rep;
    rep.polytope = instance.polytope();
    rep.factor = 1;
    for (size_t i = 2; i <= instance.dimension + 1; ++i) rep.factor *= Rat(i);

    std::vector<PlaceIntegral> integrals(instance.places.size());
    auto evalPlace = [&](size_t i) {
        const Place& p = instance.places[i];
        switch (p.kind) {
            case Place::Kind::Finite:
            case Place::Kind::PointValue: {
                Rat v = roofFromLift(instance, p).second;
                integrals[i] = {v, ratToDouble(v), true};
                break;
            }
            case Place::Kind::Circle:
                integrals[i] = circlePlaceIntegral(instance, p, tolerance);
                break;
            case Place::Kind::Sampled:
                integrals[i] = {0, sampledPlaceIntegral(instance, p), false};
                break;
        }
    };

    size_t cap = std::min(threadCap(), std::max<size_t>(instance.places.size(), 1));
    if (cap <= 1 || instance.places.size() <= 1) {
        for (size_t i = 0; i < instance.places.size(); ++i) evalPlace(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> workers;
        for (size_t t = 0; t < cap; ++t)
            workers.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < instance.places.size();
                     i = next.fetch_add(1))
                    evalPlace(i);
            });
        for (auto& w : workers) w.join();
    }

    // deterministic aggregation in instance order
    bool allExact = true;
    Rat exactSum = 0;
    double floatSum = 0;
    for (size_t i = 0; i < instance.places.size(); ++i) {
        const Place& p = instance.places[i];
        const PlaceIntegral& v = integrals[i];
        rep.perPlace.push_back({p.id, v.exactValue, v.value, v.exact});
        if (v.exact) {
            exactSum += p.weight * v.exactValue;
            floatSum += ratToDouble(p.weight) * ratToDouble(v.exactValue);
        } else {
            allExact = false;
            floatSum += ratToDouble(p.weight) * v.value;
        }
    }
    rep.total = ratToDouble(rep.factor) * floatSum;
    if (allExact) {
        rep.exactTotal = rep.factor * exactSum;
        rep.total = ratToDouble(*rep.exactTotal);
    }
    return rep;
}

ProductFormulaResult productFormulaCheck(const std::vector<PlaceValue>& values,
                                         const std::vector<Rat>& weights) {
    if (values.size() != weights.size())
        throw std::invalid_argument("one weight per value required");
    ProductFormulaResult out;
    bool allExact = true;
    Rat exactSum = 0;
    double floatSum = 0;
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i].exact) {
            exactSum += weights[i] * values[i].rational;
            floatSum += ratToDouble(weights[i]) * ratToDouble(values[i].rational);
        } else {
            allExact = false;
            floatSum += ratToDouble(weights[i]) * values[i].approx;
        }
    }
    if (allExact) {
        out.exactResidual = exactSum;
        out.residual = ratToDouble(exactSum);
        out.compatible = (exactSum == 0);
    } else {
        out.residual = floatSum;
        out.compatible = std::abs(floatSum) <= 1e-9;
    }
    return out;
}

}  // namespace torheight
