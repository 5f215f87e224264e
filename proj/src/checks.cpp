#include "torheight/checks.hpp"

#include <random>
#include <sstream>

#include "torheight/instances.hpp"
#include "torheight/json_io.hpp"

namespace torheight {

namespace {

CheckOutcome checkInvolution(std::mt19937_64& rng) {
    CheckOutcome out{"duality-involution", true, ""};
    int total = 0;
    for (size_t dim = 1; dim <= 3; ++dim) {
        for (int i = 0; i < 25; ++i) {
            ConcavePA f = randomConcave(rng, dim);
            ++total;
            if (!(legendreDualBack(legendreDual(f)) == f)) {
                out.passed = false;
                out.detail = "dual-of-dual mismatch in dimension " + std::to_string(dim);
                return out;
            }
        }
    }
    out.detail = std::to_string(total) + " instances, dual-of-dual exact";
    return out;
}

CheckOutcome checkMass(std::mt19937_64& rng) {
    CheckOutcome out{"measure-mass", true, ""};
    int total = 0;
    for (size_t dim = 1; dim <= 3; ++dim) {
        for (int i = 0; i < 25; ++i) {
            ConcavePA f = randomConcave(rng, dim);
            ++total;
            if (maMeasure(f).totalMass() != volume(stabilitySet(f), VolumeMode::Ambient)) {
                out.passed = false;
                out.detail = "mass mismatch in dimension " + std::to_string(dim);
                return out;
            }
        }
    }
    out.detail = std::to_string(total) + " instances, mass = vol exactly";
    return out;
}

CheckOutcome checkBoundaryIdentity(std::mt19937_64& rng) {
    CheckOutcome out{"boundary-identity", true, ""};
    int total = 0;
    for (size_t dim = 1; dim <= 3; ++dim) {
        int count = dim == 3 ? 8 : 20;
        for (int i = 0; i < count; ++i) {
            RandomConcaveOptions opts;
            opts.requireFullDimStability = true;
            ConcavePA f = randomConcave(rng, dim, opts);
            ++total;
            IntegralIdentity id = dualIntegralIdentity(f);
            if (id.lhs != id.rhs) {
                out.passed = false;
                out.detail = "identity mismatch in dimension " + std::to_string(dim);
                return out;
            }
        }
    }
    out.detail = std::to_string(total) + " instances, lhs = rhs exactly";
    return out;
}

CheckOutcome checkScaling(std::mt19937_64& rng) {
    CheckOutcome out{"height-scaling", true, ""};
    int total = 0;
    for (size_t dim = 1; dim <= 2; ++dim) {
        for (int i = 0; i < 20; ++i) {
            RandomConcaveOptions opts;
            opts.requireFullDimStability = true;
            ConcavePA psi = randomConcave(rng, dim, opts);
            SupportFunctionData bigPsi =
                supportFunctionFromMinForm(recessionFunction(psi).homogeneous);
            ++total;
            if (toricLocalHeight(bigPsi, bigPsi.minForm()).value != 0) {
                out.passed = false;
                out.detail = "canonical metric has nonzero height";
                return out;
            }
            Rat c = ratOf(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3));
            std::vector<AffineForm> shifted;
            for (const auto& p : psi.pieces) shifted.push_back({p.slope, p.constant + c});
            Rat fact = 1;
            for (size_t k = 2; k <= dim + 1; ++k) fact *= Rat(k);
            Rat base = toricLocalHeight(bigPsi, psi).value;
            Rat bumped = toricLocalHeight(bigPsi, canonicalMinForm(shifted, dim)).value;
            if (bumped - base != -fact * c * volume(bigPsi.stabilityPolytope(), VolumeMode::Ambient)) {
                out.passed = false;
                out.detail = "scaling law violated in dimension " + std::to_string(dim);
                return out;
            }
        }
    }
    out.detail = std::to_string(total) + " instances, nullity and scaling exact";
    return out;
}

// per-place envelope integral with every lambda shifted by c (computed
// from the definition, bypassing the lambda_0 = 0 normalization)
Rat shiftedPlaceIntegral(const RoofInstance& inst, const Place& p, const Rat& c) {
    QVec lambdas;
    if (p.kind == Place::Kind::Finite) {
        for (long o : p.orders) lambdas.push_back(-p.height * Rat(o) + c);
    } else {
        for (const auto& l : p.lambdas) lambdas.push_back(l + c);
    }
    std::vector<std::pair<QVec, Rat>> lifted;
    for (size_t j = 0; j < inst.exponents.size(); ++j)
        lifted.emplace_back(toQVec(inst.exponents[j]), lambdas[j]);
    return integrateCellwise(upperEnvelope(lifted));
}

CheckOutcome checkProductFormulaInvariance(std::mt19937_64& rng) {
    CheckOutcome out{"product-formula-invariance", true, ""};
    int total = 0;
    for (int i = 0; i < 20; ++i) {
        size_t dim = 1 + rng() % 2;
        RoofInstance inst = randomRationalInstance(rng, dim, 2 + rng() % 3);
        // keep only exactly shiftable kinds for the by-definition oracle
        for (auto& p : inst.places)
            if (p.kind == Place::Kind::Circle) {
                p.kind = Place::Kind::PointValue;
                p.lambdas.assign(inst.exponents.size(), Rat(0));
                p.lambdaFunctions.clear();
            }
        ++total;
        HeightReport rep = globalHeight(inst);
        // per-place shifts with zero weighted sum
        std::vector<Rat> shifts;
        Rat weighted = 0;
        for (size_t k = 0; k + 1 < inst.places.size(); ++k) {
            Rat c = ratOf(static_cast<long>(rng() % 9) - 4, 2);
            shifts.push_back(c);
            weighted += inst.places[k].weight * c;
        }
        shifts.push_back(-weighted / inst.places.back().weight);
        Rat shiftedTotal = 0;
        for (size_t k = 0; k < inst.places.size(); ++k)
            shiftedTotal +=
                inst.places[k].weight * shiftedPlaceIntegral(inst, inst.places[k], shifts[k]);
        shiftedTotal *= rep.factor;
        if (!rep.exactTotal || shiftedTotal != *rep.exactTotal) {
            out.passed = false;
            out.detail = "height changed under a zero-sum section shift";
            return out;
        }
    }
    out.detail = std::to_string(total) + " instances, invariant exactly";
    return out;
}

}  // namespace

std::vector<CheckOutcome> runCheckSuite(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckOutcome> outcomes;
    outcomes.push_back(checkInvolution(rng));
    outcomes.push_back(checkMass(rng));
    outcomes.push_back(checkBoundaryIdentity(rng));
    outcomes.push_back(checkScaling(rng));
    outcomes.push_back(checkProductFormulaInvariance(rng));
    return outcomes;
}

bool allPassed(const std::vector<CheckOutcome>& outcomes) {
    for (const auto& o : outcomes)
        if (!o.passed) return false;
    return true;
}

}  // namespace torheight
