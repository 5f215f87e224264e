#include "torheight/instances.hpp"

namespace torheight {

ConcavePA randomConcave(std::mt19937_64& rng, size_t dim, const RandomConcaveOptions& opts) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        size_t count =
            opts.minPieces + rng() % (opts.maxPieces - opts.minPieces + 1);
        std::vector<AffineForm> pieces;
        for (size_t i = 0; i < count; ++i) {
            QVec slope(dim);
            for (auto& s : slope) {
                long num = static_cast<long>(rng() % (2 * opts.slopeRange + 1)) - opts.slopeRange;
                long den = opts.latticeSlopes ? 1 : 1 + static_cast<long>(rng() % 2);
                s = ratOf(num, den);
            }
            long p = static_cast<long>(rng() % (2 * opts.constantNumRange + 1)) -
                     opts.constantNumRange;
            long q = 1 + static_cast<long>(rng() % opts.constantMaxDen);
            pieces.push_back({slope, ratOf(p, q)});
        }
        ConcavePA f = canonicalMinForm(pieces, dim);
        if (f.pieces.size() < opts.minPieces) continue;
        if (opts.requireFullDimStability && stabilitySet(f).dim != dim) continue;
        return f;
    }
    throw std::logic_error("random concave generation failed to converge");
}

RoofInstance randomRationalInstance(std::mt19937_64& rng, size_t dim, size_t placeCount) {
    RoofInstance inst;
    inst.dimension = dim;
    inst.exponents.push_back(ZVec(dim, Int(0)));
    for (size_t i = 0; i < dim; ++i) {
        ZVec e(dim, Int(0));
        e[i] = 1;
        inst.exponents.push_back(e);
    }
    size_t extras = rng() % 3;
    for (size_t i = 0; i < extras; ++i) {
        ZVec m(dim);
        for (auto& x : m) x = static_cast<long>(rng() % 5) - 2;
        inst.exponents.push_back(m);
    }
    size_t r = inst.exponents.size();

    auto randRat = [&](long numRange, long maxDen) {
        return ratOf(static_cast<long>(rng() % (2 * numRange + 1)) - numRange,
                     1 + static_cast<long>(rng() % maxDen));
    };

    for (size_t i = 0; i < placeCount; ++i) {
        Place p;
        p.id = "w" + std::to_string(i);
        p.weight = ratOf(1 + static_cast<long>(rng() % 4), 1 + static_cast<long>(rng() % 3));
        switch (rng() % 3) {
            case 0: {
                p.kind = Place::Kind::Finite;
                p.height = ratOf(static_cast<long>(rng() % 5), 2);
                p.orders.push_back(0);
                for (size_t j = 1; j < r; ++j)
                    p.orders.push_back(static_cast<long>(rng() % 7) - 3);
                break;
            }
            case 1: {
                p.kind = Place::Kind::PointValue;
                p.lambdas.push_back(Rat(0));
                for (size_t j = 1; j < r; ++j) p.lambdas.push_back(randRat(6, 3));
                break;
            }
            case 2: {
                p.kind = Place::Kind::Circle;
                p.length = ratOf(1 + static_cast<long>(rng() % 3));
                p.lambdaFunctions.push_back({{Rat(0), Rat(0)}});
                for (size_t j = 1; j < r; ++j) {
                    std::vector<std::pair<Rat, Rat>> bps;
                    size_t k = 1 + rng() % 3;
                    for (size_t b = 0; b < k; ++b)
                        bps.emplace_back(Rat(Int(b)) * p.length / Rat(Int(k)), randRat(4, 2));
                    p.lambdaFunctions.push_back(bps);
                }
                break;
            }
        }
        inst.places.push_back(std::move(p));
    }
    inst.validate();
    return inst;
}

}  // namespace torheight
