#pragma once

#include <random>

#include "torheight/heights.hpp"

namespace torheight {

struct RandomConcaveOptions {
    size_t minPieces = 2;
    size_t maxPieces = 12;
    long slopeRange = 4;      // slopes in [-range, range]
    bool latticeSlopes = true;
    long constantNumRange = 8;  // numerators in [-range, range]
    long constantMaxDen = 4;
    bool requireFullDimStability = false;
};

// Seeded random canonical concave min-form; retries until the canonical
// form has at least minPieces pieces (and a full-dimensional stability
// set when requested).
ConcavePA randomConcave(std::mt19937_64& rng, size_t dim,
                        const RandomConcaveOptions& opts = {});

// Seeded random fibration instance with rational Finite/PointValue/Circle
// places (no Sampled places: fully exact).
RoofInstance randomRationalInstance(std::mt19937_64& rng, size_t dim, size_t placeCount);

}  // namespace torheight
