#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace torheight {

struct CheckOutcome {
    std::string name;
    bool passed = false;
    std::string detail;  // counts or first failure description
};

// Randomized invariant suite shared by the CLI `check` command and the
// acceptance tests: duality involution, measure mass conservation, the
// boundary integral identity, the local-height scaling law, and
// product-formula invariance of the global height.
std::vector<CheckOutcome> runCheckSuite(uint64_t seed);

bool allPassed(const std::vector<CheckOutcome>& outcomes);

}  // namespace torheight
