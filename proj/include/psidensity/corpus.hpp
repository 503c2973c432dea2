#pragma once

#include <vector>

#include "psidensity/integer_set.hpp"

namespace psidensity {

// The 51-set comparison corpus: arithmetic progressions (a in 2..7, b in
// {0,1}), the pow2-alt block set, 24 balanced randomized block sets, and 14
// progressions perturbed by 100 element flips drawn from [1e4, 1e5].
// Perturbations avoid small elements so the slow (logarithmic) numerators
// are not permanently displaced at reachable truncations.
std::vector<IntegerSet> comparison_corpus();

}  // namespace psidensity
