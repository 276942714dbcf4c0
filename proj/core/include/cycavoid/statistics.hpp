#pragma once

#include "cycavoid/permutation.hpp"
#include "cycavoid/weight_scheme.hpp"

namespace cycavoid {

/// wt1(first m entries) * prod of wt over the n - m linear windows
/// * wt2(last m entries). Requires n >= m.
double linear_weight(const Permutation& pi, const WeightScheme& scheme);

/// Product of wt over all n cyclic windows. Requires n >= m + 1.
double cyclic_weight(const Permutation& pi, const WeightScheme& scheme);

enum class Reading { Linear, Cyclic };

/// Number of positions i with pi_i > pi_{i+1} > pi_{i+2}.
int double_descents(const Permutation& pi, Reading reading);
/// Number of positions i with pi_i < pi_{i+1} < pi_{i+2}.
int double_ascents(const Permutation& pi, Reading reading);

}  // namespace cycavoid
