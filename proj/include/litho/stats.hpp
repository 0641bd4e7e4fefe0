#pragma once

#include <vector>

namespace litho {

// Spearman rank correlation with average ranks for ties (Pearson correlation
// of the rank vectors).  Returns 0 when either side has no rank variance.
// Throws Error("stats", "dimension-mismatch") when sizes differ or are < 2.
double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace litho
