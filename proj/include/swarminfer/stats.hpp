#pragma once

#include <span>
#include <vector>

namespace swarminfer {

double mean(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);  // 0 for n < 2

// Fractional ranks with ties averaged.
std::vector<double> ranks(std::span<const double> xs);

// Spearman rank correlation; NaN when either side is constant or sizes
// mismatch / are below 2.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace swarminfer
