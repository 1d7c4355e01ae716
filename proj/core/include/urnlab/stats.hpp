#pragma once

#include <vector>

#include "urnlab/matrix.hpp"

namespace urnlab {

/// Median of a copy of the values (empty input -> NaN).
double median(std::vector<double> values);

/// Least-squares slope of y against x; requires at least two points.
double slope(const std::vector<double>& x, const std::vector<double>& y);

/// Angle in radians between two nonzero vectors.
double angle_between(const Vec& a, const Vec& b);

}  // namespace urnlab
