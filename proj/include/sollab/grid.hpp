#pragma once

#include <span>
#include <vector>

#include "sollab/jet.hpp"

namespace sollab {

struct Axis {
  double min = -1.0;
  double max = 1.0;
  int count = 5;
};

// Tensor-product grid in lexicographic order (first axis varies slowest).
// Every axis needs count >= 2 and finite bounds.
std::vector<CoordinatePoint> make_grid(std::span<const Axis> axes);

// `count` evenly spaced values on [min, max], endpoints included.
std::vector<double> linspace(double min, double max, int count);

}  // namespace sollab
