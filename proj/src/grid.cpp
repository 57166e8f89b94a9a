#include "sollab/grid.hpp"

#include <cmath>

#include "sollab/errors.hpp"

namespace sollab {

std::vector<double> linspace(double min, double max, int count) {
  if (count < 2) throw PreconditionError("grid axes need at least two points");
  if (!std::isfinite(min) || !std::isfinite(max)) {
    throw PreconditionError("grid bounds must be finite");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // Endpoints exact; interior points by the symmetric formula.
    const double s = static_cast<double>(i) / static_cast<double>(count - 1);
    out[static_cast<std::size_t>(i)] = (1.0 - s) * min + s * max;
  }
  return out;
}

std::vector<CoordinatePoint> make_grid(std::span<const Axis> axes) {
  if (axes.empty()) throw PreconditionError("grid needs at least one axis");
  std::vector<std::vector<double>> values;
  values.reserve(axes.size());
  std::size_t total = 1;
  for (const Axis& a : axes) {
    values.push_back(linspace(a.min, a.max, a.count));
    total *= values.back().size();
  }
  std::vector<CoordinatePoint> points;
  points.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<double> coords(axes.size());
    for (std::size_t d = 0; d < axes.size(); ++d) coords[d] = values[d][idx[d]];
    points.emplace_back(std::move(coords));
    for (std::size_t d = axes.size(); d-- > 0;) {
      if (++idx[d] < values[d].size()) break;
      idx[d] = 0;
    }
  }
  return points;
}

}  // namespace sollab
