#include "wfbm/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace wfbm {

SimGrid build_grid(double horizon, double step, double pad) {
  if (!(horizon > 0.0) || !(step > 0.0))
    throw std::invalid_argument("build_grid requires horizon > 0 and step > 0");
  if (pad < 0.0) throw std::invalid_argument("build_grid requires pad >= 0");
  if (step > horizon)
    throw std::invalid_argument("build_grid: step exceeds horizon");
  const auto count = static_cast<std::size_t>(
      std::llround((horizon + pad) / step));
  SimGrid g;
  g.step = step;
  g.times.resize(count);
  for (std::size_t j = 0; j < count; ++j)
    g.times[j] = static_cast<double>(j + 1) * step;
  g.horizon = g.times.back();
  return g;
}

}  // namespace wfbm
