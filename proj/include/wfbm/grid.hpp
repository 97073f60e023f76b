#pragma once

#include <vector>

namespace wfbm {

// Strictly increasing uniform time grid on (0, horizon + pad]; t = 0 is
// implicit (B_0 = 0) and never stored.
struct SimGrid {
  std::vector<double> times;
  double step = 0.0;
  double horizon = 0.0;  // largest grid time

  std::size_t size() const { return times.size(); }
};

// Uniform grid with spacing `step`; `pad` extends past `horizon` to make room
// for lookahead reads B_{s+eps} up to s = t + eps.
SimGrid build_grid(double horizon, double step, double pad = 0.0);

}  // namespace wfbm
