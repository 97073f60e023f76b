#pragma once

#include <stdexcept>
#include <string>

namespace wfbm {

// Parameter pair (a, b) outside the positive-definiteness region.
// The message names the violated inequality.
class ParamOutOfRegion : public std::domain_error {
 public:
  explicit ParamOutOfRegion(const std::string& what) : std::domain_error(what) {}
};

// Gram matrix not factorizable even at the maximum allowed jitter.
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

// Local time does not vanish at the edges of the x-grid; the grid is too narrow
// for the requested Stieltjes integral.
class EdgeMassError : public std::runtime_error {
 public:
  explicit EdgeMassError(const std::string& what) : std::runtime_error(what) {}
};

// The weighted L2 norm integral failed to converge (f too large for the
// Gaussian weight on [0, T+1]).
class NormInfinite : public std::runtime_error {
 public:
  explicit NormInfinite(const std::string& what) : std::runtime_error(what) {}
};

// Bad run configuration (unknown key, unparsable value, inconsistent options).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wfbm
