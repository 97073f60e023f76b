#include "wfbm/functions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wfbm {

double FunctionSpec::operator()(double x) const {
  switch (kind) {
    case Kind::Constant: return p0;
    case Kind::Identity: return x;
    case Kind::Square: return x * x;
    case Kind::Cube: return x * x * x;
    case Kind::Cos: return std::cos(x);
    case Kind::Sin: return std::sin(x);
    case Kind::Bump: {
      const double u = (x - p0) / p1;
      if (std::abs(u) >= 1.0) return 0.0;
      const double q = 1.0 - u * u;
      return q * q * q;
    }
    case Kind::Step: return x > p0 ? 1.0 : 0.0;
    case Kind::TruncIdentity: return std::abs(x) <= p0 ? x : 0.0;
  }
  return 0.0;
}

double FunctionSpec::deriv(double x) const {
  switch (kind) {
    case Kind::Constant: return 0.0;
    case Kind::Identity: return 1.0;
    case Kind::Square: return 2.0 * x;
    case Kind::Cube: return 3.0 * x * x;
    case Kind::Cos: return -std::sin(x);
    case Kind::Sin: return std::cos(x);
    case Kind::Bump: {
      const double u = (x - p0) / p1;
      if (std::abs(u) >= 1.0) return 0.0;
      const double q = 1.0 - u * u;
      return -6.0 * u * q * q / p1;
    }
    case Kind::Step:
      throw std::logic_error("step function has no pointwise derivative");
    case Kind::TruncIdentity: return std::abs(x) < p0 ? 1.0 : 0.0;
  }
  return 0.0;
}

std::string FunctionSpec::name() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Constant: os << "const:" << p0; break;
    case Kind::Identity: os << "x"; break;
    case Kind::Square: os << "x2"; break;
    case Kind::Cube: os << "x3"; break;
    case Kind::Cos: os << "cos"; break;
    case Kind::Sin: os << "sin"; break;
    case Kind::Bump: os << "bump:" << p0 << ":" << p1; break;
    case Kind::Step: os << "step:" << p0; break;
    case Kind::TruncIdentity: os << "truncid:" << p0; break;
  }
  return os.str();
}

FunctionSpec FunctionSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  const std::string& head = parts[0];
  auto num = [&](std::size_t i, double fallback) {
    if (parts.size() <= i || parts[i].empty()) return fallback;
    return std::stod(parts[i]);
  };
  if (head == "const") return constant(num(1, 1.0));
  if (head == "x" || head == "id") return identity();
  if (head == "x2" || head == "square") return square();
  if (head == "x3" || head == "cube") return cube();
  if (head == "cos") return {Kind::Cos, 0.0, 0.0};
  if (head == "sin") return {Kind::Sin, 0.0, 0.0};
  if (head == "bump") return bump(num(1, 0.0), num(2, 1.0));
  if (head == "step") return step(num(1, 0.0));
  if (head == "truncid") return trunc_identity(num(1, 3.0));
  throw std::invalid_argument("unknown function spec: " + text);
}

}  // namespace wfbm
