#pragma once

#include <string>

namespace wfbm {

// Whitelisted test functions for the estimator and verification harnesses.
// Each carries its derivative where one exists; the bump is C^2 with compact
// support [c-w, c+w].
struct FunctionSpec {
  enum class Kind {
    Constant,       // f = p0
    Identity,       // f = x
    Square,         // f = x^2
    Cube,           // f = x^3
    Cos,            // f = cos x
    Sin,            // f = sin x
    Bump,           // f = (1-u^2)^3, u = (x-p0)/p1, |u| < 1
    Step,           // f = 1_{(p0, inf)}
    TruncIdentity,  // f = x 1_{|x| <= p0}
  };

  Kind kind = Kind::Identity;
  double p0 = 0.0;
  double p1 = 1.0;

  double operator()(double x) const;
  double deriv(double x) const;  // throws for Step
  bool has_deriv() const { return kind != Kind::Step; }
  std::string name() const;

  // "const:2", "x", "x2", "x3", "cos", "sin", "bump:c:w", "step:x0",
  // "truncid:L"
  static FunctionSpec parse(const std::string& text);

  static FunctionSpec constant(double c) { return {Kind::Constant, c, 0.0}; }
  static FunctionSpec identity() { return {Kind::Identity, 0.0, 0.0}; }
  static FunctionSpec square() { return {Kind::Square, 0.0, 0.0}; }
  static FunctionSpec cube() { return {Kind::Cube, 0.0, 0.0}; }
  static FunctionSpec bump(double c, double w) { return {Kind::Bump, c, w}; }
  static FunctionSpec step(double x0) { return {Kind::Step, x0, 0.0}; }
  static FunctionSpec trunc_identity(double L) {
    return {Kind::TruncIdentity, L, 0.0};
  }
};

}  // namespace wfbm
