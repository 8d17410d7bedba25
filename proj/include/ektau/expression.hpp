#pragma once

#include <memory>
#include <string>

#include "ektau/jet.hpp"

namespace ektau {

/// A parsed closed-form expression in the variables u and v.
///
/// Grammar: sums, products, quotients, unary minus, '^' with a constant exponent, parentheses,
/// numbers, the constant pi, and the functions sin cos tan exp log sqrt sinh cosh atan.
class Expression {
 public:
  /// Throws ConfigError with the offending position on malformed input.
  static Expression parse(const std::string& text);

  Jet2 operator()(const Jet2& u, const Jet2& v) const;
  double operator()(double u, double v) const;

  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace ektau
