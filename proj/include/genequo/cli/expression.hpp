#pragma once

// Small arithmetic interpreter for user functions in problem specs.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Functions: abs, sin, cos, exp. Constant: pi. A bare prefix such as x or t
// names x1 or t1 when the list has no x2 or t2.

#include <memory>
#include <string>
#include <vector>

#include "genequo/sampling.hpp"

namespace genequo::cli {

class Expression {
 public:
  /// `variables` names the slots of the argument vector passed to eval. `path`
  /// prefixes error messages.
  static Expression parse(const std::string& text, const std::vector<std::string>& variables,
                          const std::string& path = {});

  double eval(const Vector& values) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// x1..xn.
std::vector<std::string> domain_variables(int n);

}  // namespace genequo::cli
