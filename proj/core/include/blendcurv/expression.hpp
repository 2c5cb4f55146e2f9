#pragma once

#include "blendcurv/chart.hpp"

namespace blendcurv {

/// Parses the small arithmetic grammar used for user-defined scalar fields
/// and metric entries:
///
///   expr    := term (('+'|'-') term)*
///   term    := unary (('*'|'/') unary)*
///   unary   := ('+'|'-') unary | primary
///   primary := number | 'pi' | coordinate | func '(' expr ')' | '(' expr ')'
///
/// with coordinates x1..x16 and functions sin, cos, exp. Throws
/// std::invalid_argument with the offending position on parse errors.
ScalarField parse_expression(const std::string& text, int dim);

/// Parses and evaluates once (convenience for constants in configs).
double evaluate_expression(const std::string& text, const Eigen::VectorXd& x);

}  // namespace blendcurv
