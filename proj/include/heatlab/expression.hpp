#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace heatlab {

/// Syntax error with 1-based line/column of the offending token.
struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ")"),
          line(line_), column(column_) {}
};

/// Parses a scalar expression in the variable `u`.
///
/// Grammar: decimal literals; binary + - * /; unary -; parentheses;
/// pow(e,c), min(e,e), max(e,e), abs(e), ln(e), exp(e), sign(e);
/// odd_extend(e), which evaluates e at |u| and multiplies by sign(u).
std::function<double(double)> parse_expression(const std::string& text);

}  // namespace heatlab
