#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "cosserat/types.hpp"

namespace cosserat {

class ExpressionError : public Error {
  public:
    ExpressionError(const std::string& msg, std::size_t pos)
        : Error(msg + " at column " + std::to_string(pos + 1)), column(pos + 1) {}
    std::size_t column;
};

/// Scalar closed-form expression over the parameter coordinates.
/// Grammar: numbers, + - * / ^ (right associative), unary minus,
/// parentheses, sin cos exp sqrt, the constant pi and the variables
/// rho1 rho2 rho3 (also written ρ1 ρ2 ρ3).
class Expression {
  public:
    static Expression parse(const std::string& text);
    static Expression constant(double v);

    double operator()(const Vec3& rho) const;
    const std::string& text() const { return text_; }
    /// True when no variable occurs.
    bool is_constant() const;

    struct Node;

  private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

/// Fixed number of comma-separated scalar expressions, or a table of
/// node values written "table r0; r1; ..." where each row holds `count`
/// constant entries. Rows follow grid node order (axis 0 fastest) and a
/// table is only evaluated at the nodes of the grid it is bound to.
class ExpressionList {
  public:
    /// Throws ExpressionError when the count differs from `count`.
    static ExpressionList parse(const std::string& text, std::size_t count);

    std::size_t size() const { return count_; }
    Vec3 vec3(const Vec3& rho) const;
    Mat3 mat3(const Vec3& rho) const;  // row major
    /// False for tables.
    bool is_constant() const;

    bool is_table() const { return table_ != nullptr; }
    std::size_t rows() const { return table_ ? table_->values.size() : 0; }
    /// Attaches a table to the uniform grid with n nodes per axis on
    /// [lo, hi]^p. Throws std::invalid_argument on a row-count mismatch.
    void bind(int p, int n, double lo, double hi);

  private:
    struct Table {
        std::vector<std::vector<double>> values;
        int p = 0, n = 0;
        double lo = 0.0, hi = 1.0;
    };
    double component(std::size_t i, const Vec3& rho) const;

    std::size_t count_ = 0;
    std::vector<Expression> items_;
    std::shared_ptr<Table> table_;
};

}  // namespace cosserat
