#include "cosserat/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace cosserat {

struct Expression::Node {
    enum class Op { number, variable, add, sub, mul, div, pow, neg, sin, cos, exp, sqrt };
    Op op = Op::number;
    double value = 0.0;
    int variable = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
  public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) throw ExpressionError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
        return e;
    }

  private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make(Node::Op::add, lhs, term());
            } else if (accept('-')) {
                lhs = make(Node::Op::sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Node::Op::mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make(Node::Op::div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Node::Op::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Node::Op::pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) throw ExpressionError("unexpected end of expression", pos_);
        const std::size_t start = pos_;
        const char c = s_[pos_];
        if (accept('(')) {
            NodePtr e = expr();
            if (!accept(')')) throw ExpressionError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) throw ExpressionError("malformed number", start);
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Node>();
            n->value = v;
            return n;
        }
        // UTF-8 rho (0xCF 0x81)
        if (static_cast<unsigned char>(c) == 0xCF && pos_ + 1 < s_.size() &&
            static_cast<unsigned char>(s_[pos_ + 1]) == 0x81) {
            pos_ += 2;
            return variable(start);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) name += s_[pos_++];
            if (name == "rho") return variable(start);
            if (name == "pi") {
                auto n = std::make_shared<Node>();
                n->value = M_PI;
                return n;
            }
            Node::Op op;
            if (name == "sin") {
                op = Node::Op::sin;
            } else if (name == "cos") {
                op = Node::Op::cos;
            } else if (name == "exp") {
                op = Node::Op::exp;
            } else if (name == "sqrt") {
                op = Node::Op::sqrt;
            } else {
                throw ExpressionError("unknown name '" + name + "'", start);
            }
            if (!accept('(')) throw ExpressionError("expected '(' after " + name, pos_);
            NodePtr arg = expr();
            if (!accept(')')) throw ExpressionError("expected ')'", pos_);
            return make(op, arg);
        }
        throw ExpressionError("unexpected '" + std::string(1, c) + "'", start);
    }

    NodePtr variable(std::size_t start) {
        if (pos_ >= s_.size() || s_[pos_] < '1' || s_[pos_] > '3') {
            throw ExpressionError("expected variable index 1, 2 or 3", start);
        }
        auto n = std::make_shared<Node>();
        n->op = Node::Op::variable;
        n->variable = s_[pos_++] - '1';
        return n;
    }
};

double eval(const Node& n, const Vec3& r) {
    switch (n.op) {
        case Node::Op::number: return n.value;
        case Node::Op::variable: return r(n.variable);
        case Node::Op::add: return eval(*n.lhs, r) + eval(*n.rhs, r);
        case Node::Op::sub: return eval(*n.lhs, r) - eval(*n.rhs, r);
        case Node::Op::mul: return eval(*n.lhs, r) * eval(*n.rhs, r);
        case Node::Op::div: return eval(*n.lhs, r) / eval(*n.rhs, r);
        case Node::Op::pow: return std::pow(eval(*n.lhs, r), eval(*n.rhs, r));
        case Node::Op::neg: return -eval(*n.lhs, r);
        case Node::Op::sin: return std::sin(eval(*n.lhs, r));
        case Node::Op::cos: return std::cos(eval(*n.lhs, r));
        case Node::Op::exp: return std::exp(eval(*n.lhs, r));
        case Node::Op::sqrt: return std::sqrt(eval(*n.lhs, r));
    }
    return 0.0;
}

bool has_variable(const Node& n) {
    if (n.op == Node::Op::variable) return true;
    return (n.lhs && has_variable(*n.lhs)) || (n.rhs && has_variable(*n.rhs));
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(e.text_).parse();
    return e;
}

Expression Expression::constant(double v) {
    Expression e;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    e.text_ = buf;
    auto n = std::make_shared<Node>();
    n->value = v;
    e.root_ = n;
    return e;
}

double Expression::operator()(const Vec3& rho) const { return eval(*root_, rho); }

bool Expression::is_constant() const { return !has_variable(*root_); }

ExpressionList ExpressionList::parse(const std::string& text, std::size_t count) {
    const std::size_t first = text.find_first_not_of(" \t");
    if (first != std::string::npos && text.compare(first, 5, "table") == 0 &&
        (text.size() == first + 5 || text[first + 5] == ' ' || text[first + 5] == '\t')) {
        ExpressionList out;
        out.count_ = count;
        out.table_ = std::make_shared<Table>();
        std::size_t start = first + 5;
        while (start <= text.size()) {
            const std::size_t end = std::min(text.find(';', start), text.size());
            ExpressionList row;
            try {
                row = parse(text.substr(start, end - start), count);
            } catch (const ExpressionError& e) {
                throw ExpressionError("table row " + std::to_string(out.table_->values.size() + 1) + ": " +
                                          std::string(e.what()).substr(0, std::string(e.what()).rfind(" at column")),
                                      start + e.column - 1);
            }
            if (row.is_table() || !row.is_constant()) {
                throw ExpressionError("table row " + std::to_string(out.table_->values.size() + 1) +
                                          " must hold constants",
                                      start);
            }
            std::vector<double> v;
            for (const auto& e : row.items_) v.push_back(e(Vec3::Zero()));
            out.table_->values.push_back(std::move(v));
            start = end + 1;
        }
        return out;
    }

    ExpressionList out;
    out.count_ = count;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i < text.size() && text[i] == '(') ++depth;
        if (i < text.size() && text[i] == ')') --depth;
        if (i == text.size() || (text[i] == ',' && depth == 0)) {
            try {
                out.items_.push_back(Expression::parse(text.substr(start, i - start)));
            } catch (const ExpressionError& e) {
                throw ExpressionError(std::string(e.what()).substr(0, std::string(e.what()).rfind(" at column")),
                                      start + e.column - 1);
            }
            start = i + 1;
        }
    }
    if (out.items_.size() != count) {
        throw ExpressionError("expected " + std::to_string(count) + " comma-separated components, got " +
                                  std::to_string(out.items_.size()),
                              0);
    }
    return out;
}

void ExpressionList::bind(int p, int n, double lo, double hi) {
    if (!table_) return;
    std::size_t expected = 1;
    for (int a = 0; a < p; ++a) expected *= static_cast<std::size_t>(n);
    if (table_->values.size() != expected) {
        throw std::invalid_argument("table has " + std::to_string(table_->values.size()) + " rows, the grid has " +
                                    std::to_string(expected) + " nodes");
    }
    auto t = std::make_shared<Table>(*table_);
    t->p = p;
    t->n = n;
    t->lo = lo;
    t->hi = hi;
    table_ = std::move(t);
}

double ExpressionList::component(std::size_t i, const Vec3& rho) const {
    if (!table_) return items_.at(i)(rho);
    const Table& t = *table_;
    if (t.n == 0) throw std::logic_error("table evaluated before it was bound to a grid");
    const double h = (t.hi - t.lo) / (t.n - 1);
    std::size_t node = 0, stride = 1;
    for (int a = 0; a < t.p; ++a) {
        const double k = std::round((rho(a) - t.lo) / h);
        if (k < 0 || k >= t.n || std::abs(rho(a) - (t.lo + k * h)) > 1e-9 * h) {
            throw std::invalid_argument("tabulated field evaluated off its grid");
        }
        node += static_cast<std::size_t>(k) * stride;
        stride *= static_cast<std::size_t>(t.n);
    }
    return t.values[node].at(i);
}

Vec3 ExpressionList::vec3(const Vec3& rho) const { return Vec3(component(0, rho), component(1, rho), component(2, rho)); }

Mat3 ExpressionList::mat3(const Vec3& rho) const {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = component(3 * i + j, rho);
    return m;
}

bool ExpressionList::is_constant() const {
    if (table_) return false;
    for (const auto& e : items_)
        if (!e.is_constant()) return false;
    return true;
}

}  // namespace cosserat
