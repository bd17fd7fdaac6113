#include "pcx/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pcx/errors.hpp"

namespace pcx {

namespace detail {

enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Sin, Sqrt };

struct ExprNode {
    Op op;
    double value = 0.0; // Const
    int var = 0;        // Var, 1-based
    int exponent = 0;   // Pow
    std::shared_ptr<const ExprNode> a;
    std::shared_ptr<const ExprNode> b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

// Flat postfix program; instruction k writes slot k, operands are slot ids.
struct Instr {
    Op op;
    std::int32_t a = -1;
    std::int32_t b = -1;
    double value = 0.0;
    std::int32_t var = 0;
    std::int32_t exponent = 0;
};

struct Tape {
    std::vector<Instr> code;
};

namespace {

std::int32_t compile(const ExprNode& n, Tape& t) {
    Instr ins;
    ins.op = n.op;
    switch (n.op) {
    case Op::Const: ins.value = n.value; break;
    case Op::Var: ins.var = n.var; break;
    case Op::Pow:
        ins.a = compile(*n.a, t);
        ins.exponent = n.exponent;
        break;
    case Op::Neg:
    case Op::Exp:
    case Op::Sin:
    case Op::Sqrt: ins.a = compile(*n.a, t); break;
    default:
        ins.a = compile(*n.a, t);
        ins.b = compile(*n.b, t);
        break;
    }
    t.code.push_back(ins);
    return static_cast<std::int32_t>(t.code.size() - 1);
}

double ipow(double x, int n) {
    double r = 1.0;
    double base = x;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

thread_local std::vector<double> g_slots;
thread_local std::vector<Interval> g_islots;

} // namespace
} // namespace detail

using detail::ExprNode;
using detail::NodePtr;
using detail::Op;

Expr::Expr(NodePtr node, int m) : node_(std::move(node)), m_(m) {
    auto tape = std::make_shared<detail::Tape>();
    detail::compile(*node_, *tape);
    tape_ = std::move(tape);
}

Expr Expr::constant(double v, int m) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Const;
    n->value = v;
    return Expr(std::move(n), m);
}

Expr Expr::variable(int index, int m) {
    if (index < 1 || index > m)
        throw PreconditionError("variable index out of range");
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Var;
    n->var = index;
    return Expr(std::move(n), m);
}

double Expr::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != m_)
        throw PreconditionError("eval: point dimension mismatch");
    auto& slots = detail::g_slots;
    const auto& code = tape_->code;
    slots.resize(code.size());
    for (std::size_t k = 0; k < code.size(); ++k) {
        const auto& ins = code[k];
        double r;
        switch (ins.op) {
        case Op::Const: r = ins.value; break;
        case Op::Var: r = x[static_cast<std::size_t>(ins.var) - 1]; break;
        case Op::Add: r = slots[ins.a] + slots[ins.b]; break;
        case Op::Sub: r = slots[ins.a] - slots[ins.b]; break;
        case Op::Mul: r = slots[ins.a] * slots[ins.b]; break;
        case Op::Div:
            if (slots[ins.b] == 0.0) throw DomainError("division by zero");
            r = slots[ins.a] / slots[ins.b];
            break;
        case Op::Pow: r = detail::ipow(slots[ins.a], ins.exponent); break;
        case Op::Neg: r = -slots[ins.a]; break;
        case Op::Exp: r = std::exp(slots[ins.a]); break;
        case Op::Sin: r = std::sin(slots[ins.a]); break;
        case Op::Sqrt:
            if (slots[ins.a] < 0.0) throw DomainError("sqrt of a negative value");
            r = std::sqrt(slots[ins.a]);
            break;
        default: r = 0.0; break;
        }
        slots[k] = r;
    }
    return slots.back();
}

Interval Expr::interval_eval(const Box& b) const {
    if (static_cast<int>(b.dim()) != m_)
        throw PreconditionError("interval_eval: box dimension mismatch");
    auto& slots = detail::g_islots;
    const auto& code = tape_->code;
    slots.resize(code.size());
    for (std::size_t k = 0; k < code.size(); ++k) {
        const auto& ins = code[k];
        Interval r;
        switch (ins.op) {
        case Op::Const: r = Interval::point(ins.value); break;
        case Op::Var: r = b.dims[static_cast<std::size_t>(ins.var) - 1]; break;
        case Op::Add: r = iv_add(slots[ins.a], slots[ins.b]); break;
        case Op::Sub: r = iv_sub(slots[ins.a], slots[ins.b]); break;
        case Op::Mul: r = iv_mul(slots[ins.a], slots[ins.b]); break;
        case Op::Div: r = iv_div(slots[ins.a], slots[ins.b]); break;
        case Op::Pow: r = iv_pow(slots[ins.a], ins.exponent); break;
        case Op::Neg: r = iv_neg(slots[ins.a]); break;
        case Op::Exp: r = iv_exp(slots[ins.a]); break;
        case Op::Sin: r = iv_sin(slots[ins.a]); break;
        case Op::Sqrt: r = iv_sqrt(slots[ins.a]); break;
        default: break;
        }
        slots[k] = r;
    }
    return slots.back();
}

// --- smart constructors with 0/1/constant folding ---------------------------

namespace {

bool is_const(const NodePtr& n, double v) {
    return n->op == Op::Const && n->value == v;
}

NodePtr make_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

NodePtr make_unary(Op op, NodePtr a) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr fold_add(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value + b->value);
    return make_binary(Op::Add, std::move(a), std::move(b));
}

NodePtr fold_neg(NodePtr a) {
    if (a->op == Op::Const) return make_const(-a->value);
    if (a->op == Op::Neg) return a->a;
    return make_unary(Op::Neg, std::move(a));
}

NodePtr fold_sub(NodePtr a, NodePtr b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return fold_neg(std::move(b));
    if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value - b->value);
    return make_binary(Op::Sub, std::move(a), std::move(b));
}

NodePtr fold_mul(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value * b->value);
    return make_binary(Op::Mul, std::move(a), std::move(b));
}

NodePtr fold_div(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_const(0.0);
    if (is_const(b, 1.0)) return a;
    if (a->op == Op::Const && b->op == Op::Const && b->value != 0.0)
        return make_const(a->value / b->value);
    return make_binary(Op::Div, std::move(a), std::move(b));
}

NodePtr make_pow(NodePtr a, int n) {
    auto r = std::make_shared<ExprNode>();
    r->op = Op::Pow;
    r->a = std::move(a);
    r->exponent = n;
    return r;
}

NodePtr fold_pow(NodePtr a, int n) {
    if (n == 0) return make_const(1.0);
    if (n == 1) return a;
    if (a->op == Op::Const) return make_const(detail::ipow(a->value, n));
    return make_pow(std::move(a), n);
}

// d/dx_i, 1-based index
NodePtr diff_node(const NodePtr& n, int i) {
    switch (n->op) {
    case Op::Const: return make_const(0.0);
    case Op::Var: return make_const(n->var == i ? 1.0 : 0.0);
    case Op::Add: return fold_add(diff_node(n->a, i), diff_node(n->b, i));
    case Op::Sub: return fold_sub(diff_node(n->a, i), diff_node(n->b, i));
    case Op::Mul:
        return fold_add(fold_mul(diff_node(n->a, i), n->b),
                        fold_mul(n->a, diff_node(n->b, i)));
    case Op::Div:
        // (u/v)' = u'/v - u v'/v^2
        return fold_sub(fold_div(diff_node(n->a, i), n->b),
                        fold_div(fold_mul(n->a, diff_node(n->b, i)),
                                 fold_pow(n->b, 2)));
    case Op::Pow:
        // (u^n)' = n u^(n-1) u'
        return fold_mul(fold_mul(make_const(n->exponent), fold_pow(n->a, n->exponent - 1)),
                        diff_node(n->a, i));
    case Op::Neg: return fold_neg(diff_node(n->a, i));
    case Op::Exp: return fold_mul(make_unary(Op::Exp, n->a), diff_node(n->a, i));
    case Op::Sin:
        // cos(u) = sin(u + pi/2) keeps the derivative inside the node set
        return fold_mul(make_unary(Op::Sin, fold_add(n->a, make_const(std::numbers::pi / 2.0))),
                        diff_node(n->a, i));
    case Op::Sqrt:
        // (sqrt u)' = u' / (2 sqrt u)
        return fold_div(diff_node(n->a, i),
                        fold_mul(make_const(2.0), make_unary(Op::Sqrt, n->a)));
    }
    return make_const(0.0);
}

} // namespace

Expr Expr::diff(int i) const {
    if (i < 1 || i > m_)
        throw PreconditionError("diff: variable index out of range");
    return Expr(diff_node(node_, i), m_);
}

IntervalMatrix Expr::interval_hessian(const Box& b) const {
    IntervalMatrix h(m_);
    std::vector<Expr> first(m_);
    for (int i = 1; i <= m_; ++i) first[i - 1] = diff(i);
    for (int i = 0; i < m_; ++i) {
        for (int j = i; j < m_; ++j) {
            Interval hij = first[i].diff(j + 1).interval_eval(b);
            if (j > i) {
                const Interval hji = first[j].diff(i + 1).interval_eval(b);
                hij = iv_intersect(hij, hji);
            }
            h.at(i, j) = hij;
            h.at(j, i) = hij;
        }
    }
    return h;
}

// --- rendering ---------------------------------------------------------------

namespace {

void render(const NodePtr& n, std::ostringstream& os) {
    switch (n->op) {
    case Op::Const: os << n->value; break;
    case Op::Var: os << 'x' << n->var; break;
    case Op::Add:
        os << '(';
        render(n->a, os);
        os << " + ";
        render(n->b, os);
        os << ')';
        break;
    case Op::Sub:
        os << '(';
        render(n->a, os);
        os << " - ";
        render(n->b, os);
        os << ')';
        break;
    case Op::Mul:
        os << '(';
        render(n->a, os);
        os << " * ";
        render(n->b, os);
        os << ')';
        break;
    case Op::Div:
        os << '(';
        render(n->a, os);
        os << " / ";
        render(n->b, os);
        os << ')';
        break;
    case Op::Pow:
        render(n->a, os);
        os << '^' << n->exponent;
        break;
    case Op::Neg:
        os << "-(";
        render(n->a, os);
        os << ')';
        break;
    case Op::Exp:
        os << "exp(";
        render(n->a, os);
        os << ')';
        break;
    case Op::Sin:
        os << "sin(";
        render(n->a, os);
        os << ')';
        break;
    case Op::Sqrt:
        os << "sqrt(";
        render(n->a, os);
        os << ')';
        break;
    }
}

} // namespace

std::string Expr::to_string() const {
    if (!node_) return "<empty>";
    std::ostringstream os;
    render(node_, os);
    return os.str();
}

// --- parser ------------------------------------------------------------------

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    int m;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at offset " + std::to_string(pos), pos);
    }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                                     text[pos] == '\n' || text[pos] == '\r'))
            ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = fold_add(std::move(lhs), parse_term());
            else if (eat('-'))
                lhs = fold_sub(std::move(lhs), parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (eat('*'))
                lhs = fold_mul(std::move(lhs), parse_factor());
            else if (eat('/'))
                lhs = fold_div(std::move(lhs), parse_factor());
            else
                return lhs;
        }
    }

    NodePtr parse_factor() {
        if (eat('-')) return fold_neg(parse_factor());
        NodePtr a = parse_atom();
        if (eat('^')) {
            const int n = parse_unsigned_int();
            return fold_pow(std::move(a), n);
        }
        return a;
    }

    int parse_unsigned_int() {
        skip_ws();
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected integer exponent");
        int value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
        if (ec != std::errc{}) fail("bad integer exponent");
        (void)ptr;
        return value;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        const char c = text[pos];
        if (c == '(') {
            ++pos;
            NodePtr e = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        fail("unexpected character");
    }

    NodePtr parse_number() {
        const std::size_t start = pos;
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + text.size(), value);
        if (ec != std::errc{} || ptr == text.data() + start) fail("bad number literal");
        pos = static_cast<std::size_t>(ptr - text.data());
        return make_const(value);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos;
        while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
        const std::string_view id = text.substr(start, pos - start);
        if (id == "pi") return make_const(std::numbers::pi);
        if (id == "exp" || id == "sin" || id == "sqrt") {
            if (!eat('(')) fail("expected '(' after function name");
            NodePtr arg = parse_expr();
            if (!eat(')')) fail("expected ')'");
            if (id == "exp") return make_unary(Op::Exp, std::move(arg));
            if (id == "sin") return make_unary(Op::Sin, std::move(arg));
            return make_unary(Op::Sqrt, std::move(arg));
        }
        if (id.size() >= 2 && id[0] == 'x') {
            int index = 0;
            auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), index);
            if (ec == std::errc{} && ptr == id.data() + id.size()) {
                if (index < 1 || index > m) {
                    pos = start;
                    fail("variable index out of range (m = " + std::to_string(m) + ")");
                }
                auto n = std::make_shared<ExprNode>();
                n->op = Op::Var;
                n->var = index;
                return n;
            }
        }
        pos = start;
        fail("unknown identifier '" + std::string(id) + "'");
    }
};

} // namespace

Expr parse(std::string_view text, int m) {
    if (m < 1) throw PreconditionError("parse requires m >= 1");
    Parser p{text, 0, m};
    NodePtr root = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return Expr(std::move(root), m);
}

// --- builder -----------------------------------------------------------------

namespace {
int common_dim(const Expr& a, const Expr& b) {
    if (a.dim() != b.dim()) throw PreconditionError("expression dimension mismatch");
    return a.dim();
}
} // namespace

Expr ExprBuilder::add(const Expr& a, const Expr& b) {
    return Expr(fold_add(a.node_, b.node_), common_dim(a, b));
}
Expr ExprBuilder::sub(const Expr& a, const Expr& b) {
    return Expr(fold_sub(a.node_, b.node_), common_dim(a, b));
}
Expr ExprBuilder::mul(const Expr& a, const Expr& b) {
    return Expr(fold_mul(a.node_, b.node_), common_dim(a, b));
}
Expr ExprBuilder::div(const Expr& a, const Expr& b) {
    return Expr(fold_div(a.node_, b.node_), common_dim(a, b));
}
Expr ExprBuilder::pow(const Expr& a, int n) {
    if (n < 0) throw PreconditionError("pow exponent must be >= 0");
    return Expr(fold_pow(a.node_, n), a.dim());
}
Expr ExprBuilder::neg(const Expr& a) { return Expr(fold_neg(a.node_), a.dim()); }
Expr ExprBuilder::exp(const Expr& a) { return Expr(make_unary(Op::Exp, a.node_), a.dim()); }
Expr ExprBuilder::sin(const Expr& a) { return Expr(make_unary(Op::Sin, a.node_), a.dim()); }
Expr ExprBuilder::sqrt(const Expr& a) { return Expr(make_unary(Op::Sqrt, a.node_), a.dim()); }

} // namespace pcx
