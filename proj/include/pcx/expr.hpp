#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcx/interval.hpp"

namespace pcx {

/// Symmetric m x m matrix of intervals (interval Hessian enclosure).
struct IntervalMatrix {
    int n = 0;
    std::vector<Interval> entries; // row-major, n*n

    IntervalMatrix() = default;
    explicit IntervalMatrix(int n_) : n(n_), entries(static_cast<std::size_t>(n_) * n_) {}

    Interval& at(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }
    const Interval& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
};

namespace detail {
struct ExprNode;
struct Tape;
} // namespace detail

/// Immutable scalar expression tree over variables x1..xm.
///
/// Supported operators: + - * / integer ^, unary -, exp, sin, sqrt, and the
/// named constant pi. Construction goes through parse() or the factory
/// helpers; all operations are pure, so instances can be shared freely
/// between threads.
class Expr {
public:
    Expr() = default;

    static Expr constant(double v, int m);
    /// index is 1-based (x1..xm).
    static Expr variable(int index, int m);

    int dim() const { return m_; }
    bool valid() const { return node_ != nullptr; }

    /// Pointwise evaluation; x.size() must equal dim().
    /// Throws DomainError on division by zero or sqrt of a negative value.
    double eval(std::span<const double> x) const;

    /// Symbolic partial derivative with respect to x_i (1-based).
    /// Performs constant/0/1 folding but promises no canonical form.
    Expr diff(int i) const;

    /// Inclusion interval: {f(x) : x in b} is contained in the result.
    Interval interval_eval(const Box& b) const;

    /// Entry (i,j) encloses d2f/dxi dxj over b; symmetrized by intersecting
    /// the (i,j) and (j,i) enclosures.
    IntervalMatrix interval_hessian(const Box& b) const;

    /// Infix rendering, for diagnostics.
    std::string to_string() const;

    friend Expr parse(std::string_view text, int m);
    friend class ExprBuilder;

private:
    Expr(std::shared_ptr<const detail::ExprNode> node, int m);

    std::shared_ptr<const detail::ExprNode> node_;
    std::shared_ptr<const detail::Tape> tape_; // flat postfix program
    int m_ = 0;
};

/// Parses an expression over x1..xm.
///
/// Grammar:  expr   := term (('+'|'-') term)*
///           term   := factor (('*'|'/') factor)*
///           factor := '-' factor | atom ('^' integer)?
///           atom   := number | 'pi' | var | func '(' expr ')' | '(' expr ')'
///           var    := 'x' integer      func := 'exp' | 'sin' | 'sqrt'
/// Precedence is ^ over unary minus over * / over + -, so -x1^2 is -(x1^2).
Expr parse(std::string_view text, int m);

/// Composition helpers used by diff and by tests that assemble trees by hand.
class ExprBuilder {
public:
    static Expr add(const Expr& a, const Expr& b);
    static Expr sub(const Expr& a, const Expr& b);
    static Expr mul(const Expr& a, const Expr& b);
    static Expr div(const Expr& a, const Expr& b);
    static Expr pow(const Expr& a, int n);
    static Expr neg(const Expr& a);
    static Expr exp(const Expr& a);
    static Expr sin(const Expr& a);
    static Expr sqrt(const Expr& a);
};

} // namespace pcx
