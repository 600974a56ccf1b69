#pragma once
// Rational-function expression trees over named variables, with exact
// rational constants, complex evaluation and forward-mode derivatives.

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace mlab {

using cplx = std::complex<double>;
using Rational = boost::rational<long long>;

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);
inline double to_double(const Rational& q) { return double(q.numerator()) / double(q.denominator()); }

/// Value plus K directional derivatives.
template <int K>
struct Jet {
    cplx v;
    std::array<cplx, K> d{};
};

class RationalExpr {
public:
    enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow };

    RationalExpr();  // the constant 0
    static RationalExpr constant(const Rational& q);
    static RationalExpr variable(int index);

    /// Parse with variables named x, y, z (indices 0, 1, 2).
    static RationalExpr parse(const std::string& text);
    /// Parse against an explicit name table; unknown names are appended when
    /// extend is true and rejected otherwise.
    static RationalExpr parse(const std::string& text, std::vector<std::string>& names, bool extend);

    friend RationalExpr operator+(const RationalExpr& a, const RationalExpr& b);
    friend RationalExpr operator-(const RationalExpr& a, const RationalExpr& b);
    friend RationalExpr operator*(const RationalExpr& a, const RationalExpr& b);
    friend RationalExpr operator/(const RationalExpr& a, const RationalExpr& b);
    RationalExpr operator-() const;
    RationalExpr pow(int k) const;

    Op op() const;
    const Rational& constant_value() const;
    int variable_index() const;
    int exponent() const;
    RationalExpr lhs() const;
    RationalExpr rhs() const;

    bool is_constant() const;  // no variables anywhere in the tree
    int max_variable() const;  // -1 for constants

    cplx eval(const cplx* point) const;
    cplx eval(const std::array<cplx, 3>& p) const { return eval(p.data()); }

    template <int K>
    Jet<K> eval_jet(const cplx* point, const std::array<const cplx*, K>& dirs) const;

    /// Replace variable i by subs[i].
    RationalExpr substitute(const std::vector<RationalExpr>& subs) const;

    std::string str(const std::vector<std::string>& names = {"x", "y", "z"}) const;

private:
    struct Node;
    explicit RationalExpr(std::shared_ptr<const Node> n);
    static RationalExpr binary(Op op, const RationalExpr& a, const RationalExpr& b);
    std::shared_ptr<const Node> n_;
};

extern template Jet<1> RationalExpr::eval_jet<1>(const cplx*, const std::array<const cplx*, 1>&) const;
extern template Jet<2> RationalExpr::eval_jet<2>(const cplx*, const std::array<const cplx*, 2>&) const;

}  // namespace mlab
