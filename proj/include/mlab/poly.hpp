#pragma once
// Multivariate Laurent polynomials with exact rational coefficients.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "mlab/expr.hpp"

namespace mlab {

class LaurentPoly {
public:
    using Exponents = std::vector<int>;

    LaurentPoly() = default;
    explicit LaurentPoly(std::vector<std::string> variables);

    /// Parse polynomial text ("+ - * ^ ( )", juxtaposition, negative exponents,
    /// division by constants or monomials). Variables default to the names in
    /// the text, sorted; passing a list fixes their order.
    static LaurentPoly parse(const std::string& text, std::vector<std::string> variables = {});
    static LaurentPoly from_expr(const RationalExpr& e, std::vector<std::string> variables);
    static LaurentPoly constant(const Rational& c, std::vector<std::string> variables);
    static LaurentPoly monomial(const Rational& c, Exponents e, std::vector<std::string> variables);

    const std::vector<std::string>& variables() const { return vars_; }
    int nvars() const { return int(vars_.size()); }
    const std::map<Exponents, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponents& e, const Rational& c);

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly operator-() const;
    LaurentPoly pow(unsigned k) const;
    bool operator==(const LaurentPoly& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

    /// P(1/x1, ..., 1/xn).
    LaurentPoly inverted() const;
    LaurentPoly derivative(int var) const;
    /// Multiply by a monomial so every exponent is >= 0 and each variable
    /// attains exponent 0 somewhere.
    LaurentPoly normalized() const;
    /// Same polynomial over a new variable list (must contain the used ones).
    LaurentPoly with_variables(const std::vector<std::string>& variables) const;

    int max_degree(int var) const;
    int min_degree(int var) const;
    bool depends_on(int var) const { return max_degree(var) != min_degree(var); }

    /// Coefficients of P as a polynomial in var: result[k] multiplies var^(min+k).
    std::vector<LaurentPoly> coefficients_in(int var) const;

    cplx eval(const cplx* point) const;
    cplx eval(const std::vector<cplx>& point) const { return eval(point.data()); }
    double coefficient_scale() const;  // max |c|

    RationalExpr to_expr() const;
    std::string str() const;

private:
    std::vector<std::string> vars_;
    std::map<Exponents, Rational> terms_;
};

}  // namespace mlab
