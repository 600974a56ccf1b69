#include "mlab/poly.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>

namespace mlab {

LaurentPoly::LaurentPoly(std::vector<std::string> variables) : vars_(std::move(variables)) {}

LaurentPoly LaurentPoly::constant(const Rational& c, std::vector<std::string> variables) {
    LaurentPoly p(std::move(variables));
    p.add_term(Exponents(p.vars_.size(), 0), c);
    return p;
}

LaurentPoly LaurentPoly::monomial(const Rational& c, Exponents e, std::vector<std::string> variables) {
    LaurentPoly p(std::move(variables));
    if (e.size() != p.vars_.size()) throw std::invalid_argument("LaurentPoly::monomial: exponent length mismatch");
    p.add_term(e, c);
    return p;
}

void LaurentPoly::add_term(const Exponents& e, const Rational& c) {
    if (e.size() != vars_.size()) throw std::invalid_argument("LaurentPoly::add_term: exponent length mismatch");
    if (c == Rational(0)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == Rational(0)) terms_.erase(it);
    }
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("LaurentPoly: variable lists differ");
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("LaurentPoly: variable lists differ");
    LaurentPoly r(vars_);
    Exponents e(vars_.size());
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

LaurentPoly LaurentPoly::pow(unsigned k) const {
    LaurentPoly r = constant(Rational(1), vars_), b = *this;
    while (k) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

LaurentPoly LaurentPoly::inverted() const {
    LaurentPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        Exponents f = e;
        for (auto& v : f) v = -v;
        r.terms_.emplace(f, c);
    }
    return r;
}

LaurentPoly LaurentPoly::derivative(int var) const {
    LaurentPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents f = e;
        f[var] -= 1;
        r.add_term(f, c * Rational(e[var]));
    }
    return r;
}

int LaurentPoly::max_degree(int var) const {
    int m = INT_MIN;
    for (const auto& t : terms_) m = std::max(m, t.first[var]);
    return terms_.empty() ? 0 : m;
}

int LaurentPoly::min_degree(int var) const {
    int m = INT_MAX;
    for (const auto& t : terms_) m = std::min(m, t.first[var]);
    return terms_.empty() ? 0 : m;
}

LaurentPoly LaurentPoly::normalized() const {
    LaurentPoly r(vars_);
    Exponents shift(vars_.size());
    for (int i = 0; i < nvars(); ++i) shift[i] = min_degree(i);
    for (const auto& [e, c] : terms_) {
        Exponents f = e;
        for (size_t i = 0; i < f.size(); ++i) f[i] -= shift[i];
        r.terms_.emplace(f, c);
    }
    return r;
}

LaurentPoly LaurentPoly::with_variables(const std::vector<std::string>& variables) const {
    LaurentPoly r(variables);
    std::vector<int> where(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find(variables.begin(), variables.end(), vars_[i]);
        if (it == variables.end()) {
            if (depends_on(int(i)) || min_degree(int(i)) != 0)
                throw std::invalid_argument("with_variables: variable '" + vars_[i] + "' is in use");
            where[i] = -1;
        } else {
            where[i] = int(it - variables.begin());
        }
    }
    for (const auto& [e, c] : terms_) {
        Exponents f(variables.size(), 0);
        for (size_t i = 0; i < e.size(); ++i)
            if (where[i] >= 0) f[where[i]] = e[i];
        r.add_term(f, c);
    }
    return r;
}

std::vector<LaurentPoly> LaurentPoly::coefficients_in(int var) const {
    const int lo = min_degree(var), hi = max_degree(var);
    std::vector<LaurentPoly> out(size_t(hi - lo + 1), LaurentPoly(vars_));
    for (const auto& [e, c] : terms_) {
        Exponents f = e;
        f[var] = 0;
        out[size_t(e[var] - lo)].add_term(f, c);
    }
    return out;
}

cplx LaurentPoly::eval(const cplx* p) const {
    cplx s = 0.0;
    for (const auto& [e, c] : terms_) {
        cplx m = to_double(c);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] > 0)
                for (int k = 0; k < e[i]; ++k) m *= p[i];
            else
                for (int k = 0; k < -e[i]; ++k) m /= p[i];
        }
        s += m;
    }
    return s;
}

double LaurentPoly::coefficient_scale() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(to_double(t.second)));
    return m;
}

RationalExpr LaurentPoly::to_expr() const {
    RationalExpr sum = RationalExpr::constant(Rational(0));
    for (const auto& [e, c] : terms_) {
        RationalExpr m = RationalExpr::constant(c);
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) m = m * RationalExpr::variable(int(i)).pow(e[i]);
        sum = sum + m;
    }
    return sum;
}

std::string LaurentPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string mono;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars_[i];
            if (e[i] != 1) mono += "^" + (e[i] < 0 ? "(" + std::to_string(e[i]) + ")" : std::to_string(e[i]));
        }
        Rational a = c;
        if (first) {
            if (a < 0) {
                out += "-";
                a = -a;
            }
        } else {
            out += a < 0 ? " - " : " + ";
            if (a < 0) a = -a;
        }
        if (mono.empty())
            out += to_string(a);
        else if (a == Rational(1))
            out += mono;
        else
            out += to_string(a) + "*" + mono;
        first = false;
    }
    return out;
}

namespace {

LaurentPoly expand(const RationalExpr& e, const std::vector<std::string>& vars) {
    using Op = RationalExpr::Op;
    const int n = int(vars.size());
    switch (e.op()) {
        case Op::Const: return LaurentPoly::constant(e.constant_value(), vars);
        case Op::Var: {
            LaurentPoly::Exponents ex(size_t(n), 0);
            if (e.variable_index() >= n) throw std::invalid_argument("expand: variable index out of range");
            ex[size_t(e.variable_index())] = 1;
            return LaurentPoly::monomial(Rational(1), ex, vars);
        }
        case Op::Neg: return -expand(e.lhs(), vars);
        case Op::Add: return expand(e.lhs(), vars) + expand(e.rhs(), vars);
        case Op::Sub: return expand(e.lhs(), vars) - expand(e.rhs(), vars);
        case Op::Mul: return expand(e.lhs(), vars) * expand(e.rhs(), vars);
        case Op::Pow:
        case Op::Div: {
            const LaurentPoly base = expand(e.op() == Op::Pow ? e.lhs() : e.rhs(), vars);
            const int k = e.op() == Op::Pow ? e.exponent() : -1;
            if (k >= 0) return base.pow(unsigned(k));
            if (base.terms().size() != 1)
                throw std::invalid_argument("polynomial text divides by a non-monomial");
            const auto& [ex, c] = *base.terms().begin();
            LaurentPoly::Exponents inv = ex;
            for (auto& v : inv) v = -v;
            LaurentPoly invm = LaurentPoly::monomial(Rational(1) / c, inv, vars).pow(unsigned(-k));
            return e.op() == Op::Pow ? invm : expand(e.lhs(), vars) * invm;
        }
    }
    throw std::logic_error("expand: unknown node");
}

}  // namespace

LaurentPoly LaurentPoly::from_expr(const RationalExpr& e, std::vector<std::string> variables) {
    return expand(e, variables);
}

LaurentPoly LaurentPoly::parse(const std::string& text, std::vector<std::string> variables) {
    std::vector<std::string> names = variables;
    const bool extend = variables.empty();
    const RationalExpr e = RationalExpr::parse(text, names, extend);
    if (!extend) return expand(e, names);
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    LaurentPoly p = expand(e, names);
    if (p.is_zero()) throw std::invalid_argument("LaurentPoly::parse: zero polynomial");
    return p.with_variables(sorted);
}

}  // namespace mlab
