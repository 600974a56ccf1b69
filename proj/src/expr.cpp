#include "mlab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace mlab {

std::string to_string(const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    try {
        size_t used = 0;
        if (s.find('/') != std::string::npos) {
            const auto slash = s.find('/');
            const long long p = std::stoll(s.substr(0, slash), &used);
            if (used != slash) throw std::invalid_argument("");
            const std::string den = s.substr(slash + 1);
            const long long q = std::stoll(den, &used);
            if (used != den.size() || q == 0) throw std::invalid_argument("");
            return Rational(p, q);
        }
        const auto dot = s.find('.');
        if (dot == std::string::npos) {
            const long long p = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument("");
            return Rational(p);
        }
        const bool neg = !s.empty() && s[0] == '-';
        std::string ip = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
        std::string fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (fp.empty()) fp = "0";
        if (!std::all_of(ip.begin(), ip.end(), ::isdigit) || !std::all_of(fp.begin(), fp.end(), ::isdigit))
            throw std::invalid_argument("");
        long long den = 1;
        for (size_t i = 0; i < fp.size(); ++i) den *= 10;
        Rational r(std::stoll(ip) * den + std::stoll(fp), den);
        return neg ? -r : r;
    } catch (const std::logic_error&) {
        throw std::invalid_argument("parse_rational: cannot parse '" + text + "'");
    }
}

struct RationalExpr::Node {
    Op op = Op::Const;
    Rational c{0};
    int var = -1;
    int k = 0;
    std::shared_ptr<const Node> a, b;
};

RationalExpr::RationalExpr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

RationalExpr::RationalExpr() {
    auto n = std::make_shared<Node>();
    n_ = std::move(n);
}

RationalExpr RationalExpr::constant(const Rational& q) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->c = q;
    return RationalExpr(std::move(n));
}

RationalExpr RationalExpr::variable(int index) {
    if (index < 0) throw std::invalid_argument("RationalExpr::variable: negative index");
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->var = index;
    return RationalExpr(std::move(n));
}

RationalExpr::Op RationalExpr::op() const { return n_->op; }
const Rational& RationalExpr::constant_value() const { return n_->c; }
int RationalExpr::variable_index() const { return n_->var; }
int RationalExpr::exponent() const { return n_->k; }

RationalExpr RationalExpr::lhs() const { return RationalExpr(n_->a); }
RationalExpr RationalExpr::rhs() const { return RationalExpr(n_->b); }

bool RationalExpr::is_constant() const { return max_variable() < 0; }

int RationalExpr::max_variable() const {
    switch (n_->op) {
        case Op::Const: return -1;
        case Op::Var: return n_->var;
        case Op::Neg:
        case Op::Pow: return RationalExpr(n_->a).max_variable();
        default: return std::max(RationalExpr(n_->a).max_variable(), RationalExpr(n_->b).max_variable());
    }
}

RationalExpr RationalExpr::binary(Op op, const RationalExpr& a, const RationalExpr& b) {
    const bool ca = a.op() == Op::Const, cb = b.op() == Op::Const;
    if (ca && cb) {
        const Rational &x = a.constant_value(), &y = b.constant_value();
        switch (op) {
            case Op::Add: return constant(x + y);
            case Op::Sub: return constant(x - y);
            case Op::Mul: return constant(x * y);
            case Op::Div:
                if (y == Rational(0)) throw std::domain_error("RationalExpr: division by the constant 0");
                return constant(x / y);
            default: break;
        }
    }
    if (op == Op::Add && ca && a.constant_value() == Rational(0)) return b;
    if ((op == Op::Add || op == Op::Sub) && cb && b.constant_value() == Rational(0)) return a;
    if (op == Op::Sub && ca && a.constant_value() == Rational(0)) return -b;
    if (op == Op::Mul && ((ca && a.constant_value() == Rational(0)) || (cb && b.constant_value() == Rational(0))))
        return constant(Rational(0));
    if (op == Op::Mul && ca && a.constant_value() == Rational(1)) return b;
    if ((op == Op::Mul || op == Op::Div) && cb && b.constant_value() == Rational(1)) return a;
    if (op == Op::Mul && ca && a.constant_value() == Rational(-1)) return -b;
    if ((op == Op::Mul || op == Op::Div) && cb && b.constant_value() == Rational(-1)) return -a;
    if (op == Op::Div && cb && b.constant_value() == Rational(0))
        throw std::domain_error("RationalExpr: division by the constant 0");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = a.n_;
    n->b = b.n_;
    return RationalExpr(std::move(n));
}

RationalExpr operator+(const RationalExpr& a, const RationalExpr& b) { return RationalExpr::binary(RationalExpr::Op::Add, a, b); }
RationalExpr operator-(const RationalExpr& a, const RationalExpr& b) { return RationalExpr::binary(RationalExpr::Op::Sub, a, b); }
RationalExpr operator*(const RationalExpr& a, const RationalExpr& b) { return RationalExpr::binary(RationalExpr::Op::Mul, a, b); }
RationalExpr operator/(const RationalExpr& a, const RationalExpr& b) { return RationalExpr::binary(RationalExpr::Op::Div, a, b); }

RationalExpr RationalExpr::operator-() const {
    if (n_->op == Op::Const) return constant(-n_->c);
    if (n_->op == Op::Neg) return RationalExpr(n_->a);
    auto n = std::make_shared<Node>();
    n->op = Op::Neg;
    n->a = n_;
    return RationalExpr(std::move(n));
}

RationalExpr RationalExpr::pow(int k) const {
    if (k == 1) return *this;
    if (k == 0) return constant(Rational(1));
    if (n_->op == Op::Const) {
        if (n_->c == Rational(0) && k < 0) throw std::domain_error("RationalExpr::pow: 0 to a negative power");
        Rational r(1);
        const Rational b = k > 0 ? n_->c : Rational(1) / n_->c;
        for (int i = 0; i < std::abs(k); ++i) r *= b;
        return constant(r);
    }
    if (n_->op == Op::Pow) return RationalExpr(n_->a).pow(n_->k * k);
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->a = n_;
    n->k = k;
    return RationalExpr(std::move(n));
}

// ---------------------------------------------------------------- parsing

namespace {

struct Token {
    enum Kind { Num, Ident, Sym, End } kind;
    std::string text;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            size_t j = i;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
            out.push_back({Token::Num, s.substr(i, j - i)});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            out.push_back({Token::Ident, s.substr(i, j - i)});
            i = j;
        } else if (std::string("+-*/^()").find(c) != std::string::npos) {
            out.push_back({Token::Sym, std::string(1, c)});
            ++i;
        } else if (c == '\xe2' && i + 2 < s.size() && s[i + 1] == '\x88' && s[i + 2] == '\x92') {
            out.push_back({Token::Sym, "-"});  // U+2212 minus sign
            i += 3;
        } else {
            throw std::invalid_argument(std::string("parse: unexpected character '") + c + "'");
        }
    }
    out.push_back({Token::End, ""});
    return out;
}

class Parser {
public:
    Parser(const std::string& text, std::vector<std::string>& names, bool extend)
        : toks_(tokenize(text)), names_(names), extend_(extend), text_(text) {}

    RationalExpr run() {
        RationalExpr e = expr();
        if (peek().kind != Token::End) fail("trailing input '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    bool is_sym(const char* s) const { return peek().kind == Token::Sym && peek().text == s; }
    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("parse error in '" + text_ + "': " + why);
    }

    RationalExpr expr() {
        RationalExpr e = factor();
        e = term_tail(e);
        while (is_sym("+") || is_sym("-")) {
            const bool plus = peek().text == "+";
            ++pos_;
            RationalExpr t = term_tail(factor());
            e = plus ? e + t : e - t;
        }
        return e;
    }

    RationalExpr term_tail(RationalExpr e) {
        for (;;) {
            if (is_sym("*")) {
                ++pos_;
                e = e * factor();
            } else if (is_sym("/")) {
                ++pos_;
                e = e / factor();
            } else if (peek().kind == Token::Num || peek().kind == Token::Ident || is_sym("(")) {
                e = e * factor();  // juxtaposition
            } else {
                return e;
            }
        }
    }

    RationalExpr factor() {
        if (is_sym("-")) {
            ++pos_;
            return -factor();
        }
        if (is_sym("+")) {
            ++pos_;
            return factor();
        }
        RationalExpr base = primary();
        if (is_sym("^")) {
            ++pos_;
            base = base.pow(exponent());
        }
        return base;
    }

    int exponent() {
        bool paren = false;
        if (is_sym("(")) {
            paren = true;
            ++pos_;
        }
        int sign = 1;
        while (is_sym("-") || is_sym("+")) {
            if (peek().text == "-") sign = -sign;
            ++pos_;
        }
        if (peek().kind != Token::Num || peek().text.find('.') != std::string::npos) fail("integer exponent expected");
        const int k = std::stoi(peek().text);
        ++pos_;
        if (paren) {
            if (!is_sym(")")) fail("')' expected after exponent");
            ++pos_;
        }
        return sign * k;
    }

    RationalExpr primary() {
        const Token& t = peek();
        if (t.kind == Token::Num) {
            ++pos_;
            return RationalExpr::constant(parse_rational(t.text));
        }
        if (t.kind == Token::Ident) {
            ++pos_;
            auto it = std::find(names_.begin(), names_.end(), t.text);
            if (it != names_.end()) return RationalExpr::variable(int(it - names_.begin()));
            if (!extend_) fail("unknown variable '" + t.text + "'");
            names_.push_back(t.text);
            return RationalExpr::variable(int(names_.size()) - 1);
        }
        if (is_sym("(")) {
            ++pos_;
            RationalExpr e = expr();
            if (!is_sym(")")) fail("')' expected");
            ++pos_;
            return e;
        }
        fail(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::vector<std::string>& names_;
    bool extend_;
    std::string text_;
};

}  // namespace

RationalExpr RationalExpr::parse(const std::string& text) {
    std::vector<std::string> names{"x", "y", "z"};
    return parse(text, names, false);
}

RationalExpr RationalExpr::parse(const std::string& text, std::vector<std::string>& names, bool extend) {
    return Parser(text, names, extend).run();
}

// ------------------------------------------------------------- evaluation

cplx RationalExpr::eval(const cplx* p) const {
    const Node& n = *n_;
    switch (n.op) {
        case Op::Const: return to_double(n.c);
        case Op::Var: return p[n.var];
        case Op::Neg: return -RationalExpr(n.a).eval(p);
        case Op::Pow: {
            const cplx v = RationalExpr(n.a).eval(p);
            return n.k > 0 ? std::pow(v, n.k) : 1.0 / std::pow(v, -n.k);
        }
        default: break;
    }
    const cplx a = RationalExpr(n.a).eval(p), b = RationalExpr(n.b).eval(p);
    switch (n.op) {
        case Op::Add: return a + b;
        case Op::Sub: return a - b;
        case Op::Mul: return a * b;
        default: return a / b;
    }
}

namespace {

cplx ipow(cplx v, int k) {
    if (k == 0) return 1.0;
    cplx r = 1.0, b = k > 0 ? v : 1.0 / v;
    for (int e = std::abs(k); e; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

}  // namespace

template <int K>
Jet<K> RationalExpr::eval_jet(const cplx* p, const std::array<const cplx*, K>& dirs) const {
    const Node& n = *n_;
    Jet<K> out;
    switch (n.op) {
        case Op::Const:
            out.v = to_double(n.c);
            return out;
        case Op::Var:
            out.v = p[n.var];
            for (int i = 0; i < K; ++i) out.d[i] = dirs[i][n.var];
            return out;
        case Op::Neg: {
            out = RationalExpr(n.a).eval_jet<K>(p, dirs);
            out.v = -out.v;
            for (auto& d : out.d) d = -d;
            return out;
        }
        case Op::Pow: {
            const Jet<K> a = RationalExpr(n.a).eval_jet<K>(p, dirs);
            const cplx km1 = ipow(a.v, n.k - 1);
            out.v = km1 * a.v;
            for (int i = 0; i < K; ++i) out.d[i] = double(n.k) * km1 * a.d[i];
            return out;
        }
        default: break;
    }
    const Jet<K> a = RationalExpr(n.a).eval_jet<K>(p, dirs);
    const Jet<K> b = RationalExpr(n.b).eval_jet<K>(p, dirs);
    switch (n.op) {
        case Op::Add:
            out.v = a.v + b.v;
            for (int i = 0; i < K; ++i) out.d[i] = a.d[i] + b.d[i];
            break;
        case Op::Sub:
            out.v = a.v - b.v;
            for (int i = 0; i < K; ++i) out.d[i] = a.d[i] - b.d[i];
            break;
        case Op::Mul:
            out.v = a.v * b.v;
            for (int i = 0; i < K; ++i) out.d[i] = a.d[i] * b.v + a.v * b.d[i];
            break;
        default:
            out.v = a.v / b.v;
            for (int i = 0; i < K; ++i) out.d[i] = (a.d[i] - out.v * b.d[i]) / b.v;
            break;
    }
    return out;
}

template Jet<1> RationalExpr::eval_jet<1>(const cplx*, const std::array<const cplx*, 1>&) const;
template Jet<2> RationalExpr::eval_jet<2>(const cplx*, const std::array<const cplx*, 2>&) const;

RationalExpr RationalExpr::substitute(const std::vector<RationalExpr>& subs) const {
    const Node& n = *n_;
    switch (n.op) {
        case Op::Const: return *this;
        case Op::Var:
            if (n.var < int(subs.size())) return subs[n.var];
            return *this;
        case Op::Neg: return -RationalExpr(n.a).substitute(subs);
        case Op::Pow: return RationalExpr(n.a).substitute(subs).pow(n.k);
        default: return binary(n.op, RationalExpr(n.a).substitute(subs), RationalExpr(n.b).substitute(subs));
    }
}

// --------------------------------------------------------------- printing

namespace {

int precedence(RationalExpr::Op op) {
    using Op = RationalExpr::Op;
    switch (op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        default: return 5;
    }
}

}  // namespace

std::string RationalExpr::str(const std::vector<std::string>& names) const {
    const Node& n = *n_;
    auto wrap = [&](const std::shared_ptr<const Node>& child, int min_prec) {
        RationalExpr c(child);
        std::string s = c.str(names);
        int p = precedence(c.op());
        if (c.op() == Op::Const && (c.constant_value() < 0 || c.constant_value().denominator() != 1)) p = 2;
        if (c.op() == Op::Const && c.constant_value() < 0) p = 1;
        return p < min_prec ? "(" + s + ")" : s;
    };
    switch (n.op) {
        case Op::Const: return to_string(n.c);
        case Op::Var:
            return n.var < int(names.size()) ? names[n.var] : "v" + std::to_string(n.var);
        case Op::Neg: return "-" + wrap(n.a, 3);
        case Op::Pow: return wrap(n.a, 5) + "^" + (n.k < 0 ? "(" + std::to_string(n.k) + ")" : std::to_string(n.k));
        case Op::Add: return wrap(n.a, 1) + " + " + wrap(n.b, 2);
        case Op::Sub: return wrap(n.a, 1) + " - " + wrap(n.b, 2);
        case Op::Mul: return wrap(n.a, 2) + "*" + wrap(n.b, 3);
        case Op::Div: return wrap(n.a, 2) + "/" + wrap(n.b, 3);
    }
    return "?";
}

}  // namespace mlab
