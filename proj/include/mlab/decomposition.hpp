#pragma once
// Formal sums sum_j c_j {f_j}_2 (x) g_j of rational functions in (x, y, z).

#include <string>
#include <vector>

#include "mlab/expr.hpp"

namespace mlab {

struct DecompositionTerm {
    Rational c{1};
    RationalExpr f;
    RationalExpr g;
};

struct Decomposition {
    std::vector<DecompositionTerm> terms;

    bool empty() const { return terms.empty(); }
    size_t size() const { return terms.size(); }
    void add(const Rational& c, const RationalExpr& f, const RationalExpr& g) { terms.push_back({c, f, g}); }
    /// Concatenation.
    Decomposition operator+(const Decomposition& o) const {
        Decomposition r = *this;
        r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
        return r;
    }
    /// One line per term: "c {f} (x) g".
    std::string str() const {
        std::string s;
        for (const auto& t : terms) s += to_string(t.c) + " {" + t.f.str() + "}_2 (x) " + t.g.str() + "\n";
        return s;
    }
};

}  // namespace mlab
