#pragma once
// Formal sums of dilogarithm symbols over number fields, the residue
// elements u_p read off curve dossiers, and D-value triviality tests.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mlab/expr.hpp"

namespace mlab {

/// An algebraic number given by its minimal polynomial (ascending integer
/// coefficients, empty when it could not be recovered) and its value under
/// each embedding of the field it was computed in.
struct AlgebraicPoint {
    std::vector<long long> minpoly;
    std::vector<cplx> embeddings;

    static AlgebraicPoint rational(const Rational& q);
    /// Fits the minimal polynomial from the conjugates found among values.
    static AlgebraicPoint from_embeddings(const std::vector<cplx>& values);
    /// Embedding values satisfy the minimal polynomial to 1e-10 (relative).
    bool valid() const;
    bool is_real(double tol = 1e-12) const;
    bool same_as(const AlgebraicPoint& o, double tol = 1e-8) const;
    std::string str() const;
};

struct DilogArgument {
    enum class Kind { Finite, Zero, One, Infinity };
    Kind kind = Kind::Finite;
    AlgebraicPoint point;

    bool degenerate() const { return kind != Kind::Finite; }
    static DilogArgument finite(AlgebraicPoint p);
    static DilogArgument special(Kind k);
};

struct FormalDilogTerm {
    Rational c{1};
    DilogArgument arg;
};

struct FormalDilogSum {
    std::vector<FormalDilogTerm> terms;

    bool empty() const { return terms.empty(); }
    void add(const Rational& c, const DilogArgument& a) { terms.push_back({c, a}); }
    FormalDilogSum operator+(const FormalDilogSum& o) const;
    std::string str() const;
};

/// Drops {0}, {1}, {inf}, merges equal arguments, drops zero coefficients.
FormalDilogSum normalize(const FormalDilogSum& s);
/// Applies {a} = -{1/a} so every argument has |a| > 1, or |a| = 1 and
/// Im a >= 0 in the first embedding, and drops {-1} (2{-1} = 0); then normalizes.
FormalDilogSum reduce_inversions(const FormalDilogSum& s);

enum class Verdict { Trivial, Nontrivial, Inconclusive };
const char* verdict_name(Verdict v);

struct DProfile {
    std::vector<double> values;  // one per embedding
    bool is_numerically_trivial = true;
    Verdict verdict = Verdict::Trivial;
};

/// sum_i c_i D(sigma(a_i)) for every embedding sigma. Empty sums are trivial;
/// a nonzero value makes the sum nontrivial; a zero profile of a nonempty
/// sum is inconclusive (D vanishes on real arguments whatever the class).
DProfile d_profile(const FormalDilogSum& s);

/// Torsion points, divisors and a decomposition transcribed for one curve.
struct CurveDossier {
    struct Point {
        std::string name;
        bool at_infinity = false;
        std::string U, V;       // coordinates on the model, in terms of a and r
        std::string extension;  // polynomial in r over Q(a) when the point needs it
        int degree = 1;         // residue degree over the base field
    };
    struct Term {
        Rational c{1};
        RationalExpr f, g;
        std::map<std::string, int> g_div, g_tau_div;  // g and g o tau as products of named functions
    };

    std::string curve;
    std::string polynomial;
    std::string model;  // G(U, V, a) = 0
    std::string field;  // minimal polynomial of a, empty for Q
    std::string x, y;   // x and y on W_P in terms of U, V, a; empty when not known
    std::vector<Point> points;
    std::map<std::string, std::vector<std::pair<std::string, int>>> divisors;
    std::vector<Term> terms;
    std::string note;

    const Point& point(const std::string& name) const;
    /// Valuation of a named function at a point (0 when absent from its divisor).
    int valuation(const std::string& function, const std::string& point) const;
    /// Degree of each divisor, weighted by residue degree.
    std::map<std::string, int> divisor_degrees() const;
};

CurveDossier parse_dossier_json(const std::string& text);
CurveDossier load_dossier(const std::string& path);

/// Values of a function of (x, y, z) at every embedding of a dossier point,
/// as limits along the model (z from P, which must be linear in z).
DilogArgument dossier_value(const CurveDossier& d, const RationalExpr& f, const std::string& point);
/// Order of vanishing of a function of (x, y, z) at a dossier point, estimated
/// from its growth along a local coordinate of the model.
int numeric_valuation(const CurveDossier& d, const RationalExpr& f, const std::string& point);

/// max over random points of the model of |W_P(x, y)|, relative to the sum
/// of the absolute values of its monomials; small when the coordinate map
/// lands on the Maillot curve.
double dossier_model_residual(const CurveDossier& d, int samples = 20, unsigned seed = 1);

/// u_p = sum_j c_j (v_p(g_j) {f_j(p)} + v_p(g_j o tau) {f_j o tau (p)}), normalized.
FormalDilogSum residue_element(const CurveDossier& d, const std::string& point);

/// For each embedding of the base field, the sum of D(u_q) over the
/// geometric points q of the dossier lying over it.
std::vector<double> residue_sum_profile(const CurveDossier& d);

}  // namespace mlab
