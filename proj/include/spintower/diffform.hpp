#pragma once
// Graded exterior forms over jet coordinates with polynomial coefficients.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spintower/fieldexpr.hpp"

namespace spintower {

// Basis 1-form ids. Fixed order: dx, dy, dt, dS_i, dS_i_x, dS_i_y, dxi_m.
struct FormBasis {
    static constexpr int dx = 0;
    static constexpr int dy = 1;
    static constexpr int dt = 2;
    static int dS(int i) { return 2 + i; }    // i = 1..3
    static int dSx(int i) { return 5 + i; }
    static int dSy(int i) { return 8 + i; }
    static int dxi(int m) { return 11 + m; }  // m >= 1

    static std::string name(int id);
    // Jet symbol whose differential this basis form is (-1 for dx, dy, dt).
    static int fiber_symbol(int id);
    static bool is_base(int id) { return id <= dt; }
};

constexpr int kMaxFormDegree = 5;

class DiffForm {
  public:
    using Tuple = std::vector<int>;  // strictly increasing basis ids
    using Terms = std::map<Tuple, ScalarExpr>;

    DiffForm() = default;
    explicit DiffForm(int degree) : degree_(degree) {}
    // 0-form from a polynomial
    explicit DiffForm(ScalarExpr coeff) : degree_(0) { add_term({}, std::move(coeff)); }

    static DiffForm basis(std::initializer_list<int> ids, ScalarExpr coeff = ScalarExpr(ExactScalar::one()));

    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    void add_term(Tuple t, ScalarExpr coeff);

    DiffForm operator+(const DiffForm& o) const;
    DiffForm operator-(const DiffForm& o) const { return *this + o.negated(); }
    DiffForm& operator+=(const DiffForm& o) { return *this = *this + o; }
    DiffForm& operator-=(const DiffForm& o) { return *this = *this + o.negated(); }
    DiffForm negated() const;
    DiffForm scaled(const ExactScalar& s) const;
    DiffForm mul_scalar(const ScalarExpr& p) const;

    bool operator==(const DiffForm& o) const { return degree_ == o.degree_ && terms_ == o.terms_; }

    // Deterministic text format: one line per term, `coeff * dX^dY^...`.
    std::string str() const;

  private:
    int degree_ = 0;
    Terms terms_;
};

DiffForm wedge(const DiffForm& a, const DiffForm& b);

// Merges two strictly increasing basis tuples; returns the sign of the
// interleaving permutation, or 0 on a repeated id.
int merge_basis_tuples(const DiffForm::Tuple& a, const DiffForm::Tuple& b, DiffForm::Tuple& out);

// Differentials of jet symbols (and registered formal atoms).
class DifferentialRegistry {
  public:
    // Built-in: coords, S_i, S_i_x, S_i_y, xi_m map to their basis 1-forms;
    // unregistered formal atoms are treated as constants.
    std::optional<DiffForm> differential(int sym) const;
    void register_formal(int sym, DiffForm d) { formal_[sym] = std::move(d); }

  private:
    std::map<int, DiffForm> formal_;
};

// Exterior derivative: d(coefficient) expands via formal partials against
// every symbol's registered 1-form.
DiffForm ext_d(const DiffForm& a, const DifferentialRegistry& reg = {});

// Pullback onto formal solutions: every fiber differential is replaced by its
// total-derivative expansion dV -> Dx[V] dx + Dy[V] dy + Dt[V] dt.
DiffForm section(const DiffForm& a);

}  // namespace spintower
