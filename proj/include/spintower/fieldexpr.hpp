#pragma once
// Multivariate polynomials in jet symbols with coefficients in a pluggable
// exact algebra (ExactScalar, LieElement, Matrix2).

#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "spintower/scalar.hpp"
#include "spintower/symbols.hpp"

namespace spintower {

inline bool coeff_is_zero(const ExactScalar& c) { return c.is_zero(); }
inline ExactScalar scale(const ExactScalar& c, const ExactScalar& s) { return c * s; }
inline ExactScalar coeff_neg(const ExactScalar& c) { return -c; }
inline ExactScalar coeff_add(const ExactScalar& a, const ExactScalar& b) { return a + b; }
inline std::string coeff_str(const ExactScalar& c) { return c.str(); }

// Multiset of interned symbol ids, kept sorted. Ordered graded-lex.
struct Monomial {
    std::vector<int> syms;

    Monomial() = default;
    explicit Monomial(std::vector<int> s) : syms(std::move(s)) {
        std::sort(syms.begin(), syms.end());
    }
    Monomial(std::initializer_list<int> s) : syms(s) { std::sort(syms.begin(), syms.end()); }

    bool empty() const { return syms.empty(); }
    int degree() const { return static_cast<int>(syms.size()); }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        r.syms.resize(syms.size() + o.syms.size());
        std::merge(syms.begin(), syms.end(), o.syms.begin(), o.syms.end(), r.syms.begin());
        return r;
    }

    // Divides this by d; returns false if d is not a sub-multiset.
    bool divide(const Monomial& d, Monomial& quot) const {
        quot.syms.clear();
        size_t j = 0;
        for (int s : syms) {
            if (j < d.syms.size() && d.syms[j] == s) {
                ++j;
            } else if (j < d.syms.size() && d.syms[j] < s) {
                return false;
            } else {
                quot.syms.push_back(s);
            }
        }
        return j == d.syms.size();
    }

    int multiplicity(int sym) const {
        return static_cast<int>(std::count(syms.begin(), syms.end(), sym));
    }

    bool operator==(const Monomial& o) const { return syms == o.syms; }
    bool operator<(const Monomial& o) const {
        if (syms.size() != o.syms.size()) return syms.size() < o.syms.size();
        return syms < o.syms;
    }

    std::string str() const {
        if (syms.empty()) return "1";
        std::ostringstream os;
        for (size_t k = 0; k < syms.size();) {
            size_t j = k;
            while (j < syms.size() && syms[j] == syms[k]) ++j;
            if (k) os << "*";
            os << symtab().name(syms[k]);
            if (j - k > 1) os << "^" << (j - k);
            k = j;
        }
        return os.str();
    }
};

template <typename C>
class FieldExpr {
  public:
    using Terms = std::map<Monomial, C>;

    FieldExpr() = default;
    explicit FieldExpr(C c) { add_term(Monomial{}, std::move(c)); }
    FieldExpr(Monomial m, C c) { add_term(std::move(m), std::move(c)); }

    static FieldExpr symbol(int sym, C c) { return FieldExpr(Monomial({sym}), std::move(c)); }

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    void add_term(Monomial m, C c) {
        if (coeff_is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), std::move(c));
        } else {
            it->second = coeff_add(it->second, c);
            if (coeff_is_zero(it->second)) terms_.erase(it);
        }
    }

    FieldExpr operator+(const FieldExpr& o) const {
        FieldExpr r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    FieldExpr operator-() const {
        FieldExpr r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, coeff_neg(c));
        return r;
    }
    FieldExpr operator-(const FieldExpr& o) const { return *this + (-o); }
    FieldExpr& operator+=(const FieldExpr& o) { return *this = *this + o; }
    FieldExpr& operator-=(const FieldExpr& o) { return *this = *this - o; }

    bool operator==(const FieldExpr& o) const { return terms_ == o.terms_; }

    // Product with a scalar-coefficient polynomial (always defined; the
    // jet-symbol part is commutative, coefficients normalize coefficient-first).
    FieldExpr mul_scalar(const FieldExpr<ExactScalar>& s) const {
        FieldExpr r;
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : s.terms())
                r.add_term(m1 * m2, scale(c1, c2));
        return r;
    }
    FieldExpr scaled(const ExactScalar& s) const {
        FieldExpr r;
        for (const auto& [m, c] : terms_) r.add_term(m, scale(c, s));
        return r;
    }

    // Ring product; requires C to be multiplicative.
    template <typename D = C>
    FieldExpr operator*(const FieldExpr& o) const
        requires requires(D a, D b) { a * b; }
    {
        FieldExpr r;
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
        return r;
    }

    // Formal partial derivative; all other jet symbols independent.
    FieldExpr differentiate(int sym) const {
        if (symtab().is_dmark(sym))
            throw std::invalid_argument("cannot differentiate with respect to a D-marked symbol");
        FieldExpr r;
        for (const auto& [m, c] : terms_) {
            int mult = m.multiplicity(sym);
            if (mult == 0) continue;
            Monomial q;
            m.divide(Monomial({sym}), q);
            r.add_term(std::move(q), scale(c, ExactScalar(mult)));
        }
        return r;
    }

    // Simultaneous substitution of jet symbols by scalar-coefficient
    // polynomials, then canonicalization.
    FieldExpr substitute(const std::map<int, FieldExpr<ExactScalar>>& bindings) const {
        FieldExpr r;
        for (const auto& [m, c] : terms_) {
            FieldExpr acc(Monomial{}, c);
            FieldExpr<ExactScalar> factor(ExactScalar::one());
            Monomial rest;
            for (int s : m.syms) {
                auto it = bindings.find(s);
                if (it == bindings.end()) rest.syms.push_back(s);
                else factor = factor * it->second;
            }
            acc = FieldExpr(std::move(rest), c).mul_scalar(factor);
            r += acc;
        }
        return r;
    }

    // Total derivative along a base coordinate (first- to second-order jets).
    FieldExpr total_derivative(Coord dir) const {
        FieldExpr r;
        for (const auto& [m, c] : terms_) {
            for (size_t k = 0; k < m.syms.size(); ++k) {
                if (k > 0 && m.syms[k] == m.syms[k - 1]) continue;  // handled via multiplicity
                int sym = m.syms[k];
                int target = symtab().total_derivative_target(sym, dir);
                if (target < 0)
                    throw std::invalid_argument("total derivative leaves the jet table at symbol " +
                                                symtab().name(sym));
                int mult = m.multiplicity(sym);
                Monomial q;
                m.divide(Monomial({sym}), q);
                r.add_term(q * Monomial({target}), scale(c, ExactScalar(mult)));
            }
        }
        return r;
    }

    // Numeric evaluation; jet symbols are looked up in `vals`.
    template <typename V>
    V eval_monomials(const std::function<double(int)>& vals,
                     const std::function<V(const C&)>& coeff_value) const {
        V acc{};
        for (const auto& [m, c] : terms_) {
            double mv = 1.0;
            for (int s : m.syms) mv *= vals(s);
            acc += coeff_value(c) * mv;
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            std::string cs = coeff_str(c);
            bool composite = cs.find_first_of("+-", 1) != std::string::npos || cs[0] == '-';
            if (m.empty()) {
                os << (composite ? "(" + cs + ")" : cs);
            } else if (cs == "1") {
                os << m.str();
            } else {
                os << (composite ? "(" + cs + ")" : cs) << "*" << m.str();
            }
        }
        return os.str();
    }

  private:
    Terms terms_;
};

using ScalarExpr = FieldExpr<ExactScalar>;

inline ScalarExpr sym_expr(int sym) { return ScalarExpr::symbol(sym, ExactScalar::one()); }

}  // namespace spintower
