#include "spintower/diffform.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spintower {

std::string FormBasis::name(int id) {
    switch (id) {
        case dx: return "dx";
        case dy: return "dy";
        case dt: return "dt";
    }
    if (id >= 3 && id <= 5) return "dS" + std::to_string(id - 2);
    if (id >= 6 && id <= 8) return "dS" + std::to_string(id - 5) + "x";
    if (id >= 9 && id <= 11) return "dS" + std::to_string(id - 8) + "y";
    return "dxi" + std::to_string(id - 11);
}

int FormBasis::fiber_symbol(int id) {
    auto& t = symtab();
    if (id >= 3 && id <= 5) return t.S(id - 2);
    if (id >= 6 && id <= 8) return t.Sx(id - 5);
    if (id >= 9 && id <= 11) return t.Sy(id - 8);
    if (id >= 12) return t.xi(id - 11);
    return -1;
}

DiffForm DiffForm::basis(std::initializer_list<int> ids, ScalarExpr coeff) {
    std::vector<int> t(ids);
    // normalize the tuple, tracking the permutation sign
    int sign = 1;
    for (size_t i = 1; i < t.size(); ++i)
        for (size_t j = i; j > 0 && t[j] < t[j - 1]; --j) {
            std::swap(t[j], t[j - 1]);
            sign = -sign;
        }
    for (size_t i = 1; i < t.size(); ++i)
        if (t[i] == t[i - 1]) return DiffForm(static_cast<int>(t.size()));
    DiffForm f(static_cast<int>(t.size()));
    f.add_term(std::move(t), sign == 1 ? std::move(coeff) : (-coeff));
    return f;
}

void DiffForm::add_term(Tuple t, ScalarExpr coeff) {
    if (coeff.is_zero()) return;
    if (static_cast<int>(t.size()) != degree_)
        throw std::invalid_argument("term degree mismatch in DiffForm");
    auto it = terms_.find(t);
    if (it == terms_.end()) {
        terms_.emplace(std::move(t), std::move(coeff));
    } else {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

DiffForm DiffForm::operator+(const DiffForm& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (degree_ != o.degree_) throw std::invalid_argument("degree mismatch in form sum");
    DiffForm r = *this;
    for (const auto& [t, c] : o.terms_) r.add_term(t, c);
    return r;
}

DiffForm DiffForm::negated() const {
    DiffForm r(degree_);
    for (const auto& [t, c] : terms_) r.terms_.emplace(t, -c);
    return r;
}

DiffForm DiffForm::scaled(const ExactScalar& s) const {
    DiffForm r(degree_);
    for (const auto& [t, c] : terms_) r.add_term(t, c.mul_scalar(ScalarExpr(s)));
    return r;
}

DiffForm DiffForm::mul_scalar(const ScalarExpr& p) const {
    DiffForm r(degree_);
    for (const auto& [t, c] : terms_) r.add_term(t, c * p);
    return r;
}

std::string DiffForm::str() const {
    if (terms_.empty()) return "0\n";
    std::ostringstream os;
    for (const auto& [t, c] : terms_) {
        os << c.str() << " * ";
        if (t.empty()) os << "1";
        for (size_t i = 0; i < t.size(); ++i) os << (i ? "^" : "") << FormBasis::name(t[i]);
        os << "\n";
    }
    return os.str();
}

int merge_basis_tuples(const DiffForm::Tuple& a, const DiffForm::Tuple& b, DiffForm::Tuple& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    int sign = 1;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            if ((a.size() - i) % 2 == 1) sign = -sign;
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return sign;
}

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
    int deg = a.degree() + b.degree();
    if (deg > kMaxFormDegree) throw std::invalid_argument("wedge exceeds maximum form degree");
    DiffForm r(deg);
    DiffForm::Tuple merged;
    for (const auto& [ta, ca] : a.terms())
        for (const auto& [tb, cb] : b.terms()) {
            int sign = merge_basis_tuples(ta, tb, merged);
            if (sign == 0) continue;
            ScalarExpr c = ca * cb;
            r.add_term(merged, sign == 1 ? std::move(c) : -c);
        }
    return r;
}

std::optional<DiffForm> DifferentialRegistry::differential(int sym) const {
    auto it = formal_.find(sym);
    if (it != formal_.end()) return it->second;
    const auto& si = symtab().info(sym);
    switch (si.kind) {
        case SymKind::Coord:
            return DiffForm::basis({si.index});
        case SymKind::S:
            return DiffForm::basis({FormBasis::dS(si.index)});
        case SymKind::Sx:
            return DiffForm::basis({FormBasis::dSx(si.index)});
        case SymKind::Sy:
            return DiffForm::basis({FormBasis::dSy(si.index)});
        case SymKind::Xi:
            return DiffForm::basis({FormBasis::dxi(si.index)});
        case SymKind::Formal:
            return std::nullopt;  // constant unless registered
        default:
            throw std::invalid_argument("no basis differential for symbol " + si.name);
    }
}

DiffForm ext_d(const DiffForm& a, const DifferentialRegistry& reg) {
    DiffForm r(a.degree() + 1);
    for (const auto& [t, c] : a.terms()) {
        // symbols occurring in the coefficient
        std::set<int> syms;
        for (const auto& [m, cc] : c.terms())
            for (int s : m.syms) syms.insert(s);
        DiffForm base(static_cast<int>(t.size()));
        base.add_term(t, ScalarExpr(ExactScalar::one()));
        for (int s : syms) {
            auto ds = reg.differential(s);
            if (!ds) continue;
            ScalarExpr partial = c.differentiate(s);
            if (partial.is_zero()) continue;
            r += wedge(ds->mul_scalar(partial), base);
        }
    }
    return r;
}

DiffForm section(const DiffForm& a) {
    auto& tab = symtab();
    DiffForm r(a.degree());
    for (const auto& [t, c] : a.terms()) {
        DiffForm acc = DiffForm(ScalarExpr(ExactScalar::one()));
        for (int id : t) {
            DiffForm factor;
            if (FormBasis::is_base(id)) {
                factor = DiffForm::basis({id});
            } else {
                int sym = FormBasis::fiber_symbol(id);
                factor = DiffForm(1);
                for (int ci = 0; ci < 3; ++ci) {
                    Coord co = static_cast<Coord>(ci);
                    factor += DiffForm::basis({ci}, sym_expr(tab.dmark(co, sym)));
                }
            }
            acc = wedge(acc, factor);
            if (acc.is_zero()) break;
        }
        if (acc.is_zero()) continue;
        r += acc.mul_scalar(c);
    }
    return r;
}

}  // namespace spintower
