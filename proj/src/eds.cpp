#include "spintower/eds.hpp"

#include <algorithm>
#include <sstream>

#include "spintower/symbols.hpp"

namespace spintower {

namespace {

bool tuple_contains(const DiffForm::Tuple& t, const DiffForm::Tuple& sub, DiffForm::Tuple& rest) {
    rest.clear();
    size_t i = 0;
    for (int id : t) {
        if (i < sub.size() && sub[i] == id) {
            ++i;
        } else {
            rest.push_back(id);
        }
    }
    return i == sub.size();
}

}  // namespace

RewriteRule make_rule(const std::string& origin, const DiffForm& g, DiffForm::Tuple lead) {
    std::sort(lead.begin(), lead.end());
    auto it = g.terms().find(lead);
    if (it == g.terms().end())
        throw EdsError("rule lead tuple absent from generator " + origin);
    const ScalarExpr& c = it->second;
    if (c.terms().size() != 1)
        throw EdsError("rule lead coefficient is not a single monomial in " + origin);
    const auto& [mono, coeff] = *c.terms().begin();
    if (!coeff.is_monomial())
        throw EdsError("rule lead coefficient is not invertible in " + origin);

    RewriteRule r;
    r.origin = origin;
    r.lead = std::move(lead);
    r.divisor = mono;
    r.lead_coeff = coeff;
    r.rest = DiffForm(g.degree());
    for (const auto& [t, cc] : g.terms())
        if (t != r.lead) r.rest.add_term(t, cc);
    return r;
}

EdsIdeal build_eds(const ModelParams& p) {
    p.validate();
    auto& tab = symtab();
    EdsIdeal ideal;
    ideal.params = p;
    using FB = FormBasis;

    for (int i = 1; i <= 3; ++i) {
        DiffForm th1 = DiffForm::basis({FB::dS(i), FB::dy, FB::dt}) +
                       DiffForm::basis({FB::dx, FB::dy, FB::dt},
                                       ScalarExpr(Monomial({tab.Sx(i)}), -ExactScalar::one()));
        ideal.generators.push_back({"theta1_" + std::to_string(i), std::move(th1)});
    }
    for (int i = 1; i <= 3; ++i) {
        DiffForm th2 = DiffForm::basis({FB::dS(i), FB::dx, FB::dt}) +
                       DiffForm::basis({FB::dx, FB::dy, FB::dt},
                                       ScalarExpr(Monomial({tab.Sy(i)}), ExactScalar::one()));
        ideal.generators.push_back({"theta2_" + std::to_string(i), std::move(th2)});
    }
    for (int i = 1; i <= 3; ++i) {
        DiffForm th3 = DiffForm::basis({FB::dS(i), FB::dx, FB::dy}, ScalarExpr(-p.coupling(i)));
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) {
                int e = eps3(i, j, k);
                if (e == 0) continue;
                ScalarExpr sj(Monomial({tab.S(j)}), ExactScalar(static_cast<long>(e)));
                th3 += DiffForm::basis({FB::dSx(k), FB::dy, FB::dt}, sj);
                th3 += DiffForm::basis({FB::dSy(k), FB::dx, FB::dt}, -sj);
            }
        ideal.generators.push_back({"theta3_" + std::to_string(i), std::move(th3)});
    }
    DiffForm b1(3), b2(3);
    for (int k = 1; k <= 3; ++k) {
        const ExactScalar g = p.coupling(k);
        b1 += DiffForm::basis({FB::dS(k), FB::dy, FB::dt},
                              ScalarExpr(Monomial({tab.Sx(k)}), g));
        b1 += DiffForm::basis({FB::dSx(k), FB::dy, FB::dt},
                              ScalarExpr(Monomial({tab.S(k)}), g));
        b2 += DiffForm::basis({FB::dS(k), FB::dx, FB::dt},
                              ScalarExpr(Monomial({tab.Sy(k)}), g));
        b2 += DiffForm::basis({FB::dSy(k), FB::dx, FB::dt},
                              ScalarExpr(Monomial({tab.S(k)}), g));
    }
    ideal.generators.push_back({"beta1", std::move(b1)});
    ideal.generators.push_back({"beta2", std::move(b2)});

    for (const auto& gen : ideal.generators) {
        DiffForm::Tuple lead;
        if (gen.name.rfind("theta1_", 0) == 0) {
            lead = {FB::dS(gen.name.back() - '0'), FB::dy, FB::dt};
        } else if (gen.name.rfind("theta2_", 0) == 0) {
            lead = {FB::dS(gen.name.back() - '0'), FB::dx, FB::dt};
        } else if (gen.name.rfind("theta3_", 0) == 0) {
            lead = {FB::dS(gen.name.back() - '0'), FB::dx, FB::dy};
        } else if (gen.name == "beta1") {
            lead = {FB::dSx(3), FB::dy, FB::dt};
        } else {
            lead = {FB::dSy(3), FB::dx, FB::dt};
        }
        ideal.rules.push_back(make_rule(gen.name, gen.form, std::move(lead)));
    }
    return ideal;
}

DiffForm reduce_mod_ideal(DiffForm f, const std::vector<RewriteRule>& rules,
                          std::vector<std::string>* trace) {
    std::vector<std::string> local_trace;
    DiffForm::Tuple rest_tuple, merged;
    for (int pass = 0; pass < 2000; ++pass) {
        bool changed = false;
        for (const auto& [t, c] : f.terms()) {
            for (const auto& rule : rules) {
                if (!tuple_contains(t, rule.lead, rest_tuple)) continue;
                // sign with e_t = sigma * e_lead ^ e_rest
                int sigma = merge_basis_tuples(rule.lead, rest_tuple, merged);
                ScalarExpr replaced;  // monomials of c divisible by the rule divisor
                ScalarExpr quotients;
                for (const auto& [m, coeff] : c.terms()) {
                    Monomial q;
                    if (!m.divide(rule.divisor, q)) continue;
                    replaced.add_term(m, coeff);
                    quotients.add_term(std::move(q), coeff);
                }
                if (replaced.is_zero()) continue;

                std::ostringstream os;
                os << rule.origin << " at ";
                for (size_t k = 0; k < t.size(); ++k) os << (k ? "^" : "") << FormBasis::name(t[k]);
                local_trace.push_back(os.str());

                DiffForm rest_form(static_cast<int>(rest_tuple.size()));
                rest_form.add_term(rest_tuple, ScalarExpr(ExactScalar::one()));
                // c_m * m * e_t == -(sigma / lead_coeff) * q * c_m * (rest ^ e_rest)
                ExactScalar factor = -rule.lead_coeff.inverse() * ExactScalar(static_cast<long>(sigma));
                DiffForm removed(f.degree());
                removed.add_term(t, -replaced);
                DiffForm replacement = wedge(rule.rest, rest_form).mul_scalar(quotients.scaled(factor));
                // mutate f last: `t` and `c` reference nodes of the old map
                f += removed;
                f += replacement;
                changed = true;
                break;
            }
            if (changed) break;  // terms_ invalidated; rescan
        }
        if (!changed) {
            if (trace) *trace = std::move(local_trace);
            return f;
        }
    }
    std::ostringstream os;
    os << "ideal reduction did not reach a fixpoint; last steps:";
    size_t start = local_trace.size() > 20 ? local_trace.size() - 20 : 0;
    for (size_t k = start; k < local_trace.size(); ++k) os << "\n  " << local_trace[k];
    throw EdsError(os.str());
}

std::map<int, ScalarExpr> pde_bindings(const ModelParams& p) {
    p.validate();
    auto& tab = symtab();
    std::map<int, ScalarExpr> b;
    for (int i = 1; i <= 3; ++i) {
        b[tab.dmark(Coord::X, tab.S(i))] = sym_expr(tab.Sx(i));
        b[tab.dmark(Coord::Y, tab.S(i))] = sym_expr(tab.Sy(i));
        // evolution law, inverted through the diagonal coupling
        ScalarExpr rhs;
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) {
                int e = eps3(i, j, k);
                if (e == 0) continue;
                ExactScalar c = p.coupling(i) * ExactScalar(static_cast<long>(e));
                rhs.add_term(Monomial({tab.S(j), tab.Sxx(k)}), c);
                rhs.add_term(Monomial({tab.S(j), tab.Syy(k)}), c);
            }
        b[tab.dmark(Coord::T, tab.S(i))] = std::move(rhs);

        b[tab.dmark(Coord::X, tab.Sx(i))] = sym_expr(tab.Sxx(i));
        b[tab.dmark(Coord::Y, tab.Sx(i))] = sym_expr(tab.Sxy(i));
        b[tab.dmark(Coord::T, tab.Sx(i))] = sym_expr(tab.Sxt(i));
        b[tab.dmark(Coord::X, tab.Sy(i))] = sym_expr(tab.Sxy(i));
        b[tab.dmark(Coord::Y, tab.Sy(i))] = sym_expr(tab.Syy(i));
        b[tab.dmark(Coord::T, tab.Sy(i))] = sym_expr(tab.Syt(i));
    }
    return b;
}

std::vector<ScalarExpr> constraint_polys(const ModelParams& p) {
    p.validate();
    auto& tab = symtab();
    ScalarExpr cx;  // half the x-derivative of coupling(S, S)
    for (int k = 1; k <= 3; ++k)
        cx.add_term(Monomial({tab.S(k), tab.Sx(k)}), p.coupling(k));
    ScalarExpr cy;
    for (int k = 1; k <= 3; ++k)
        cy.add_term(Monomial({tab.S(k), tab.Sy(k)}), p.coupling(k));
    return {cx.total_derivative(Coord::X), cy.total_derivative(Coord::Y)};
}

ScalarExpr reduce_poly(ScalarExpr p, const std::vector<ScalarExpr>& relations) {
    struct PolyRule {
        Monomial lead;
        ExactScalar lc;
        ScalarExpr rel;
    };
    std::vector<PolyRule> rules;
    for (const auto& rel : relations) {
        if (rel.is_zero()) continue;
        const auto& [lead, lc] = *rel.terms().rbegin();
        if (!lc.is_monomial())
            throw EdsError("constraint leading coefficient is not invertible");
        rules.push_back({lead, lc, rel});
    }
    for (int guard = 0; guard < 100000; ++guard) {
        bool changed = false;
        for (const auto& rule : rules) {
            for (const auto& [m, c] : p.terms()) {
                Monomial q;
                if (!m.divide(rule.lead, q)) continue;
                p -= rule.rel * ScalarExpr(std::move(q), c * rule.lc.inverse());
                changed = true;
                break;
            }
            if (changed) break;
        }
        if (!changed) return p;
    }
    throw EdsError("polynomial reduction did not terminate");
}

ScalarExpr sectioned_equation(const DiffForm& g) {
    DiffForm s = section(g);
    auto it = s.terms().find(DiffForm::Tuple{FormBasis::dx, FormBasis::dy, FormBasis::dt});
    return it == s.terms().end() ? ScalarExpr() : it->second;
}

bool EdsReport::pass() const {
    for (const auto& e : entries)
        if (!e.pass()) return false;
    return true;
}

std::string EdsReport::str() const {
    std::ostringstream os;
    for (const auto& e : entries) {
        os << e.name << ": sectioned = " << e.equation.str()
           << "; on-shell residual = " << e.on_shell_residual.str()
           << "; closure " << (e.closure_zero ? "exact" : "BROKEN")
           << (e.pass() ? " [ok]" : " [FAIL]") << "\n";
    }
    return os.str();
}

EdsReport verify_eds_closed(const EdsIdeal& ideal) {
    const auto bindings = pde_bindings(ideal.params);
    const auto constraints = constraint_polys(ideal.params);
    EdsReport report;
    for (const auto& gen : ideal.generators) {
        EdsCheckEntry e;
        e.name = gen.name;
        e.equation = sectioned_equation(gen.form);
        e.on_shell_residual = reduce_poly(e.equation.substitute(bindings), constraints);
        e.closure_zero = section(ext_d(gen.form)).is_zero();
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace spintower
