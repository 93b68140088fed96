#pragma once
// Closed exterior differential system encoding the planar anisotropic spin
// evolution, plus the rewrite machinery used to reduce forms modulo it.

#include <map>
#include <string>
#include <vector>

#include "spintower/diffform.hpp"
#include "spintower/params.hpp"

namespace spintower {

struct EdsError : std::runtime_error {
    explicit EdsError(const std::string& w) : std::runtime_error(w) {}
};

struct EdsGenerator {
    std::string name;
    DiffForm form;
};

// One directed rewrite: lead_coeff * divisor * e_lead == -rest (mod ideal).
// A term whose basis tuple contains `lead` and whose monomial is divisible by
// `divisor` is replaced accordingly.
struct RewriteRule {
    std::string origin;
    DiffForm::Tuple lead;
    Monomial divisor;
    ExactScalar lead_coeff;
    DiffForm rest;
};

// Extracts the rule for generator g with the given lead tuple. The term at
// `lead` must be a single monomial with an invertible coefficient.
RewriteRule make_rule(const std::string& origin, const DiffForm& g, DiffForm::Tuple lead);

class EdsIdeal {
  public:
    ModelParams params;
    std::vector<EdsGenerator> generators;
    std::vector<RewriteRule> rules;
};

// The eleven generators: three mass-shell 3-forms per direction pair, the
// torsion 3-forms carrying the evolution law, and the two differentiated
// length-constraint 3-forms.
EdsIdeal build_eds(const ModelParams& p);

// Fixpoint reduction; throws EdsError (with the application trace) if the
// rule set cycles.
DiffForm reduce_mod_ideal(DiffForm f, const std::vector<RewriteRule>& rules,
                          std::vector<std::string>* trace = nullptr);

// On-shell bindings for the total-derivative markers produced by section():
// first jets, second jets, and the evolution law for D_t S_i.
std::map<int, ScalarExpr> pde_bindings(const ModelParams& p);

// Derived consequences of the pointwise length constraint: the x- and
// y-derivatives of coupling(S,S) (one order, then another).
std::vector<ScalarExpr> constraint_polys(const ModelParams& p);

// Multivariate reduction of p modulo the relation polynomials (graded-lex
// leading-term rewriting, run to a fixpoint).
ScalarExpr reduce_poly(ScalarExpr p, const std::vector<ScalarExpr>& relations);

// Coefficient of dx^dy^dt in the sectioned generator: the scalar equation the
// generator encodes, written over total-derivative markers.
ScalarExpr sectioned_equation(const DiffForm& g);

struct EdsCheckEntry {
    std::string name;
    ScalarExpr equation;          // sectioned equation on derivative markers
    ScalarExpr on_shell_residual; // after bindings and constraint reduction
    bool closure_zero = false;    // section(d g) vanishes identically
    bool pass() const { return on_shell_residual.is_zero() && closure_zero; }
};

struct EdsReport {
    std::vector<EdsCheckEntry> entries;
    bool pass() const;
    std::string str() const;
};

EdsReport verify_eds_closed(const EdsIdeal& ideal);

}  // namespace spintower
