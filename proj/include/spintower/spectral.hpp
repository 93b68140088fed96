#pragma once
// Matrix realizations of the closed towers: the su(2)-valued instantiation,
// the fundamental-constraint residual, the linear connection problem, and the
// exported spectral system.

#include <string>
#include <vector>

#include "spintower/prolong.hpp"

namespace spintower {

struct SpectralError : std::runtime_error {
    explicit SpectralError(const std::string& w) : std::runtime_error(w) {}
};

using MatExpr = FieldExpr<Matrix2>;

// The 2x2 realization of each closed reduction: the surviving triple maps to
// lambda * sigma_k, the named brackets to their commutators, the eliminated
// generators to zero.
MatrixRep pauli_rep(Reduction which);

// Substitutes rep into the Lie-valued tower data; throws SpectralError naming
// any generator without an image.
MatExpr instantiate_tower_field(const LieExpr& f, const MatrixRep& rep);

struct TowerMatrices {
    MatExpr H, F, G;
};
TowerMatrices instantiate_tower(const Tower& t, const MatrixRep& rep);

enum class BracketConvention { GF, FG };

struct FundamentalCheck {
    MatExpr linear_part;      // F_S.S_x - G_S.S_y
    MatExpr commutator_part;  // [G,F] (or [F,G])
    MatExpr residual;         // sum of the two; reported, not asserted zero
};

FundamentalCheck verify_fundamental_constraint(const MatExpr& H, const MatExpr& F,
                                               const MatExpr& G,
                                               BracketConvention conv = BracketConvention::GF);

// Solves H = Gamma1 B - Gamma2 A, F = Gamma2 - Gamma3 B, G = Gamma1 - Gamma3 A
// for scalar A = aI, B = bI, C = I. Gamma3 is a free gauge; the family is
// Gamma1 = G + a Gamma3, Gamma2 = F + b Gamma3, and it exists iff the
// obstruction H - b G + a F vanishes.
struct ConnectionSolve {
    bool feasible = false;
    MatExpr obstruction;      // H - b G + a F
    MatExpr gamma1, gamma2;   // the Gamma3 = 0 representative
    ExactScalar a, b;
};

ConnectionSolve solve_connection(const MatExpr& H, const MatExpr& F, const MatExpr& G,
                                 const ExactScalar& a, const ExactScalar& b);

// Linear system xi_c = -Gamma_c xi (or +Gamma_c xi) together with the three
// cross-derivative compatibility residuals
// D_c2 Gamma_c1 - D_c1 Gamma_c2 -+ [Gamma_c1, Gamma_c2].
struct SpectralProblem {
    bool minus_convention = true;
    MatExpr gamma[3];   // indexed by Coord
    MatExpr compat[3];  // pairs (x,y), (x,t), (y,t)
    std::string str() const;
};

SpectralProblem export_spectral_problem(const MatExpr& g1, const MatExpr& g2, const MatExpr& g3,
                                        bool minus_convention = true);

}  // namespace spintower
