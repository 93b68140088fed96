#include "spintower/spectral.hpp"

#include <sstream>

namespace spintower {

MatrixRep pauli_rep(Reduction which) {
    const int r = which == Reduction::I ? 3 : which == Reduction::II ? 2 : 1;
    auto reg = bracket_name_registry(ModelParams{1});  // names do not depend on the coupling
    MatrixRep rep;
    const ExactScalar lam = ExactScalar::lambda(1);
    rep[r] = Matrix2::sigma(1).scaled(lam);
    rep[4] = Matrix2::sigma(2).scaled(lam);
    rep[5] = Matrix2::sigma(3).scaled(lam);
    rep[reg.at({r, 4})] = commutator(rep[r], rep[4]);
    rep[reg.at({r, 5})] = commutator(rep[r], rep[5]);
    rep[reg.at({4, 5})] = commutator(rep[4], rep[5]);
    for (int e = 1; e <= 3; ++e)
        if (e != r) rep[e] = Matrix2::zero();
    return rep;
}

MatExpr instantiate_tower_field(const LieExpr& f, const MatrixRep& rep) {
    MatExpr r;
    for (const auto& [m, c] : f.terms()) {
        try {
            r.add_term(m, rep_image(rep, c));
        } catch (const LieError& e) {
            throw SpectralError(std::string("tower instantiation failed: ") + e.what());
        }
    }
    return r;
}

TowerMatrices instantiate_tower(const Tower& t, const MatrixRep& rep) {
    return {instantiate_tower_field(t.H, rep), instantiate_tower_field(t.F, rep),
            instantiate_tower_field(t.G, rep)};
}

FundamentalCheck verify_fundamental_constraint(const MatExpr& H, const MatExpr& F,
                                               const MatExpr& G, BracketConvention conv) {
    (void)H;  // enters through the solved derivative conditions, not directly
    auto& st = symtab();
    FundamentalCheck fc;
    for (int l = 1; l <= 3; ++l) {
        fc.linear_part += F.differentiate(st.S(l)).mul_scalar(sym_expr(st.Sx(l)));
        fc.linear_part -= G.differentiate(st.S(l)).mul_scalar(sym_expr(st.Sy(l)));
    }
    fc.commutator_part = conv == BracketConvention::GF ? G * F - F * G : F * G - G * F;
    fc.residual = fc.linear_part + fc.commutator_part;
    return fc;
}

ConnectionSolve solve_connection(const MatExpr& H, const MatExpr& F, const MatExpr& G,
                                 const ExactScalar& a, const ExactScalar& b) {
    ConnectionSolve s;
    s.a = a;
    s.b = b;
    s.gamma1 = G;
    s.gamma2 = F;
    s.obstruction = H - G.scaled(b) + F.scaled(a);
    s.feasible = s.obstruction.is_zero();
    return s;
}

SpectralProblem export_spectral_problem(const MatExpr& g1, const MatExpr& g2, const MatExpr& g3,
                                        bool minus_convention) {
    SpectralProblem sp;
    sp.minus_convention = minus_convention;
    sp.gamma[0] = g1;
    sp.gamma[1] = g2;
    sp.gamma[2] = g3;
    const ExactScalar sgn = minus_convention ? -ExactScalar::one() : ExactScalar::one();
    const std::pair<int, int> pairs[3] = {{0, 1}, {0, 2}, {1, 2}};
    for (int k = 0; k < 3; ++k) {
        auto [c1, c2] = pairs[k];
        MatExpr comm = sp.gamma[c1] * sp.gamma[c2] - sp.gamma[c2] * sp.gamma[c1];
        sp.compat[k] = sp.gamma[c1].total_derivative(static_cast<Coord>(c2)) -
                       sp.gamma[c2].total_derivative(static_cast<Coord>(c1)) + comm.scaled(sgn);
    }
    return sp;
}

std::string SpectralProblem::str() const {
    static const char* cn[3] = {"x", "y", "t"};
    std::ostringstream os;
    const char* sgn = minus_convention ? "-" : "+";
    for (int c = 0; c < 3; ++c)
        os << "xi_" << cn[c] << " = " << sgn << "Gamma_" << cn[c] << " xi\n";
    for (int c = 0; c < 3; ++c) os << "Gamma_" << cn[c] << " = " << gamma[c].str() << "\n";
    const std::pair<int, int> pairs[3] = {{0, 1}, {0, 2}, {1, 2}};
    for (int k = 0; k < 3; ++k) {
        auto [c1, c2] = pairs[k];
        os << "compat(" << cn[c1] << "," << cn[c2] << "): D_" << cn[c2] << " Gamma_" << cn[c1]
           << " - D_" << cn[c1] << " Gamma_" << cn[c2] << " " << (minus_convention ? "-" : "+")
           << " [Gamma_" << cn[c1] << ",Gamma_" << cn[c2] << "] = " << compat[k].str() << "\n";
    }
    return os.str();
}

}  // namespace spintower
