#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spintower/diffform.hpp"
#include "spintower/symbols.hpp"

using namespace spintower;
using FB = FormBasis;

namespace {
ScalarExpr S(int i) { return sym_expr(symtab().S(i)); }
ScalarExpr Sx(int i) { return sym_expr(symtab().Sx(i)); }
}  // namespace

TEST_CASE("polynomial partials commute (mixed-partial symmetry)") {
    ScalarExpr p = S(1) * S(1) * Sx(2) + S(3) * Sx(2) * Sx(2);
    int a = symtab().S(1), b = symtab().Sx(2);
    CHECK(p.differentiate(a).differentiate(b) == p.differentiate(b).differentiate(a));
}

TEST_CASE("partial derivative satisfies the product rule") {
    ScalarExpr p = S(1) * Sx(2) + S(3);
    ScalarExpr q = S(2) * S(2) - Sx(1);
    int v = symtab().S(2);
    CHECK((p * q).differentiate(v) ==
          p.differentiate(v) * q + p * q.differentiate(v));
}

TEST_CASE("total derivatives along x and y commute on jets of order <= 1") {
    // order <= 1 so both iterated derivatives stay inside the jet table
    ScalarExpr p = S(1) * S(2) + S(3) * S(3);
    CHECK(p.total_derivative(Coord::X).total_derivative(Coord::Y) ==
          p.total_derivative(Coord::Y).total_derivative(Coord::X));
}

TEST_CASE("wedge is graded anticommutative") {
    DiffForm a = DiffForm::basis({FB::dS(1)}, S(2)) + DiffForm::basis({FB::dx}, Sx(1));
    DiffForm b = DiffForm::basis({FB::dSx(2)}) + DiffForm::basis({FB::dy}, S(3));
    CHECK(wedge(a, b) == wedge(b, a).negated());  // both degree 1
    DiffForm ab = wedge(a, b);
    CHECK(wedge(ab, b) == wedge(b, ab));  // even-degree factor commutes
    CHECK(wedge(a, a).is_zero());
}

TEST_CASE("wedge is associative") {
    DiffForm a = DiffForm::basis({FB::dS(1)}, S(2));
    DiffForm b = DiffForm::basis({FB::dx}) + DiffForm::basis({FB::dSx(3)}, S(1));
    DiffForm c = DiffForm::basis({FB::dy, FB::dt}, Sx(2));
    CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
}

TEST_CASE("exterior derivative is nilpotent") {
    DiffForm a = DiffForm::basis({FB::dS(1)}, S(2) * Sx(3)) +
                 DiffForm::basis({FB::dx}, S(1) * S(1) * S(2));
    CHECK(ext_d(ext_d(a)).is_zero());
    DiffForm f(S(1) * Sx(2) * Sx(2) + S(3));  // 0-form
    CHECK(ext_d(ext_d(f)).is_zero());
}

TEST_CASE("exterior derivative satisfies the graded Leibniz rule") {
    DiffForm a = DiffForm::basis({FB::dS(1)}, S(2));            // degree 1
    DiffForm b = DiffForm::basis({FB::dx, FB::dSx(2)}, Sx(3));  // degree 2
    DiffForm lhs = ext_d(wedge(a, b));
    DiffForm rhs = wedge(ext_d(a), b) - wedge(a, ext_d(b));  // (-1)^deg(a) = -1
    CHECK(lhs == rhs);
}

TEST_CASE("section is a wedge homomorphism") {
    DiffForm a = DiffForm::basis({FB::dS(1)}, S(2)) + DiffForm::basis({FB::dx}, Sx(1));
    DiffForm b = DiffForm::basis({FB::dSx(2)}, S(3)) + DiffForm::basis({FB::dy});
    CHECK(section(wedge(a, b)) == wedge(section(a), section(b)));
}

TEST_CASE("section replaces fiber differentials by derivative markers") {
    DiffForm a = DiffForm::basis({FB::dS(2)});
    DiffForm s = section(a);
    auto& tab = symtab();
    DiffForm expect = DiffForm::basis({FB::dx}, sym_expr(tab.dmark(Coord::X, tab.S(2)))) +
                      DiffForm::basis({FB::dy}, sym_expr(tab.dmark(Coord::Y, tab.S(2)))) +
                      DiffForm::basis({FB::dt}, sym_expr(tab.dmark(Coord::T, tab.S(2))));
    CHECK(s == expect);
}

TEST_CASE("registered formal differentials feed the exterior derivative") {
    int h = symtab().formal("h_atom");
    DifferentialRegistry reg;
    reg.register_formal(h, DiffForm::basis({FB::dS(1)}, S(1)));  // d h = S1 dS1
    DiffForm f(sym_expr(h));
    CHECK(ext_d(f, reg) == DiffForm::basis({FB::dS(1)}, S(1)));
    // unregistered formal atoms behave as constants
    int g = symtab().formal("g_atom");
    CHECK(ext_d(DiffForm(sym_expr(g))).is_zero());
}
