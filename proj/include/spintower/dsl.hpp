#pragma once
// Text form of bracket tables, substitutions and relations:
//   [X1, X4] = X6
//   X12 = 2*i*lambda*X3
//   [X3, X12] = [X4, X11] - [X5, X10]
// with '#' line comments and exact scalar coefficients.

#include <string>
#include <vector>

#include "spintower/liealg.hpp"

namespace spintower {

struct DslError : std::runtime_error {
    int line, col;
    DslError(int l, int c, const std::string& what)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " +
                             what),
          line(l),
          col(c) {}
};

struct RelationAst {
    enum class Kind { BracketDef, Substitution, Relation };
    Kind kind = Kind::Relation;
    int i = 0, j = 0;  // BracketDef pair
    int k = 0;         // Substitution target
    LieElement lhs, rhs;

    std::string print() const;
    bool operator==(const RelationAst& o) const;
};

// One statement per line; empty lines and comments skipped.
std::vector<RelationAst> parse_algebra_dsl(const std::string& text);

std::string print_statements(const std::vector<RelationAst>& stmts);

}  // namespace spintower
