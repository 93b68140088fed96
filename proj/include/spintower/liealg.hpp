#pragma once
// Open Lie algebra workbench: partial bracket tables, Jacobi-driven closure,
// closing quotients, and matrix-representation checks.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spintower/matrix2.hpp"
#include "spintower/scalar.hpp"

namespace spintower {

struct LieError : std::runtime_error {
    explicit LieError(const std::string& w) : std::runtime_error(w) {}
};

// Interning pool for bracket terms: a term is a generator or a formal
// bracket word [a, b] of terms. Structural only; normalization is done
// against an OpenAlgebra.
class LieTermPool {
  public:
    static LieTermPool& instance();

    int gen(int index);
    int word(int left, int right);

    bool is_gen(int t) const { return entries_[static_cast<size_t>(t)].gen >= 0; }
    int gen_index(int t) const { return entries_[static_cast<size_t>(t)].gen; }
    int left(int t) const { return entries_[static_cast<size_t>(t)].l; }
    int right(int t) const { return entries_[static_cast<size_t>(t)].r; }

    // Total order: generators by index, then bracket words by (left, right).
    int compare(int a, int b) const;

    std::string str(int t) const;

  private:
    struct Entry {
        int gen = -1;
        int l = -1, r = -1;
    };
    std::vector<Entry> entries_;
    std::map<int, int> gen_ids_;
    std::map<std::pair<int, int>, int> word_ids_;
};

inline LieTermPool& liepool() { return LieTermPool::instance(); }

struct LieTermLess {
    bool operator()(int a, int b) const { return liepool().compare(a, b) < 0; }
};

// Finite sum of ExactScalar * term. No zero coefficients stored.
class LieElement {
  public:
    using Terms = std::map<int, ExactScalar, LieTermLess>;

    LieElement() = default;

    static LieElement generator(int index, ExactScalar c = ExactScalar::one()) {
        LieElement e;
        e.add_term(liepool().gen(index), std::move(c));
        return e;
    }
    static LieElement word(int i, int j, ExactScalar c = ExactScalar::one()) {
        LieElement e;
        e.add_term(liepool().word(liepool().gen(i), liepool().gen(j)), std::move(c));
        return e;
    }

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    void add_term(int term, ExactScalar c);

    LieElement operator+(const LieElement& o) const;
    LieElement operator-(const LieElement& o) const { return *this + o.negated(); }
    LieElement& operator+=(const LieElement& o) { return *this = *this + o; }
    LieElement& operator-=(const LieElement& o) { return *this = *this + o.negated(); }
    LieElement negated() const;
    LieElement scaled(const ExactScalar& s) const;

    bool operator==(const LieElement& o) const { return terms_ == o.terms_; }

    std::string str(const std::function<std::string(int)>& gen_name = {}) const;

  private:
    Terms terms_;
};

// FieldExpr coefficient-algebra hooks.
inline bool coeff_is_zero(const LieElement& c) { return c.is_zero(); }
inline LieElement scale(const LieElement& c, const ExactScalar& s) { return c.scaled(s); }
inline LieElement coeff_neg(const LieElement& c) { return c.negated(); }
inline LieElement coeff_add(const LieElement& a, const LieElement& b) { return a + b; }
inline std::string coeff_str(const LieElement& c) { return c.str(); }

enum class Provenance { Declared, NamedByBracket, ClosureDerived };

struct Generator {
    int index = 0;
    Provenance provenance = Provenance::Declared;
    int bracket_i = 0, bracket_j = 0;  // defining pair for named generators
};

// Generator set plus partial bracket table with relations.
class OpenAlgebra {
  public:
    void declare(int index, Provenance prov = Provenance::Declared);
    void declare_named(int index, int bracket_i, int bracket_j);
    bool has_generator(int index) const { return gens_.count(index) != 0; }
    const std::map<int, Generator>& generators() const { return gens_; }
    std::vector<int> generator_indices() const;
    int max_index() const;

    void set_entry(int i, int j, LieElement v);
    std::optional<LieElement> entry(int i, int j) const;
    const std::map<std::pair<int, int>, LieElement>& table() const { return table_; }

    void add_relation(LieElement r);
    const std::vector<LieElement>& relations() const { return relations_; }

    // Canonical form under antisymmetry, bilinearity, table substitution,
    // relation reduction. Idempotent.
    LieElement normalize(const LieElement& e) const;
    LieElement bracket(const LieElement& a, const LieElement& b) const;

    LieElement jacobi(int a, int b, int c) const;

    std::string gen_name(int index) const;
    // Deterministic dump: `[Xi,Xj] = <element>` sorted by (i, j).
    std::string table_dump() const;

  private:
    LieElement normalize_term(int term) const;
    LieElement reduce_by_relations(LieElement e) const;

    std::map<int, Generator> gens_;
    std::map<std::pair<int, int>, LieElement> table_;
    std::vector<LieElement> relations_;
};

struct ClosurePass {
    std::vector<int> new_generators;
    std::vector<LieElement> new_relations;
};
struct ClosureReport {
    std::vector<ClosurePass> passes;
    std::vector<int> generator_counts;  // count after each pass
};

// Jacobi sweep: triples with at least two members among the declared
// generators; unknown generator-pair brackets get fresh named generators
// (lexicographic pair order within a pass); surviving Jacobi combinations
// become relations.
OpenAlgebra jacobi_closure(const OpenAlgebra& a, int depth, ClosureReport* report = nullptr);

// Substitutes the map through table and relations, renormalizes, drops
// eliminated generators. Throws LieError on an inconsistent relation.
OpenAlgebra apply_closing_map(const OpenAlgebra& a, const std::map<int, LieElement>& m);

// Searches index bijections preserving tables exactly; first under the
// deterministic (ascending) order, or nullopt.
std::optional<std::map<int, int>> find_relabeling_isomorphism(const OpenAlgebra& a,
                                                              const OpenAlgebra& b);

// --- matrix representations -------------------------------------------------

using MatrixRep = std::map<int, Matrix2>;

Matrix2 rep_image(const MatrixRep& rep, const LieElement& e);

struct HomomorphismResidual {
    std::string what;   // table entry or relation description
    Matrix2 residual;
};
struct HomomorphismReport {
    std::vector<HomomorphismResidual> failures;
    bool pass() const { return failures.empty(); }
};

// Exact matrix-commutator residuals for every table entry and relation.
HomomorphismReport verify_homomorphism(const OpenAlgebra& a, const MatrixRep& rep);

}  // namespace spintower
