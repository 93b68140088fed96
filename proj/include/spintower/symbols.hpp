#pragma once
// Interned jet symbols: base coordinates, spin field components, jets up to
// second order, pseudopotentials, total-derivative markers, and formal atoms
// used by the derivation pipeline.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spintower {

enum class SymKind {
    Coord,    // x, y, t
    S,        // S_i, i = 1..3
    Sx, Sy, St,
    Sxx, Syy, Sxy, Sxt, Syt,
    Xi,       // pseudopotential xi_m
    DMark,    // total-derivative marker D_c applied to a field/jet symbol
    Formal,   // opaque atom (undetermined function, its partials, A, B, ...)
};

enum class Coord { X = 0, Y = 1, T = 2 };

struct SymbolInfo {
    SymKind kind;
    int index = 0;      // component i for S-family, m for Xi, coord for Coord
    Coord dcoord = Coord::X;  // for DMark: which total derivative
    int base = -1;      // for DMark: target symbol id
    std::string name;
};

// Process-wide interning table. Ids are stable within a run: the fixed
// families are registered up front so monomial order is deterministic.
class SymbolTable {
  public:
    static SymbolTable& instance();

    int coord(Coord c) const { return static_cast<int>(c); }
    int S(int i) const { return 3 + check3(i); }
    int Sx(int i) const { return 6 + check3(i); }
    int Sy(int i) const { return 9 + check3(i); }
    int St(int i) const { return 12 + check3(i); }
    int Sxx(int i) const { return 15 + check3(i); }
    int Syy(int i) const { return 18 + check3(i); }
    int Sxy(int i) const { return 21 + check3(i); }
    int Sxt(int i) const { return 24 + check3(i); }
    int Syt(int i) const { return 27 + check3(i); }
    int xi(int m);                      // m >= 1
    int dmark(Coord c, int base_sym);   // interned on demand
    int formal(const std::string& name);

    const SymbolInfo& info(int id) const { return infos_.at(static_cast<size_t>(id)); }
    const std::string& name(int id) const { return info(id).name; }
    bool is_dmark(int id) const { return info(id).kind == SymKind::DMark; }

    // Jet symbol reached by the total derivative D_c, or -1 when the result
    // leaves the second-order jet table.
    int total_derivative_target(int id, Coord c) const;

  private:
    SymbolTable();
    static int check3(int i) {
        if (i < 1 || i > 3) throw std::out_of_range("spin component index must be 1..3");
        return i - 1;
    }
    int add(SymbolInfo si);

    std::vector<SymbolInfo> infos_;
    std::map<int, int> xi_ids_;                    // m -> id
    std::map<std::pair<int, int>, int> dmark_ids_; // (coord, base) -> id
    std::map<std::string, int> formal_ids_;
};

inline SymbolTable& symtab() { return SymbolTable::instance(); }

}  // namespace spintower
