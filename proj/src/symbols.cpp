#include "spintower/symbols.hpp"

namespace spintower {

namespace {
const char* coord_name(Coord c) {
    switch (c) {
        case Coord::X: return "x";
        case Coord::Y: return "y";
        default: return "t";
    }
}
}  // namespace

SymbolTable& SymbolTable::instance() {
    static SymbolTable tab;
    return tab;
}

int SymbolTable::add(SymbolInfo si) {
    infos_.push_back(std::move(si));
    return static_cast<int>(infos_.size()) - 1;
}

SymbolTable::SymbolTable() {
    for (int c = 0; c < 3; ++c)
        add({SymKind::Coord, c, Coord::X, -1, coord_name(static_cast<Coord>(c))});
    auto family = [&](SymKind k, const char* suffix) {
        for (int i = 1; i <= 3; ++i)
            add({k, i, Coord::X, -1, "S" + std::to_string(i) + suffix});
    };
    family(SymKind::S, "");
    family(SymKind::Sx, "x");
    family(SymKind::Sy, "y");
    family(SymKind::St, "t");
    family(SymKind::Sxx, "xx");
    family(SymKind::Syy, "yy");
    family(SymKind::Sxy, "xy");
    family(SymKind::Sxt, "xt");
    family(SymKind::Syt, "yt");
}

int SymbolTable::xi(int m) {
    if (m < 1) throw std::out_of_range("pseudopotential index must be >= 1");
    auto it = xi_ids_.find(m);
    if (it != xi_ids_.end()) return it->second;
    int id = add({SymKind::Xi, m, Coord::X, -1, "xi" + std::to_string(m)});
    xi_ids_.emplace(m, id);
    return id;
}

int SymbolTable::dmark(Coord c, int base_sym) {
    auto key = std::make_pair(static_cast<int>(c), base_sym);
    auto it = dmark_ids_.find(key);
    if (it != dmark_ids_.end()) return it->second;
    const auto& b = info(base_sym);
    if (b.kind == SymKind::DMark || b.kind == SymKind::Coord || b.kind == SymKind::Formal)
        throw std::invalid_argument("D-marker requires a field or jet symbol");
    int id = add({SymKind::DMark, b.index, c, base_sym,
                  std::string("D") + coord_name(c) + "[" + b.name + "]"});
    dmark_ids_.emplace(key, id);
    return id;
}

int SymbolTable::formal(const std::string& name) {
    auto it = formal_ids_.find(name);
    if (it != formal_ids_.end()) return it->second;
    int id = add({SymKind::Formal, 0, Coord::X, -1, name});
    formal_ids_.emplace(name, id);
    return id;
}

int SymbolTable::total_derivative_target(int id, Coord c) const {
    const auto& si = info(id);
    int i = si.index;
    switch (si.kind) {
        case SymKind::S:
            return c == Coord::X ? Sx(i) : c == Coord::Y ? Sy(i) : St(i);
        case SymKind::Sx:
            return c == Coord::X ? Sxx(i) : c == Coord::Y ? Sxy(i) : Sxt(i);
        case SymKind::Sy:
            return c == Coord::X ? Sxy(i) : c == Coord::Y ? Syy(i) : Syt(i);
        default:
            return -1;
    }
}

}  // namespace spintower
