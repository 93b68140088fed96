#include "spintower/liealg.hpp"

#include <algorithm>
#include <sstream>

namespace spintower {

// --- term pool ---------------------------------------------------------------

LieTermPool& LieTermPool::instance() {
    static LieTermPool pool;
    return pool;
}

int LieTermPool::gen(int index) {
    auto it = gen_ids_.find(index);
    if (it != gen_ids_.end()) return it->second;
    Entry e;
    e.gen = index;
    entries_.push_back(e);
    int id = static_cast<int>(entries_.size()) - 1;
    gen_ids_[index] = id;
    return id;
}

int LieTermPool::word(int left, int right) {
    auto key = std::make_pair(left, right);
    auto it = word_ids_.find(key);
    if (it != word_ids_.end()) return it->second;
    Entry e;
    e.l = left;
    e.r = right;
    entries_.push_back(e);
    int id = static_cast<int>(entries_.size()) - 1;
    word_ids_[key] = id;
    return id;
}

int LieTermPool::compare(int a, int b) const {
    if (a == b) return 0;
    const bool ga = is_gen(a), gb = is_gen(b);
    if (ga != gb) return ga ? -1 : 1;  // generators precede bracket words
    if (ga) {
        const int ia = gen_index(a), ib = gen_index(b);
        return ia < ib ? -1 : (ia > ib ? 1 : 0);
    }
    if (int c = compare(left(a), left(b)); c != 0) return c;
    return compare(right(a), right(b));
}

std::string LieTermPool::str(int t) const {
    if (is_gen(t)) return "X" + std::to_string(gen_index(t));
    return "[" + str(left(t)) + "," + str(right(t)) + "]";
}

// --- LieElement --------------------------------------------------------------

void LieElement::add_term(int term, ExactScalar c) {
    if (c.is_zero()) return;
    auto it = terms_.find(term);
    if (it == terms_.end()) {
        terms_.emplace(term, std::move(c));
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
}

LieElement LieElement::operator+(const LieElement& o) const {
    LieElement r = *this;
    for (const auto& [t, c] : o.terms_) r.add_term(t, c);
    return r;
}

LieElement LieElement::negated() const {
    LieElement r;
    for (const auto& [t, c] : terms_) r.terms_.emplace(t, c.negated());
    return r;
}

LieElement LieElement::scaled(const ExactScalar& s) const {
    LieElement r;
    if (s.is_zero()) return r;
    for (const auto& [t, c] : terms_) {
        ExactScalar p = c * s;
        if (!p.is_zero()) r.terms_.emplace(t, std::move(p));
    }
    return r;
}

std::string LieElement::str(const std::function<std::string(int)>& gen_name) const {
    if (terms_.empty()) return "0";
    std::function<std::string(int)> tstr = [&](int t) -> std::string {
        if (liepool().is_gen(t))
            return gen_name ? gen_name(liepool().gen_index(t)) : liepool().str(t);
        return "[" + tstr(liepool().left(t)) + "," + tstr(liepool().right(t)) + "]";
    };
    std::ostringstream os;
    bool first = true;
    for (const auto& [t, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*" << tstr(t);
    }
    return os.str();
}

// --- OpenAlgebra -------------------------------------------------------------

void OpenAlgebra::declare(int index, Provenance prov) {
    Generator g;
    g.index = index;
    g.provenance = prov;
    gens_[index] = g;
}

void OpenAlgebra::declare_named(int index, int bracket_i, int bracket_j) {
    Generator g;
    g.index = index;
    g.provenance = Provenance::NamedByBracket;
    g.bracket_i = bracket_i;
    g.bracket_j = bracket_j;
    gens_[index] = g;
}

std::vector<int> OpenAlgebra::generator_indices() const {
    std::vector<int> v;
    v.reserve(gens_.size());
    for (const auto& [i, g] : gens_) v.push_back(i);
    return v;
}

int OpenAlgebra::max_index() const {
    return gens_.empty() ? 0 : gens_.rbegin()->first;
}

void OpenAlgebra::set_entry(int i, int j, LieElement v) {
    if (i == j) {
        if (!normalize(v).is_zero()) throw LieError("diagonal bracket must vanish");
        return;
    }
    if (i > j) {
        std::swap(i, j);
        v = v.negated();
    }
    table_[{i, j}] = normalize(v);
}

std::optional<LieElement> OpenAlgebra::entry(int i, int j) const {
    if (i == j) return LieElement();
    bool flip = i > j;
    if (flip) std::swap(i, j);
    auto it = table_.find({i, j});
    if (it == table_.end()) return std::nullopt;
    return flip ? it->second.negated() : it->second;
}

void OpenAlgebra::add_relation(LieElement r) {
    r = normalize(r);
    if (r.is_zero()) return;
    // scale so the leading coefficient is 1 when invertible
    const ExactScalar& lead = r.terms().rbegin()->second;
    if (lead.is_monomial()) r = r.scaled(lead.inverse());
    relations_.push_back(std::move(r));
}

LieElement OpenAlgebra::normalize(const LieElement& e) const {
    LieElement r;
    for (const auto& [t, c] : e.terms()) r += normalize_term(t).scaled(c);
    return reduce_by_relations(r);
}

LieElement OpenAlgebra::normalize_term(int term) const {
    if (liepool().is_gen(term)) {
        LieElement e;
        e.add_term(term, ExactScalar::one());
        return e;
    }
    return bracket(normalize_term(liepool().left(term)), normalize_term(liepool().right(term)));
}

LieElement OpenAlgebra::bracket(const LieElement& a, const LieElement& b) const {
    LieElement r;
    for (const auto& [ta, ca] : a.terms()) {
        for (const auto& [tb, cb] : b.terms()) {
            int cmp = liepool().compare(ta, tb);
            if (cmp == 0) continue;
            int lo = ta, hi = tb;
            ExactScalar c = ca * cb;
            if (cmp > 0) {
                std::swap(lo, hi);
                c = c.negated();
            }
            if (liepool().is_gen(lo) && liepool().is_gen(hi)) {
                auto known = entry(liepool().gen_index(lo), liepool().gen_index(hi));
                if (known) {
                    r += normalize(*known).scaled(c);
                    continue;
                }
            }
            r.add_term(liepool().word(lo, hi), c);
        }
    }
    return reduce_by_relations(r);
}

LieElement OpenAlgebra::reduce_by_relations(LieElement e) const {
    // Replacing a relation's leading term by strictly smaller ones is
    // well-founded, but cap the loop defensively.
    for (int guard = 0; guard < 100000; ++guard) {
        bool changed = false;
        for (const auto& rel : relations_) {
            if (rel.is_zero()) continue;
            const auto& [lead, lc] = *rel.terms().rbegin();
            auto it = e.terms().find(lead);
            if (it == e.terms().end()) continue;
            if (!lc.is_monomial()) continue;  // not usable as a rewrite
            e -= rel.scaled(it->second * lc.inverse());
            changed = true;
        }
        if (!changed) return e;
    }
    throw LieError("relation reduction did not terminate");
}

LieElement OpenAlgebra::jacobi(int a, int b, int c) const {
    const LieElement xa = LieElement::generator(a);
    const LieElement xb = LieElement::generator(b);
    const LieElement xc = LieElement::generator(c);
    LieElement j = bracket(bracket(xa, xb), xc);
    j += bracket(bracket(xb, xc), xa);
    j += bracket(bracket(xc, xa), xb);
    return normalize(j);
}

std::string OpenAlgebra::gen_name(int index) const { return "X" + std::to_string(index); }

std::string OpenAlgebra::table_dump() const {
    std::ostringstream os;
    auto name = [this](int i) { return gen_name(i); };
    for (const auto& [key, v] : table_)
        os << "[" << gen_name(key.first) << "," << gen_name(key.second) << "] = "
           << v.str(name) << "\n";
    for (const auto& r : relations_) os << "relation: " << r.str(name) << " = 0\n";
    return os.str();
}

// --- Jacobi closure ----------------------------------------------------------

OpenAlgebra jacobi_closure(const OpenAlgebra& a, int depth, ClosureReport* report) {
    OpenAlgebra alg = a;
    std::set<int> seed;
    for (const auto& [i, g] : a.generators())
        if (g.provenance == Provenance::Declared) seed.insert(i);

    for (int pass = 0; pass < depth; ++pass) {
        ClosurePass pr;
        const std::vector<int> gens = alg.generator_indices();

        std::vector<std::array<int, 3>> triples;
        for (size_t p = 0; p < gens.size(); ++p)
            for (size_t q = p + 1; q < gens.size(); ++q)
                for (size_t s = q + 1; s < gens.size(); ++s) {
                    int in_seed = static_cast<int>(seed.count(gens[p])) +
                                  static_cast<int>(seed.count(gens[q])) +
                                  static_cast<int>(seed.count(gens[s]));
                    if (in_seed >= 2) triples.push_back({gens[p], gens[q], gens[s]});
                }

        // name unknown inner brackets first, in lexicographic pair order
        std::set<std::pair<int, int>> unknown;
        for (const auto& t : triples) {
            const std::pair<int, int> pairs[3] = {{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}};
            for (const auto& [i, j] : pairs)
                if (!alg.entry(i, j)) unknown.insert({i, j});
        }
        int next = alg.max_index() + 1;
        for (const auto& [i, j] : unknown) {
            alg.declare_named(next, i, j);
            alg.set_entry(i, j, LieElement::generator(next));
            pr.new_generators.push_back(next);
            ++next;
        }

        for (const auto& t : triples) {
            LieElement j = alg.jacobi(t[0], t[1], t[2]);
            if (j.is_zero()) continue;
            alg.add_relation(j);
            pr.new_relations.push_back(alg.relations().back());
        }

        if (report) {
            report->passes.push_back(std::move(pr));
            report->generator_counts.push_back(static_cast<int>(alg.generators().size()));
        }
    }
    return alg;
}

// --- closing maps ------------------------------------------------------------

namespace {

LieElement substitute_gens(const std::map<int, LieElement>& m, const OpenAlgebra& target,
                           const LieElement& e) {
    std::function<LieElement(int)> subst_term = [&](int t) -> LieElement {
        if (liepool().is_gen(t)) {
            int idx = liepool().gen_index(t);
            auto it = m.find(idx);
            return it != m.end() ? it->second : LieElement::generator(idx);
        }
        return target.bracket(subst_term(liepool().left(t)), subst_term(liepool().right(t)));
    };
    LieElement r;
    for (const auto& [t, c] : e.terms()) r += subst_term(t).scaled(c);
    return target.normalize(r);
}

void absorb_equation(OpenAlgebra& b, const LieElement& eq_in, const std::string& origin) {
    LieElement eq = b.normalize(eq_in);
    if (eq.is_zero()) return;
    // solve for a single unknown generator-pair bracket when possible
    int unknown_term = -1;
    int unknown_count = 0;
    for (const auto& [t, c] : eq.terms()) {
        if (liepool().is_gen(t)) continue;
        int l = liepool().left(t), r = liepool().right(t);
        if (liepool().is_gen(l) && liepool().is_gen(r) &&
            !b.entry(liepool().gen_index(l), liepool().gen_index(r))) {
            ++unknown_count;
            unknown_term = t;
        }
    }
    if (unknown_count == 1) {
        const ExactScalar c = eq.terms().at(unknown_term);
        if (c.is_monomial()) {
            LieElement rest = eq;
            rest.add_term(unknown_term, c.negated());
            b.set_entry(liepool().gen_index(liepool().left(unknown_term)),
                        liepool().gen_index(liepool().right(unknown_term)),
                        rest.negated().scaled(c.inverse()));
            return;
        }
    }
    if (eq.terms().size() == 1 && liepool().is_gen(eq.terms().begin()->first)) {
        int idx = liepool().gen_index(eq.terms().begin()->first);
        if (b.has_generator(idx))
            throw LieError("closing map is inconsistent: forces " + b.gen_name(idx) +
                           " = 0 (from " + origin + ")");
    }
    b.add_relation(eq);
}

}  // namespace

OpenAlgebra apply_closing_map(const OpenAlgebra& a, const std::map<int, LieElement>& m) {
    OpenAlgebra b;
    for (const auto& [i, g] : a.generators())
        if (!m.count(i)) b.declare(i, g.provenance);

    for (const auto& [key, v] : a.table()) {
        LieElement lhs = b.bracket(substitute_gens(m, b, LieElement::generator(key.first)),
                                   substitute_gens(m, b, LieElement::generator(key.second)));
        LieElement rhs = substitute_gens(m, b, v);
        std::ostringstream origin;
        origin << "[X" << key.first << ",X" << key.second << "]";
        absorb_equation(b, lhs - rhs, origin.str());
    }
    for (const auto& r : a.relations())
        absorb_equation(b, substitute_gens(m, b, r), "relation");
    return b;
}

// --- relabeling isomorphism --------------------------------------------------

namespace {

// maps every generator term of e through phi; formal words map recursively
std::optional<LieElement> map_element(const std::map<int, int>& phi, const LieElement& e) {
    std::function<std::optional<LieElement>(int)> map_term = [&](int t) -> std::optional<LieElement> {
        if (liepool().is_gen(t)) {
            auto it = phi.find(liepool().gen_index(t));
            if (it == phi.end()) return std::nullopt;
            return LieElement::generator(it->second);
        }
        auto l = map_term(liepool().left(t));
        auto r = map_term(liepool().right(t));
        if (!l || !r) return std::nullopt;
        // structural bracket: both sides are single generator terms here
        int lt = l->terms().begin()->first, rt = r->terms().begin()->first;
        int cmp = liepool().compare(lt, rt);
        if (cmp == 0) return LieElement();
        LieElement w;
        w.add_term(cmp < 0 ? liepool().word(lt, rt) : liepool().word(rt, lt),
                   cmp < 0 ? ExactScalar::one() : ExactScalar::one().negated());
        return w;
    };
    LieElement out;
    for (const auto& [t, c] : e.terms()) {
        auto img = map_term(t);
        if (!img) return std::nullopt;
        out += img->scaled(c);
    }
    return out;
}

bool pair_consistent(const OpenAlgebra& a, const OpenAlgebra& b, const std::map<int, int>& phi,
                     int i, int j, bool final_check) {
    auto ea = a.entry(i, j);
    auto eb = b.entry(phi.at(i), phi.at(j));
    if (ea.has_value() != eb.has_value()) return false;
    if (!ea) return true;
    auto mapped = map_element(phi, *ea);
    if (!mapped) return !final_check;  // value mentions unmapped generators: defer
    return b.normalize(*mapped - *eb).is_zero();
}

bool extend(const OpenAlgebra& a, const OpenAlgebra& b, const std::vector<int>& ga,
            const std::vector<int>& gb, std::map<int, int>& phi, std::vector<bool>& used,
            size_t k) {
    if (k == ga.size()) {
        for (size_t p = 0; p < ga.size(); ++p)
            for (size_t q = p + 1; q < ga.size(); ++q)
                if (!pair_consistent(a, b, phi, ga[p], ga[q], true)) return false;
        return true;
    }
    for (size_t c = 0; c < gb.size(); ++c) {
        if (used[c]) continue;
        phi[ga[k]] = gb[c];
        used[c] = true;
        bool ok = true;
        for (size_t p = 0; p < k && ok; ++p)
            ok = pair_consistent(a, b, phi, ga[p], ga[k], false);
        if (ok && extend(a, b, ga, gb, phi, used, k + 1)) return true;
        used[c] = false;
        phi.erase(ga[k]);
    }
    return false;
}

}  // namespace

std::optional<std::map<int, int>> find_relabeling_isomorphism(const OpenAlgebra& a,
                                                              const OpenAlgebra& b) {
    const std::vector<int> ga = a.generator_indices();
    const std::vector<int> gb = b.generator_indices();
    if (ga.size() != gb.size()) return std::nullopt;
    std::map<int, int> phi;
    std::vector<bool> used(gb.size(), false);
    if (extend(a, b, ga, gb, phi, used, 0)) return phi;
    return std::nullopt;
}

// --- matrix representations --------------------------------------------------

Matrix2 rep_image(const MatrixRep& rep, const LieElement& e) {
    std::function<Matrix2(int)> term_image = [&](int t) -> Matrix2 {
        if (liepool().is_gen(t)) {
            auto it = rep.find(liepool().gen_index(t));
            if (it == rep.end())
                throw LieError("no matrix image for X" + std::to_string(liepool().gen_index(t)));
            return it->second;
        }
        return commutator(term_image(liepool().left(t)), term_image(liepool().right(t)));
    };
    Matrix2 r;
    for (const auto& [t, c] : e.terms()) r = r + term_image(t).scaled(c);
    return r;
}

HomomorphismReport verify_homomorphism(const OpenAlgebra& a, const MatrixRep& rep) {
    HomomorphismReport rep_out;
    auto image_of_gen = [&](int i) -> Matrix2 {
        auto it = rep.find(i);
        if (it == rep.end()) throw LieError("no matrix image for X" + std::to_string(i));
        return it->second;
    };
    for (const auto& [key, v] : a.table()) {
        Matrix2 residual =
            commutator(image_of_gen(key.first), image_of_gen(key.second)) - rep_image(rep, v);
        if (!residual.is_zero()) {
            std::ostringstream what;
            what << "[X" << key.first << ",X" << key.second << "]";
            rep_out.failures.push_back({what.str(), residual});
        }
    }
    for (size_t k = 0; k < a.relations().size(); ++k) {
        Matrix2 residual = rep_image(rep, a.relations()[k]);
        if (!residual.is_zero())
            rep_out.failures.push_back({"relation #" + std::to_string(k), residual});
    }
    return rep_out;
}

}  // namespace spintower
