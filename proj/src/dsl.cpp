#include "spintower/dsl.hpp"

#include <cctype>
#include <sstream>

namespace spintower {

namespace {

const OpenAlgebra& free_algebra() {
    static const OpenAlgebra a;
    return a;
}

enum class Tok { Int, Imag, Lambda, Gen, Caret, Star, Slash, LParen, RParen, LBracket, RBracket,
                 Comma, Plus, Minus, Equals, End };

struct Token {
    Tok kind;
    long value = 0;  // Int digits or Gen index
    int col = 0;
};

std::string tok_name(Tok t) {
    switch (t) {
        case Tok::Int: return "integer";
        case Tok::Imag: return "'i'";
        case Tok::Lambda: return "'lambda'";
        case Tok::Gen: return "generator";
        case Tok::Caret: return "'^'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Comma: return "','";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Equals: return "'='";
        case Tok::End: return "end of line";
    }
    return "?";
}

std::vector<Token> lex_line(const std::string& s, int line) {
    std::vector<Token> out;
    size_t p = 0;
    while (p < s.size()) {
        int col = static_cast<int>(p) + 1;
        char c = s[p];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++p;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long v = 0;
            while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p])))
                v = v * 10 + (s[p++] - '0');
            out.push_back({Tok::Int, v, col});
            continue;
        }
        if (c == 'X') {
            ++p;
            if (p >= s.size() || !std::isdigit(static_cast<unsigned char>(s[p])))
                throw DslError(line, col, "generator name needs an index after 'X'");
            long v = 0;
            while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p])))
                v = v * 10 + (s[p++] - '0');
            out.push_back({Tok::Gen, v, col});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t q = p;
            while (q < s.size() && std::isalpha(static_cast<unsigned char>(s[q]))) ++q;
            std::string word = s.substr(p, q - p);
            p = q;
            if (word == "i") out.push_back({Tok::Imag, 0, col});
            else if (word == "lambda") out.push_back({Tok::Lambda, 0, col});
            else throw DslError(line, col, "unknown word '" + word + "'; expected 'i', 'lambda' or 'X<k>'");
            continue;
        }
        Tok k;
        switch (c) {
            case '^': k = Tok::Caret; break;
            case '*': k = Tok::Star; break;
            case '/': k = Tok::Slash; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case '[': k = Tok::LBracket; break;
            case ']': k = Tok::RBracket; break;
            case ',': k = Tok::Comma; break;
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '=': k = Tok::Equals; break;
            default:
                throw DslError(line, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back({k, 0, col});
        ++p;
    }
    out.push_back({Tok::End, 0, static_cast<int>(s.size()) + 1});
    return out;
}

class LineParser {
  public:
    LineParser(std::vector<Token> toks, int line) : toks_(std::move(toks)), line_(line) {}

    RelationAst parse_statement() {
        RelationAst ast;
        ast.lhs = parse_sum();
        expect(Tok::Equals);
        ast.rhs = parse_sum();
        expect(Tok::End);
        classify(ast);
        return ast;
    }

  private:
    const Token& peek(size_t ahead = 0) const {
        size_t k = pos_ + ahead;
        return toks_[k < toks_.size() ? k : toks_.size() - 1];
    }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void fail(const std::string& expected) const {
        throw DslError(line_, peek().col, "expected " + expected + ", found " + tok_name(peek().kind));
    }
    void expect(Tok k) {
        if (peek().kind != k) fail(tok_name(k));
        take();
    }

    static bool atom_start(Tok k) { return k == Tok::Gen || k == Tok::LBracket; }
    static bool coeff_start(Tok k) {
        return k == Tok::Int || k == Tok::Imag || k == Tok::Lambda || k == Tok::LParen;
    }

    LieElement parse_sum() {
        bool neg = false;
        if (peek().kind == Tok::Plus) take();
        else if (peek().kind == Tok::Minus) {
            take();
            neg = true;
        }
        LieElement acc = parse_term(neg);
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            bool minus = take().kind == Tok::Minus;
            acc += parse_term(minus);
        }
        return acc;
    }

    LieElement parse_term(bool negate) {
        ExactScalar c = ExactScalar::one();
        bool have_coeff = false;
        if (coeff_start(peek().kind)) {
            c = parse_coeff();
            have_coeff = true;
        }
        if (negate) c = -c;
        if (peek().kind == Tok::Star && atom_start(peek(1).kind)) take();
        if (atom_start(peek().kind)) return parse_atom().scaled(c);
        if (have_coeff && c.is_zero()) return LieElement();
        if (have_coeff)
            throw DslError(line_, peek().col,
                           "a scalar without a generator must be 0 in a Lie expression");
        fail("a term (coefficient, generator or bracket)");
    }

    LieElement parse_atom() {
        if (peek().kind == Tok::Gen) {
            Token t = take();
            if (t.value < 1) throw DslError(line_, t.col, "generator index must be positive");
            return LieElement::generator(static_cast<int>(t.value));
        }
        expect(Tok::LBracket);
        LieElement a = parse_sum();
        expect(Tok::Comma);
        LieElement b = parse_sum();
        expect(Tok::RBracket);
        return free_algebra().bracket(a, b);
    }

    // scalar literal over {int, '/', 'i', 'lambda', '^', '*', '(', ')'}
    ExactScalar parse_coeff() {
        ExactScalar acc = parse_cfactor();
        for (;;) {
            if (peek().kind == Tok::Star && !atom_start(peek(1).kind)) {
                take();
                acc = acc * parse_cfactor();
            } else if (peek().kind == Tok::Slash) {
                Token t = take();
                ExactScalar d = parse_cfactor();
                try {
                    acc = acc * d.inverse();
                } catch (const ScalarError&) {
                    throw DslError(line_, t.col, "divisor must be an invertible monomial");
                }
            } else {
                return acc;
            }
        }
    }

    ExactScalar parse_cfactor() {
        switch (peek().kind) {
            case Tok::Int: return ExactScalar(take().value);
            case Tok::Imag: take(); return ExactScalar::unit_i();
            case Tok::Lambda: {
                take();
                int k = 1;
                if (peek().kind == Tok::Caret) {
                    take();
                    bool neg = false;
                    if (peek().kind == Tok::Minus) {
                        take();
                        neg = true;
                    }
                    if (peek().kind != Tok::Int) fail("an integer exponent");
                    k = static_cast<int>(take().value);
                    if (neg) k = -k;
                }
                return ExactScalar::lambda(k);
            }
            case Tok::LParen: {
                take();
                // parenthesized signed scalar sum
                ExactScalar acc = ExactScalar::zero();
                bool first = true;
                for (;;) {
                    bool neg = false;
                    if (peek().kind == Tok::Plus) take();
                    else if (peek().kind == Tok::Minus) {
                        take();
                        neg = true;
                    } else if (!first) {
                        break;
                    }
                    ExactScalar t = parse_coeff();
                    acc = acc + (neg ? -t : t);
                    first = false;
                }
                expect(Tok::RParen);
                return acc;
            }
            default: fail("a scalar factor");
        }
    }

    void classify(RelationAst& ast) const {
        ast.kind = RelationAst::Kind::Relation;
        if (ast.lhs.terms().size() != 1) return;
        const auto& [term, c] = *ast.lhs.terms().begin();
        if (!(c == ExactScalar::one())) return;
        auto& pool = liepool();
        if (pool.is_gen(term)) {
            ast.kind = RelationAst::Kind::Substitution;
            ast.k = pool.gen_index(term);
        } else if (pool.is_gen(pool.left(term)) && pool.is_gen(pool.right(term))) {
            // a table entry assigns a [Xi,Xj] pair a combination of generators;
            // bracket words on the right make it a general relation instead
            for (const auto& [t, rc] : ast.rhs.terms()) {
                (void)rc;
                if (!pool.is_gen(t)) return;
            }
            ast.kind = RelationAst::Kind::BracketDef;
            ast.i = pool.gen_index(pool.left(term));
            ast.j = pool.gen_index(pool.right(term));
        }
    }

    std::vector<Token> toks_;
    int line_;
    size_t pos_ = 0;
};

std::string element_str(const LieElement& e) {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [t, c] : e.terms()) {
        if (!first) os << " + ";
        first = false;
        if (c == ExactScalar::one()) os << liepool().str(t);
        else os << "(" << c.str() << ")*" << liepool().str(t);
    }
    return os.str();
}

}  // namespace

std::string RelationAst::print() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::BracketDef: os << "[X" << i << ",X" << j << "]"; break;
        case Kind::Substitution: os << "X" << k; break;
        case Kind::Relation: os << element_str(lhs); break;
    }
    os << " = " << element_str(rhs);
    return os.str();
}

bool RelationAst::operator==(const RelationAst& o) const {
    return kind == o.kind && i == o.i && j == o.j && k == o.k && lhs == o.lhs && rhs == o.rhs;
}

std::vector<RelationAst> parse_algebra_dsl(const std::string& text) {
    std::vector<RelationAst> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<Token> toks = lex_line(line, lineno);
        if (toks.size() == 1) continue;  // blank or comment-only
        out.push_back(LineParser(std::move(toks), lineno).parse_statement());
    }
    return out;
}

std::string print_statements(const std::vector<RelationAst>& stmts) {
    std::string s;
    for (const auto& a : stmts) s += a.print() + "\n";
    return s;
}

}  // namespace spintower
