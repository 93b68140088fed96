#include "spintower/scalar.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace spintower {

std::string to_string(const GaussianRational& g) {
    auto rat = [](const Rational& r) {
        std::ostringstream os;
        os << r;
        return os.str();
    };
    if (g.im == 0) return rat(g.re);
    std::string imag = (g.im == 1) ? "i" : (g.im == -1 ? "-i" : rat(g.im) + "*i");
    if (g.re == 0) return imag;
    if (g.im > 0) return rat(g.re) + "+" + imag;
    return rat(g.re) + imag;  // imag already carries the sign
}

bool ExactScalar::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == 0 &&
           terms_.begin()->second == GaussianRational(1);
}

ExactScalar ExactScalar::operator+(const ExactScalar& o) const {
    ExactScalar r = *this;
    for (const auto& [e, c] : o.terms_) {
        auto it = r.terms_.find(e);
        if (it == r.terms_.end()) {
            r.terms_.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) r.terms_.erase(it);
        }
    }
    return r;
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

ExactScalar ExactScalar::operator-(const ExactScalar& o) const { return *this + (-o); }

ExactScalar ExactScalar::operator*(const ExactScalar& o) const {
    ExactScalar r;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            GaussianRational p = c1 * c2;
            if (p.is_zero()) continue;
            auto it = r.terms_.find(e1 + e2);
            if (it == r.terms_.end()) {
                r.terms_.emplace(e1 + e2, p);
            } else {
                it->second = it->second + p;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
    return r;
}

ExactScalar ExactScalar::inverse() const {
    if (terms_.size() != 1) throw ScalarError("inverse defined only for Laurent monomials: " + str());
    ExactScalar r;
    r.terms_.emplace(-terms_.begin()->first, terms_.begin()->second.inverse());
    return r;
}

std::pair<double, double> ExactScalar::eval(double lre, double lim) const {
    double re = 0, im = 0;
    for (const auto& [e, c] : terms_) {
        // lambda^e as complex power via polar form
        double r = std::hypot(lre, lim), th = std::atan2(lim, lre);
        double pr = std::pow(r, e), pth = th * e;
        double xre = pr * std::cos(pth), xim = pr * std::sin(pth);
        double cre = static_cast<double>(c.re), cim = static_cast<double>(c.im);
        re += cre * xre - cim * xim;
        im += cre * xim + cim * xre;
    }
    return {re, im};
}

std::string ExactScalar::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // highest power first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string cs = to_string(c);
        bool composite = cs.find('+') != std::string::npos ||
                         cs.find('-', 1) != std::string::npos;
        if (!first) {
            if (!composite && cs[0] == '-') {
                os << " - ";
                cs = cs.substr(1);
            } else {
                os << " + ";
            }
        }
        first = false;
        if (e == 0) {
            if (composite) os << "(" << cs << ")";
            else os << cs;
            continue;
        }
        std::string pow = (e == 1) ? "lambda" : "lambda^" + std::to_string(e);
        if (cs == "1") os << pow;
        else if (cs == "-1") os << "-" << pow;
        else if (composite) os << "(" << cs << ")*" << pow;
        else os << cs << "*" << pow;
    }
    return os.str();
}

namespace {

// Recursive-descent parser for scalar literals.
struct ScalarParser {
    const std::string& s;
    size_t pos = 0;

    explicit ScalarParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ScalarError("scalar parse error at column " + std::to_string(pos + 1) + ": " + msg);
    }

    ExactScalar parse_sum() {
        skip_ws();
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        ExactScalar v = parse_product();
        if (neg) v = -v;
        for (;;) {
            skip_ws();
            if (eat('+')) v += parse_product();
            else if (eat('-')) v -= parse_product();
            else return v;
        }
    }

    ExactScalar parse_product() {
        ExactScalar v = parse_factor();
        for (;;) {
            skip_ws();
            if (eat('*')) {
                v *= parse_factor();
            } else if (eat('/')) {
                v *= parse_factor().inverse();
            } else {
                return v;
            }
        }
    }

    ExactScalar parse_factor() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        if (eat('(')) {
            ExactScalar v = parse_sum();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (s[pos] == 'i' && !identifier_ahead("lambda")) {
            ++pos;
            return ExactScalar::unit_i();
        }
        if (identifier_ahead("lambda")) {
            pos += 6;
            int e = 1;
            skip_ws();
            if (eat('^')) e = parse_int();
            return ExactScalar::lambda(e);
        }
        if (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '-') {
            long n = parse_int();
            return ExactScalar(n);
        }
        fail("expected number, 'i', 'lambda', or '('");
    }

    bool identifier_ahead(const char* id) {
        skip_ws();
        return s.compare(pos, std::char_traits<char>::length(id), id) == 0;
    }

    long parse_int() {
        skip_ws();
        bool neg = eat('-');
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            fail("expected integer");
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            v = v * 10 + (s[pos++] - '0');
        return neg ? -v : v;
    }
};

}  // namespace

ExactScalar parse_scalar(const std::string& text) {
    ScalarParser p(text);
    ExactScalar v = p.parse_sum();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return v;
}

}  // namespace spintower
