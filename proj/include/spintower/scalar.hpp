#pragma once
// Exact coefficient arithmetic: Gaussian rationals and Laurent polynomials
// in the spectral parameter lambda.

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <stdexcept>
#include <string>

namespace spintower {

using Rational = boost::multiprecision::cpp_rational;

struct ScalarError : std::runtime_error {
    explicit ScalarError(const std::string& what) : std::runtime_error(what) {}
};

// a + b*i with exact rational a, b.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r) {}

    static GaussianRational unit_i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }

    GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
    GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational operator*(const GaussianRational& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussianRational inverse() const {
        Rational n = re * re + im * im;
        if (n == 0) throw ScalarError("division by zero Gaussian rational");
        return {re / n, -im / n};
    }
    GaussianRational conj() const { return {re, -im}; }

    bool operator==(const GaussianRational& o) const = default;
    auto operator<=>(const GaussianRational& o) const = default;
};

std::string to_string(const GaussianRational& g);

// Finite Laurent polynomial in lambda over the Gaussian rationals.
// Canonical: no zero coefficients stored; zero is the empty map.
class ExactScalar {
  public:
    using Terms = std::map<int, GaussianRational>;

    ExactScalar() = default;
    ExactScalar(long n) { set_term(0, GaussianRational(n)); }
    ExactScalar(Rational r) { set_term(0, GaussianRational(std::move(r))); }
    ExactScalar(GaussianRational g) { set_term(0, std::move(g)); }

    static ExactScalar zero() { return {}; }
    static ExactScalar one() { return ExactScalar(1); }
    static ExactScalar unit_i() { return ExactScalar(GaussianRational::unit_i()); }
    // c * lambda^k
    static ExactScalar lambda(int k = 1, GaussianRational c = GaussianRational(1)) {
        ExactScalar s;
        s.set_term(k, std::move(c));
        return s;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    // True when the value is a single Laurent term (hence invertible).
    bool is_monomial() const { return terms_.size() == 1; }

    const Terms& terms() const { return terms_; }

    ExactScalar operator+(const ExactScalar& o) const;
    ExactScalar operator-(const ExactScalar& o) const;
    ExactScalar operator-() const;
    ExactScalar negated() const { return -*this; }
    ExactScalar operator*(const ExactScalar& o) const;
    ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
    ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }

    // Defined only for monomials; throws otherwise.
    ExactScalar inverse() const;

    bool operator==(const ExactScalar& o) const { return terms_ == o.terms_; }
    auto operator<=>(const ExactScalar& o) const = default;

    // Numeric evaluation at a concrete lambda (real part of result, imag part).
    std::pair<double, double> eval(double lambda_re, double lambda_im = 0.0) const;

    std::string str() const;

  private:
    void set_term(int exp, GaussianRational c) {
        if (!c.is_zero()) terms_[exp] = std::move(c);
    }
    Terms terms_;
};

// Parses scalar literals over {integers, '/', 'i', 'lambda', '^', '*', '(', ')', '+', '-'}.
ExactScalar parse_scalar(const std::string& text);

}  // namespace spintower
