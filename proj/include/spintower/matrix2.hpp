#pragma once
// 2x2 matrices over ExactScalar (Laurent polynomials in the spectral
// parameter with Gaussian-rational coefficients).

#include <array>
#include <complex>
#include <string>

#include "spintower/scalar.hpp"

namespace spintower {

class Matrix2 {
  public:
    Matrix2() : e_{ExactScalar::zero(), ExactScalar::zero(), ExactScalar::zero(), ExactScalar::zero()} {}
    Matrix2(ExactScalar a, ExactScalar b, ExactScalar c, ExactScalar d)
        : e_{std::move(a), std::move(b), std::move(c), std::move(d)} {}

    static Matrix2 zero() { return Matrix2(); }
    static Matrix2 identity();
    // Pauli matrices; sigma2 uses the imaginary unit.
    static Matrix2 sigma(int k);

    const ExactScalar& at(int r, int c) const { return e_[static_cast<size_t>(2 * r + c)]; }
    ExactScalar& at(int r, int c) { return e_[static_cast<size_t>(2 * r + c)]; }

    bool is_zero() const;
    bool operator==(const Matrix2& o) const { return e_ == o.e_; }

    Matrix2 operator+(const Matrix2& o) const;
    Matrix2 operator-(const Matrix2& o) const;
    Matrix2 operator*(const Matrix2& o) const;
    Matrix2 scaled(const ExactScalar& s) const;
    Matrix2 negated() const;

    ExactScalar det() const;
    ExactScalar trace() const;
    // Requires det to be an invertible monomial in the spectral parameter.
    Matrix2 inverse() const;

    std::array<std::complex<double>, 4> eval(double lr, double li) const;

    std::string str() const;

  private:
    std::array<ExactScalar, 4> e_;
};

inline Matrix2 commutator(const Matrix2& a, const Matrix2& b) { return a * b - b * a; }

// FieldExpr coefficient-algebra hooks.
inline bool coeff_is_zero(const Matrix2& c) { return c.is_zero(); }
inline Matrix2 scale(const Matrix2& c, const ExactScalar& s) { return c.scaled(s); }
inline Matrix2 coeff_neg(const Matrix2& c) { return c.negated(); }
inline Matrix2 coeff_add(const Matrix2& a, const Matrix2& b) { return a + b; }
inline std::string coeff_str(const Matrix2& c) { return c.str(); }

}  // namespace spintower
