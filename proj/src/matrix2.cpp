#include "spintower/matrix2.hpp"

#include <sstream>
#include <stdexcept>

namespace spintower {

Matrix2 Matrix2::identity() {
    Matrix2 m;
    m.at(0, 0) = ExactScalar::one();
    m.at(1, 1) = ExactScalar::one();
    return m;
}

Matrix2 Matrix2::sigma(int k) {
    Matrix2 m;
    const ExactScalar one = ExactScalar::one();
    const ExactScalar i = ExactScalar::unit_i();
    switch (k) {
        case 1:
            m.at(0, 1) = one;
            m.at(1, 0) = one;
            break;
        case 2:
            m.at(0, 1) = i.negated();
            m.at(1, 0) = i;
            break;
        case 3:
            m.at(0, 0) = one;
            m.at(1, 1) = one.negated();
            break;
        default:
            throw std::invalid_argument("sigma index must be 1, 2 or 3");
    }
    return m;
}

bool Matrix2::is_zero() const {
    for (const auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

Matrix2 Matrix2::operator+(const Matrix2& o) const {
    Matrix2 r;
    for (int k = 0; k < 4; ++k) r.e_[static_cast<size_t>(k)] = e_[static_cast<size_t>(k)] + o.e_[static_cast<size_t>(k)];
    return r;
}

Matrix2 Matrix2::operator-(const Matrix2& o) const {
    Matrix2 r;
    for (int k = 0; k < 4; ++k) r.e_[static_cast<size_t>(k)] = e_[static_cast<size_t>(k)] - o.e_[static_cast<size_t>(k)];
    return r;
}

Matrix2 Matrix2::operator*(const Matrix2& o) const {
    Matrix2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.at(i, j) = at(i, 0) * o.at(0, j) + at(i, 1) * o.at(1, j);
    return r;
}

Matrix2 Matrix2::scaled(const ExactScalar& s) const {
    Matrix2 r;
    for (int k = 0; k < 4; ++k) r.e_[static_cast<size_t>(k)] = e_[static_cast<size_t>(k)] * s;
    return r;
}

Matrix2 Matrix2::negated() const { return scaled(ExactScalar::one().negated()); }

ExactScalar Matrix2::det() const { return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0); }

ExactScalar Matrix2::trace() const { return at(0, 0) + at(1, 1); }

Matrix2 Matrix2::inverse() const {
    const ExactScalar d = det();
    if (d.is_zero()) throw std::domain_error("matrix is singular");
    const ExactScalar dinv = d.inverse();  // throws unless monomial
    return Matrix2(at(1, 1) * dinv, at(0, 1).negated() * dinv,
                   at(1, 0).negated() * dinv, at(0, 0) * dinv);
}

std::array<std::complex<double>, 4> Matrix2::eval(double lr, double li) const {
    std::array<std::complex<double>, 4> r;
    for (int k = 0; k < 4; ++k) {
        auto [re, im] = e_[static_cast<size_t>(k)].eval(lr, li);
        r[static_cast<size_t>(k)] = {re, im};
    }
    return r;
}

std::string Matrix2::str() const {
    std::ostringstream os;
    os << "[[" << at(0, 0).str() << ", " << at(0, 1).str() << "], ["
       << at(1, 0).str() << ", " << at(1, 1).str() << "]]";
    return os.str();
}

}  // namespace spintower
