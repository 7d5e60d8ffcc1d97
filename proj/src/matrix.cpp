#include "fluxcharge/matrix.hpp"

#include <stdexcept>

namespace fluxcharge {

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    RationalMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rational& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                if (b.at(k, j) == 0) continue;
                out.at(i, j) += aik * b.at(k, j);
            }
        }
    }
    out.row_labels = a.row_labels;
    out.col_labels = b.col_labels;
    return out;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix sum shape mismatch");
    RationalMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
    out.row_labels = a.row_labels;
    out.col_labels = a.col_labels;
    return out;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
    return a + (-b);
}

RationalMatrix operator-(const RationalMatrix& a) {
    return Rational(-1) * a;
}

RationalMatrix operator*(const Rational& s, const RationalMatrix& a) {
    RationalMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = s * a.at(i, j);
    out.row_labels = a.row_labels;
    out.col_labels = a.col_labels;
    return out;
}

RationalVector operator*(const RationalMatrix& a, const RationalVector& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector shape mismatch");
    RationalVector out(a.rows(), Rational(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a.at(i, j) != 0 && x[j] != 0) out[i] += a.at(i, j) * x[j];
    return out;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot shape mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

} // namespace fluxcharge
