#pragma once

// Shared fixture data for the test suites. fixture3/4/5/6 mirror the JSON
// files shipped under fixtures/, together with their known spectral data,
// solvents, and bisolvents used as frozen expected values.

#include <string>
#include <vector>

#include "matpoly/matpoly.hpp"

namespace fixtures {

using matpoly::CMat;
using matpoly::Complex;
using matpoly::MatrixPolynomial;

inline CMat mat2(double a, double b, double c, double d) {
    CMat m(2, 2);
    m << Complex(a), Complex(b), Complex(c), Complex(d);
    return m;
}

inline CMat mat3(std::initializer_list<double> vals) {
    CMat m(3, 3);
    int i = 0;
    for (double v : vals) {
        m(i / 3, i % 3) = Complex(v);
        ++i;
    }
    return m;
}

inline CMat diag3(double a, double b, double c) {
    CMat m = matpoly::zeros(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

/// Pencil with singular lambda-coefficient and invertible constant term;
/// it has no solvents at all.
inline MatrixPolynomial fixture3() {
    return matpoly::make_polynomial({mat2(1, 0, 0, 1), mat2(1, 0, 0, 0)});
}

/// 2x2 quadratic with eigenvalues {2, -2} and a 2-chain at infinity.
inline MatrixPolynomial fixture4() {
    return matpoly::make_polynomial({mat2(2.0 / 7, -2.0 / 7, 174.0 / 7, -146.0 / 7),
                                     mat2(1.0 / 7, -1.0 / 7, 27.0 / 7, -41.0 / 7),
                                     mat2(0, 0, -2, 2)});
}

inline matpoly::StandardPair fixture4_pair() {
    return matpoly::make_standard_pair(mat2(1, 1, 1, 8), mat2(2, 0, 0, -2),
                                       mat2(1, 1, 1, 2), mat2(0, 1, 0, 0));
}

inline CMat fixture4_solvent() { return mat2(18.0 / 7, -4.0 / 7, 32.0 / 7, -18.0 / 7); }

inline std::vector<CMat> fixture4_cosolvents() {
    return {mat2(9.0 / 14, -1.0 / 7, 8.0 / 7, -9.0 / 14),
            mat2(1.0 / 14, -1.0 / 14, 4.0 / 7, -4.0 / 7), mat2(-1, 1, -1, 1)};
}

/// diag(lambda, lambda - 1, 1): one zero eigenvalue, one at 1, one infinite.
inline MatrixPolynomial fixture5() {
    return matpoly::make_polynomial({diag3(0, -1, 1), diag3(1, 1, 0)});
}

/// 3x3 quadratic with eigenvalues {3, 2, 0}, a 3-chain at infinity, and no
/// solvents or cosolvents but two separable bisolvents.
inline MatrixPolynomial fixture6() {
    return matpoly::make_polynomial(
        {mat3({-60.0 / 43, 76.0 / 43, 74.0 / 43, 30.0 / 43, -81.0 / 43, 6.0 / 43, -36.0 / 43,
               80.0 / 43, 10.0 / 43}),
         mat3({-788.0 / 215, 11.0 / 43, 281.0 / 215, 931.0 / 215, -22.0 / 43, -347.0 / 215,
               1097.0 / 215, -134.0 / 43, -589.0 / 215}),
         mat3({-33.0 / 10, 3.0 / 2, 8.0 / 5, -16.0 / 5, 1, 7.0 / 5, 19.0 / 10, -1.0 / 2,
               -4.0 / 5})});
}

inline matpoly::StandardPair fixture6_pair() {
    CMat z = matpoly::zeros(3, 3);
    z(0, 1) = 1;
    z(1, 2) = 1;
    return matpoly::make_standard_pair(mat3({2, 2, 5, 4, 4, 2, 1, 1, 2}), diag3(3, 2, 0),
                                       mat3({1, 1, 3, -1, -1, 1, 3, 3, 4}), z);
}

inline CMat fixture6_frame() { return mat3({2, 5, 1, 4, 2, -1, 1, 2, 3}); }

inline CMat conjugate_by_frame(const CMat& diag) {
    const CMat u = fixture6_frame();
    return u * diag * matpoly::invert(u);
}

inline double entry_gap(const CMat& a, const CMat& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
}

inline std::string fixture_path(const std::string& name) {
    return std::string(MATPOLY_FIXTURE_DIR) + "/" + name;
}

}  // namespace fixtures
