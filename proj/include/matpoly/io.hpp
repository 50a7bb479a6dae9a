#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "matpoly/factor.hpp"
#include "matpoly/linearize.hpp"
#include "matpoly/solvents.hpp"

namespace matpoly::io {

using Json = nlohmann::ordered_json;

inline Json complex_to_json(const Complex& z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InvariantViolation("non-finite value in report");
    return Json::array({z.real(), z.imag()});
}

inline Json matrix_to_json(const CMat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(where + ": complex values are [re, im] number pairs");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

inline CMat matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ParseError(where + ": matrix must be a nonempty array of rows");
    const size_t rows = j.size();
    const size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ParseError(where + ": matrix rows must be nonempty arrays");
    CMat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ParseError(where + ": ragged matrix rows");
        for (size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                complex_from_json(j[r][c], where);
    }
    return m;
}

/// Input schema: { "n": int, "m": int, "k": int, "coefficients": [matrix...] }
/// with coefficients[i] the n x m matrix multiplying lambda^i.
inline MatrixPolynomial parse_polynomial(const Json& j) {
    for (const char* field : {"n", "m", "k", "coefficients"})
        if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
    const auto n = j["n"].get<Eigen::Index>();
    const auto m = j["m"].get<Eigen::Index>();
    const auto k = j["k"].get<int>();
    const auto& coeffs = j["coefficients"];
    if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != k + 1)
        throw ParseError("coefficients must hold k+1 matrices");
    std::vector<CMat> list;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        CMat a = matrix_from_json(coeffs[i], "coefficients[" + std::to_string(i) + "]");
        if (a.rows() != n || a.cols() != m)
            throw DimensionMismatch("coefficient " + std::to_string(i) + " is not n x m");
        list.push_back(std::move(a));
    }
    return make_polynomial(std::move(list));
}

inline MatrixPolynomial load_polynomial(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string(e.what()));
    }
    return parse_polynomial(j);
}

inline Json polynomial_to_json(const MatrixPolynomial& p) {
    Json j;
    j["n"] = p.rows();
    j["m"] = p.cols();
    j["k"] = p.degree();
    Json coeffs = Json::array();
    for (const auto& a : p.coefficients()) coeffs.push_back(matrix_to_json(a));
    j["coefficients"] = std::move(coeffs);
    return j;
}

inline Json pair_to_json(const StandardPair& pair) {
    Json j;
    j["X"] = matrix_to_json(pair.X);
    j["Y"] = matrix_to_json(pair.Y);
    j["T"] = matrix_to_json(pair.T);
    j["Z"] = matrix_to_json(pair.Z);
    j["p"] = pair.p();
    j["q"] = pair.q();
    return j;
}

/// Companion files share the matrix encoding and carry a "kind" field:
/// pair | solvent | bisolvent | factor.
struct Companion {
    std::string kind;
    Json body;
};

inline Companion load_companion(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string(e.what()));
    }
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ParseError("companion file needs a string 'kind'");
    return Companion{j["kind"].get<std::string>(), std::move(j)};
}

inline StandardPair pair_from_json(const Json& j) {
    for (const char* field : {"X", "Y", "T", "Z"})
        if (!j.contains(field)) throw ParseError(std::string("pair needs field '") + field + "'");
    auto opt_matrix = [&](const char* field) {
        const Json& v = j[field];
        if (v.is_array() && v.empty()) return CMat(0, 0);
        return matrix_from_json(v, field);
    };
    CMat x = opt_matrix("X"), y = opt_matrix("Y"), t = opt_matrix("T"), z = opt_matrix("Z");
    if (y.size() == 0) y = CMat(x.rows(), 0);
    if (z.size() == 0) z = CMat(0, 0);
    return make_standard_pair(std::move(x), std::move(t), std::move(y), std::move(z));
}

inline Json weierstrass_to_json(const WeierstrassData& w) {
    Json finite = Json::array();
    for (const auto& fe : w.finite) {
        Json e;
        e["eigenvalue"] = complex_to_json(fe.value);
        e["partial_multiplicities"] = fe.partial_multiplicities;
        finite.push_back(std::move(e));
    }
    Json j;
    j["finite"] = std::move(finite);
    j["infinite_partial_multiplicities"] = w.infinite;
    return j;
}

inline Json regularity_to_json(const MatrixPolynomial& p, const RegularityReport& reg) {
    Json j;
    j["regular"] = reg.regular;
    j["n"] = p.rows();
    j["k"] = p.degree();
    j["det_degree"] = reg.M;
    j["infinite_multiplicity_total"] = reg.infinite_mult_total;
    Json det = Json::array();
    for (const auto& c : reg.det_poly.coefficients) det.push_back(complex_to_json(c));
    j["det_coefficients"] = std::move(det);
    return j;
}

inline Json solvents_to_json(const SolventEnumeration& e) {
    Json items = Json::array();
    for (const auto& s : e.items) {
        Json item;
        item["matrix"] = matrix_to_json(s.matrix);
        item["residual"] = s.residual;
        item["nilpotent"] = s.nilpotent;
        items.push_back(std::move(item));
    }
    Json j;
    j["items"] = std::move(items);
    j["count"] = e.items.size();
    j["infinite_family"] = e.infinite_family;
    j["bound"] = e.bound;
    j["truncated"] = e.truncated;
    return j;
}

inline Json bisolvents_to_json(const MatrixPolynomial& p, const BisolventEnumeration& e,
                               const Tolerance& tol) {
    Json items = Json::array();
    for (const auto& b : e.items) {
        Json item;
        item["S1"] = matrix_to_json(b.S1);
        item["S2"] = matrix_to_json(b.S2);
        item["Pi"] = matrix_to_json(b.Pi);
        Json alts = Json::array();
        for (const auto& pi : b.idempotents) alts.push_back(matrix_to_json(pi));
        item["idempotents"] = std::move(alts);
        const BisolventCheck check = verify_bisolvent(p, b, tol);
        item["checks"] = Json{{"commute", check.commute},
                              {"idempotent", check.idempotent},
                              {"separable", check.separable},
                              {"residual", check.residual}};
        items.push_back(std::move(item));
    }
    Json j;
    j["items"] = std::move(items);
    j["count"] = e.items.size();
    j["infinite_family"] = e.infinite_family;
    j["bound"] = e.bound;
    j["truncated"] = e.truncated;
    return j;
}

inline Json factorizations_to_json(const std::vector<Factorization>& atlas) {
    Json items = Json::array();
    for (const auto& f : atlas) {
        Json item;
        item["A1"] = matrix_to_json(f.factor.A1);
        item["A0"] = matrix_to_json(f.factor.A0);
        item["quotient"] = polynomial_to_json(f.quotient);
        item["max_rel_residual"] = f.max_rel_residual;
        item["source_S1"] = matrix_to_json(f.source.S1);
        item["source_S2"] = matrix_to_json(f.source.S2);
        items.push_back(std::move(item));
    }
    Json j;
    j["items"] = std::move(items);
    j["count"] = atlas.size();
    return j;
}

/// Text rendering with 6 significant digits (JSON carries full precision).
inline std::string format_complex(const Complex& z) {
    std::ostringstream out;
    out << std::setprecision(6) << z.real();
    if (z.imag() != 0.0) out << (z.imag() < 0 ? "-" : "+") << std::setprecision(6)
                             << std::abs(z.imag()) << "i";
    return out.str();
}

inline std::string format_matrix(const CMat& m, const std::string& indent = "  ") {
    std::ostringstream out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out << indent << "[";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ", ";
            out << format_complex(m(r, c));
        }
        out << "]\n";
    }
    return out.str();
}

}  // namespace matpoly::io
