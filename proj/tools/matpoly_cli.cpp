// Command-line front end: file ingestion, command dispatch, report emission.
//
// Exit codes: 0 success, 1 input error, 2 input not regular, 3 numerical
// failure.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "matpoly/io.hpp"
#include "matpoly/matpoly.hpp"

namespace {

using matpoly::Complex;
using matpoly::Tolerance;
using Json = matpoly::io::Json;

struct Options {
    std::string command;
    std::string input_path;
    std::string companion_path;
    std::string format = "text";
    double tol = 0.0;  // 0 means library defaults
    double rank_tol = 0.0;
    double cluster_radius = 0.0;
    std::string invert_list;
    long long max_enum = 1000000;
};

Tolerance make_tolerance(const Options& opt) {
    Tolerance tol;
    if (opt.tol > 0.0) {
        tol.residual_tol = opt.tol;
        tol.rank_tol = opt.tol * 1e-2;
        tol.cluster_radius = opt.tol * 1e3;
    }
    if (opt.rank_tol > 0.0) tol.rank_tol = opt.rank_tol;
    if (opt.cluster_radius > 0.0) tol.cluster_radius = opt.cluster_radius;
    return tol;
}

std::vector<Complex> parse_invert_list(const std::string& text) {
    std::vector<Complex> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        // Accept "a", "a+bi", "a-bi".
        double re = 0.0, im = 0.0;
        size_t pos = 0;
        try {
            re = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw matpoly::ParseError("bad --invert entry '" + item + "'");
        }
        std::string rest = item.substr(pos);
        if (!rest.empty()) {
            if (rest.back() != 'i' && rest.back() != 'j')
                throw matpoly::ParseError("bad --invert entry '" + item + "'");
            rest.pop_back();
            if (rest == "+" || rest.empty()) im = 1.0;
            else if (rest == "-") im = -1.0;
            else im = std::stod(rest);
        }
        out.emplace_back(re, im);
    }
    return out;
}

Json tolerance_to_json(const Tolerance& tol) {
    return Json{{"rank_tol", tol.rank_tol},
                {"cluster_radius", tol.cluster_radius},
                {"residual_tol", tol.residual_tol}};
}

void emit(const Options& opt, const Json& report, const std::string& text) {
    if (opt.format == "json") std::cout << report.dump(2) << "\n";
    else std::cout << text;
}

int run_reconstruct(const Options& opt, const Tolerance& tol) {
    const auto companion = matpoly::io::load_companion(opt.input_path);
    if (companion.kind != "pair")
        throw matpoly::ParseError("reconstruct expects a companion of kind 'pair'");
    const auto pair = matpoly::io::pair_from_json(companion.body);
    const auto m = pair.m();
    const auto total = pair.p() + pair.q();
    if (m == 0 || total % m != 0)
        throw matpoly::DimensionMismatch("pair size is not a multiple of m");
    const int k = static_cast<int>(total / m);
    const auto rec = matpoly::reconstruct_from_pair(pair, static_cast<int>(m), k, tol);

    Json report;
    report["schema_version"] = "1";
    report["command"] = opt.command;
    report["input"] = opt.input_path;
    report["tolerance"] = tolerance_to_json(tol);
    report["polynomial"] = matpoly::io::polynomial_to_json(rec);
    report["regularity"] = matpoly::io::regularity_to_json(rec, matpoly::regularity(rec));
    report["warnings"] = Json::array();

    std::ostringstream text;
    text << "reconstructed n=" << rec.rows() << " k=" << rec.degree() << "\n";
    for (int i = 0; i <= rec.degree(); ++i)
        text << "A" << i << ":\n" << matpoly::io::format_matrix(rec.coeff(i));
    emit(opt, report, text.str());
    return 0;
}

int run_command(const Options& opt) {
    const Tolerance tol = make_tolerance(opt);
    if (opt.command == "reconstruct") return run_reconstruct(opt, tol);

    const matpoly::MatrixPolynomial poly = matpoly::io::load_polynomial(opt.input_path);
    const matpoly::RegularityReport reg = matpoly::regularity(poly);

    Json report;
    report["schema_version"] = "1";
    report["command"] = opt.command;
    report["input"] = opt.input_path;
    report["tolerance"] = tolerance_to_json(tol);
    report["regularity"] = matpoly::io::regularity_to_json(poly, reg);
    Json warnings = Json::array();

    std::ostringstream text;
    text << opt.command << " " << opt.input_path << "\n";
    text << "n=" << poly.rows() << " k=" << poly.degree() << " regular="
         << (reg.regular ? "yes" : "no") << " M=" << reg.M
         << " infinite=" << reg.infinite_mult_total << "\n";

    if (!reg.regular) {
        report["warnings"] = warnings;
        emit(opt, report, text.str() + "input polynomial is not regular\n");
        return 2;
    }

    if (opt.command == "analyze") {
        if (poly.degree() >= 1) {
            const auto pair = matpoly::maximal_standard_pair(poly, tol);
            const auto data = matpoly::weierstrass_of_pair(pair, tol);
            report["weierstrass"] = matpoly::io::weierstrass_to_json(data);
            text << "finite eigenvalues:\n";
            for (const auto& fe : data.finite) {
                text << "  " << matpoly::io::format_complex(fe.value) << "  multiplicities [";
                for (size_t i = 0; i < fe.partial_multiplicities.size(); ++i)
                    text << (i ? " " : "") << fe.partial_multiplicities[i];
                text << "]\n";
            }
            text << "infinite partial multiplicities: [";
            for (size_t i = 0; i < data.infinite.size(); ++i)
                text << (i ? " " : "") << data.infinite[i];
            text << "]\n";
        } else {
            report["weierstrass"] = matpoly::io::weierstrass_to_json({});
            text << "constant polynomial: empty spectrum\n";
        }
    } else if (opt.command == "pair") {
        auto pair = matpoly::maximal_standard_pair(poly, tol);
        if (!opt.invert_list.empty())
            pair = matpoly::spectral_inversion(pair, parse_invert_list(opt.invert_list),
                                               matpoly::InversionSide::to_infinite, tol);
        const auto check = matpoly::verify_standard_pair(poly, pair, tol);
        Json jp = matpoly::io::pair_to_json(pair);
        jp["residual_t"] = check.residual_t;
        jp["residual_z"] = check.residual_z;
        jp["rank_ok"] = check.rank_ok;
        report["pair"] = std::move(jp);
        text << "p=" << pair.p() << " q=" << pair.q() << " residuals ("
             << check.residual_t << ", " << check.residual_z << ") rank_ok="
             << (check.rank_ok ? "yes" : "no") << "\n";
        text << "X:\n" << matpoly::io::format_matrix(pair.X);
        text << "T:\n" << matpoly::io::format_matrix(pair.T);
        text << "Y:\n" << matpoly::io::format_matrix(pair.Y);
        text << "Z:\n" << matpoly::io::format_matrix(pair.Z);
    } else if (opt.command == "solvents" || opt.command == "cosolvents") {
        const auto result = opt.command == "solvents"
                                ? matpoly::solvents(poly, tol, opt.max_enum)
                                : matpoly::cosolvents(poly, tol, opt.max_enum);
        if (result.truncated) warnings.push_back("enumeration truncated at --max-enum");
        report[opt.command] = matpoly::io::solvents_to_json(result);
        text << result.items.size() << " " << opt.command << " (bound " << result.bound
             << ", infinite_family=" << (result.infinite_family ? "yes" : "no") << ")\n";
        for (size_t i = 0; i < result.items.size(); ++i) {
            const auto& s = result.items[i];
            text << "#" << i << " residual " << s.residual
                 << (s.nilpotent ? " [nilpotent]" : "") << "\n"
                 << matpoly::io::format_matrix(s.matrix);
        }
    } else if (opt.command == "bisolvents") {
        const auto result = matpoly::bisolvents(poly, tol, opt.max_enum);
        if (result.truncated) warnings.push_back("enumeration truncated at --max-enum");
        report["bisolvents"] = matpoly::io::bisolvents_to_json(poly, result, tol);
        text << result.items.size() << " separable bisolvents\n";
        for (size_t i = 0; i < result.items.size(); ++i) {
            const auto& b = result.items[i];
            text << "#" << i << " (" << b.idempotents.size() << " idempotent"
                 << (b.idempotents.size() == 1 ? "" : "s") << ")\n";
            text << "S1:\n" << matpoly::io::format_matrix(b.S1);
            text << "S2:\n" << matpoly::io::format_matrix(b.S2);
            text << "Pi:\n" << matpoly::io::format_matrix(b.Pi);
        }
    } else if (opt.command == "factor") {
        const auto atlas = matpoly::factor_atlas(poly, tol, opt.max_enum);
        report["factorizations"] = matpoly::io::factorizations_to_json(atlas);
        text << atlas.size() << " factorizations\n";
        for (size_t i = 0; i < atlas.size(); ++i) {
            text << "#" << i << " residual " << atlas[i].max_rel_residual
                 << " quotient degree " << atlas[i].quotient.degree() << "\n";
            text << "F.A1:\n" << matpoly::io::format_matrix(atlas[i].factor.A1);
            text << "F.A0:\n" << matpoly::io::format_matrix(atlas[i].factor.A0);
        }
    } else if (opt.command == "verify") {
        const auto companion = matpoly::io::load_companion(opt.companion_path);
        Json jv;
        jv["kind"] = companion.kind;
        bool pass = false;
        if (companion.kind == "pair") {
            const auto pair = matpoly::io::pair_from_json(companion.body);
            const auto check = matpoly::verify_standard_pair(poly, pair, tol);
            jv["residual_t"] = check.residual_t;
            jv["residual_z"] = check.residual_z;
            jv["rank_ok"] = check.rank_ok;
            pass = check.passes(tol);
        } else if (companion.kind == "solvent") {
            const auto s = matpoly::io::matrix_from_json(companion.body.at("S"), "S");
            const double residual = matpoly::brute_solvent_check(poly, s);
            jv["residual"] = residual;
            pass = residual <= tol.residual_tol;
        } else if (companion.kind == "bisolvent") {
            matpoly::Bisolvent b;
            b.S1 = matpoly::io::matrix_from_json(companion.body.at("S1"), "S1");
            b.S2 = matpoly::io::matrix_from_json(companion.body.at("S2"), "S2");
            b.Pi = matpoly::io::matrix_from_json(companion.body.at("Pi"), "Pi");
            const auto check = matpoly::verify_bisolvent(poly, b, tol);
            jv["commute"] = check.commute;
            jv["idempotent"] = check.idempotent;
            jv["separable"] = check.separable;
            jv["residual"] = check.residual;
            pass = check.passes(tol);
        } else if (companion.kind == "factor") {
            matpoly::Pencil f;
            f.A1 = matpoly::io::matrix_from_json(companion.body.at("A1"), "A1");
            f.A0 = matpoly::io::matrix_from_json(companion.body.at("A0"), "A0");
            const auto check = matpoly::verify_right_factor(poly, f, tol);
            jv["divides"] = check.divides;
            if (check.divides) jv["residual"] = check.residual;
            jv["equivalent_to_atlas"] = check.equivalent_to_atlas;
            jv["atlas_index"] = check.atlas_index;
            pass = check.divides;
        } else {
            throw matpoly::ParseError("unknown companion kind '" + companion.kind + "'");
        }
        jv["pass"] = pass;
        report["verify"] = std::move(jv);
        text << "verify " << companion.kind << ": " << (pass ? "pass" : "FAIL") << "\n";
    }

    report["warnings"] = warnings;
    emit(opt, report, text.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral data, solvents, and right factors of regular matrix polynomials"};
    app.require_subcommand(1);

    Options opt;
    const std::vector<std::string> commands = {"analyze",    "pair",   "solvents",
                                               "cosolvents", "bisolvents", "factor",
                                               "verify",     "reconstruct"};
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("input", opt.input_path, "polynomial (or pair) JSON file")->required();
        if (name == "verify")
            sub->add_option("companion", opt.companion_path,
                            "companion JSON file (kind: pair|solvent|bisolvent|factor)")
                ->required();
        sub->add_option("--tol", opt.tol, "residual tolerance (rank/cluster derived)");
        sub->add_option("--rank-tol", opt.rank_tol, "override rank tolerance");
        sub->add_option("--cluster-radius", opt.cluster_radius, "override root cluster radius");
        sub->add_option("--format", opt.format, "text|json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--max-enum", opt.max_enum, "enumeration cap");
        if (name == "pair")
            sub->add_option("--invert", opt.invert_list,
                            "comma list of finite eigenvalues to invert");
        sub->callback([&opt, name] { opt.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        return run_command(opt);
    } catch (const matpoly::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.category()) {
            case matpoly::ErrorCategory::input: return 1;
            case matpoly::ErrorCategory::structure: return 2;
            case matpoly::ErrorCategory::numerical: return 3;
        }
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
