#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end: curve scans, certification runs,
 *        perturbation sampling, Galois field reports and the toy problem.
 *
 * Exit codes: 0 success / certified, 2 well-formed negative verdict,
 * 1 usage or runtime error.  Files are written atomically (temp file in the
 * same directory, then rename).  Floats are printed with 17 significant
 * digits; JSON keys appear in a fixed order.
 */

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sixcyl/certificate.hpp"
#include "sixcyl/configuration.hpp"
#include "sixcyl/error.hpp"
#include "sixcyl/galois.hpp"
#include "sixcyl/version.hpp"

namespace sixcyl::cli {

enum exit_code : int { ok = 0, failure = 1, negative = 2 };

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

/// 17 significant digits; non-finite values become null.
inline std::string num(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Same digits for CSV, where non-finite values are spelled out.
inline std::string csv_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return num(v);
}

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        default: out += c;
        }
    }
    return out + "\"";
}

template <typename Vec>
std::string num_array(const Vec& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(v.size()); ++i) {
        if (i) out += ", ";
        out += num(v[static_cast<std::size_t>(i)]);
    }
    return out + "]";
}

inline std::string num_array(const Eigen::VectorXd& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += num(v(i));
    }
    return out + "]";
}

inline std::string matrix_json(const Eigen::MatrixXd& m, const std::string& indent) {
    if (m.rows() == 0) return "[]";
    std::string out = "[\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out += indent + "  [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            out += num(m(i, j));
        }
        out += i + 1 < m.rows() ? "],\n" : "]\n";
    }
    return out + indent + "]";
}

/**
 * Certificate as JSON: verdict, rank, singular_values, lambda (labeled),
 * e_dim, restricted_form, eigenvalues, margins, tool_version, seed, then
 * the failure reason.
 */
inline std::string certificate_json(const certificate& c, const std::vector<std::string>& labels,
                                    std::uint64_t seed) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"verdict\": " << quote(to_string(c.result)) << ",\n";
    os << "  \"rank\": " << c.rank << ",\n";
    os << "  \"singular_values\": " << num_array(c.singular_values) << ",\n";
    os << "  \"lambda\": [";
    for (Eigen::Index i = 0; i < c.lambda.size(); ++i) {
        os << (i ? ",\n    " : "\n    ");
        const std::string name = static_cast<std::size_t>(i) < labels.size() ? labels[static_cast<std::size_t>(i)] : "";
        os << "{\"pair\": " << quote(name) << ", \"value\": " << num(c.lambda(i))
           << ", \"scaled_to_10\": " << num(10.0 * c.lambda(i)) << "}";
    }
    os << (c.lambda.size() ? "\n  ],\n" : "],\n");
    os << "  \"e_dim\": " << c.e_basis.cols() << ",\n";
    os << "  \"restricted_form\": " << matrix_json(c.restricted_form, "  ") << ",\n";
    os << "  \"eigenvalues\": " << num_array(c.eigenvalues) << ",\n";
    os << "  \"margins\": {\"min_lambda\": " << num(c.margins.min_lambda)
       << ", \"max_eigenvalue\": " << num(c.margins.max_eigenvalue) << ", \"sv_gap\": " << num(c.margins.sv_gap)
       << "},\n";
    os << "  \"tool_version\": " << quote(version) << ",\n";
    os << "  \"seed\": " << seed << ",\n";
    os << "  \"reason\": " << quote(c.reason) << "\n";
    os << "}\n";
    return os.str();
}

struct scan_row {
    double x, phi, delta, kappa, d2_common, d2_ae_class, psi_residual;
};

inline std::string scan_csv(const std::vector<scan_row>& rows) {
    std::string out = "x,phi,delta,kappa,d2_common,d2_AE_class,psi_residual\n";
    for (const auto& r : rows) {
        out += csv_num(r.x) + "," + csv_num(r.phi) + "," + csv_num(r.delta) + "," + csv_num(r.kappa) + "," +
               csv_num(r.d2_common) + "," + csv_num(r.d2_ae_class) + "," + csv_num(r.psi_residual) + "\n";
    }
    return out;
}

inline std::string samples_json(const sample_statistics& s) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"samples\": " << s.samples << ",\n";
    os << "  \"t_values\": " << num_array(s.t_values) << ",\n";
    os << "  \"seed\": " << s.seed << ",\n";
    os << "  \"threshold\": " << num(s.threshold) << ",\n";
    os << "  \"max_D\": " << num(s.max_D) << ",\n";
    os << "  \"violations\": " << s.violations << ",\n";
    os << "  \"tool_version\": " << quote(version) << "\n";
    os << "}\n";
    return os.str();
}

inline std::string field_json(const field_report& r) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"x\": " << quote(to_string(r.x)) << ",\n";
    os << "  \"field\": " << quote(r.field()) << ",\n";
    os << "  \"d\": " << r.d << ",\n";
    os << "  \"p_rational\": " << (r.p_rational ? "true" : "false") << ",\n";
    os << "  \"note\": " << quote(r.note) << ",\n";
    os << "  \"coefficients\": [";
    for (std::size_t i = 0; i < r.coefficients.size(); ++i) {
        const auto& c = r.coefficients[i];
        os << (i ? ",\n    " : "\n    ");
        os << "{\"series\": " << quote(c.series) << ", \"k\": " << c.k << ", \"value\": " << num(c.value);
        if (c.exact)
            os << ", \"exact\": {\"a\": " << quote(to_string(c.exact->a())) << ", \"b\": "
               << quote(to_string(c.exact->b())) << ", \"d\": " << (c.exact->is_rational() ? r.d : c.exact->d())
               << "}";
        else
            os << ", \"exact\": null";
        os << ", \"residual\": " << num(c.residual) << ", \"confirmation_residual\": " << num(c.confirmation_residual)
           << "}";
    }
    os << (r.coefficients.empty() ? "],\n" : "\n  ],\n");
    os << "  \"all_reconstructed\": " << (r.all_reconstructed ? "true" : "false") << ",\n";
    os << "  \"swap_holds\": " << (r.swap_holds ? "true" : "false") << ",\n";
    os << "  \"tool_version\": " << quote(version) << "\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/**
 * Writes `content` to `path` atomically, or to `out` when path is "-".
 *
 * @throws error(errc::invalid_argument) for an empty path; std::runtime_error
 *         on I/O failure.
 */
inline void write_output(const std::string& path, const std::string& content, std::ostream& out = std::cout) {
    if (path.empty()) throw error(errc::invalid_argument, "empty output path");
    if (path == "-") {
        out << content;
        out.flush();
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << content;
        f.flush();
        if (!f) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename onto " + target.string() + ": " + ec.message());
    }
}

inline void emit_certificate(const certificate& c, const std::vector<std::string>& labels, std::uint64_t seed,
                             const std::string& path, std::ostream& out = std::cout) {
    write_output(path, certificate_json(c, labels, seed), out);
}

inline void emit_scan(const std::vector<scan_row>& rows, const std::string& path, std::ostream& out = std::cout) {
    if (rows.empty()) throw error(errc::invalid_argument, "no rows to emit");
    write_output(path, scan_csv(rows), out);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline std::vector<scan_row> scan_rows(double from, double to, int steps) {
    if (steps < 0) throw error(errc::invalid_argument, "steps must be non-negative");
    if (!(from > 0.0) || !(to <= 1.0) || !(from <= to)) throw error(errc::parameter_out_of_range, "need 0 < from <= to <= 1");
    std::vector<scan_row> rows;
    for (int i = 0; i <= steps; ++i) {
        const double x = (i == steps) ? to : from + (to - from) * static_cast<double>(i) / std::max(steps, 1);
        make_curve_point(x);  // range check
        // Extended precision so the printed 17 digits are the correctly rounded values.
        const auto a = curve_angles_at(static_cast<long double>(x));
        const auto cfg = build_c6(a.phi, a.delta, a.kappa);
        long double common = INFINITY, ae = INFINITY;
        for (const line_pair& p : all_pairs()) {
            const long double d2 = pair_distance_sq(cfg, p);
            if (class_of(p) == pair_class::ae_triplet) ae = std::min(ae, d2);
            else common = std::min(common, d2);
        }
        rows.push_back({x, static_cast<double>(a.phi), static_cast<double>(a.delta), static_cast<double>(a.kappa),
                        static_cast<double>(common), static_cast<double>(ae), curve_psi_residual(x)});
    }
    return rows;
}

/// Certificate of the twelve relevant maps at curve parameter x in (0, 1).
inline certificate certify_at(const rational& x) {
    if (!(x > 0) || !(x < 1)) throw error(errc::parameter_out_of_range, "certify needs x in (0, 1)");
    const double xd = static_cast<double>(x);
    const auto chart = x == rational(1, 2) ? perturbation_chart<double>::record()
                                           : perturbation_chart<double>::at(xd, chart_norms::generic(xd));
    return certify(curve_problem(chart), coords(chart_dim, 0.0));
}

inline std::vector<std::string> relevant_labels() {
    std::vector<std::string> out;
    for (const auto& p : relevant_pairs()) out.push_back(p.name());
    return out;
}

inline std::vector<double> parse_t_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw error(errc::invalid_argument, "bad t value '" + item + "'");
        }
        if (used != item.size() || !(v > 0.0)) throw error(errc::invalid_argument, "bad t value '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw error(errc::invalid_argument, "no t values");
    return out;
}

/**
 * Parses argv and runs one subcommand.
 *
 * @return 0 on success, 2 on a negative verdict, 1 on usage/runtime errors.
 */
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Six tangent cylinders around the unit sphere: curve scans, sharp-maximum certificates, "
                 "Galois reports"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    std::string out_path = "-";
    double from = 0.01, to = 1.0;
    int steps = 100;
    std::string x_text = "1/2";
    std::size_t samples = 10000;
    std::string t_text = "1e-2,1e-3";
    std::uint64_t seed = 1;
    int order = 1;
    std::int64_t max_den = 10000;

    auto* scan = app.add_subcommand("scan", "Tabulate the extremal curve");
    scan->add_option("--from", from, "Smallest x (exclusive of 0)");
    scan->add_option("--to", to, "Largest x (at most 1)");
    scan->add_option("--steps", steps, "Number of intervals; steps+1 rows")->check(CLI::NonNegativeNumber);
    scan->add_option("--out", out_path, "Output CSV path, '-' for stdout");

    auto* cert = app.add_subcommand("certify", "Run the sharp-maximum certificate at a curve point");
    cert->add_option("--x", x_text, "Curve parameter as an exact rational, e.g. 1/2");
    cert->add_option("--out", out_path, "Output JSON path, '-' for stdout");

    auto* pert = app.add_subcommand("perturb", "Sample random perturbations of the record configuration");
    pert->add_option("--samples", samples, "Number of random unit directions");
    pert->add_option("--t", t_text, "Comma-separated step lengths");
    pert->add_option("--seed", seed, "Seed of the direction stream");
    pert->add_option("--out", out_path, "Output JSON path, '-' for stdout");

    auto* gal = app.add_subcommand("galois", "Field membership of delta-only Taylor coefficients");
    gal->add_option("--x", x_text, "Curve parameter as an exact rational in (0, 1)");
    gal->add_option("--order", order, "Highest Taylor order (0..2)");
    gal->add_option("--max-den", max_den, "Largest admissible denominator");
    gal->add_option("--out", out_path, "Output JSON path, '-' for stdout");

    auto* toy = app.add_subcommand("toy", "Certificate of the two-function counterexample");
    toy->add_option("--out", out_path, "Output JSON path, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? ok : failure;
    }

    try {
        if (scan->parsed()) {
            emit_scan(scan_rows(from, to, steps), out_path, out);
            return ok;
        }
        if (cert->parsed()) {
            const certificate c = certify_at(parse_rational(x_text));
            emit_certificate(c, relevant_labels(), 0, out_path, out);
            return c.result == verdict::certified_sharp_max ? ok : negative;
        }
        if (pert->parsed()) {
            const sample_statistics s = perturb_sample(samples, parse_t_values(t_text), seed);
            write_output(out_path, samples_json(s), out);
            return s.violations == 0 ? ok : negative;
        }
        if (gal->parsed()) {
            const field_report r = field_check(parse_rational(x_text), order, max_den);
            write_output(out_path, field_json(r), out);
            return (!r.p_rational && r.all_reconstructed && r.swap_holds) ? ok : negative;
        }
        if (toy->parsed()) {
            const min_problem p = toy_problem();
            const certificate c = certify(p, coords(2, 0.0));
            emit_certificate(c, p.labels, 0, out_path, out);
            return c.result == verdict::certified_sharp_max ? ok : negative;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
    return failure;
}

} // namespace sixcyl::cli
