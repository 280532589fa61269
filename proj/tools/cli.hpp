#pragma once

// Command dispatch for the logser tool. Kept in a header so tests can drive
// run() in-process with captured streams.
//
// Exit codes: 0 success, 1 domain error (unbalanced coefficients, budget,
// precision), 2 usage error (unknown or malformed flags).

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "logser/logser.hpp"

namespace logser::cli {

using json = nlohmann::ordered_json;

/// Malformed argument text that CLI11 itself cannot validate.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class output_format { json, text, csv };

struct run_config {
    real abs_err = 1e-9L;
    method eval_method = method::accelerated;
    std::uint64_t block_budget = default_block_budget;
    output_format format = output_format::json;
};

inline const char* const csv_header = "method,work,value,error_bound,abs_error_vs_reference,wall_time_micros";

struct convergence_row {
    std::string method;
    std::uint64_t work = 0;
    real value = 0;
    real error_bound = 0;
    real abs_error_vs_reference = 0;
    std::int64_t wall_time_micros = 0;
};

inline std::string csv_line(const convergence_row& r) {
    return r.method + "," + std::to_string(r.work) + "," + format_real(r.value) + "," + format_real(r.error_bound) +
           "," + format_real(r.abs_error_vs_reference) + "," + std::to_string(r.wall_time_micros);
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline std::vector<rational> parse_coeffs(const std::string& text) {
    std::vector<rational> out;
    for (const auto& item : split(text, ',')) {
        try {
            out.push_back(parse_rational(item));
        } catch (const logser::error&) {
            throw usage_error("--coeffs: '" + item + "' is not an integer or p/q rational");
        }
    }
    return out;
}

inline std::uint64_t parse_positive(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(text, &pos);
        if (pos == text.size() && v >= 1) return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
    }
    throw usage_error(what + ": '" + text + "' is not a positive integer");
}

inline std::uint64_t budget_from_env(std::uint64_t fallback) {
    const char* env = std::getenv("LOGSER_BLOCK_BUDGET");
    if (!env || !*env) return fallback;
    auto v = parse_positive(env, "LOGSER_BLOCK_BUDGET");
    if (v < 2) throw usage_error("LOGSER_BLOCK_BUDGET must be at least 2");
    return v;
}

inline json rational_list(std::span<const rational> qs) {
    json arr = json::array();
    for (const auto& q : qs) arr.push_back(to_string(q));
    return arr;
}

inline json vector_json(const coefficient_vector& v) {
    return json{{"T", v.modulus()}, {"coeffs", rational_list(v.coeffs())}};
}

class stopwatch {
public:
    std::int64_t micros() const {
        return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Common result record: the fixed schema fields plus command-specific extras.
struct report {
    std::string command;
    json inputs = json::object();
    real value = 0;
    real error_bound = 0;
    bool bound_is_heuristic = false;
    std::uint64_t blocks_used = 0;
    std::int64_t wall_time_micros = 0;
    json extra = json::object();
    std::vector<std::string> text_lines;
};

inline report from_eval(std::string command, json inputs, const eval_result& r, std::int64_t micros) {
    report rep;
    rep.command = std::move(command);
    rep.inputs = std::move(inputs);
    rep.inputs["method"] = std::string(to_string(r.method));
    rep.value = r.value;
    rep.error_bound = r.error_bound;
    rep.bound_is_heuristic = r.bound_is_heuristic;
    rep.blocks_used = r.blocks_used;
    rep.wall_time_micros = micros;
    return rep;
}

inline void emit(const report& rep, output_format fmt, std::ostream& out) {
    switch (fmt) {
        case output_format::json: {
            json j;
            j["command"] = rep.command;
            j["inputs"] = rep.inputs;
            j["value"] = format_real(rep.value);
            j["error_bound"] = format_real(rep.error_bound);
            j["precision"] = std::numeric_limits<real>::max_digits10;
            j["bound_is_heuristic"] = rep.bound_is_heuristic;
            j["blocks_used"] = rep.blocks_used;
            j["wall_time_micros"] = rep.wall_time_micros;
            for (const auto& [k, v] : rep.extra.items()) j[k] = v;
            out << j.dump(2) << "\n";
            break;
        }
        case output_format::text:
            out << rep.command << ": " << format_real(rep.value) << " +/- " << format_real(rep.error_bound, 3)
                << (rep.bound_is_heuristic ? " (estimated)" : "") << ", " << rep.blocks_used << " blocks, "
                << rep.wall_time_micros << " us\n";
            for (const auto& line : rep.text_lines) out << "  " << line << "\n";
            break;
        case output_format::csv:
            out << "command,value,error_bound,bound_is_heuristic,blocks_used,wall_time_micros\n"
                << rep.command << "," << format_real(rep.value) << "," << format_real(rep.error_bound) << ","
                << (rep.bound_is_heuristic ? "true" : "false") << "," << rep.blocks_used << ","
                << rep.wall_time_micros << "\n";
            break;
    }
}

struct bench_target {
    coefficient_vector vector;
    real scale = 1;
    real reference = 0;
    std::optional<std::uint64_t> ln_modulus;
};

inline bench_target parse_target(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.size() == 1 && parts[0] == "pi") {
        return {pi_vector(), 3 * std::sqrt(static_cast<real>(3)), std::numbers::pi_v<real>, std::nullopt};
    }
    if (parts.size() == 2 && parts[0] == "ln") {
        auto T = parse_positive(parts[1], "--target ln:T");
        return {ln_vector(T), 1, std::log(static_cast<real>(T)), T};
    }
    if (parts.size() == 3 && parts[0] == "vector") {
        auto T = parse_positive(parts[1], "--target vector:T");
        auto v = make_vector(T, parse_coeffs(parts[2]));
        real ref = v.modulus() == 1 ? 0 : evaluate_accelerated_blocks(v, 1000 * 2, 16).value;
        return {std::move(v), 1, ref, std::nullopt};
    }
    throw usage_error("--target: expected ln:<T>, pi, or vector:<T>:<c1,c2,...>, got '" + text + "'");
}

inline convergence_row bench_row(const bench_target& target, const std::string& name, std::uint64_t work,
                                 std::uint64_t budget) {
    stopwatch clock;
    convergence_row row;
    row.method = name;
    row.work = work;
    const auto& v = target.vector;
    if (name == "raw") {
        auto r = evaluate_raw_blocks(v, work, budget);
        row.value = r.value;
        row.error_bound = r.error_bound;
    } else if (name == "accelerated") {
        auto r = evaluate_accelerated_blocks(v, work, 8, budget);
        row.value = r.value;
        row.error_bound = r.error_bound;
    } else if (name == "rearranged") {
        if (!target.ln_modulus) throw usage_error("--methods rearranged applies only to ln:<T> targets");
        const std::uint64_t T = *target.ln_modulus;
        if (work < 2) throw invalid_argument("rearranged benchmark needs at least 2 blocks");
        logser::detail::check_budget(logser::detail::checked_mul(work, T + 1), budget, "rearranged benchmark");
        compensated_sum s;
        for (std::uint64_t k = 0; k < work; ++k) {
            for (std::uint64_t j = 1; j <= T; ++j) s.add(1 / (static_cast<real>(k * T + j)));
            s.add(-1 / static_cast<real>(k + 1));
        }
        row.value = s.value();
        row.error_bound = tail_bound(ln_vector(T), work) + s.rounding_bound(2);
    } else if (name == "quadrature") {
        if (v.modulus() < 2) {
            row.value = 0;
        } else {
            auto q = composite_gauss_legendre(vector_integrand(v), 0, 1, work);
            row.value = q.value;
            row.error_bound = q.error_estimate;
        }
    } else {
        throw usage_error("--methods: unknown method '" + name + "' (raw, accelerated, rearranged, quadrature)");
    }
    row.value *= target.scale;
    row.error_bound *= target.scale;
    row.abs_error_vs_reference = std::fabs(row.value - target.reference);
    row.wall_time_micros = clock.micros();
    return row;
}

}  // namespace detail

/// Runs one command line (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Logarithms, pi and gamma from balanced cyclic harmonic series", "logser"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    run_config cfg;
    std::string method_name = "accelerated";
    std::string format_name = "json";

    auto shared_flags = [&](CLI::App* sub, bool with_method) {
        sub->add_option("--abs-err", cfg.abs_err, "absolute error target")->check(CLI::PositiveNumber);
        if (with_method)
            sub->add_option("--method", method_name, "raw or accelerated")
                ->check(CLI::IsMember({"raw", "accelerated"}));
        sub->add_option("--format", format_name, "json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
    };

    std::function<void()> action;

    std::uint64_t T = 0, j = 0, n = 0;
    std::string coeffs_text, ratio_text, target_text;
    std::vector<std::string> methods;
    std::vector<std::uint64_t> work;
    std::optional<real> tol;

    auto* eval = app.add_subcommand("eval", "evaluate S_T(a) for explicit coefficients");
    eval->add_option("--T", T, "modulus")->required()->check(CLI::PositiveNumber);
    eval->add_option("--coeffs", coeffs_text, "comma-separated integers or p/q rationals")->required();
    shared_flags(eval, true);

    auto* ln = app.add_subcommand("ln", "natural logarithm of a positive integer");
    ln->add_option("T", T, "argument")->required()->check(CLI::PositiveNumber);
    shared_flags(ln, true);

    auto* lnq = app.add_subcommand("lnq", "natural logarithm of a positive rational M/L");
    lnq->add_option("ratio", ratio_text, "M/L")->required();
    shared_flags(lnq, true);

    auto* pi = app.add_subcommand("pi", "pi = 3 sqrt(3) S_3(1,-1,0)");
    shared_flags(pi, false);

    auto* gamma = app.add_subcommand("gamma", "A_n = H_n - ln n");
    gamma->add_option("--n", n, "index")->required()->check(CLI::PositiveNumber);
    shared_flags(gamma, false);

    auto* icheck = app.add_subcommand("integral-check", "compare int_0^1 (u^j - u^{j-1})/(u^T - 1) with its series");
    icheck->add_option("--T", T, "modulus")->required()->check(CLI::Range(2, 1 << 20));
    icheck->add_option("--j", j, "slot in [1, T-1]")->required()->check(CLI::PositiveNumber);
    icheck->add_option("--tol", tol, "quadrature tolerance")->check(CLI::Range(1e-13, 1.0));
    shared_flags(icheck, false);

    auto* decompose = app.add_subcommand("decompose", "rebuild ln T as sum_j j * I(T, j)");
    decompose->add_option("--T", T, "modulus")->required()->check(CLI::Range(2, 1 << 20));
    decompose->add_option("--tol", tol, "quadrature tolerance")->check(CLI::Range(1e-12, 1.0));
    shared_flags(decompose, false);

    auto* relations = app.add_subcommand("relations", "zero-value witnesses for composite T");
    relations->add_option("--T", T, "composite modulus <= 64")->required()->check(CLI::Range(2, 64));
    shared_flags(relations, false);

    auto* rearranged = app.add_subcommand("rearranged", "first n terms of the interleaved ln T stream");
    rearranged->add_option("--T", T, "modulus")->required()->check(CLI::PositiveNumber);
    rearranged->add_option("--n", n, "number of terms")->required()->check(CLI::PositiveNumber);
    shared_flags(rearranged, false);

    auto* bench = app.add_subcommand("bench", "convergence table as CSV");
    bench->add_option("--target", target_text, "ln:<T> | pi | vector:<T>:<c1,c2,...>")->required();
    bench->add_option("--methods", methods, "raw, accelerated, rearranged, quadrature")
        ->required()
        ->delimiter(',');
    bench->add_option("--work", work, "blocks (or panels) per row")->required()->delimiter(',')->check(
        CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.eval_method = *parse_method(method_name);
    cfg.format = format_name == "json" ? output_format::json
                 : format_name == "text" ? output_format::text
                                         : output_format::csv;

    try {
        cfg.block_budget = detail::budget_from_env(cfg.block_budget);
        eval_options opts;
        opts.block_budget = cfg.block_budget;
        const std::string name = sub->get_name();
        detail::stopwatch clock;

        auto eval_vector = [&](const std::string& command, json inputs, const coefficient_vector& v) {
            auto r = evaluate(v, cfg.abs_err, cfg.eval_method, opts);
            inputs["abs_err"] = format_real(cfg.abs_err, 6);
            auto rep = detail::from_eval(command, std::move(inputs), r, clock.micros());
            rep.extra["vector"] = detail::vector_json(v);
            detail::emit(rep, cfg.format, out);
        };

        if (name == "eval") {
            auto v = make_vector(T, detail::parse_coeffs(coeffs_text));
            eval_vector("eval", json{{"T", T}, {"coeffs", detail::rational_list(v.coeffs())}}, v);
        } else if (name == "ln") {
            eval_vector("ln", json{{"T", T}}, ln_vector(T));
        } else if (name == "lnq") {
            auto parts = detail::split(ratio_text, '/');
            if (parts.size() != 2) throw usage_error("lnq: expected <M>/<L>, got '" + ratio_text + "'");
            auto M = detail::parse_positive(parts[0], "lnq M");
            auto L = detail::parse_positive(parts[1], "lnq L");
            eval_vector("lnq", json{{"M", M}, {"L", L}}, ln_rational_vector(M, L));
        } else if (name == "pi") {
            auto p = pi_estimate(cfg.abs_err);
            auto rep = detail::from_eval("pi", json{{"abs_err", format_real(cfg.abs_err, 6)}}, p.series, clock.micros());
            rep.value = p.value;
            rep.error_bound = p.error_bound;
            rep.extra["arctan_value"] = format_real(pi_arctan());
            rep.extra["series_value"] = format_real(p.series.value);
            rep.text_lines.push_back("arctan route: " + format_real(pi_arctan()));
            detail::emit(rep, cfg.format, out);
        } else if (name == "gamma") {
            auto g = gamma_partial(n, cfg.block_budget);
            detail::report rep;
            rep.command = "gamma";
            rep.inputs = json{{"n", n}};
            rep.value = g.value;
            rep.error_bound = 4 * real_epsilon * (std::fabs(g.value) + std::log(static_cast<real>(n)));
            rep.blocks_used = n;
            rep.wall_time_micros = clock.micros();
            const real nn = static_cast<real>(n);
            const real corrected = g.value - 1 / (2 * nn) + 1 / (12 * nn * nn);
            rep.extra["gamma_estimate"] = format_real(corrected);
            rep.text_lines.push_back("A_n - 1/(2n) + 1/(12n^2) = " + format_real(corrected));
            detail::emit(rep, cfg.format, out);
        } else if (name == "integral-check") {
            const real t = tol.value_or(cfg.abs_err);
            auto c = integral_series_check(T, j, t);
            detail::report rep;
            rep.command = "integral-check";
            rep.inputs = json{{"T", T}, {"j", j}, {"tol", format_real(t, 6)}};
            rep.value = c.integral_value;
            rep.error_bound = c.tolerance + c.series_error_bound;
            rep.bound_is_heuristic = true;
            rep.wall_time_micros = clock.micros();
            rep.extra["integral_value"] = format_real(c.integral_value);
            rep.extra["series_value"] = format_real(c.series_value);
            rep.extra["discrepancy"] = format_real(c.discrepancy);
            rep.text_lines.push_back("series: " + format_real(c.series_value) +
                                     ", discrepancy: " + format_real(c.discrepancy, 3));
            detail::emit(rep, cfg.format, out);
        } else if (name == "decompose") {
            const real t = tol.value_or(1e-10L);
            const real value = decomposition_check(T, t);
            const real reference = std::log(static_cast<real>(T));
            detail::report rep;
            rep.command = "decompose";
            rep.inputs = json{{"T", T}, {"tol", format_real(t, 6)}};
            rep.value = value;
            rep.error_bound = t;
            rep.bound_is_heuristic = true;
            rep.wall_time_micros = clock.micros();
            rep.extra["reference"] = format_real(reference);
            rep.extra["abs_error_vs_reference"] = format_real(std::fabs(value - reference));
            rep.text_lines.push_back("reference ln T: " + format_real(reference));
            detail::emit(rep, cfg.format, out);
        } else if (name == "relations") {
            auto report = divisor_relations(T);
            const real eps = cfg.abs_err < 1e-6L ? 1e-6L : cfg.abs_err;
            json j;
            j["command"] = "relations";
            j["inputs"] = json{{"T", T}, {"eps", format_real(eps, 6)}};
            json fam = json::array();
            for (std::size_t i = 0; i < report.family.size(); ++i)
                fam.push_back(json{{"represents", "ln " + std::to_string(report.family_moduli[i])},
                                   {"vector", detail::vector_json(report.family[i])}});
            j["family"] = fam;
            json rels = json::array();
            for (const auto& r : report.relations.vectors) rels.push_back(detail::rational_list(r));
            j["relations"] = rels;
            json wit = json::array();
            std::ostringstream text;
            for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
                json w{{"vector", detail::vector_json(report.witnesses[i])},
                       {"basis_coordinates", detail::rational_list(report.basis_coordinates[i])}};
                try {
                    auto z = verify_zero(report.witnesses[i], eps, opts);
                    w["value"] = format_real(z.result.value);
                    w["error_bound"] = format_real(z.result.error_bound);
                    w["blocks_used"] = z.result.blocks_used;
                    w["is_zero_within_bound"] = z.is_zero_within_bound;
                    text << "  " << to_string(report.witnesses[i]) << " -> " << format_real(z.result.value, 6)
                         << " +/- " << format_real(z.result.error_bound, 3)
                         << (z.is_zero_within_bound ? " zero" : " NOT zero") << "\n";
                } catch (const budget_exceeded& e) {
                    w["unverified"] = e.what();
                    text << "  " << to_string(report.witnesses[i]) << " -> unverified (" << e.what() << ")\n";
                }
                wit.push_back(w);
            }
            j["witnesses"] = wit;
            j["wall_time_micros"] = clock.micros();
            if (cfg.format == output_format::json)
                out << j.dump(2) << "\n";
            else
                out << "relations for T = " << T << ": " << report.relations.vectors.size() << "\n" << text.str();
        } else if (name == "rearranged") {
            auto terms = rearranged_terms(T, n, cfg.block_budget);
            rational sum = 0;
            for (const auto& t : terms) sum += t;
            if (cfg.format == output_format::json) {
                json j{{"command", "rearranged"},
                       {"inputs", json{{"T", T}, {"n", n}}},
                       {"terms", detail::rational_list(terms)},
                       {"partial_sum", to_string(sum)},
                       {"value", format_real(to_real(sum))},
                       {"wall_time_micros", clock.micros()}};
                out << j.dump(2) << "\n";
            } else {
                for (const auto& t : terms) out << to_string(t) << "\n";
                out << "sum = " << to_string(sum) << " ~ " << format_real(to_real(sum)) << "\n";
            }
        } else if (name == "bench") {
            auto target = detail::parse_target(target_text);
            out << csv_header << "\n";
            for (const auto& m : methods)
                for (auto w : work) out << csv_line(detail::bench_row(target, m, w, cfg.block_budget)) << "\n";
        }
        return 0;
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n" << sub->help();
        return 2;
    } catch (const logser::error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace logser::cli
