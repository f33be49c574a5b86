#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bdg/diagonalizer.hpp"
#include "bdg/fock.hpp"
#include "bdg/generate.hpp"
#include "bdg/problem_io.hpp"
#include "bdg/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitGap = 2;
constexpr int kExitCertificate = 3;
constexpr int kExitTruncation = 4;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start)
        .count();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw bdg::SchemaError("cannot write output: " + out_path);
    out << text;
}

int cmd_diagonalize(const std::string& input, double tol,
                    const std::string& out_path) {
    const auto file = bdg::read_problem_file(input);
    const auto problem = bdg::to_problem(file);

    const auto start = Clock::now();
    const auto result = bdg::bosonic_diagonalize(problem, tol);
    const double ms = elapsed_ms(start);

    auto report = bdg::make_report(problem, result, file.label);
    report.wall_times_ms.emplace_back("diagonalize", ms);
    emit(bdg::render_report(report), out_path);
    if (!result.certificates.pass()) {
        std::cerr << "certificate failure on " << input << "\n";
        return kExitCertificate;
    }
    return kExitOk;
}

int cmd_verify(const std::string& input, int n_max, int levels,
               double level_tol, const std::string& out_path) {
    const auto file = bdg::read_problem_file(input);
    const auto problem = bdg::to_problem(file);

    auto start = Clock::now();
    const auto result = bdg::bosonic_diagonalize(problem);
    const double diag_ms = elapsed_ms(start);

    start = Clock::now();
    const auto spectrum =
        bdg::verify_spectrum(problem, result, n_max, levels);
    const double verify_ms = elapsed_ms(start);

    auto report = bdg::make_report(problem, result, file.label);
    report.fock.present = true;
    report.fock.n_max = n_max;
    report.fock.levels = levels;
    report.fock.level_values = spectrum.levels;
    report.fock.level_errors = spectrum.level_errors;
    report.fock.gamma_error = spectrum.gamma_error;
    report.fock.alpha_error = spectrum.alpha_error;
    report.fock.tail_weight = spectrum.tail_weight;
    report.fock.lower_bound_ok =
        bdg::lower_bound_check(problem, result.ground_energy);

    const double dm_tol = std::max(level_tol, 10.0 * spectrum.tail_weight);
    report.fock.pass = spectrum.level_errors.maxCoeff() <= level_tol &&
                       spectrum.gamma_error <= dm_tol &&
                       spectrum.alpha_error <= dm_tol;
    report.wall_times_ms.emplace_back("diagonalize", diag_ms);
    report.wall_times_ms.emplace_back("verify", verify_ms);
    emit(bdg::render_report(report), out_path);
    if (!report.fock.pass) {
        std::cerr << "spectrum verification failed on " << input << "\n";
        return kExitCertificate;
    }
    return kExitOk;
}

int cmd_generate(const std::string& kind_name, bdg::Index modes, double gnorm,
                 std::uint64_t seed, const std::string& out_path) {
    const auto kind = bdg::instance_kind_from_string(kind_name);
    const auto problem = bdg::generate_instance(kind, modes, gnorm, seed);
    const std::string label = kind_name + " n=" + std::to_string(modes) +
                              " g=" + bdg::format_float(gnorm) +
                              " seed=" + std::to_string(seed);
    emit(bdg::canonical_text(bdg::to_problem_file(problem, label)), out_path);
    return kExitOk;
}

int cmd_ensemble(int count, bdg::Index modes, double g_lo, double g_hi,
                 std::uint64_t seed, double tol,
                 const std::string& out_path) {
    if (count < 0) throw bdg::InvalidParams("count must be non-negative");
    if (!(g_lo > 0.0) || !(g_hi < 1.0) || g_lo > g_hi) {
        throw bdg::InvalidParams("coupling range must satisfy "
                                 "0 < gmin <= gmax < 1");
    }
    std::string csv = bdg::ensemble_csv_header() + "\n";
    bool all_pass = true;
    std::uint64_t first_failure = 0;
    for (int i = 0; i < count; ++i) {
        const std::uint64_t instance_seed = seed + static_cast<unsigned>(i);
        const double gnorm =
            count == 1 ? (g_lo + g_hi) / 2.0
                       : g_lo + (g_hi - g_lo) * i / (count - 1.0);
        const auto problem = bdg::generate_instance(
            bdg::InstanceKind::Random, modes, gnorm, instance_seed);
        const auto result = bdg::bosonic_diagonalize(problem, tol);
        if (result.delta < 0.01) {
            std::cerr << "warning: seed " << instance_seed
                      << " is near critical (g="
                      << bdg::format_float(result.certificates.g_norm)
                      << ", delta=" << bdg::format_float(result.delta)
                      << "); certificates may be ill conditioned\n";
        }
        csv += bdg::ensemble_csv_row(instance_seed, result.certificates,
                                     result.ground_energy) +
               "\n";
        if (!result.certificates.pass() && all_pass) {
            all_pass = false;
            first_failure = instance_seed;
        }
    }
    emit(csv, out_path);
    if (!all_pass) {
        std::cerr << "certificate failure, first failing seed "
                  << first_failure << "\n";
        return kExitCertificate;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bogoliubov diagonalization of quadratic bosonic "
                 "Hamiltonians with machine-checkable certificates"};
    app.require_subcommand(1);

    std::string input;
    std::string out_path;
    std::string kind = "random";
    double tol = 1e-9;
    double level_tol = 1e-6;
    int n_max = 20;
    int levels = 5;
    bdg::Index modes = 4;
    double gnorm = 0.5;
    double g_lo = 0.1;
    double g_hi = 0.9;
    int count = 10;
    std::uint64_t seed = 1;

    auto* diag = app.add_subcommand(
        "diagonalize", "Diagonalize a problem file and emit certificates");
    diag->add_option("input", input, "problem file")->required();
    diag->add_option("--tol", tol, "certificate tolerance");
    diag->add_option("--out", out_path, "report path (default stdout)");

    auto* verify = app.add_subcommand(
        "verify", "Check the spectrum against a truncated Fock "
                  "diagonalization");
    verify->add_option("input", input, "problem file")->required();
    verify->add_option("--nmax", n_max, "Fock truncation cutoff");
    verify->add_option("--levels", levels, "number of levels to compare");
    verify->add_option("--tol", level_tol, "level comparison tolerance");
    verify->add_option("--out", out_path, "report path (default stdout)");

    auto* gen = app.add_subcommand("generate",
                                   "Write a deterministic problem file");
    gen->add_option("--kind", kind, "commutative, random, or laplacian");
    gen->add_option("--modes", modes, "number of modes");
    gen->add_option("--gnorm", gnorm, "target pairing strength in (0, 1)");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--out", out_path, "problem file path (default stdout)");

    auto* ens = app.add_subcommand(
        "ensemble", "Generate, diagonalize, and certify a batch; emit CSV");
    ens->add_option("--count", count, "number of instances");
    ens->add_option("--modes", modes, "number of modes");
    ens->add_option("--gmin", g_lo, "lower end of the coupling range");
    ens->add_option("--gmax", g_hi, "upper end of the coupling range");
    ens->add_option("--seed", seed, "base seed");
    ens->add_option("--tol", tol, "certificate tolerance");
    ens->add_option("--out", out_path, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (diag->parsed()) return cmd_diagonalize(input, tol, out_path);
        if (verify->parsed()) {
            return cmd_verify(input, n_max, levels, level_tol, out_path);
        }
        if (gen->parsed()) {
            return cmd_generate(kind, modes, gnorm, seed, out_path);
        }
        return cmd_ensemble(count, modes, g_lo, g_hi, seed, tol, out_path);
    } catch (const bdg::GapViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGap;
    } catch (const bdg::TruncationUnreliable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTruncation;
    } catch (const bdg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
