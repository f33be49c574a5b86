#include "bdg/report.hpp"

#include <algorithm>

#include "bdg/problem_io.hpp"

namespace bdg {

namespace {

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string vector_text(const RealVector<double>& v) {
    std::string out = "[";
    for (Index i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_float(v(i));
    }
    return out + "]";
}

void line(std::string& out, const std::string& key, const std::string& val) {
    out += key + ": " + val + "\n";
}

}  // namespace

Report make_report(const Problem<double>& p,
                   const DiagonalizationResult<double>& r,
                   const std::string& label) {
    Report report;
    report.label = label;
    report.dim = p.dim;
    report.g_norm = r.certificates.g_norm;
    report.g_hs = r.certificates.g_hs;
    report.delta = r.delta;
    Eigen::SelfAdjointEigenSolver<Matrix<double>> es(r.xi,
                                                     Eigen::EigenvaluesOnly);
    report.xi_spectrum = es.eigenvalues();
    report.e0 = r.ground_energy;
    report.certificates = r.certificates;
    return report;
}

std::string render_report(const Report& report) {
    const auto& c = report.certificates;
    std::string out;
    line(out, "label", report.label.empty() ? "(none)" : report.label);
    line(out, "dim", std::to_string(report.dim));
    line(out, "g_norm", format_float(report.g_norm));
    line(out, "g_hs", format_float(report.g_hs));
    line(out, "delta", format_float(report.delta));
    line(out, "xi_spectrum", vector_text(report.xi_spectrum));
    line(out, "xi_min", format_float(c.xi_min));
    line(out, "e0", format_float(report.e0));
    line(out, "v_opnorm", format_float(c.v_opnorm));
    line(out, "v_opnorm_bound", format_float(c.v_opnorm_bound));
    line(out, "v_opnorm_bound_ok", bool_text(c.v_opnorm_bound_ok));
    line(out, "v_hs", format_float(c.v_hs));
    line(out, "v_hs_bound", format_float(c.v_hs_bound));
    line(out, "v_hs_bound_ok", bool_text(c.v_hs_bound_ok));
    line(out, "sandwich_ok", bool_text(c.sandwich_ok));
    line(out, "pairing_dominance_ok", bool_text(c.pairing_dominance_ok));
    line(out, "bogoliubov_ok", bool_text(c.bogoliubov_ok));
    line(out, "diag_eq_residual_particle",
         format_float(c.diag_eq_residuals[0]));
    line(out, "diag_eq_residual_pairing",
         format_float(c.diag_eq_residuals[1]));
    line(out, "diag_eq_residual_offdiag",
         format_float(c.diag_eq_residuals[2]));
    line(out, "diag_eq_ok", bool_text(c.diag_eq_ok));
    line(out, "joint_structure_residual",
         format_float(c.joint_structure_residual));
    line(out, "yy_identity_residual", format_float(c.yy_identity_residual));
    line(out, "joint_structure_ok", bool_text(c.joint_structure_ok));
    line(out, "offdiag_residual", format_float(c.offdiag_residual));
    line(out, "diag_block_residual", format_float(c.diag_block_residual));
    line(out, "block_diagonal_ok", bool_text(c.block_diagonal_ok));
    line(out, "lower_bound_hs", format_float(c.lower_bound_hs));
    line(out, "lower_bound_trace", format_float(c.lower_bound_trace));
    line(out, "lower_bound_ok", bool_text(c.lower_bound_ok));
    line(out, "certificates_pass", bool_text(c.pass()));
    if (report.fock.present) {
        line(out, "fock_n_max", std::to_string(report.fock.n_max));
        line(out, "fock_levels", std::to_string(report.fock.levels));
        line(out, "fock_level_values", vector_text(report.fock.level_values));
        line(out, "fock_level_errors", vector_text(report.fock.level_errors));
        line(out, "fock_gamma_error", format_float(report.fock.gamma_error));
        line(out, "fock_alpha_error", format_float(report.fock.alpha_error));
        line(out, "fock_tail_weight", format_float(report.fock.tail_weight));
        line(out, "fock_lower_bound_ok", bool_text(report.fock.lower_bound_ok));
        line(out, "fock_pass", bool_text(report.fock.pass));
    }
    for (const auto& [stage, ms] : report.wall_times_ms) {
        line(out, "wall_time_" + stage + "_ms", format_float(ms));
    }
    return out;
}

std::string ensemble_csv_header() {
    return "seed,g_norm,g_hs,v_opnorm,bound_18,v_hs,bound_19,"
           "max_diag_eq_residual,e0,lower_bound";
}

std::string ensemble_csv_row(std::uint64_t seed,
                             const CertificateBundle<double>& c, double e0) {
    const double max_residual =
        *std::max_element(c.diag_eq_residuals.begin(),
                          c.diag_eq_residuals.end());
    std::string out = std::to_string(seed);
    for (const double v : {c.g_norm, c.g_hs, c.v_opnorm, c.v_opnorm_bound,
                           c.v_hs, c.v_hs_bound, max_residual, e0,
                           c.lower_bound_hs}) {
        out += "," + format_float(v);
    }
    return out;
}

}  // namespace bdg
