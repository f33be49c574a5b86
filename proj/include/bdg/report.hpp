#ifndef BDG_REPORT_HPP
#define BDG_REPORT_HPP

// Structured text reports for the CLI and the ensemble CSV contract.
//
// Reports are deterministic given identical inputs, except for the
// wall_time_* lines, which callers are expected to ignore when comparing
// runs. The CSV column order is a stability contract; do not reorder.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bdg/diagonalizer.hpp"
#include "bdg/types.hpp"

namespace bdg {

struct FockSection {
    bool present = false;
    int n_max = 0;
    Index levels = 0;
    RealVector<double> level_values;
    RealVector<double> level_errors;
    double gamma_error = 0;
    double alpha_error = 0;
    double tail_weight = 0;
    bool lower_bound_ok = false;
    bool pass = false;
};

struct Report {
    std::string label;
    Index dim = 0;
    double g_norm = 0;
    double g_hs = 0;
    double delta = 0;
    RealVector<double> xi_spectrum;
    double e0 = 0;
    CertificateBundle<double> certificates;
    FockSection fock;
    std::vector<std::pair<std::string, double>> wall_times_ms;
};

Report make_report(const Problem<double>& p,
                   const DiagonalizationResult<double>& r,
                   const std::string& label = "");

std::string render_report(const Report& report);

std::string ensemble_csv_header();
std::string ensemble_csv_row(std::uint64_t seed,
                             const CertificateBundle<double>& c, double e0);

}  // namespace bdg

#endif
