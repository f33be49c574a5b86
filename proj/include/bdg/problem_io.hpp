#ifndef BDG_PROBLEM_IO_HPP
#define BDG_PROBLEM_IO_HPP

// Text format for problem instances.
//
// A problem file is a JSON object with keys dim, h, k, an optional label,
// and schema_version. Matrices are stored row-major as nested arrays of
// [re, im] pairs. canonical_text emits sorted keys and 17-significant-digit
// floats, so writing a parsed file reproduces it byte for byte.

#include <string>

#include "bdg/nambu.hpp"
#include "bdg/types.hpp"

namespace bdg {

inline constexpr const char* kProblemSchemaVersion = "1.0";

struct ProblemFile {
    std::string schema_version = kProblemSchemaVersion;
    Index dim = 0;
    Matrix<double> h;
    Matrix<double> k;
    std::string label;
};

ProblemFile parse_problem_text(const std::string& text);
ProblemFile read_problem_file(const std::string& path);

std::string canonical_text(const ProblemFile& file);
void write_problem_file(const std::string& path, const ProblemFile& file);

ProblemFile to_problem_file(const Problem<double>& p,
                            const std::string& label = "");

// Runs the nambu validator on the stored matrices.
Problem<double> to_problem(const ProblemFile& file);

// Shared float formatting: shortest form at 17 significant digits.
std::string format_float(double x);

}  // namespace bdg

#endif
