#include "bdg/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bdg/errors.hpp"

namespace bdg {

namespace {

using nlohmann::json;

Matrix<double> parse_matrix(const json& node, Index dim,
                            const std::string& key) {
    if (!node.is_array() || static_cast<Index>(node.size()) != dim) {
        throw SchemaError(key + " must be an array of " +
                          std::to_string(dim) + " rows");
    }
    Matrix<double> m(dim, dim);
    for (Index r = 0; r < dim; ++r) {
        const json& row = node[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
            throw SchemaError(key + " row " + std::to_string(r) +
                              " must have " + std::to_string(dim) +
                              " entries");
        }
        for (Index c = 0; c < dim; ++c) {
            const json& entry = row[static_cast<std::size_t>(c)];
            if (!entry.is_array() || entry.size() != 2 ||
                !entry[0].is_number() || !entry[1].is_number()) {
                throw SchemaError(key + " entries must be [re, im] pairs");
            }
            m(r, c) = Complex<double>(entry[0].get<double>(),
                                      entry[1].get<double>());
        }
    }
    return m;
}

void append_matrix(std::string& out, const Matrix<double>& m) {
    out += "[\n";
    for (Index r = 0; r < m.rows(); ++r) {
        out += "    [";
        for (Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out += ", ";
            out += "[" + format_float(m(r, c).real()) + ", " +
                   format_float(m(r, c).imag()) + "]";
        }
        out += r + 1 < m.rows() ? "],\n" : "]\n";
    }
    out += "  ]";
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string format_float(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

ProblemFile parse_problem_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("problem file is not valid JSON: ") +
                          e.what());
    }
    if (!doc.is_object()) throw SchemaError("top level must be an object");
    for (const char* key : {"schema_version", "dim", "h", "k"}) {
        if (!doc.contains(key)) {
            throw SchemaError(std::string("missing required key: ") + key);
        }
    }
    ProblemFile file;
    if (!doc["schema_version"].is_string()) {
        throw SchemaError("schema_version must be a string");
    }
    file.schema_version = doc["schema_version"].get<std::string>();
    if (file.schema_version != kProblemSchemaVersion) {
        throw SchemaError("unsupported schema_version: " +
                          file.schema_version);
    }
    if (!doc["dim"].is_number_integer() || doc["dim"].get<long>() < 1) {
        throw SchemaError("dim must be a positive integer");
    }
    file.dim = doc["dim"].get<Index>();
    file.h = parse_matrix(doc["h"], file.dim, "h");
    file.k = parse_matrix(doc["k"], file.dim, "k");
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) {
            throw SchemaError("label must be a string");
        }
        file.label = doc["label"].get<std::string>();
    }
    return file;
}

ProblemFile read_problem_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open problem file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str());
}

std::string canonical_text(const ProblemFile& file) {
    std::string out = "{\n";
    out += "  \"dim\": " + std::to_string(file.dim) + ",\n";
    out += "  \"h\": ";
    append_matrix(out, file.h);
    out += ",\n  \"k\": ";
    append_matrix(out, file.k);
    out += ",\n";
    if (!file.label.empty()) {
        out += "  \"label\": \"" + escape(file.label) + "\",\n";
    }
    out += "  \"schema_version\": \"" + escape(file.schema_version) + "\"\n";
    out += "}\n";
    return out;
}

void write_problem_file(const std::string& path, const ProblemFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write problem file: " + path);
    out << canonical_text(file);
    if (!out) throw SchemaError("short write to problem file: " + path);
}

ProblemFile to_problem_file(const Problem<double>& p,
                            const std::string& label) {
    ProblemFile file;
    file.dim = p.dim;
    file.h = p.h;
    file.k = p.k;
    file.label = label;
    return file;
}

Problem<double> to_problem(const ProblemFile& file) {
    return validate_problem(file.h, file.k);
}

}  // namespace bdg
