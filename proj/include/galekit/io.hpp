#pragma once

#include "galekit/quotient.hpp"

#include <fstream>
#include <sstream>

namespace galekit {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MatrixKind { unspecified, fan, weight };

struct ParsedMatrix {
    IntMat matrix;
    MatrixKind kind = MatrixKind::unspecified;
};

// Whitespace-separated integer rows; '#' starts a comment; an optional
// header line `# kind=fan` or `# kind=weight` tags the matrix.
inline ParsedMatrix parse_matrix_stream(std::istream& in, const std::string& name) {
    ParsedMatrix out;
    std::vector<IntVec> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string content = line;
        size_t hash = content.find('#');
        if (hash != std::string::npos) {
            std::string comment = content.substr(hash + 1);
            size_t kw = comment.find("kind=");
            if (kw != std::string::npos) {
                std::string value = comment.substr(kw + 5);
                value = value.substr(0, value.find_first_of(" \t\r\n"));
                if (value == "fan")
                    out.kind = MatrixKind::fan;
                else if (value == "weight")
                    out.kind = MatrixKind::weight;
                else
                    throw ParseError(name + ":" + std::to_string(lineno) + ": unknown kind '" +
                                     value + "'");
            }
            content = content.substr(0, hash);
        }
        std::istringstream ss(content);
        IntVec row;
        std::string tok;
        while (ss >> tok) {
            try {
                row.push_back(Int(tok));
            } catch (const std::exception&) {
                throw ParseError(name + ":" + std::to_string(lineno) + ": not an integer: '" +
                                 tok + "'");
            }
        }
        if (row.empty()) continue;
        if (!rows.empty() && rows[0].size() != row.size())
            throw ParseError(name + ":" + std::to_string(lineno) + ": ragged row, expected " +
                             std::to_string(rows[0].size()) + " entries, got " +
                             std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(name + ": no matrix rows found");
    out.matrix = from_rows(rows, int(rows[0].size()));
    return out;
}

inline ParsedMatrix parse_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return parse_matrix_stream(in, path);
}

}  // namespace galekit
