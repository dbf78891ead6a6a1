// Command line front end: analyzes a fan or weight matrix file and emits
// the JSON report and optional section figure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "galekit/report.hpp"
#include "galekit/svg.hpp"

using namespace galekit;

namespace {

IntMat json_to_matrix(const Json& j, const std::string& name) {
    if (!j.is_array() || j.empty()) throw std::runtime_error(name + ": expected a matrix");
    int rows = int(j.size()), cols = int(j[0].size());
    IntMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (int(j[i].size()) != cols) throw std::runtime_error(name + ": ragged matrix");
        for (int k = 0; k < cols; ++k) {
            const Json& cell = j[i][k];
            if (cell.is_string())
                m(i, k) = Int(cell.get<std::string>());
            else
                m(i, k) = Int(cell.get<long long>());
        }
    }
    return m;
}

PinnedTransforms load_pins(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pin file " + path);
    Json j = Json::parse(in);
    PinnedTransforms p;
    if (j.contains("U")) p.U = json_to_matrix(j["U"], "U");
    if (j.contains("Uhat")) p.Uhat = json_to_matrix(j["Uhat"], "Uhat");
    if (j.contains("mu")) p.mu = json_to_matrix(j["mu"], "mu");
    if (j.contains("nu")) p.nu = json_to_matrix(j["nu"], "nu");
    if (j.contains("W")) p.W = json_to_matrix(j["W"], "W");
    if (j.contains("U_G")) p.U_G = json_to_matrix(j["U_G"], "U_G");
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact secondary-fan analysis of fan and weight matrices"};
    app.require_subcommand(1);

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "analyze a matrix file");
    std::string file, kind_str, json_path, svg_path, pin_path;
    bool enumerate_complete = false, timings = false;
    long max_candidates = 200000;
    analyze_cmd->add_option("file", file, "matrix file")->required();
    analyze_cmd->add_option("--kind", kind_str, "fan or weight (overrides the file header)")
        ->check(CLI::IsMember({"fan", "weight"}));
    analyze_cmd->add_option("--json", json_path, "write the JSON report to this path");
    analyze_cmd->add_option("--svg", svg_path, "write the rank-3 section figure to this path");
    analyze_cmd->add_flag("--enumerate-complete", enumerate_complete,
                          "enumerate all complete simplicial fans");
    analyze_cmd->add_option("--max-candidates", max_candidates,
                            "search budget for the complete-fan enumeration");
    analyze_cmd->add_option("--pin-transforms", pin_path,
                            "JSON file with pinned HNF/SNF transformation matrices");
    analyze_cmd->add_flag("--timings", timings, "include wall-clock stage timings in the report");

    CLI11_PARSE(app, argc, argv);

    try {
        ParsedMatrix parsed = parse_matrix_file(file);
        MatrixKind kind = parsed.kind;
        if (kind_str == "fan") kind = MatrixKind::fan;
        if (kind_str == "weight") kind = MatrixKind::weight;
        if (kind == MatrixKind::unspecified) kind = MatrixKind::fan;

        AnalyzeOptions opt;
        opt.enumerate_complete = enumerate_complete;
        opt.max_candidates = max_candidates;
        opt.timings = timings;
        if (!pin_path.empty()) opt.pins = load_pins(pin_path);

        AnalysisReport report = analyze(parsed.matrix, kind, opt);

        if (!svg_path.empty()) {
            IntMat Q = (kind == MatrixKind::weight)
                           ? (check_W(parsed.matrix).positive_ref ? parsed.matrix
                                                                  : positive_ref(parsed.matrix))
                           : positive_ref(gale_dual(reduce_fan(parsed.matrix).first));
            if (Q.rows() != 3) {
                std::cerr << "error: --svg needs a rank-3 input, got rank " << Q.rows() << "\n";
                return 2;
            }
            write_section_svg(Q, moving_chambers(enumerate_chambers(Q)), svg_path);
        }

        std::string text = report.json.dump(2) + "\n";
        if (!json_path.empty()) {
            std::ofstream out(json_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write " << json_path << "\n";
                return 2;
            }
            out << text;
        } else {
            std::cout << text;
        }
        return 0;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
