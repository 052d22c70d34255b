#include "pifree/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pifree {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Sequence read_sequence(std::istream& in, int csv_column) {
    Sequence out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string field = line;
        if (csv_column >= 0) {
            std::istringstream cells(line);
            std::string cell;
            int col = 0;
            field.clear();
            while (std::getline(cells, cell, ',')) {
                if (col++ == csv_column) {
                    field = cell;
                    break;
                }
            }
        }
        field = trim(field);
        if (field.empty()) continue;
        if (field == "*") {
            out.push_back(std::nullopt);
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(field, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": not a number: '" + field + "'");
        }
        if (used != field.size() || !std::isfinite(v))
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": not a finite number: '" + field + "'");
        out.push_back(v);
    }
    return out;
}

Sequence read_sequence_file(const std::string& path, int csv_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return read_sequence(in, csv_column);
}

void write_sequence(std::ostream& out, const Sequence& f) {
    out.precision(17);
    for (const Entry& e : f) {
        if (e)
            out << *e << '\n';
        else
            out << "*\n";
    }
}

}  // namespace pifree
