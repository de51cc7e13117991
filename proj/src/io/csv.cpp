#include "delayrep/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace delayrep::io {

namespace {

constexpr const char* kGroups[] = {"x", "y", "z", "v"};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

std::string trajectory_to_csv(const Trajectory& traj) {
    std::ostringstream out;
    out << "t";
    for (const char* g : kGroups) {
        const Matrix& m = traj.signal(g);
        for (Index i = 0; i < m.rows(); ++i) out << ',' << g << '_' << i;
    }
    out << '\n';
    char buf[40];
    for (Index k = 0; k < traj.samples(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.t[static_cast<std::size_t>(k)]);
        out << buf;
        for (const char* g : kGroups) {
            const Matrix& m = traj.signal(g);
            for (Index i = 0; i < m.rows(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", m(i, k));
                out << ',' << buf;
            }
        }
        out << '\n';
    }
    return out.str();
}

Trajectory trajectory_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("trajectory CSV is empty");
    const auto header = split(line);
    if (header.empty() || header[0] != "t") throw ValidationError("trajectory CSV must start with a 't' column");

    std::map<std::string, Index> rows;
    std::vector<std::pair<std::string, Index>> column_of;  // (group, component) per column
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto us = header[c].find('_');
        if (us == std::string::npos) throw ValidationError("unexpected CSV column '" + header[c] + "'");
        const std::string g = header[c].substr(0, us);
        if (g != "x" && g != "y" && g != "z" && g != "v") {
            throw ValidationError("unexpected CSV column '" + header[c] + "'");
        }
        const Index idx = std::atol(header[c].c_str() + us + 1);
        if (idx != rows[g]) throw ValidationError("CSV columns of '" + g + "' out of order");
        rows[g] = idx + 1;
        column_of.emplace_back(g, idx);
    }

    std::vector<std::vector<double>> data;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw ValidationError("CSV row " + std::to_string(data.size() + 1) + " has the wrong number of cells");
        }
        std::vector<double> row;
        for (const auto& cell : cells) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw ValidationError("non-numeric CSV cell '" + cell + "'");
            if (!std::isfinite(v)) throw ValidationError("non-finite CSV cell '" + cell + "'");
            row.push_back(v);
        }
        data.push_back(std::move(row));
    }

    Trajectory tr;
    const auto cols = static_cast<Index>(data.size());
    tr.x = Matrix::Zero(rows["x"], cols);
    tr.y = Matrix::Zero(rows["y"], cols);
    tr.z = Matrix::Zero(rows["z"], cols);
    tr.v = Matrix::Zero(rows["v"], cols);
    tr.xdot = Matrix::Zero(0, cols);
    tr.w = Matrix::Zero(0, cols);
    tr.u = Matrix::Zero(0, cols);
    for (Index k = 0; k < cols; ++k) {
        const auto& row = data[static_cast<std::size_t>(k)];
        tr.t.push_back(row[0]);
        for (std::size_t c = 0; c < column_of.size(); ++c) {
            const auto& [g, i] = column_of[c];
            Matrix& target = g == "x" ? tr.x : g == "y" ? tr.y : g == "z" ? tr.z : tr.v;
            target(i, k) = row[c + 1];
        }
    }
    tr.dt = tr.t.size() > 1 ? tr.t[1] - tr.t[0] : 0.0;
    tr.representation = "csv";
    return tr;
}

void write_trajectory(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write trajectory file '" + path + "'");
    out << trajectory_to_csv(traj);
}

Trajectory read_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read trajectory file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return trajectory_from_csv(buf.str());
}

}  // namespace delayrep::io
