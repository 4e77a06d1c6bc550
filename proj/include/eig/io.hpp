#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eig/errors.hpp"
#include "eig/version.hpp"

namespace eig {

// One exported data set: a grid column plus named value columns.
struct DataTable {
    std::string grid_name;
    std::vector<double> grid;
    std::vector<std::pair<std::string, std::vector<double>>> series;
};

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// FNV-1a 64-bit over the file bytes; enough to pin outputs in the manifest.
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

inline std::string render_csv(const DataTable& t, const std::string& config_echo) {
    std::ostringstream o;
    o << "# eigsim " << version << "\n";
    o << "# resolved configuration:\n";
    std::istringstream echo(config_echo);
    std::string line;
    while (std::getline(echo, line)) o << "#   " << line << "\n";
    o << t.grid_name;
    for (const auto& [name, col] : t.series) o << "," << name;
    o << "\n";
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
        o << format_g17(t.grid[i]);
        for (const auto& [name, col] : t.series) {
            if (col.size() != t.grid.size()) throw numerical_error("render_csv: ragged column " + name);
            o << "," << format_g17(col[i]);
        }
        o << "\n";
    }
    return o.str();
}

inline std::string render_json(const DataTable& t) {
    nlohmann::json j;
    j["grid"] = t.grid;
    nlohmann::json s = nlohmann::json::object();
    for (const auto& [name, col] : t.series) {
        if (col.size() != t.grid.size()) throw numerical_error("render_json: ragged column " + name);
        s[name] = col;
    }
    j["series"] = s;
    return j.dump(1) + "\n";
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open for writing: " + path);
    f << bytes;
    if (!f) throw config_error("write failed: " + path);
}

// gnuplot script referencing the data file by name; nothing is linked or
// executed by the tool itself.
inline std::string render_plot_script(const std::string& data_file, const DataTable& t) {
    std::ostringstream o;
    o << "# gnuplot script generated by eigsim " << version << "\n";
    o << "set datafile separator ','\n";
    o << "set key autotitle columnhead\n";
    o << "set xlabel '" << t.grid_name << "'\n";
    o << "plot ";
    for (std::size_t i = 0; i < t.series.size(); ++i) {
        if (i) o << ", ";
        o << "'" << data_file << "' using 1:" << (i + 2) << " with lines";
    }
    o << "\n";
    return o.str();
}

// Run record: the resolved config, the grids, and a checksum for every data
// file written.  The timestamp lives here and only here.
struct ResultManifest {
    std::string config_echo;
    std::map<std::string, std::string> file_checksums;
    std::map<std::string, nlohmann::json> grid_meta;
    std::map<std::string, nlohmann::json> extra;

    void add_grid(const std::string& name, const std::vector<double>& g) {
        grid_meta[name] = {{"points", g.size()},
                           {"min", g.empty() ? 0.0 : g.front()},
                           {"max", g.empty() ? 0.0 : g.back()}};
    }

    std::string render() const {
        nlohmann::json j;
        j["tool"] = "eigsim";
        j["version"] = version;
        const auto now = std::chrono::system_clock::now();
        j["generated_unix_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
        j["config"] = config_echo;
        j["grids"] = grid_meta;
        j["files"] = file_checksums;
        if (!extra.empty()) j["extra"] = extra;
        return j.dump(1) + "\n";
    }
};

} // namespace eig
