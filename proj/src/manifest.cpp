#include "osmosis/manifest.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "osmosis/errors.hpp"

namespace osmosis {

namespace {
std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}
} // namespace

void RunManifest::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries.emplace_back(key, value);
}

void RunManifest::set(const std::string& key, double value) { set(key, format_double(value)); }

void RunManifest::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

const std::string* RunManifest::find(const std::string& key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return &v;
    }
    return nullptr;
}

void RunManifest::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open for writing");
    for (const auto& [k, v] : entries) {
        out << k << "=" << v << "\n";
    }
    if (!out) throw IoError(path + ": write failed");
}

RunManifest RunManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open");
    RunManifest m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw IoError(path + ": malformed manifest line '" + line + "'");
        }
        m.entries.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
}

void write_metrics_csv(const std::string& path, const std::vector<EvolveReport>& reports) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "channel,iteration,mass,min_value,update_norm,seconds\n";
    for (std::size_t c = 0; c < reports.size(); ++c) {
        const EvolveReport& r = reports[c];
        for (int k = 0; k < r.iterations; ++k) {
            out << c << "," << (k + 1) << "," << format_double(r.mass[k]) << ","
                << format_double(r.min_value[k]) << "," << format_double(r.update_norm[k]) << ","
                << format_double(r.seconds[k]) << "\n";
        }
    }
    if (!out) throw IoError(path + ": write failed");
}

} // namespace osmosis
