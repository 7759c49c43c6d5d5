#pragma once

#include <string>
#include <utility>
#include <vector>

#include "osmosis/solvers.hpp"

namespace osmosis {

/// Flat, ordered key-value record of a run: subcommand, paths, and every
/// resolved parameter. Written alongside outputs so a run can be reproduced
/// bit-identically.
struct RunManifest {
    std::vector<std::pair<std::string, std::string>> entries;

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);
    const std::string* find(const std::string& key) const;

    void save(const std::string& path) const;
    static RunManifest load(const std::string& path);
};

/// Appends one CSV row per iteration of each report:
/// channel,iteration,mass,min_value,update_norm,seconds
void write_metrics_csv(const std::string& path, const std::vector<EvolveReport>& reports);

} // namespace osmosis
