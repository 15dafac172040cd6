#pragma once

#include <string>
#include <vector>

namespace twd {

struct Dataset {
    std::string name;
    std::vector<double> values;
    std::string source;
};

// Embedded reference datasets: "airplane" (30 air-conditioning failure
// times) and "pumps" (61 pump failure times, seven exact zeros).
const Dataset& dataset(const std::string& name);
std::vector<std::string> dataset_names();

}  // namespace twd
