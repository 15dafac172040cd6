#include "twd/datasets.hpp"

#include "twd/errors.hpp"

namespace twd {

namespace {

const Dataset kAirplane{
    "airplane",
    {23, 261, 87, 7, 120, 14, 62, 47, 225, 71, 246, 21, 42, 20, 5,
     12, 120, 11, 3,  14,  71, 11, 14, 11, 16,  90, 1,   16, 52, 95},
    "failure times of the air conditioning system of an airplane (Linhart and Zucchini, 1986)"};

const Dataset kPumps{
    "pumps",
    {1,  2,  2,  2,  3,  4,  5,  8,  10, 11, 13, 13, 15, 17, 18, 26, 27, 29, 10, 14, 14,
     18, 21, 24, 28, 31, 34, 38, 41, 61, 15, 21, 23, 26, 33, 41, 43, 43, 56, 10, 25, 39,
     42, 48, 52, 24, 26, 34, 43, 44, 49, 51, 37, 40, 0,  0,  0,  0,  0,  0,  0},
    "time to failure of sixty-one cam-driven reciprocating pumps, Navy 3-M system "
    "(Dudenhoeffer et al., 1998)"};

}  // namespace

const Dataset& dataset(const std::string& name) {
    if (name == "airplane") return kAirplane;
    if (name == "pumps") return kPumps;
    throw DomainError("unknown embedded dataset '" + name + "' (available: airplane, pumps)");
}

std::vector<std::string> dataset_names() { return {"airplane", "pumps"}; }

}  // namespace twd
