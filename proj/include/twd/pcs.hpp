#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twd/inference.hpp"

namespace twd {

enum class PcsCriterion { Lrt, Ksd, Both };

// One probability-of-correct-selection experiment cell.
struct Scenario {
    ModelSpec parent;
    std::vector<Candidate> alternatives;
    int sample_size = 20;
    int replicates = 100;
    PcsCriterion criterion = PcsCriterion::Both;
    std::uint64_t master_seed = 0;
    int workers = 1;
    // Draw count of the simulated model CDFs used by the KSD rule; 0 means
    // "use sample_size", mirroring the empirical-CDF substitution the
    // discrimination study describes.
    std::size_t ksd_draws = 0;
    int gl_order = 64;

    void validate() const;
};

struct PcsRow {
    // descriptor
    Family parent_family;
    double parent_p;
    double phi;
    double mean;
    int sample_size;
    std::string alternatives;  // "fam:p|fam:p" form
    std::uint64_t seed;
    // results
    std::optional<double> pcs_lrt;
    std::optional<double> pcs_ksd;
    int failures = 0;
    std::string error;  // non-empty when the cell failed as a whole
};

struct PcsTable {
    std::vector<PcsRow> rows;
};

// Run one scenario: N replicates, each sampling n points from the parent,
// fitting parent + alternative candidates and classifying per criterion.
// PCS = correct / (replicates - failures).
PcsRow run_scenario(const Scenario& s);

// Grid of scenarios over (phi, mean) x sample sizes for a fixed parent
// family/power. Cell errors are recorded in the row and the grid continues.
PcsTable run_grid(Family parent_family, const PowerParam& parent_power,
                  const std::vector<double>& phis, const std::vector<double>& means,
                  const std::vector<Candidate>& alternatives, const std::vector<int>& sizes,
                  int replicates, PcsCriterion criterion, std::uint64_t master_seed,
                  int workers = 1, std::size_t ksd_draws = 0);

std::string csv_header();
std::string to_csv(const PcsRow& row);  // one line per criterion present

}  // namespace twd
