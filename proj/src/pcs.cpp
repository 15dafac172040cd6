#include "twd/pcs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "twd/rng.hpp"

namespace twd {

namespace {

struct ReplicateOutcome {
    bool failed = false;
    bool lrt_correct = false;
    bool ksd_correct = false;
};

std::string describe_candidates(const std::vector<Candidate>& cs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i) os << "|";
        os << family_name(cs[i].family) << ":" << cs[i].power.value();
    }
    return os.str();
}

ReplicateOutcome run_replicate(const Scenario& s, const std::vector<Candidate>& candidates,
                               std::uint64_t rep_seed) {
    ReplicateOutcome out;
    try {
        const DensityEngine parent_engine(s.parent, SeriesPolicy{}, s.gl_order);
        std::vector<double> draws =
            parent_engine.sample(static_cast<std::size_t>(s.sample_size), rep_seed);
        const Sample data(std::move(draws));

        FitOptions opts;
        opts.compute_ksd = false;
        opts.gl_order = s.gl_order;
        std::vector<FitResult> fits;
        fits.reserve(candidates.size());
        for (const Candidate& c : candidates) fits.push_back(fit(c.family, c.power, data, opts));

        if (s.criterion != PcsCriterion::Ksd) {
            int best = 0;
            // Pairwise Cox rule: with one alternative this is the LRT sign
            // decision with ties to the alternative.
            for (std::size_t i = 1; i < fits.size(); ++i)
                if (fits[i].log_likelihood >= fits[best].log_likelihood)
                    best = static_cast<int>(i);
            out.lrt_correct = best == 0;
        }
        if (s.criterion != PcsCriterion::Lrt) {
            const std::size_t count =
                s.ksd_draws > 0 ? s.ksd_draws : static_cast<std::size_t>(s.sample_size);
            int best = 0;
            double bestd = 0.0;
            for (std::size_t i = 0; i < fits.size(); ++i) {
                const double d = ksd(fits[i].spec, data,
                                     CdfMode::ecdf(count, derive_seed(rep_seed, 1000 + i)),
                                     SeriesPolicy{}, s.gl_order);
                if (i == 0 || d < bestd) {
                    bestd = d;
                    best = static_cast<int>(i);
                }
            }
            out.ksd_correct = best == 0;
        }
    } catch (const Error&) {
        out.failed = true;
    }
    return out;
}

}  // namespace

void Scenario::validate() const {
    if (alternatives.empty()) throw DomainError("scenario needs at least one alternative");
    if (criterion != PcsCriterion::Ksd && alternatives.size() != 1)
        throw DomainError("the LRT criterion requires exactly 1 alternative");
    if (replicates < 1) throw DomainError("replicates must be >= 1");
    if (sample_size < 2) throw DomainError("sample_size must be >= 2");
    if (workers < 1) throw DomainError("workers must be >= 1");
    if (!(parent.power.value() > 1.0))
        throw DomainError("parent must have p > 1 (samplable and fittable)");
}

PcsRow run_scenario(const Scenario& s) {
    s.validate();
    PcsRow row;
    row.parent_family = s.parent.family;
    row.parent_p = s.parent.power.value();
    row.phi = s.parent.dispersion;
    row.mean = s.parent.mean;
    row.sample_size = s.sample_size;
    row.alternatives = describe_candidates(s.alternatives);
    row.seed = s.master_seed;

    std::vector<Candidate> candidates;
    candidates.push_back({s.parent.family, s.parent.power});
    candidates.insert(candidates.end(), s.alternatives.begin(), s.alternatives.end());

    const int n_rep = s.replicates;
    std::vector<ReplicateOutcome> outcomes(n_rep);
    const int workers = std::min(s.workers, n_rep);
    if (workers <= 1) {
        for (int k = 0; k < n_rep; ++k)
            outcomes[k] = run_replicate(s, candidates, derive_seed(s.master_seed, k));
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int k = w; k < n_rep; k += workers)
                    outcomes[k] = run_replicate(s, candidates, derive_seed(s.master_seed, k));
            });
        }
        for (std::thread& t : pool) t.join();
    }

    int failures = 0, lrt_correct = 0, ksd_correct = 0;
    for (const ReplicateOutcome& o : outcomes) {
        if (o.failed) {
            ++failures;
            continue;
        }
        lrt_correct += o.lrt_correct ? 1 : 0;
        ksd_correct += o.ksd_correct ? 1 : 0;
    }
    row.failures = failures;
    if (failures * 10 > n_rep) {
        std::ostringstream os;
        os << "scenario failed: " << failures << "/" << n_rep << " replicates errored";
        row.error = os.str();
        return row;
    }
    const double denom = static_cast<double>(n_rep - failures);
    if (s.criterion != PcsCriterion::Ksd) row.pcs_lrt = lrt_correct / denom;
    if (s.criterion != PcsCriterion::Lrt) row.pcs_ksd = ksd_correct / denom;
    return row;
}

PcsTable run_grid(Family parent_family, const PowerParam& parent_power,
                  const std::vector<double>& phis, const std::vector<double>& means,
                  const std::vector<Candidate>& alternatives, const std::vector<int>& sizes,
                  int replicates, PcsCriterion criterion, std::uint64_t master_seed, int workers,
                  std::size_t ksd_draws) {
    if (phis.empty() || means.empty() || sizes.empty()) throw DomainError("empty PCS grid");
    PcsTable table;
    std::uint64_t cell = 0;
    for (double phi : phis) {
        for (double mean : means) {
            for (int n : sizes) {
                for (const Candidate& alt : alternatives) {
                    Scenario s{ModelSpec(parent_family, parent_power, mean, phi),
                               {alt},
                               n,
                               replicates,
                               criterion,
                               derive_seed(master_seed, cell),
                               workers,
                               ksd_draws};
                    ++cell;
                    try {
                        table.rows.push_back(run_scenario(s));
                    } catch (const Error& e) {
                        PcsRow row;
                        row.parent_family = parent_family;
                        row.parent_p = parent_power.value();
                        row.phi = phi;
                        row.mean = mean;
                        row.sample_size = n;
                        row.alternatives = describe_candidates({alt});
                        row.seed = s.master_seed;
                        row.error = e.what();
                        table.rows.push_back(row);
                    }
                }
            }
        }
    }
    return table;
}

std::string csv_header() {
    return "family_parent,p_parent,phi,m,n,alternative,criterion,pcs,failures,seed";
}

namespace {

std::string csv_line(const PcsRow& r, const char* criterion, double pcs) {
    std::ostringstream os;
    os << family_name(r.parent_family) << "," << r.parent_p << "," << r.phi << "," << r.mean
       << "," << r.sample_size << "," << r.alternatives << "," << criterion << "," << pcs << ","
       << r.failures << "," << r.seed;
    return os.str();
}

}  // namespace

std::string to_csv(const PcsRow& row) {
    std::ostringstream os;
    if (!row.error.empty()) {
        os << family_name(row.parent_family) << "," << row.parent_p << "," << row.phi << ","
           << row.mean << "," << row.sample_size << "," << row.alternatives << ",error,nan,"
           << row.failures << "," << row.seed << "\n";
        return os.str();
    }
    if (row.pcs_lrt) os << csv_line(row, "lrt", *row.pcs_lrt) << "\n";
    if (row.pcs_ksd) os << csv_line(row, "ksd", *row.pcs_ksd) << "\n";
    return os.str();
}

}  // namespace twd
