// twdisc command-line front end. Talks to the core exclusively through the
// C API in twdisc.h.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twdisc.h"

namespace {

using nlohmann::json;

int g_precision = 6;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", g_precision, v);
    return buf;
}

[[noreturn]] void die(int code, const std::string& msg) {
    std::cerr << "twdisc: " << msg << "\n";
    std::exit(code);
}

void check(int rc) {
    if (rc != TWD_OK) die(rc, twd_last_error());
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t s =
        (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
    std::cerr << "seed: " << s << "\n";
    return s;
}

struct FamilyP {
    int family;
    double p;
};

FamilyP parse_family_p(const std::string& token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) die(TWD_EDOMAIN, "candidate '" + token + "' is not fam:p");
    const std::string fam = token.substr(0, colon);
    FamilyP fp;
    if (fam == "tw") fp.family = TWD_FAMILY_TWEEDIE;
    else if (fam == "gtw") fp.family = TWD_FAMILY_GEOMETRIC;
    else die(TWD_EDOMAIN, "unknown family '" + fam + "' (expected tw or gtw)");
    fp.p = std::stod(token.substr(colon + 1));
    return fp;
}

// Candidate syntax: fam:p, or fam:lo..hi:step range expansion.
std::vector<FamilyP> parse_candidates(const std::string& arg) {
    std::vector<FamilyP> out;
    std::stringstream ss(arg);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        const auto dots = token.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_family_p(token));
            continue;
        }
        const auto colon1 = token.find(':');
        const auto colon2 = token.rfind(':');
        if (colon1 == std::string::npos || colon2 == colon1)
            die(TWD_EDOMAIN, "range '" + token + "' is not fam:lo..hi:step");
        const std::string fam = token.substr(0, colon1);
        const double lo = std::stod(token.substr(colon1 + 1, dots - colon1 - 1));
        const double hi = std::stod(token.substr(dots + 2, colon2 - dots - 2));
        const double step = std::stod(token.substr(colon2 + 1));
        if (!(step > 0.0) || hi < lo) die(TWD_EDOMAIN, "bad range '" + token + "'");
        const int count = static_cast<int>(std::llround((hi - lo) / step));
        for (int i = 0; i <= count; ++i)
            out.push_back(parse_family_p(fam + ":" + num(lo + i * step)));
    }
    return out;
}

std::vector<double> parse_list(const std::string& arg) {
    std::vector<double> out;
    std::stringstream ss(arg);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(std::stod(token));
    }
    return out;
}

std::vector<double> load_data(const std::string& name) {
    const double* values = nullptr;
    size_t n = 0;
    if (twd_dataset(name.c_str(), &values, &n) == TWD_OK)
        return std::vector<double>(values, values + n);
    std::ifstream in(name);
    if (!in) die(TWD_EDOMAIN, "cannot open data file or dataset '" + name + "'");
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::stringstream ss(line);
        double v;
        while (ss >> v) out.push_back(v);
    }
    if (out.empty()) die(TWD_EDOMAIN, "no numeric values in '" + name + "'");
    return out;
}

struct ModelHandle {
    twd_model* m = nullptr;
    ~ModelHandle() { twd_model_free(m); }
};

const char* family_str(int family) {
    return family == TWD_FAMILY_TWEEDIE ? "tw" : "gtw";
}

// ---- density ----

int cmd_density(const std::string& family, double p, double mean, double phi,
                const std::string& xs_arg, const std::string& grid_arg,
                const std::string& method, std::size_t draws, int nodes,
                std::optional<std::uint64_t> seed_opt) {
    std::vector<double> xs = xs_arg.empty() ? std::vector<double>{} : parse_list(xs_arg);
    if (!grid_arg.empty()) {
        const std::vector<double> g = parse_list(grid_arg);  // lo:hi:step via commas? use colons
        (void)g;
    }
    ModelHandle h;
    const FamilyP fp = parse_family_p(family + ":" + num(p));
    check(twd_model_new(fp.family, p, mean, phi, &h.m));
    if (nodes != 64) check(twd_model_set_quadrature(h.m, nodes));

    const bool mc = method == "mc";
    if (mc && fp.family != TWD_FAMILY_GEOMETRIC)
        die(TWD_EDOMAIN, "--method mc applies to the geometric family");
    const std::uint64_t seed = mc ? resolve_seed(seed_opt) : 0;

    std::printf("x,density,is_atom\n");
    for (double x : xs) {
        double v = 0.0;
        int atom = 0;
        if (mc) check(twd_density_mc(h.m, x, draws, seed, &v, &atom));
        else check(twd_density(h.m, x, &v, &atom));
        std::printf("%s,%s,%d\n", num(x).c_str(), num(v).c_str(), atom);
    }
    return 0;
}

// ---- fit ----

int cmd_fit(const std::string& data_arg, const std::string& family, double p,
            const std::string& cdf_mode, std::size_t ecdf_draws,
            std::optional<std::uint64_t> seed_opt) {
    const std::vector<double> data = load_data(data_arg);
    const FamilyP fp = parse_family_p(family + ":1.5");
    if (p >= 2.0) {
        std::ostringstream zeros;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data[i] == 0.0) zeros << " " << i;
        if (!zeros.str().empty())
            die(TWD_EDOMAIN, "p >= 2 requires strictly positive data; zero observations at"
                             " indices" + zeros.str());
    }
    const int mode = cdf_mode == "ecdf" ? TWD_CDF_ECDF : TWD_CDF_ANALYTIC;
    const std::uint64_t seed = mode == TWD_CDF_ECDF ? resolve_seed(seed_opt) : 0;
    twd_fit_result fr;
    check(twd_fit(fp.family, p, data.data(), data.size(), 1, mode, ecdf_draws, seed, &fr));
    json out{{"family", family},
             {"p", p},
             {"mean", fr.mean},
             {"dispersion", fr.dispersion},
             {"log_likelihood", fr.log_likelihood},
             {"ksd", fr.ksd},
             {"converged", fr.converged != 0}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

// ---- discriminate ----

int cmd_discriminate(const std::string& data_arg, const std::string& candidates_arg,
                     const std::string& criterion, bool all_criteria, std::size_t ecdf_draws,
                     const std::string& cdf_mode, std::optional<std::uint64_t> seed_opt) {
    const std::vector<double> data = load_data(data_arg);
    const std::vector<FamilyP> fps = parse_candidates(candidates_arg);
    std::vector<twd_candidate> cands;
    for (const FamilyP& fp : fps) cands.push_back({fp.family, fp.p});
    const int mode = cdf_mode == "ecdf" ? TWD_CDF_ECDF : TWD_CDF_ANALYTIC;
    const std::uint64_t seed = mode == TWD_CDF_ECDF ? resolve_seed(seed_opt) : 0;

    const auto run_one = [&](const std::string& crit_name) -> json {
        int crit = TWD_CRIT_KSD;
        if (crit_name == "lrt") crit = TWD_CRIT_LRT;
        else if (crit_name == "loglik") crit = TWD_CRIT_LOGLIK;
        else if (crit_name != "ksd") die(TWD_EDOMAIN, "criterion must be lrt, ksd or loglik");
        int winner = -1;
        double stat = 0.0;
        std::vector<twd_fit_result> fits(cands.size());
        check(twd_select(cands.data(), cands.size(), data.data(), data.size(), crit, mode,
                         ecdf_draws, seed, &winner, &stat, fits.data()));
        json jfits = json::array();
        for (std::size_t i = 0; i < cands.size(); ++i) {
            jfits.push_back({{"family", family_str(cands[i].family)},
                             {"p", cands[i].p},
                             {"dispersion", fits[i].dispersion},
                             {"log_likelihood", fits[i].log_likelihood},
                             {"ksd", fits[i].ksd}});
        }
        return json{{"criterion", crit_name},
                    {"winner_index", winner},
                    {"winner", std::string(family_str(cands[winner].family)) + ":" +
                                   num(cands[winner].p)},
                    {"statistic", stat},
                    {"candidates", jfits}};
    };

    json out;
    if (all_criteria) {
        out["ksd"] = run_one("ksd");
        out["loglik"] = run_one(cands.size() == 2 ? "lrt" : "loglik");
    } else {
        out = run_one(criterion);
    }
    std::cout << out.dump(2) << "\n";

    // Human-readable per-candidate table on stderr-free stdout: CSV block.
    const json& table = all_criteria ? out["ksd"]["candidates"] : out["candidates"];
    std::printf("family,p,dispersion,loglik,ksd\n");
    for (const auto& row : table) {
        std::printf("%s,%s,%s,%s,%s\n", row["family"].get<std::string>().c_str(),
                    num(row["p"].get<double>()).c_str(),
                    num(row["dispersion"].get<double>()).c_str(),
                    num(row["log_likelihood"].get<double>()).c_str(),
                    num(row["ksd"].get<double>()).c_str());
    }
    return 0;
}

// ---- pcs ----

struct PcsConfig {
    FamilyP parent{TWD_FAMILY_TWEEDIE, 2.0};
    std::vector<double> phis{1.0};
    std::vector<double> means{1.0};
    std::vector<FamilyP> alternatives;
    std::vector<double> sizes{20};
    int replicates = 100;
    std::string criterion = "both";
    std::size_t ksd_draws = 0;
};

PcsConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) die(TWD_EDOMAIN, "cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    PcsConfig cfg;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j = json::parse(text);
        const json& par = j.at("parent");
        cfg.parent = parse_family_p(par.at("family").get<std::string>() + ":" +
                                    num(par.at("p").get<double>()));
        cfg.phis = {par.at("dispersion").get<double>()};
        cfg.means = {par.at("mean").get<double>()};
        for (const auto& a : j.at("alternatives"))
            cfg.alternatives.push_back(parse_family_p(a.at("family").get<std::string>() + ":" +
                                                      num(a.at("p").get<double>())));
        cfg.sizes = {static_cast<double>(j.at("sample_size").get<int>())};
        cfg.replicates = j.at("replicates").get<int>();
        cfg.criterion = j.value("criterion", "both");
        cfg.ksd_draws = j.value("ksd_draws", std::size_t{0});
        return cfg;
    }
    // plain-text key=value
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "parent") cfg.parent = parse_family_p(val);
        else if (key == "phi" || key == "dispersion") cfg.phis = parse_list(val);
        else if (key == "mean" || key == "m") cfg.means = parse_list(val);
        else if (key == "alternatives") {
            for (const FamilyP& fp : parse_candidates(val)) cfg.alternatives.push_back(fp);
        } else if (key == "sample_size" || key == "n") cfg.sizes = parse_list(val);
        else if (key == "replicates") cfg.replicates = std::stoi(val);
        else if (key == "criterion") cfg.criterion = val;
        else if (key == "ksd_draws") cfg.ksd_draws = std::stoull(val);
        else if (key == "master_seed") { /* handled by --seed; kept for mirroring */ }
    }
    return cfg;
}

int cmd_pcs(const PcsConfig& cfg, const std::string& out_path, int workers,
            std::optional<std::uint64_t> seed_opt) {
    if (cfg.alternatives.empty()) die(TWD_EDOMAIN, "pcs needs at least one --alt candidate");
    const std::uint64_t master = resolve_seed(seed_opt);
    int crit = -1;
    if (cfg.criterion == "lrt") crit = TWD_CRIT_LRT;
    else if (cfg.criterion == "ksd") crit = TWD_CRIT_KSD;
    else if (cfg.criterion != "both") die(TWD_EDOMAIN, "criterion must be lrt, ksd or both");

    std::ostringstream csv;
    csv << "family_parent,p_parent,phi,m,n,alternative,criterion,pcs,failures,seed\n";
    std::uint64_t cell = 0;
    const std::size_t total =
        cfg.phis.size() * cfg.means.size() * cfg.sizes.size() * cfg.alternatives.size();
    for (double phi : cfg.phis) {
        for (double mean : cfg.means) {
            for (double nd : cfg.sizes) {
                for (const FamilyP& alt : cfg.alternatives) {
                    const int n = static_cast<int>(nd);
                    const std::uint64_t cell_seed = splitmix64(master ^ splitmix64(cell));
                    ++cell;
                    std::fprintf(stderr, "pcs cell %" PRIu64 "/%zu: phi=%s m=%s n=%d alt=%s:%s\n",
                                 cell, total, num(phi).c_str(), num(mean).c_str(), n,
                                 family_str(alt.family), num(alt.p).c_str());
                    twd_candidate altc{alt.family, alt.p};
                    twd_scenario sc{cfg.parent.family, cfg.parent.p, mean, phi, &altc, 1,
                                    n, cfg.replicates, crit, cell_seed, workers, cfg.ksd_draws};
                    twd_pcs_result res;
                    const int rc = twd_run_scenario(&sc, &res);
                    const std::string prefix =
                        std::string(family_str(cfg.parent.family)) + "," + num(cfg.parent.p) +
                        "," + num(phi) + "," + num(mean) + "," + std::to_string(n) + "," +
                        family_str(alt.family) + ":" + num(alt.p);
                    if (rc != TWD_OK) {
                        csv << prefix << ",error,nan," << res.failures << "," << cell_seed << "\n";
                        std::fprintf(stderr, "  cell error: %s\n", twd_last_error());
                        continue;
                    }
                    if (!std::isnan(res.pcs_lrt))
                        csv << prefix << ",lrt," << num(res.pcs_lrt) << "," << res.failures << ","
                            << cell_seed << "\n";
                    if (!std::isnan(res.pcs_ksd))
                        csv << prefix << ",ksd," << num(res.pcs_ksd) << "," << res.failures << ","
                            << cell_seed << "\n";
                }
            }
        }
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) die(TWD_EDOMAIN, "cannot write '" + out_path + "'");
        out << csv.str();
    }
    return 0;
}

// ---- kl ----

int cmd_kl(const std::string& family, double p, double mean, double phi,
           const std::string& eps_arg, double alt_p, std::size_t draws,
           std::optional<std::uint64_t> seed_opt) {
    std::vector<double> eps;
    if (!eps_arg.empty()) eps = parse_list(eps_arg);
    else if (alt_p > 0.0) eps = {alt_p - p};
    else die(TWD_EDOMAIN, "provide --eps or --alt-p");

    const FamilyP fp = parse_family_p(family + ":" + num(p));
    const std::uint64_t seed = resolve_seed(seed_opt);

    ModelHandle parent;
    check(twd_model_new(fp.family, p, mean, phi, &parent.m));
    int pk = 0, pa = 0;
    check(twd_model_support(parent.m, &pk, &pa));

    std::printf("eps,kl,std_error\n");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double e = eps[i];
        if (e == 0.0) {
            std::printf("%s,0,0\n", num(e).c_str());
            continue;
        }
        ModelHandle alt;
        if (twd_model_new(fp.family, p + e, mean, phi, &alt.m) != TWD_OK)
            die(TWD_EDOMAIN, std::string("bad epsilon ") + num(e) + ": " + twd_last_error());
        int ak = 0, aa = 0;
        check(twd_model_support(alt.m, &ak, &aa));
        if (ak != pk || aa != pa)
            die(TWD_EDOMAIN, "epsilon " + num(e) + " crosses the support regime");
        double kl = 0.0, se = 0.0;
        check(twd_kl_estimate(parent.m, alt.m, draws, seed + i, &kl, &se));
        std::printf("%s,%s,%s\n", num(e).c_str(), num(kl).c_str(), num(se).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tweedie and geometric Tweedie density evaluation, fitting and discrimination"};
    app.require_subcommand(1);
    app.add_option("--precision", g_precision, "significant digits in numeric output")
        ->capture_default_str();

    std::string family = "tw", data_arg, candidates_arg, criterion = "ksd", method = "series";
    std::string xs_arg, grid_arg, out_path, scenario_path, cdf_mode = "analytic";
    double p = 2.0, mean = 1.0, phi = 1.0, alt_p = 0.0;
    std::size_t draws = 100000, ecdf_draws = 10000;
    int nodes = 64, workers = 1;
    bool all_criteria = false;
    std::optional<std::uint64_t> seed;
    PcsConfig pcs_cfg;
    std::string pcs_parent = "tw:2", pcs_alts, pcs_phis = "1", pcs_means = "1", pcs_ns = "20";

    const auto add_seed = [&seed](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed (derived from entropy and printed if omitted)");
    };

    CLI::App* density = app.add_subcommand("density", "evaluate a density on points");
    density->add_option("--family", family, "tw or gtw")->capture_default_str();
    density->add_option("--p", p, "power parameter")->required();
    density->add_option("--mean", mean, "mean")->required();
    density->add_option("--phi", phi, "dispersion")->required();
    density->add_option("--x", xs_arg, "comma-separated evaluation points")->required();
    density->add_option("--method", method, "series (tw), gl or mc (gtw)")->capture_default_str();
    density->add_option("--draws", draws, "MC draw count")->capture_default_str();
    density->add_option("--nodes", nodes, "Gauss-Laguerre order")->capture_default_str();
    add_seed(density);

    CLI::App* fit = app.add_subcommand("fit", "maximum-likelihood fit at fixed power");
    fit->add_option("--data", data_arg, "embedded dataset name or file")->required();
    fit->add_option("--family", family, "tw or gtw")->capture_default_str();
    fit->add_option("--p", p, "power parameter")->required();
    fit->add_option("--cdf", cdf_mode, "analytic or ecdf (KSD mode)")->capture_default_str();
    fit->add_option("--ecdf-draws", ecdf_draws, "draws for ecdf mode")->capture_default_str();
    add_seed(fit);

    CLI::App* disc = app.add_subcommand("discriminate", "select among candidate models");
    disc->add_option("--data", data_arg, "embedded dataset name or file")->required();
    disc->add_option("--candidates", candidates_arg, "fam:p list, ranges fam:lo..hi:step")
        ->required();
    disc->add_option("--criterion", criterion, "lrt, ksd or loglik")->capture_default_str();
    disc->add_flag("--all-criteria", all_criteria, "report ksd and loglik winners");
    disc->add_option("--cdf", cdf_mode, "analytic or ecdf")->capture_default_str();
    disc->add_option("--ecdf-draws", ecdf_draws, "draws for ecdf mode")->capture_default_str();
    add_seed(disc);

    CLI::App* pcs = app.add_subcommand("pcs", "probability-of-correct-selection simulation");
    pcs->add_option("--scenario", scenario_path, "scenario file (JSON or key=value)");
    pcs->add_option("--parent", pcs_parent, "parent fam:p")->capture_default_str();
    pcs->add_option("--phi", pcs_phis, "dispersion grid")->capture_default_str();
    pcs->add_option("--mean", pcs_means, "mean grid")->capture_default_str();
    pcs->add_option("--alt", pcs_alts, "alternative candidates fam:p[,fam:p...]");
    pcs->add_option("--n", pcs_ns, "sample sizes")->capture_default_str();
    pcs->add_option("--replicates", pcs_cfg.replicates, "replicates per cell")
        ->capture_default_str();
    pcs->add_option("--criterion", pcs_cfg.criterion, "lrt, ksd or both")->capture_default_str();
    pcs->add_option("--ksd-draws", pcs_cfg.ksd_draws,
                    "model-ECDF draw count for the KSD rule (0: sample size)");
    pcs->add_option("--workers", workers, "parallel workers per cell")->capture_default_str();
    pcs->add_option("--out", out_path, "output CSV path (default stdout)");
    add_seed(pcs);

    CLI::App* kl = app.add_subcommand("kl", "Monte Carlo Kullback-Leibler estimates");
    kl->add_option("--family", family, "tw or gtw")->capture_default_str();
    kl->add_option("--p", p, "parent power")->required();
    kl->add_option("--mean", mean, "mean")->required();
    kl->add_option("--phi", phi, "dispersion")->required();
    kl->add_option("--eps", xs_arg, "epsilon grid (comma separated)");
    kl->add_option("--alt-p", alt_p, "single alternative power");
    kl->add_option("--draws", draws, "MC draw count")->capture_default_str();
    add_seed(kl);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return TWD_EDOMAIN;
    }

    try {
        if (density->parsed())
            return cmd_density(family, p, mean, phi, xs_arg, grid_arg, method, draws, nodes, seed);
        if (fit->parsed())
            return cmd_fit(data_arg, family, p, cdf_mode, ecdf_draws, seed);
        if (disc->parsed())
            return cmd_discriminate(data_arg, candidates_arg, criterion, all_criteria, ecdf_draws,
                                    cdf_mode, seed);
        if (pcs->parsed()) {
            PcsConfig cfg = pcs_cfg;
            if (!scenario_path.empty()) {
                cfg = load_scenario_file(scenario_path);
                cfg.ksd_draws = pcs_cfg.ksd_draws ? pcs_cfg.ksd_draws : cfg.ksd_draws;
            } else {
                cfg.parent = parse_family_p(pcs_parent);
                cfg.phis = parse_list(pcs_phis);
                cfg.means = parse_list(pcs_means);
                for (const FamilyP& fp : parse_candidates(pcs_alts)) cfg.alternatives.push_back(fp);
                cfg.sizes = parse_list(pcs_ns);
            }
            return cmd_pcs(cfg, out_path, workers, seed);
        }
        if (kl->parsed()) return cmd_kl(family, p, mean, phi, xs_arg, alt_p, draws, seed);
    } catch (const std::exception& e) {
        die(TWD_EEVAL, e.what());
    }
    return 0;
}
