// hypgauss: command-line front end for the hyperbolic Gaussian library.
//
//   hypgauss gen       --kind mpsk|mhpsk --m M --radius R [--out FILE]
//   hypgauss bound     --constellation FILE --sigma2 S --mode neighbors|allpairs|bhattacharyya|gu [--csv]
//   hypgauss pdf-eval  --n N --sigma2 S [--model half|ball] [--mean ...] --point ...
//   hypgauss normalize --n N --sigma2 S [--verify]
//   hypgauss simulate  --constellation FILE --sigma2 S [--trials N] [--seed K] [--workers W] [--csv FILE]
//   hypgauss sweep     --constellation FILE (--grid lo:hi:step | --sigma2 S...) [...] [--csv FILE]
//   hypgauss compare   --constellation A --constellation B (--grid ... | --sigma2 ...) [...] [--csv FILE]
//
// Data goes to stdout or the --csv file, diagnostics to stderr.

#include "hypgauss/hypgauss.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace hypgauss;

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidInput, "bad grid '" + spec + "', expected lo:hi:step");
        }
    }
    if (parts.size() != 3) throw Error(ErrorKind::InvalidInput, "bad grid '" + spec + "', expected lo:hi:step");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(hi))
        throw Error(ErrorKind::InvalidInput, "grid needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw Error(ErrorKind::InvalidInput, "grid has too many points");
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // snap lo + i*step to 12 decimals so 0.05:1:0.05 yields 0.15, 1.0, ...
        const double v = lo + static_cast<double>(i) * step;
        grid.push_back(std::round(v * 1e12) / 1e12);
    }
    return grid;
}

// Writes through a temporary file that is renamed on success and removed on failure.
void write_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        std::cout.flush();
        return;
    }
    const std::string tmp = path + ".partial";
    try {
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
            body(out);
            out.flush();
            if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

std::vector<double> sigma2_values(const std::string& grid, const std::vector<double>& list) {
    if (!grid.empty() && !list.empty()) throw Error(ErrorKind::InvalidInput, "use either --grid or --sigma2");
    if (!grid.empty()) return parse_grid(grid);
    if (list.empty()) throw Error(ErrorKind::InvalidInput, "a variance grid (--grid or --sigma2) is required");
    for (double s : list)
        if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::InvalidInput, "variances must be positive");
    return list;
}

void print_report(std::ostream& os, const BoundReport& r, bool csv) {
    if (csv) {
        os << "row,k,j,distance,value\n";
        for (const auto& t : r.terms)
            os << "term," << t.k + 1 << ',' << t.j + 1 << ',' << format_double(t.distance) << ','
               << format_double(t.value) << '\n';
        for (std::size_t k = 0; k < r.per_signal.size(); ++k)
            os << "signal," << k + 1 << ",,," << format_double(r.per_signal[k]) << '\n';
        os << "mean,,,," << format_double(r.mean_bound) << '\n';
        return;
    }
    os << "mode " << to_string(r.kind) << '\n';
    os << "sigma2 " << format_double(r.sigma2) << '\n';
    os << "mean_bound " << format_double(r.mean_bound) << '\n';
    for (std::size_t k = 0; k < r.per_signal.size(); ++k)
        os << "signal " << k + 1 << ' ' << format_double(r.per_signal[k]) << '\n';
    os << "terms k j distance value\n";
    for (const auto& t : r.terms)
        os << "  " << t.k + 1 << ' ' << t.j + 1 << ' ' << format_double(t.distance) << ' '
           << format_double(t.value) << '\n';
}

struct SimOptions {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string csv;
    std::string grid;
    std::vector<double> sigma2;
    bool bounds_only = false;
    CLI::Option* workers_opt = nullptr;
};

void add_sim_options(CLI::App* cmd, SimOptions& o, bool with_grid) {
    cmd->add_option("--trials", o.trials, "Trials per signal")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Master seed");
    o.workers_opt = cmd->add_option("--workers", o.workers, "Worker threads (default: $HYPGAUSS_WORKERS or 1)")
                        ->check(CLI::PositiveNumber);
    cmd->add_option("--csv", o.csv, "CSV output file (default: stdout)");
    if (with_grid) {
        cmd->add_option("--grid", o.grid, "Variance grid lo:hi:step");
        cmd->add_option("--sigma2", o.sigma2, "Explicit variance values");
        cmd->add_flag("--bounds-only", o.bounds_only, "Skip the simulation, emit bounds only");
    }
}

SimConfig make_config(const SimOptions& o) {
    SimConfig cfg;
    cfg.trials_per_signal = o.trials;
    cfg.seed = o.seed;
    cfg.workers = o.workers;
    // CLI11 drops invalid environment values silently, so read it here
    if (o.workers_opt->count() == 0) {
        if (const char* env = std::getenv("HYPGAUSS_WORKERS"); env && *env) {
            unsigned w = 0;
            const char* end = env + std::strlen(env);
            const auto [ptr, ec] = std::from_chars(env, end, w);
            if (ec != std::errc() || ptr != end || w == 0)
                throw Error(ErrorKind::InvalidInput, std::string("HYPGAUSS_WORKERS must be a positive integer, got '") +
                                                         env + "'");
            cfg.workers = w;
        }
    }
    return cfg;
}

std::vector<double> parse_coords(const std::vector<double>& v, std::size_t n, const char* what) {
    if (v.size() != n)
        throw Error(ErrorKind::InvalidInput, std::string(what) + " needs " + std::to_string(n) + " coordinates");
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic Gaussian densities and error-probability bounds"};
    app.set_config("--config", "", "Key-value configuration file; flags take precedence");
    app.require_subcommand(1);

    // gen
    std::string kind, out_path;
    std::size_t gen_m = 8;
    double gen_radius = 1.0;
    auto* gen = app.add_subcommand("gen", "Generate an M-PSK or M-HPSK constellation file");
    gen->add_option("--kind", kind, "mpsk or mhpsk")->required()->check(CLI::IsMember({"mpsk", "mhpsk"}));
    gen->add_option("--m", gen_m, "Number of signals")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    gen->add_option("--radius", gen_radius, "Euclidean or hyperbolic circle radius")->check(CLI::PositiveNumber);
    gen->add_option("--out", out_path, "Output file (default: stdout)");

    // bound
    std::string cons_path, mode = "neighbors";
    double sigma2 = 0.0;
    bool csv_flag = false;
    auto* bound = app.add_subcommand("bound", "Evaluate an error-probability upper bound");
    bound->add_option("--constellation", cons_path, "Constellation file")->required();
    bound->add_option("--sigma2", sigma2, "Noise variance")->required()->check(CLI::PositiveNumber);
    bound->add_option("--mode", mode, "neighbors, allpairs, bhattacharyya or gu")
        ->check(CLI::IsMember({"neighbors", "allpairs", "bhattacharyya", "gu"}));
    bound->add_flag("--csv", csv_flag, "CSV instead of text");

    // pdf-eval
    unsigned pdf_n = 2;
    std::string model_name = "half";
    std::vector<double> mean_coords, point_coords;
    auto* pdf = app.add_subcommand("pdf-eval", "Evaluate the hyperbolic Gaussian density at a point");
    pdf->add_option("--n", pdf_n, "Dimension")->check(CLI::PositiveNumber);
    pdf->add_option("--sigma2", sigma2, "Variance")->required()->check(CLI::PositiveNumber);
    pdf->add_option("--model", model_name, "half or ball")->check(CLI::IsMember({"half", "ball"}));
    pdf->add_option("--mean", mean_coords, "Mean coordinates (default: model center)")->delimiter(',');
    pdf->add_option("--point", point_coords, "Evaluation point coordinates")->required()->delimiter(',');

    // normalize
    unsigned norm_n = 2;
    bool verify = false;
    auto* normalize = app.add_subcommand("normalize", "Print the normalization constant k");
    normalize->add_option("--n", norm_n, "Dimension (>= 2)")->required()->check(CLI::Range(2u, 170u));
    normalize->add_option("--sigma2", sigma2, "Variance")->required()->check(CLI::PositiveNumber);
    normalize->add_flag("--verify", verify, "Also print an independent cross-check");

    // simulate
    SimOptions sim_opts;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo error-rate estimate at one variance");
    simulate_cmd->add_option("--constellation", cons_path, "Constellation file")->required();
    simulate_cmd->add_option("--sigma2", sigma2, "Noise variance")->required()->check(CLI::PositiveNumber);
    add_sim_options(simulate_cmd, sim_opts, false);

    // sweep
    SimOptions sweep_opts;
    auto* sweep_cmd = app.add_subcommand("sweep", "Simulation and bounds over a variance grid");
    sweep_cmd->add_option("--constellation", cons_path, "Constellation file")->required();
    add_sim_options(sweep_cmd, sweep_opts, true);

    // compare
    SimOptions cmp_opts;
    std::vector<std::string> cmp_paths;
    std::vector<std::string> labels{"a", "b"};
    auto* compare = app.add_subcommand("compare", "Join two constellations' sweeps on sigma2");
    compare->add_option("--constellation", cmp_paths, "Two constellation files")->required()->expected(2);
    compare->add_option("--labels", labels, "Column prefixes for the two constellations")
        ->expected(2)
        ->delimiter(',');
    add_sim_options(compare, cmp_opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            Constellation c = kind == "mpsk" ? make_mpsk(gen_m, gen_radius) : make_mhpsk(gen_m, gen_radius);
            c = ensure_neighbors(c);
            write_output(out_path, [&](std::ostream& os) { os << to_json(c).dump(2) << '\n'; });
        } else if (bound->parsed()) {
            Constellation c = load_constellation(cons_path);
            BoundReport r;
            if (mode == "bhattacharyya") {
                r = bhattacharyya_bound(c, sigma2);
            } else if (mode == "allpairs") {
                r = union_bound(c, sigma2, PairMode::AllPairs);
            } else {
                if (!c.neighbors()) {
                    if (c.dim() != 2)
                        throw Error(ErrorKind::MissingNeighbors,
                                    "constellation has no neighbor lists and dimension != 2; use --mode allpairs");
                    c = ensure_neighbors(c);
                }
                r = mode == "gu" ? gu_bound(c, sigma2) : union_bound(c, sigma2, PairMode::Neighbors);
            }
            print_report(std::cout, r, csv_flag);
        } else if (pdf->parsed()) {
            if (pdf_n == 1) {
                if (model_name != "half") throw Error(ErrorKind::InvalidInput, "n = 1 uses the half-line model");
                const double mu = mean_coords.empty() ? 1.0 : parse_coords(mean_coords, 1, "--mean")[0];
                const double x = parse_coords(point_coords, 1, "--point")[0];
                const HyperGaussian1D g(mu, sigma2);
                std::cout << "k " << format_double(g.peak()) << '\n'
                          << "distance " << format_double(dist_line(x, mu)) << '\n'
                          << "pdf " << format_double(g.pdf(x)) << '\n'
                          << "euclidean_density " << format_double(g.euclidean_density(x)) << '\n';
            } else {
                const Model model = model_name == "half" ? Model::HalfSpace : Model::Ball;
                const ModelPoint mean = mean_coords.empty()
                                            ? ModelPoint::center(model, pdf_n)
                                            : ModelPoint::make(model, parse_coords(mean_coords, pdf_n, "--mean"));
                const ModelPoint x = ModelPoint::make(model, parse_coords(point_coords, pdf_n, "--point"));
                const HyperGaussianND g(mean, sigma2);
                std::cout << "k " << format_double(g.k()) << '\n'
                          << "distance " << format_double(distance(x, mean)) << '\n'
                          << "pdf " << format_double(g.pdf(x)) << '\n';
            }
        } else if (normalize->parsed()) {
            const double k = normalization_constant(norm_n, sigma2);
            std::cout << "k " << format_double(k) << '\n';
            if (verify) {
                if (norm_n == 2) {
                    const double closed = normalization_constant_h2(sigma2);
                    std::cout << "closed_form " << format_double(closed) << '\n'
                              << "rel_diff " << format_double(std::abs(k - closed) / closed) << '\n';
                } else {
                    const HyperGaussianND g(ModelPoint::center(Model::Ball, norm_n), sigma2);
                    const double total = integrate([&](double r) { return g.radial_density(r); }, 0.0, INFINITY).value;
                    std::cout << "total_mass " << format_double(total) << '\n';
                }
            }
        } else if (simulate_cmd->parsed()) {
            const Constellation c = load_constellation(cons_path);
            SimConfig cfg = make_config(sim_opts);
            const std::vector<double> grid{sigma2};
            const auto rows = sweep(c, grid, cfg);
            if (sim_opts.csv.empty()) {
                const auto& s = *rows[0].sim;
                std::cout << "sigma2 " << format_double(s.sigma2) << '\n'
                          << "trials " << s.total_trials << '\n'
                          << "errors " << s.total_errors << '\n'
                          << "p_hat " << format_double(s.mean_rate) << '\n'
                          << "std_err " << format_double(s.mean_std_err) << '\n';
                for (std::size_t k = 0; k < s.rates.size(); ++k)
                    std::cout << "signal " << k + 1 << ' ' << format_double(s.rates[k]) << ' '
                              << format_double(s.std_errs[k]) << '\n';
                if (s.bound) std::cout << "bound " << format_double(*s.bound) << '\n';
            } else {
                write_output(sim_opts.csv, [&](std::ostream& os) { write_sweep_csv(os, rows); });
            }
        } else if (sweep_cmd->parsed()) {
            const Constellation c = load_constellation(cons_path);
            const auto grid = sigma2_values(sweep_opts.grid, sweep_opts.sigma2);
            const auto rows = sweep(c, grid, make_config(sweep_opts), sweep_opts.bounds_only);
            write_output(sweep_opts.csv, [&](std::ostream& os) { write_sweep_csv(os, rows); });
        } else if (compare->parsed()) {
            const Constellation a = load_constellation(cmp_paths.at(0));
            const Constellation b = load_constellation(cmp_paths.at(1));
            const auto grid = sigma2_values(cmp_opts.grid, cmp_opts.sigma2);
            const SimConfig cfg = make_config(cmp_opts);
            const auto ra = sweep(a, grid, cfg, cmp_opts.bounds_only);
            const auto rb = sweep(b, grid, cfg, cmp_opts.bounds_only);
            write_output(cmp_opts.csv,
                         [&](std::ostream& os) { write_compare_csv(os, ra, rb, labels.at(0), labels.at(1)); });
        }
    } catch (const std::exception& e) {
        std::cerr << "hypgauss: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
