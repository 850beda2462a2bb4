// Benchmark CLI for the CEVRP hyper-heuristic solver.
//
// Subcommands: solve, bench, validate, rank, plot. Exit codes: 0 success,
// 1 usage or input parse failure, 2 solver failure, 3 validation failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cevrp/harness.hpp"
#include "cevrp/svg.hpp"

namespace fs = std::filesystem;
using namespace cevrp;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitValidate = 3;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CEVRP_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric CEVRP_SEED\n";
        }
    }
    return 1;
}

void apply_config_file(const std::string& path, SolverConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not key=value: " + line);
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key == "alpha") cfg.alpha = std::stod(value);
        else if (key == "t0") cfg.t0 = std::stod(value);
        else if (key == "limit") cfg.limit = std::stoi(value);
        else if (key == "iters_per_epoch_mult") cfg.iters_per_epoch_mult = std::stod(value);
        else if (key == "max_acc_mult") cfg.max_acc_mult = std::stod(value);
        else if (key == "budget_scale") cfg.budget_scale = std::stod(value);
        else if (key == "x_min") cfg.x_min = std::stod(value);
        else if (key == "x_max") cfg.x_max = std::stod(value);
        else if (key == "y_min") cfg.y_min = std::stod(value);
        else if (key == "y_max") cfg.y_max = std::stod(value);
        else if (key == "epsilon") cfg.epsilon = std::stod(value);
        else if (key == "memory") cfg.memory = std::stod(value);
        else if (key == "p_move") cfg.p_move = std::stod(value);
        else if (key == "p_eliminate") cfg.p_eliminate = std::stod(value);
        else if (key == "r1") cfg.r1 = std::stod(value);
        else if (key == "r2") cfg.r2 = std::stod(value);
        else if (key == "selector") cfg.selector = selector_from_string(value);
        else if (key == "delta_mode")
            cfg.delta_mode = (value == "raw") ? DeltaMode::Raw : DeltaMode::Relative;
        else if (key == "ucb_textbook_term") cfg.ucb_textbook_term = (value == "true" || value == "1");
        else if (key == "reward_magnitude") cfg.reward_magnitude = std::stod(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

struct SolverFlags {
    std::string config_path;
    std::string selector = "ts";
    std::uint64_t seed = default_seed();
    double budget_scale = 1.0;
    bool seed_given = false;
    bool selector_given = false;
    bool budget_given = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file");
        cmd->add_option("--selector", selector, "heuristic selector: random|eg|ts|ucb1")
            ->check(CLI::IsMember({"random", "eg", "ts", "ucb1"}))
            ->each([this](const std::string&) { selector_given = true; });
        cmd->add_option("--seed", seed, "rng seed (env CEVRP_SEED as fallback)")
            ->each([this](const std::string&) { seed_given = true; });
        cmd->add_option("--budget-scale", budget_scale, "scale factor on the evaluation budget")
            ->check(CLI::PositiveNumber)
            ->each([this](const std::string&) { budget_given = true; });
    }

    SolverConfig build() const {
        SolverConfig cfg;
        if (!config_path.empty()) apply_config_file(config_path, cfg);
        // Flags override the config file.
        if (selector_given || config_path.empty()) cfg.selector = selector_from_string(selector);
        if (seed_given || config_path.empty()) cfg.seed = seed;
        if (budget_given) cfg.budget_scale = budget_scale;
        return cfg;
    }
};

std::string sanitize(const std::string& name) {
    std::string out = name;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int cmd_solve(const std::string& instance_path, const SolverFlags& flags,
              const std::string& out_dir) {
    Instance inst = load_instance(instance_path);
    SolverConfig cfg = flags.build();
    RunRecord rec = run(inst, cfg);
    if (rec.failed) {
        std::cerr << "solver failed on " << inst.name() << ": " << rec.error << '\n';
        return kExitSolver;
    }
    fs::create_directories(out_dir);
    const std::string stem =
        sanitize(inst.name()) + "_" + to_string(cfg.selector) + "_" + std::to_string(cfg.seed);
    write_file(fs::path(out_dir) / (stem + ".sol"), to_solution_text(rec.best_tour, inst));
    write_file(fs::path(out_dir) / (stem + ".json"), to_json(rec, inst));
    std::cout.precision(10);
    std::cout << "FITNESS: " << rec.best_fitness << '\n'
              << "EVALUATIONS: " << rec.evaluations << '\n';
    return 0;
}

std::vector<std::string> expand_instances(const std::vector<std::string>& paths) {
    std::vector<std::string> out;
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.path().extension() == ".evrp") found.push_back(entry.path().string());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

int cmd_bench(const std::vector<std::string>& instance_paths, const SolverFlags& flags,
              int runs, int jobs, const std::string& out_dir) {
    const auto paths = expand_instances(instance_paths);
    if (paths.empty()) {
        std::cerr << "no instance files given\n";
        return kExitUsage;
    }
    fs::create_directories(out_dir);
    std::vector<StatsRow> rows;
    int failures = 0;
    for (const auto& path : paths) {
        try {
            Instance inst = load_instance(path);
            SolverConfig cfg = flags.build();
            auto records = run_batch(inst, cfg, runs, cfg.seed, jobs);
            for (const auto& rec : records) {
                if (rec.failed) continue;
                const std::string stem = sanitize(inst.name()) + "_" + to_string(rec.selector) +
                                         "_" + std::to_string(rec.seed);
                write_file(fs::path(out_dir) / (stem + ".json"), to_json(rec, inst));
            }
            rows.push_back(summarize(records));
            const auto& r = rows.back();
            std::cout << r.instance << " " << r.algorithm << " min=" << r.min
                      << " mean=" << r.mean << " std=" << r.stddev << " runs=" << r.runs << '\n';
        } catch (const std::exception& e) {
            std::cerr << "instance " << path << " failed: " << e.what() << '\n';
            ++failures;
        }
    }
    if (!rows.empty()) write_file(fs::path(out_dir) / "stats.csv", stats_csv(rows));
    return rows.empty() && failures > 0 ? kExitSolver : 0;
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path) {
    Instance inst = load_instance(instance_path);
    std::ifstream in(solution_path);
    if (!in) {
        std::cerr << "cannot open solution file: " << solution_path << '\n';
        return kExitUsage;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    ParsedSolution parsed = parse_solution_text(buffer.str(), inst);

    const double fitness = evaluate(parsed.tour, inst);
    std::cout.precision(10);
    std::cout << "FITNESS: " << fitness << '\n';

    const auto violations = validate(parsed.tour, inst);
    for (const auto& v : violations) {
        std::cout << to_string(v.kind);
        if (v.node >= 0) std::cout << " node=" << inst.file_id(v.node);
        if (v.route >= 0) std::cout << " route=" << v.route;
        if (v.position >= 0) std::cout << " position=" << v.position;
        std::cout << '\n';
    }
    if (!violations.empty()) return kExitValidate;
    if (parsed.stated_fitness && std::fabs(*parsed.stated_fitness - fitness) > 1e-2) {
        std::cout << "FITNESS MISMATCH: stated " << *parsed.stated_fitness << " recomputed "
                  << fitness << '\n';
        return kExitValidate;
    }
    std::cout << "OK\n";
    return 0;
}

ReferenceTable load_merged_stats(const std::vector<std::string>& paths) {
    ReferenceTable merged;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open stats file: " + path);
        std::string header;
        std::getline(in, header);
        const bool own_format = header.rfind("instance,selector", 0) == 0;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line == "\r") continue;
            std::vector<std::string> f;
            std::istringstream ls(line);
            std::string tok;
            while (std::getline(ls, tok, ',')) f.push_back(tok);
            if (f.size() < 5) throw std::invalid_argument("bad stats row: " + line);
            const std::string inst = f[0];
            const std::string algo = own_format ? ("HHASA_" + f[1]) : f[1];
            auto num = [](const std::string& s) {
                return (s == "NA" || s.empty()) ? std::numeric_limits<double>::quiet_NaN()
                                                : std::stod(s);
            };
            if (std::find(merged.instances.begin(), merged.instances.end(), inst) ==
                merged.instances.end())
                merged.instances.push_back(inst);
            if (std::find(merged.algorithms.begin(), merged.algorithms.end(), algo) ==
                merged.algorithms.end())
                merged.algorithms.push_back(algo);
            merged.min[{inst, algo}] = num(f[2]);
            merged.mean[{inst, algo}] = num(f[3]);
        }
    }
    return merged;
}

int cmd_rank(const std::vector<std::string>& stats_paths, const std::string& subset,
             const std::string& algos_csv, const std::string& h_rates_path,
             const std::string& out_dir) {
    ReferenceTable table = load_merged_stats(stats_paths);

    std::vector<std::string> algorithms;
    if (algos_csv.empty()) {
        algorithms = table.algorithms;
    } else {
        std::istringstream in(algos_csv);
        std::string tok;
        while (std::getline(in, tok, ',')) algorithms.push_back(tok);
    }
    if (algorithms.size() < 2) {
        std::cerr << "ranking needs at least two algorithms\n";
        return kExitUsage;
    }

    MeanMatrix matrix = table.mean_matrix(algorithms);
    if (!subset.empty()) {
        if (subset.rfind(">=", 0) != 0) {
            std::cerr << "--subset expects the form >=NAME\n";
            return kExitUsage;
        }
        const std::string from = subset.substr(2);
        auto it = std::find(matrix.instances.begin(), matrix.instances.end(), from);
        if (it == matrix.instances.end()) {
            std::cerr << "subset start instance not found: " << from << '\n';
            return kExitUsage;
        }
        matrix = matrix.subset_instances({it, matrix.instances.end()});
    }

    RankReport report = friedman_ranks(matrix);
    holm_posthoc(report);
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "ranks.csv", ranks_csv(report));
    std::cout << ranks_csv(report);
    std::cout << "friedman_chi2=" << report.chi_squared << " p=" << report.p_value << '\n';

    if (!h_rates_path.empty()) {
        std::ifstream hin(h_rates_path);
        if (!hin) {
            std::cerr << "cannot open h-rate table: " << h_rates_path << '\n';
            return kExitUsage;
        }
        const auto h_rates = load_h_rates(hin);
        const auto report_e = energy_diff_report(matrix, table.best_known(), h_rates);
        write_file(fs::path(out_dir) / "energy.csv", energy_csv(report_e));
    }
    return 0;
}

int cmd_plot(const std::string& kind, const std::string& instance_path,
             const std::string& solution_path, const std::string& record_path,
             const std::string& out_dir) {
    fs::create_directories(out_dir);
    if (kind == "route") {
        Instance inst = load_instance(instance_path);
        Tour tour;
        if (!solution_path.empty()) {
            std::ifstream in(solution_path);
            if (!in) {
                std::cerr << "cannot open solution file: " << solution_path << '\n';
                return kExitUsage;
            }
            std::stringstream buffer;
            buffer << in.rdbuf();
            tour = parse_solution_text(buffer.str(), inst).tour;
        } else {
            std::cerr << "--kind route requires --solution\n";
            return kExitUsage;
        }
        write_file(fs::path(out_dir) / "route.svg", route_map_svg(inst, tour));
        return 0;
    }
    if (kind == "trace") {
        std::ifstream in(record_path);
        if (record_path.empty() || !in) {
            std::cerr << "--kind trace requires a readable --record run file\n";
            return kExitUsage;
        }
        nlohmann::json j = nlohmann::json::parse(in);
        RunRecord rec;
        rec.instance = j.value("instance", "");
        rec.best_fitness = j.value("best_fitness", 0.0);
        if (!j.contains("epoch_trace") || j["epoch_trace"].empty()) {
            std::cerr << "run record has no epoch trace\n";
            return kExitUsage;
        }
        for (const auto& je : j["epoch_trace"]) {
            EpochTrace e;
            e.temperature = je.value("T", 0.0);
            e.best_fitness = je.value("best", 0.0);
            e.h_up = je.value("h_up", 0);
            for (size_t i = 0; i < kHeuristicPoolSize; ++i) {
                e.selections[i] = je["selections"][i].get<int>();
                e.rewards[i] = je["rewards"][i].get<double>();
            }
            rec.epochs.push_back(e);
        }
        write_file(fs::path(out_dir) / "trace.svg", trace_svg(rec));
        return 0;
    }
    std::cerr << "unknown plot kind: " << kind << '\n';
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CEVRP hyper-heuristic solver and benchmark harness"};
    app.require_subcommand(1);

    std::string instance_path, solution_path, record_path, out_dir = ".";
    std::vector<std::string> instance_paths, stats_paths;
    std::string subset, algos_csv, h_rates_path, plot_kind = "route";
    int runs = 20, jobs = 0;
    SolverFlags solve_flags, bench_flags;

    auto* solve = app.add_subcommand("solve", "run one solve on an instance");
    solve->add_option("--instance", instance_path, "instance file")->required();
    solve->add_option("--out", out_dir, "output directory");
    solve_flags.attach(solve);

    auto* bench = app.add_subcommand("bench", "run seeded batches and write stats.csv");
    bench->add_option("--instance", instance_paths, "instance file(s) or directories")->required();
    bench->add_option("--runs", runs, "independent runs per instance")->check(CLI::PositiveNumber);
    bench->add_option("--jobs", jobs, "worker threads (default: hardware)");
    bench->add_option("--out", out_dir, "output directory");
    bench_flags.attach(bench);

    auto* validate = app.add_subcommand("validate", "check a solution file against an instance");
    validate->add_option("--instance", instance_path, "instance file")->required();
    validate->add_option("--solution", solution_path, "solution file")->required();

    auto* rank = app.add_subcommand("rank", "Friedman/Holm ranking over stats tables");
    rank->add_option("--stats", stats_paths, "stats.csv / reference means files")->required();
    rank->add_option("--subset", subset, "instance subset, e.g. \">=E101\"");
    rank->add_option("--algos", algos_csv, "comma-separated algorithm subset");
    rank->add_option("--h-rates", h_rates_path, "instance,h table enabling energy.csv");
    rank->add_option("--out", out_dir, "output directory");

    auto* plot = app.add_subcommand("plot", "emit SVG route maps or bandit traces");
    plot->add_option("--kind", plot_kind, "route|trace")->check(CLI::IsMember({"route", "trace"}));
    plot->add_option("--instance", instance_path, "instance file (route)");
    plot->add_option("--solution", solution_path, "solution file (route)");
    plot->add_option("--record", record_path, "run record json (trace)");
    plot->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(instance_path, solve_flags, out_dir);
        if (bench->parsed()) return cmd_bench(instance_paths, bench_flags, runs, jobs, out_dir);
        if (validate->parsed()) return cmd_validate(instance_path, solution_path);
        if (rank->parsed())
            return cmd_rank(stats_paths, subset, algos_csv, h_rates_path, out_dir);
        if (plot->parsed())
            return cmd_plot(plot_kind, instance_path, solution_path, record_path, out_dir);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitUsage;
}
