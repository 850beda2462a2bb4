#include "cevrp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "cevrp/stats.hpp"

namespace cevrp {

std::vector<RunRecord> run_batch(const Instance& inst, SolverConfig cfg, int n_runs,
                                 std::uint64_t base_seed, int jobs) {
    if (n_runs < 1) throw std::invalid_argument("run_batch: n_runs must be >= 1");
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::clamp(jobs, 1, n_runs);

    std::vector<RunRecord> records(static_cast<size_t>(n_runs));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_runs) return;
            SolverConfig run_cfg = cfg;
            run_cfg.seed = base_seed + static_cast<std::uint64_t>(i);
            try {
                records[static_cast<size_t>(i)] = run(inst, run_cfg);
            } catch (const std::exception& e) {
                RunRecord rec;
                rec.instance = inst.name();
                rec.selector = run_cfg.selector;
                rec.seed = run_cfg.seed;
                rec.failed = true;
                rec.error = e.what();
                records[static_cast<size_t>(i)] = std::move(rec);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return records;
}

StatsRow summarize(const std::vector<RunRecord>& records) {
    std::vector<double> fits;
    StatsRow row;
    for (const auto& rec : records) {
        if (rec.failed) continue;
        fits.push_back(rec.best_fitness);
        row.instance = rec.instance;
        row.algorithm = to_string(rec.selector);
    }
    if (fits.empty()) throw std::invalid_argument("summarize: no successful records");
    row.min = *std::min_element(fits.begin(), fits.end());
    row.mean = stats::mean(fits);
    row.stddev = stats::sample_std(fits);
    row.runs = static_cast<int>(fits.size());
    return row;
}

MeanMatrix MeanMatrix::subset_instances(const std::vector<std::string>& keep) const {
    MeanMatrix out;
    out.algorithms = algorithms;
    std::vector<size_t> idx;
    for (const auto& name : keep) {
        auto it = std::find(instances.begin(), instances.end(), name);
        if (it == instances.end())
            throw std::invalid_argument("subset_instances: unknown instance " + name);
        idx.push_back(static_cast<size_t>(it - instances.begin()));
    }
    out.instances = keep;
    for (const auto& row : means) {
        std::vector<double> r;
        for (size_t i : idx) r.push_back(row[i]);
        out.means.push_back(std::move(r));
    }
    return out;
}

RankReport friedman_ranks(const MeanMatrix& matrix) {
    const int n_algos = static_cast<int>(matrix.algorithms.size());
    const int n_inst = static_cast<int>(matrix.instances.size());
    if (n_algos < 2) throw std::invalid_argument("friedman_ranks: need at least 2 algorithms");
    if (n_inst < 2) throw std::invalid_argument("friedman_ranks: need at least 2 instances");
    for (const auto& row : matrix.means)
        if (static_cast<int>(row.size()) != n_inst)
            throw std::invalid_argument("friedman_ranks: incomplete mean matrix");

    std::vector<double> rank_sum(static_cast<size_t>(n_algos), 0.0);
    for (int i = 0; i < n_inst; ++i) {
        // Sort algorithms by mean; NaN (reported NA) ranks behind every number.
        std::vector<int> order(static_cast<size_t>(n_algos));
        std::iota(order.begin(), order.end(), 0);
        auto key = [&](int a) {
            const double v = matrix.means[static_cast<size_t>(a)][static_cast<size_t>(i)];
            return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
        };
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return key(a) < key(b); });
        int pos = 0;
        while (pos < n_algos) {
            int end = pos;
            while (end + 1 < n_algos && key(order[static_cast<size_t>(end + 1)]) ==
                                            key(order[static_cast<size_t>(pos)]))
                ++end;
            const double avg = (static_cast<double>(pos) + static_cast<double>(end)) / 2.0 + 1.0;
            for (int p = pos; p <= end; ++p)
                rank_sum[static_cast<size_t>(order[static_cast<size_t>(p)])] += avg;
            pos = end + 1;
        }
    }

    RankReport report;
    report.n_instances = n_inst;
    report.n_algorithms = n_algos;
    double sum_r2 = 0.0;
    for (int a = 0; a < n_algos; ++a) {
        RankEntry e;
        e.algorithm = matrix.algorithms[static_cast<size_t>(a)];
        e.avg_rank = rank_sum[static_cast<size_t>(a)] / static_cast<double>(n_inst);
        sum_r2 += e.avg_rank * e.avg_rank;
        report.entries.push_back(std::move(e));
    }
    std::stable_sort(report.entries.begin(), report.entries.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.avg_rank < b.avg_rank; });

    const double A = n_algos;
    const double N = n_inst;
    report.chi_squared = 12.0 * N / (A * (A + 1.0)) * (sum_r2 - A * (A + 1.0) * (A + 1.0) / 4.0);
    report.p_value = stats::chi_squared_sf(report.chi_squared, n_algos - 1);
    return report;
}

void holm_posthoc(RankReport& report) {
    const double A = report.n_algorithms;
    const double N = report.n_instances;
    const double se = std::sqrt(A * (A + 1.0) / (6.0 * N));
    const double control_rank = report.entries.front().avg_rank;

    struct Raw {
        size_t entry;
        double p;
    };
    std::vector<Raw> raws;
    for (size_t i = 1; i < report.entries.size(); ++i) {
        const double z = (report.entries[i].avg_rank - control_rank) / se;
        raws.push_back({i, stats::normal_two_sided_p(z)});
    }
    std::stable_sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) { return a.p < b.p; });

    const size_t m = raws.size();
    double running = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double adj = std::min(1.0, static_cast<double>(m - i) * raws[i].p);
        running = std::max(running, adj);
        report.entries[raws[i].entry].p_holm = running;
        report.entries[raws[i].entry].significant = running < 0.05;
    }
    report.entries.front().p_holm = -1.0;
}

EnergyReport energy_diff_report(const MeanMatrix& means,
                                const std::map<std::string, double>& best_known,
                                const std::map<std::string, double>& h_rate) {
    EnergyReport report;
    report.algorithms = means.algorithms;
    report.instances = means.instances;
    report.totals.assign(means.algorithms.size(), 0.0);
    for (size_t i = 0; i < means.instances.size(); ++i) {
        const auto& name = means.instances[i];
        auto bk = best_known.find(name);
        if (bk == best_known.end())
            throw std::invalid_argument("energy_diff_report: no best-known fitness for " + name);
        auto h = h_rate.find(name);
        if (h == h_rate.end())
            throw std::invalid_argument("energy_diff_report: no consumption rate for " + name);
        std::vector<double> row;
        for (size_t a = 0; a < means.algorithms.size(); ++a) {
            const double mean = means.means[a][i];
            const double diff = (mean - bk->second) * h->second;
            row.push_back(diff);
            if (!std::isnan(diff)) report.totals[a] += diff;
        }
        report.diffs.push_back(std::move(row));
    }
    return report;
}

namespace {

std::string format_number(double v) {
    if (std::isnan(v)) return "NA";
    std::ostringstream out;
    out << std::setprecision(10) << v;
    return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        fields.push_back(field);
    }
    return fields;
}

double parse_csv_number(const std::string& s) {
    if (s == "NA" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

}  // namespace

std::string stats_csv(const std::vector<StatsRow>& rows) {
    std::ostringstream out;
    out << "instance,selector,min,mean,std,runs\n";
    for (const auto& r : rows)
        out << r.instance << ',' << r.algorithm << ',' << format_number(r.min) << ','
            << format_number(r.mean) << ',' << format_number(r.stddev) << ',' << r.runs << '\n';
    return out.str();
}

std::string ranks_csv(const RankReport& report) {
    std::ostringstream out;
    out << "algorithm,avg_rank,p_holm,significant\n";
    for (const auto& e : report.entries) {
        out << e.algorithm << ',' << format_number(e.avg_rank) << ',';
        if (e.p_holm < 0)
            out << "control";
        else
            out << format_number(e.p_holm);
        out << ',' << (e.significant ? "yes" : "no") << '\n';
    }
    return out.str();
}

std::string energy_csv(const EnergyReport& report) {
    std::ostringstream out;
    out << "instance";
    for (const auto& a : report.algorithms) out << ',' << a;
    out << '\n';
    for (size_t i = 0; i < report.instances.size(); ++i) {
        out << report.instances[i];
        for (double d : report.diffs[i]) out << ',' << format_number(d);
        out << '\n';
    }
    out << "Total";
    for (double t : report.totals) out << ',' << format_number(t);
    out << '\n';
    return out.str();
}

ReferenceTable load_reference_table(std::istream& in) {
    ReferenceTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty reference table");
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 5)
            throw std::invalid_argument("reference table row needs 5 fields: " + line);
        const auto& inst = fields[0];
        const auto& algo = fields[1];
        if (std::find(table.instances.begin(), table.instances.end(), inst) ==
            table.instances.end())
            table.instances.push_back(inst);
        if (std::find(table.algorithms.begin(), table.algorithms.end(), algo) ==
            table.algorithms.end())
            table.algorithms.push_back(algo);
        table.min[{inst, algo}] = parse_csv_number(fields[2]);
        table.mean[{inst, algo}] = parse_csv_number(fields[3]);
    }
    return table;
}

MeanMatrix ReferenceTable::mean_matrix(const std::vector<std::string>& wanted) const {
    MeanMatrix out;
    out.algorithms = wanted;
    out.instances = instances;
    for (const auto& algo : wanted) {
        std::vector<double> row;
        for (const auto& inst : instances) {
            auto it = mean.find({inst, algo});
            if (it == mean.end())
                throw std::invalid_argument("reference table missing cell " + inst + "/" + algo);
            row.push_back(it->second);
        }
        out.means.push_back(std::move(row));
    }
    return out;
}

std::map<std::string, double> ReferenceTable::best_known() const {
    std::map<std::string, double> out;
    for (const auto& inst : instances) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& algo : algorithms) {
            auto it = min.find({inst, algo});
            if (it != min.end() && !std::isnan(it->second)) best = std::min(best, it->second);
        }
        out[inst] = best;
    }
    return out;
}

std::map<std::string, double> load_h_rates(std::istream& in) {
    std::map<std::string, double> out;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty h-rate table");
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) throw std::invalid_argument("h-rate row needs 2 fields: " + line);
        out[fields[0]] = std::stod(fields[1]);
    }
    return out;
}

}  // namespace cevrp
