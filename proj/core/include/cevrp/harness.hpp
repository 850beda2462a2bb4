#ifndef CEVRP_HARNESS_HPP
#define CEVRP_HARNESS_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cevrp/solver.hpp"

namespace cevrp {

/// n_runs independent solver runs with seeds base_seed..base_seed+n_runs-1.
/// Runs execute concurrently on up to `jobs` threads; the returned records
/// are ordered by seed regardless of scheduling. Per-run failures are
/// recorded as failed entries, not thrown.
std::vector<RunRecord> run_batch(const Instance& inst, SolverConfig cfg, int n_runs,
                                 std::uint64_t base_seed, int jobs = 0);

struct StatsRow {
    std::string instance;
    std::string algorithm;
    double min = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    int runs = 0;
};

/// min / mean / sample-std of best_fitness over the successful records.
StatsRow summarize(const std::vector<RunRecord>& records);

/// Per-instance mean fitness for a set of algorithms. NaN cells mark values
/// reported as NA; they rank worst.
struct MeanMatrix {
    std::vector<std::string> algorithms;
    std::vector<std::string> instances;
    std::vector<std::vector<double>> means;  // [algorithm][instance]

    MeanMatrix subset_instances(const std::vector<std::string>& keep) const;
};

struct RankEntry {
    std::string algorithm;
    double avg_rank = 0.0;
    double p_holm = -1.0;  // -1 for the control algorithm
    bool significant = false;
};

struct RankReport {
    std::vector<RankEntry> entries;  // sorted by avg_rank ascending
    double chi_squared = 0.0;
    double p_value = 1.0;
    int n_instances = 0;
    int n_algorithms = 0;
};

/// Friedman average ranks (rank 1 = lowest mean, average ranks on ties) plus
/// the chi-squared test statistic.
RankReport friedman_ranks(const MeanMatrix& matrix);

/// Holm step-down adjusted p-values of every algorithm against the
/// best-ranked control; flags significance at 0.05.
void holm_posthoc(RankReport& report);

struct EnergyReport {
    std::vector<std::string> algorithms;
    std::vector<std::string> instances;
    std::vector<std::vector<double>> diffs;  // [instance][algorithm]
    std::vector<double> totals;              // per algorithm
};

/// (mean - best_known) * h per instance and algorithm, plus a total row.
EnergyReport energy_diff_report(const MeanMatrix& means,
                                const std::map<std::string, double>& best_known,
                                const std::map<std::string, double>& h_rate);

// CSV surfaces ------------------------------------------------------------

std::string stats_csv(const std::vector<StatsRow>& rows);
std::string ranks_csv(const RankReport& report);
std::string energy_csv(const EnergyReport& report);

/// Rows of `instance,algorithm,min,mean,std` (NA allowed in numeric fields).
struct ReferenceTable {
    std::vector<std::string> algorithms;
    std::vector<std::string> instances;
    std::map<std::pair<std::string, std::string>, double> min;   // (inst, algo)
    std::map<std::pair<std::string, std::string>, double> mean;  // (inst, algo)

    MeanMatrix mean_matrix(const std::vector<std::string>& algorithms) const;
    /// Lowest reported minimum per instance.
    std::map<std::string, double> best_known() const;
};

ReferenceTable load_reference_table(std::istream& in);

/// Rows of `instance,h`.
std::map<std::string, double> load_h_rates(std::istream& in);

}  // namespace cevrp

#endif
