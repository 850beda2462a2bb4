#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "cevrp/solver.hpp"
#include "cevrp/svg.hpp"
#include "test_util.hpp"

using namespace cevrp;
using cevrp_test::instance_path;

TEST_CASE("metropolis accepts improving and equal-cost moves unconditionally") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        CHECK(metropolis_accept(-1.0, 0.5, rng));
        CHECK(metropolis_accept(-1e-12, 1e-9, rng));
        CHECK(metropolis_accept(0.0, 1e-9, rng));
    }
}

TEST_CASE("metropolis acceptance frequency follows exp(-delta/T)") {
    Rng rng(2);
    const int trials = 40000;
    int accepted = 0;
    for (int i = 0; i < trials; ++i) accepted += metropolis_accept(0.7, 0.7, rng);
    const double rate = static_cast<double>(accepted) / trials;
    CHECK(rate == doctest::Approx(std::exp(-1.0)).epsilon(0.05));

    accepted = 0;
    for (int i = 0; i < trials; ++i) accepted += metropolis_accept(2.0, 1.0, rng);
    CHECK(static_cast<double>(accepted) / trials ==
          doctest::Approx(std::exp(-2.0)).epsilon(0.10));

    // effectively never at very low temperature
    accepted = 0;
    for (int i = 0; i < trials; ++i) accepted += metropolis_accept(1.0, 1e-6, rng);
    CHECK(accepted == 0);
}

TEST_CASE("reheat_beta is linear in the spent-budget percentage, clamped") {
    SolverConfig cfg;  // (0, 0.05) to (90, 1.0)
    CHECK(reheat_beta(0, 1000, cfg) == doctest::Approx(0.05));
    CHECK(reheat_beta(900, 1000, cfg) == doctest::Approx(1.0));
    CHECK(reheat_beta(1000, 1000, cfg) == doctest::Approx(1.0));  // clamped above x_max
    CHECK(reheat_beta(450, 1000, cfg) == doctest::Approx(0.05 + (0.95 / 90.0) * 45.0));
    CHECK(reheat_beta(90, 1000, cfg) == doctest::Approx(0.05 + (0.95 / 90.0) * 9.0));

    SolverConfig flat;
    flat.x_min = flat.x_max = 50.0;
    CHECK(reheat_beta(0, 1000, flat) == doctest::Approx(flat.y_max));
}

TEST_CASE("config derives iteration and budget counts from the customer count") {
    SolverConfig cfg;
    CHECK(cfg.iters_per_epoch(21) == 840);
    CHECK(cfg.max_evaluations(21) == 525000);
    cfg.budget_scale = 0.01;
    CHECK(cfg.max_evaluations(21) == 5250);
    cfg.iters_per_epoch_mult = 10;
    CHECK(cfg.iters_per_epoch(50) == 500);
}

TEST_CASE("run spends exactly the evaluation budget and tracks the best tour") {
    Instance inst = load_instance(instance_path("E-n22-k4"));
    SolverConfig cfg;
    cfg.budget_scale = 0.01;  // 5250 evaluations
    cfg.seed = 7;

    RunRecord rec = run(inst, cfg);
    REQUIRE_FALSE(rec.failed);
    CHECK(rec.instance == "E-n22-k4");
    CHECK(rec.seed == 7);
    CHECK(rec.evaluations == cfg.max_evaluations(inst.customer_count()));
    CHECK(rec.best_fitness <= rec.initial_fitness);
    CHECK(rec.best_fitness > 0.0);
    CHECK(validate(rec.best_tour, inst).empty());
    CHECK(evaluate(rec.best_tour, inst) == doctest::Approx(rec.best_fitness).epsilon(1e-9));
    CHECK_FALSE(rec.epochs.empty());

    // the running best in the epoch trace never worsens
    for (size_t i = 0; i + 1 < rec.epochs.size(); ++i)
        CHECK(rec.epochs[i + 1].best_fitness <= rec.epochs[i].best_fitness + 1e-12);
    CHECK(rec.epochs.back().best_fitness == doctest::Approx(rec.best_fitness));
}

TEST_CASE("run is deterministic per seed and varies across seeds") {
    Instance inst = load_instance(instance_path("E-n22-k4"));
    SolverConfig cfg;
    cfg.budget_scale = 0.005;
    cfg.seed = 11;

    RunRecord a = run(inst, cfg);
    RunRecord b = run(inst, cfg);
    CHECK(a.best_fitness == b.best_fitness);
    CHECK(a.best_tour.seq == b.best_tour.seq);
    CHECK(a.epochs.size() == b.epochs.size());
    for (size_t i = 0; i < a.epochs.size(); ++i) {
        CHECK(a.epochs[i].temperature == b.epochs[i].temperature);
        CHECK(a.epochs[i].selections == b.epochs[i].selections);
    }

    cfg.seed = 12;
    RunRecord c = run(inst, cfg);
    CHECK(a.best_tour.seq != c.best_tour.seq);
}

TEST_CASE("every selector runs cleanly and records its selections") {
    Instance inst = load_instance(instance_path("E-n22-k4"));
    for (Selector s : {Selector::Random, Selector::EpsilonGreedy, Selector::Thompson,
                       Selector::Ucb1}) {
        CAPTURE(to_string(s));
        SolverConfig cfg;
        cfg.selector = s;
        cfg.budget_scale = 0.002;
        cfg.seed = 3;
        RunRecord rec = run(inst, cfg);
        REQUIRE_FALSE(rec.failed);
        CHECK(validate(rec.best_tour, inst).empty());
        long total_selections = 0;
        for (const auto& e : rec.epochs)
            for (int v : e.selections) total_selections += v;
        CHECK(total_selections > 0);
    }
}

TEST_CASE("cooling and reheating move the temperature as configured") {
    Instance inst = load_instance(instance_path("E-n22-k4"));
    SolverConfig cfg;
    cfg.budget_scale = 0.02;
    cfg.iters_per_epoch_mult = 5.0;  // short epochs so reheats occur in-budget
    cfg.seed = 19;
    RunRecord rec = run(inst, cfg);
    REQUIRE(rec.epochs.size() > 25);

    bool saw_cooling = false, saw_reheat = false;
    for (size_t i = 0; i + 1 < rec.epochs.size(); ++i) {
        const double t = rec.epochs[i].temperature;
        const double next = rec.epochs[i + 1].temperature;
        if (next == doctest::Approx(t * cfg.alpha).epsilon(1e-12)) {
            saw_cooling = true;
        } else {
            // a reheat adds beta within [y_min, y_max]
            CHECK(next - t >= cfg.y_min - 1e-9);
            CHECK(next - t <= cfg.y_max + 1e-9);
            saw_reheat = true;
        }
    }
    CHECK(saw_cooling);
    CHECK(saw_reheat);

    // h_up never reaches the non-improvement limit
    for (const auto& e : rec.epochs) CHECK(e.h_up < cfg.limit);
}

TEST_CASE("run record serializes to parseable JSON") {
    Instance inst = load_instance(instance_path("E-n22-k4"));
    SolverConfig cfg;
    cfg.budget_scale = 0.002;
    cfg.seed = 5;
    RunRecord rec = run(inst, cfg);
    auto j = nlohmann::json::parse(to_json(rec, inst));
    CHECK(j["instance"] == "E-n22-k4");
    CHECK(j["selector"] == "ts");
    CHECK(j["seed"] == 5);
    CHECK(j["best_fitness"].get<double>() == doctest::Approx(rec.best_fitness));
    CHECK(j["evaluations"].get<long>() == rec.evaluations);
    CHECK(j["failed"] == false);
    CHECK(j["epoch_trace"].size() == rec.epochs.size());
    CHECK(j["epoch_trace"][0]["selections"].size() == 8);
    // the embedded tour text re-parses to the recorded best tour
    ParsedSolution parsed = parse_solution_text(j["best_tour"].get<std::string>(), inst);
    CHECK(parsed.tour.seq == rec.best_tour.seq);
}

TEST_CASE("svg plots render markers for every node class") {
    Instance inst = load_instance(instance_path("E-n51-k5"));
    SolverConfig cfg;
    cfg.budget_scale = 0.001;
    cfg.seed = 2;
    RunRecord rec = run(inst, cfg);
    REQUIRE_FALSE(rec.failed);

    std::string svg = route_map_svg(inst, rec.best_tour);
    auto count = [&](const std::string& needle) {
        size_t n = 0;
        for (size_t pos = svg.find(needle); pos != std::string::npos;
             pos = svg.find(needle, pos + 1))
            ++n;
        return n;
    };
    CHECK(count("class=\"customer\"") == 50);
    CHECK(count("class=\"station\"") == 5);
    CHECK(count("class=\"depot\"") == 1);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.rfind("</svg>") != std::string::npos);

    std::string trace = trace_svg(rec);
    CHECK(trace.find("<svg") != std::string::npos);

    RunRecord empty;
    CHECK_THROWS(trace_svg(empty));
}
