#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "bldcsim/dataset.hpp"
#include "bldcsim/sim_engine.hpp"

using namespace bldcsim;

namespace {

const Trace& short_trace() {
    static const Trace trace = [] {
        SimConfig cfg = default_config();
        cfg.t_end = 2.0;  // spin-up sweeps through all sectors
        return run_simulation(cfg);
    }();
    return trace;
}

int hidden_layers(const std::vector<LayerSpec>& topology) {
    return static_cast<int>(topology.size()) - 2;
}

}  // namespace

TEST_CASE("case topologies match the layer plan") {
    const Trace& trace = short_trace();

    const CaseSetup c1 = build_case(1, trace, 1);
    CHECK(c1.topology.front().width == 3);
    CHECK(c1.topology.back().width == 1);
    CHECK(hidden_layers(c1.topology) == 5);
    CHECK(c1.topology.back().activation == Activation::identity);
    for (int l = 1; l + 1 < static_cast<int>(c1.topology.size()); ++l) {
        CHECK(c1.topology[l].width == 5);
        CHECK(c1.topology[l].activation == Activation::sigmoid);
    }

    const CaseSetup c2 = build_case(2, trace, 1);
    CHECK(c2.topology.front().width == 3);
    CHECK(c2.topology.back().width == 3);
    CHECK(hidden_layers(c2.topology) == 14);

    const CaseSetup c3 = build_case(3, trace, 1);
    CHECK(c3.topology.front().width == 3);
    CHECK(c3.topology.back().width == 3);
    CHECK(hidden_layers(c3.topology) == 6);
    CHECK(c3.topology.back().activation == Activation::sigmoid);

    const CaseSetup c4 = build_case(4, trace, 1);
    CHECK(c4.topology.front().width == 6);
    CHECK(c4.topology.back().width == 3);
    CHECK(hidden_layers(c4.topology) == 6);

    const CaseSetup soft = build_case(1, trace, 1, true);
    CHECK(soft.topology.back().activation == Activation::softmax);

    CHECK_THROWS_AS(build_case(5, trace, 1), ConfigInvalid);
}

TEST_CASE("case 3 targets take only the remapped levels 0, 0.5, 1") {
    const CaseSetup c3 = build_case(3, short_trace(), 1);
    for (const auto& row : c3.data.targets) {
        for (double v : row) {
            CHECK((v == 0.0 || v == 0.5 || v == 1.0));
        }
    }
    CHECK(c3.data.accuracy.levels == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("normalized columns stay in the unit interval and invert exactly") {
    const CaseSetup c1 = build_case(1, short_trace(), 1);
    const auto raw = trace_column(short_trace(), "speed_actual");
    for (std::size_t r = 0; r < c1.data.targets.size(); ++r) {
        const double norm = c1.data.targets[r][0];
        CHECK(norm >= 0.0);
        CHECK(norm <= 1.0);
        CHECK(denormalize_value(norm, c1.data.target_scales[0]) ==
              doctest::Approx(raw[r]).epsilon(1e-12));
    }
}

TEST_CASE("partition sizes follow the 80:20 split") {
    const CaseSetup c1 = build_case(1, short_trace(), 9);
    const std::size_t rows = short_trace().records.size();
    const std::size_t train = c1.data.partition.train.size();
    CHECK(train == static_cast<std::size_t>(std::ceil(0.8 * static_cast<double>(rows))));
    CHECK(train + c1.data.partition.validation.size() == rows);
}

TEST_CASE("hall to emf levels is an exact 6-entry lookup on real traces") {
    // Brute-force oracle for the learnability of cases 3 and 4: the majority
    // table built on the training rows scores the validation rows.
    const Trace& trace = short_trace();
    for (int case_id : {3, 4}) {
        const CaseSetup setup = build_case(case_id, trace, 1);
        std::map<std::vector<double>, std::map<std::vector<double>, int>> votes;
        for (std::size_t r : setup.data.partition.train) {
            ++votes[setup.data.inputs[r]][setup.data.targets[r]];
        }
        std::map<std::vector<double>, std::vector<double>> table;
        for (const auto& [key, counts] : votes) {
            const std::vector<double>* best = nullptr;
            int best_count = -1;
            for (const auto& [target, count] : counts) {
                if (count > best_count) {
                    best = &target;
                    best_count = count;
                }
            }
            table[key] = *best;
        }
        std::size_t hits = 0;
        std::size_t total = 0;
        for (std::size_t r : setup.data.partition.validation) {
            const auto it = table.find(setup.data.inputs[r]);
            if (it != table.end() && it->second == setup.data.targets[r]) {
                ++hits;
            }
            ++total;
        }
        CHECK(static_cast<double>(hits) / static_cast<double>(total) == doctest::Approx(1.0));
    }
}

TEST_CASE("predict_case inverts the normalization and checks dimensions") {
    const Trace& trace = short_trace();
    const CaseSetup c1 = build_case(1, trace, 1);
    const Mlp model = make_mlp(c1.topology, 1);
    const auto preds = predict_case(model, c1.data);
    CHECK(preds.size() == trace.records.size());
    CHECK(preds.front().size() == 1);

    const Mlp wrong = make_mlp(
        {{2, Activation::identity}, {5, Activation::sigmoid}, {1, Activation::identity}}, 1);
    CHECK_THROWS_AS(predict_case(wrong, c1.data), DimensionMismatch);

    const std::string csv = predictions_to_csv(trace, c1.data, preds);
    CHECK(csv.substr(0, csv.find('\n')) == "t,partition,speed_actual_target,speed_actual_pred");
}

TEST_CASE("build_case needs enough rows") {
    Trace tiny;
    tiny.config = default_config();
    tiny.records.push_back(TraceRecord{});
    CHECK_THROWS_AS(build_case(1, tiny, 1), TooFewRows);
}
