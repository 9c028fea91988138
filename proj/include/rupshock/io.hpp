#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rupshock/errors.hpp"
#include "rupshock/inference.hpp"
#include "rupshock/monte_carlo.hpp"
#include "rupshock/rup.hpp"
#include "rupshock/shocks.hpp"
#include "rupshock/stats.hpp"

namespace rupshock {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Failure records as CSV ("system_id,failure_state_index", one row per system)
// ---------------------------------------------------------------------------

struct Dataset {
    std::vector<std::string> system_ids;
    FailureRecord record;

    bool operator==(const Dataset&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline Dataset read_dataset_csv(std::istream& in, const StateGrid& grid) {
    Dataset out;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) raise(errc::parse_error, "line 1: missing header");
    ++line_no;
    {
        std::string header = detail::trim(line);
        if (header != "system_id,failure_state_index")
            raise(errc::parse_error, "line 1: expected header 'system_id,failure_state_index'");
    }
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = detail::trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos)
            raise(errc::parse_error,
                  "line " + std::to_string(line_no) + ": expected exactly two fields");
        const std::string id = detail::trim(row.substr(0, comma));
        const std::string idx_text = detail::trim(row.substr(comma + 1));
        if (id.empty())
            raise(errc::parse_error, "line " + std::to_string(line_no) + ": empty system_id");
        for (const auto& seen : out.system_ids)
            if (seen == id)
                raise(errc::parse_error,
                      "line " + std::to_string(line_no) + ": duplicate system_id '" + id + "'");
        std::size_t idx = 0;
        try {
            std::size_t consumed = 0;
            const long long parsed = std::stoll(idx_text, &consumed);
            if (consumed != idx_text.size() || parsed < 0) throw std::invalid_argument(idx_text);
            idx = static_cast<std::size_t>(parsed);
        } catch (const std::exception&) {
            raise(errc::parse_error, "line " + std::to_string(line_no) +
                                         ": failure_state_index must be a nonnegative integer");
        }
        if (idx >= grid.size())
            raise(errc::unknown_state, "line " + std::to_string(line_no) + ": state index " +
                                           std::to_string(idx) + " off the grid");
        out.system_ids.push_back(id);
        out.record.states.push_back(idx);
    }
    return out;
}

inline Dataset read_dataset_csv_file(const std::string& path, const StateGrid& grid) {
    std::ifstream in(path);
    if (!in) raise(errc::parse_error, "cannot open '" + path + "'");
    return read_dataset_csv(in, grid);
}

inline void write_dataset_csv(std::ostream& out, const Dataset& data) {
    if (data.system_ids.size() != data.record.size())
        raise(errc::bad_config, "dataset ids and record sizes differ");
    out << "system_id,failure_state_index\n";
    for (std::size_t i = 0; i < data.record.size(); ++i)
        out << data.system_ids[i] << ',' << data.record.states[i] << '\n';
}

// ---------------------------------------------------------------------------
// JSON for structured outputs. Doubles round-trip exactly (the serializer
// emits the shortest representation that parses back to the same value).
// ---------------------------------------------------------------------------

inline json to_json(const StateGrid& grid) {
    return json(std::vector<double>(grid.values().begin(), grid.values().end()));
}

inline json to_json(const FailureRecord& record) { return json(record.states); }

inline json to_json(const PredictiveDistribution& d) {
    return json{{"grid", to_json(d.grid)},
                {"pmf", d.pmf},
                {"tail", d.tail},
                {"mean_on_grid", d.mean_on_grid}};
}

inline json to_json(const BetaStacySpec& spec) {
    return json{{"grid", to_json(spec.grid())},
                {"failure_shape",
                 std::vector<double>(spec.failure_shapes().begin(), spec.failure_shapes().end())},
                {"survival_shape",
                 std::vector<double>(spec.survival_shapes().begin(), spec.survival_shapes().end())}};
}

inline json to_json(const McReport& rep) {
    return json{{"labels", rep.labels},         {"estimate", rep.estimate},
                {"std_error", rep.std_error},   {"analytic", rep.analytic},
                {"z_score", rep.z_score},       {"replicates", rep.replicates},
                {"seed", rep.seed},             {"stream", rep.stream},
                {"z_bound", rep.z_bound},       {"max_abs_z", rep.max_abs_z},
                {"pass", rep.pass}};
}

inline StateGrid grid_from_json(const json& j) {
    return StateGrid(j.get<std::vector<double>>());
}

inline FailureRecord record_from_json(const json& j) {
    return FailureRecord{j.get<std::vector<std::size_t>>()};
}

inline PredictiveDistribution predictive_from_json(const json& j) {
    PredictiveDistribution d;
    d.grid = grid_from_json(j.at("grid"));
    d.pmf = j.at("pmf").get<std::vector<double>>();
    d.tail = j.at("tail").get<double>();
    d.mean_on_grid = j.at("mean_on_grid").get<double>();
    return d;
}

inline BetaStacySpec beta_stacy_from_json(const json& j) {
    return BetaStacySpec(grid_from_json(j.at("grid")),
                         j.at("failure_shape").get<std::vector<double>>(),
                         j.at("survival_shape").get<std::vector<double>>());
}

// ---------------------------------------------------------------------------
// Run configuration (grid, priors, s, and per-model sections) as one JSON file
// ---------------------------------------------------------------------------

struct ShockModelConfig {
    ShockStream stream;
    double failure_level = 0.0;
    std::optional<ThresholdSchedule> schedule;  // present: generalized model
    std::size_t max_shocks = 1'000'000;
};

struct AppConfig {
    std::optional<RupConfig> rup;
    std::size_t systems = 1;  // systems per replicate for the chain model
    std::optional<ShockModelConfig> shock;
    std::optional<UbgesmSpec> ubgesm;
    std::size_t ubgesm_max_steps = 1'000'000;
};

namespace detail {

inline ValueLaw value_law_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sequence") return ValueLaw::sequence(j.at("values").get<std::vector<double>>());
    if (kind == "uniform")
        return ValueLaw::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    if (kind == "exponential") return ValueLaw::exponential(j.at("rate").get<double>());
    raise(errc::parse_error, "unknown value law kind '" + kind + "'");
}

inline UrnComposition prior_from_json(const json& j) {
    return UrnComposition::two_color(j.at("white").get<double>(), j.at("black").get<double>());
}

}  // namespace detail

inline AppConfig config_from_json(const json& j) {
    AppConfig cfg;
    if (j.contains("grid")) {
        StateGrid grid = grid_from_json(j.at("grid"));
        const double s = j.at("s").get<double>();
        std::vector<UrnComposition> priors;
        const json& pj = j.at("priors");
        if (pj.is_object()) {
            priors.assign(grid.size(), detail::prior_from_json(pj));
        } else {
            for (const auto& one : pj) priors.push_back(detail::prior_from_json(one));
        }
        cfg.rup = RupConfig(std::move(grid), std::move(priors), s);
    }
    cfg.systems = j.value("systems", std::size_t{1});
    if (j.contains("shock")) {
        const json& sj = j.at("shock");
        ShockModelConfig shock{ShockStream{detail::value_law_from_json(sj.at("magnitude")),
                                           detail::value_law_from_json(sj.at("interarrival"))},
                               sj.at("failure_level").get<double>(),
                               std::nullopt,
                               sj.value("max_shocks", std::size_t{1'000'000})};
        if (sj.contains("schedule")) {
            const json& gj = sj.at("schedule");
            shock.schedule = ThresholdSchedule(shock.failure_level,
                                               gj.at("damage_boundary").get<double>(),
                                               gj.at("alpha").get<std::vector<double>>());
        }
        cfg.shock = std::move(shock);
    }
    if (j.contains("ubgesm")) {
        const json& uj = j.at("ubgesm");
        cfg.ubgesm = UbgesmSpec(UrnComposition(uj.at("initial").get<std::vector<double>>()),
                                uj.at("s").get<double>(), uj.at("p").get<double>());
        cfg.ubgesm_max_steps = uj.value("max_steps", std::size_t{1'000'000});
    }
    return cfg;
}

inline AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::parse_error, "cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        raise(errc::parse_error, "config '" + path + "': " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const json::exception& e) {
        raise(errc::parse_error, "config '" + path + "': " + e.what());
    }
}

}  // namespace rupshock
