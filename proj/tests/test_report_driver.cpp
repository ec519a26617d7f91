#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "epistate/common.hpp"
#include "epistate/driver.hpp"

using namespace epistate;
using namespace epistate::driver;

namespace {

RunConfig small_config(const std::string& experiment, const std::string& engine = "qm") {
    RunConfig c;
    c.experiment = experiment;
    c.engine = engine;
    c.shots = 2000;
    c.seed = 77;
    c.target = 2000;
    return c;
}

}  // namespace

TEST_CASE("identical config and seed render byte-identical reports") {
    for (const char* exp : {"mzi", "epr", "chsh", "teleport-ideal", "teleport-optical",
                            "double-slit", "gns-demo", "rho"}) {
        RunConfig c = small_config(exp, "ess");
        if (std::string(exp) == "teleport-ideal" || std::string(exp) == "double-slit" ||
            std::string(exp) == "gns-demo" || std::string(exp) == "chsh")
            c.engine = "qm";
        std::string first = run_experiment(c).to_json();
        std::string second = run_experiment(c).to_json();
        CHECK(first == second);
        std::string csv1 = run_experiment(c).to_csv();
        std::string csv2 = run_experiment(c).to_csv();
        CHECK(csv1 == csv2);
    }
}

TEST_CASE("shard count changes leave all counts identical") {
    for (const char* exp : {"mzi", "epr", "teleport-optical", "double-slit"}) {
        RunConfig c1 = small_config(exp, "ess");
        RunConfig c8 = c1;
        c8.shards = 8;
        auto r1 = run_experiment(c1);
        auto r8 = run_experiment(c8);
        CHECK(r1.counts == r8.counts);
    }
}

TEST_CASE("CSV and JSON carry identical numeric values") {
    RunConfig c = small_config("teleport-optical", "ess");
    c.encoder_deg = c.pbs_deg = 45.0;
    auto rep = run_experiment(c);
    std::string csv = rep.to_csv();
    auto j = nlohmann::json::parse(rep.to_json());

    // every derived row in the CSV reproduces the JSON value text
    std::istringstream lines(csv);
    std::string line;
    bool in_derived = false;
    int matched = 0;
    while (std::getline(lines, line)) {
        if (line == "name,value,ci_low,ci_high") {
            in_derived = true;
            continue;
        }
        if (!in_derived || line.empty()) continue;
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 + 1);
        std::string name = line.substr(0, c1);
        std::string value = line.substr(c1 + 1, c2 - c1 - 1);
        auto jv = j["derived"][name]["value"];
        std::string jtext = jv.is_string() ? jv.get<std::string>() : jv.dump();
        CHECK(value == jtext);
        ++matched;
    }
    CHECK(matched >= 3);

    // counts match as well
    for (auto& [k, v] : j["counts"].items()) {
        CHECK(csv.find(k + "," + v.dump()) != std::string::npos);
    }
}

TEST_CASE("counts sum to shots (and to the coincidence target for rho)") {
    for (const char* exp : {"mzi", "teleport-ideal", "teleport-optical", "double-slit"}) {
        RunConfig c = small_config(exp);
        auto rep = run_experiment(c);
        int64_t sum = 0;
        for (const auto& [k, v] : rep.counts) sum += v;
        CHECK(sum == rep.shots);
    }
    RunConfig c = small_config("rho", "ess");
    auto rep = run_experiment(c);
    CHECK(rep.counts.at("minus_45") + rep.counts.at("plus_45") == c.target);
    CHECK(rep.counts.at("minus_90") + rep.counts.at("plus_90") == c.target);
}

TEST_CASE("non-finite derived values serialize as strings") {
    RunConfig c = small_config("rho", "ess");
    auto j = nlohmann::json::parse(run_experiment(c).to_json());
    CHECK(j["derived"]["rho"]["value"] == "inf");
    CHECK(j["derived"]["rho"]["ci_high"] == "inf");
    CHECK(j["derived"]["rho"]["ci_low"].is_number());

    RunConfig q = small_config("rho", "qm");
    auto jq = nlohmann::json::parse(run_experiment(q).to_json());
    CHECK(jq["derived"]["rho"]["value"] == "nan");
    CHECK(jq["derived"]["insufficient_statistics"]["value"] == 1.0);
}

TEST_CASE("schema carries the pinned keys") {
    auto j = nlohmann::json::parse(run_experiment(small_config("mzi")).to_json());
    for (const char* key : {"schema", "experiment", "engine", "seed", "shots", "params", "counts",
                            "derived"})
        CHECK(j.contains(key));
    CHECK(j["schema"] == 1);
}

TEST_CASE("invalid configurations are rejected before any computation") {
    RunConfig c = small_config("mzi");
    c.experiment = "warp-drive";
    CHECK_THROWS_AS(run_experiment(c), ContractViolation);

    c = small_config("mzi");
    c.engine = "vibes";
    CHECK_THROWS_AS(run_experiment(c), ContractViolation);

    c = small_config("mzi");
    c.shots = 0;
    CHECK_THROWS_AS(run_experiment(c), ContractViolation);

    c = small_config("mzi");
    c.mzi_config = "ajar";
    CHECK_THROWS_AS(run_experiment(c), ContractViolation);

    c = small_config("teleport-ideal");
    c.alpha_re = 1.0;
    c.beta_re = 1.0;
    CHECK_THROWS_AS(run_experiment(c), ContractViolation);

    c = small_config("epr");
    c.epr_axes = "0:0,banana";
    CHECK_THROWS_AS(run_experiment(c), ContractViolation);

    c = small_config("teleport-optical");
    c.encoder_deg = 200.0;
    CHECK_THROWS_AS(run_experiment(c), ContractViolation);

    c = small_config("double-slit");
    c.sites = 2;
    CHECK_THROWS_AS(run_experiment(c), ContractViolation);
}

TEST_CASE("mzi schedule runs several configurations in one report") {
    RunConfig c = small_config("mzi", "ess");
    c.mzi_schedule = "closed:before,open:after";
    auto rep = run_experiment(c);
    CHECK(rep.counts.at("e00_Db") == c.shots);
    CHECK(rep.counts.at("e00_Da") == 0);
    CHECK(rep.counts.at("e01_Da") + rep.counts.at("e01_Db") == c.shots);
    CHECK(rep.shots == 2 * c.shots);
    CHECK(rep.derived.at("timing_bit_identical").value == 1.0);

    c.mzi_schedule = "ajar:before";
    CHECK_THROWS_AS(run_experiment(c), ContractViolation);
}

TEST_CASE("axis pair parsing") {
    auto pairs = parse_axis_pairs_deg("0:0,90:45");
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[1].first == doctest::Approx(3.141592653589793 / 2));
    CHECK(pairs[1].second == doctest::Approx(3.141592653589793 / 4));
    CHECK_THROWS_AS(parse_axis_pairs_deg(""), ContractViolation);
    CHECK_THROWS_AS(parse_axis_pairs_deg("13"), ContractViolation);
}
