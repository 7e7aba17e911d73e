#include "llsgm/config.hpp"
#include "llsgm/error.hpp"

#include "doctest.h"

#include <fstream>
#include <sstream>

using namespace llsgm;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ErrorCategory category_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e.category();
    }
    FAIL("config was accepted: " << text);
    return ErrorCategory::io;
}

// Minimal valid config with one field replaced by a raw JSON fragment.
std::string edited(const std::string& preset, const std::string& from, const std::string& to) {
    std::string text = dump_config(preset_config(preset));
    const auto at = text.find(from);
    REQUIRE_MESSAGE(at != std::string::npos, from);
    return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("every preset validates and round-trips") {
    for (const auto& name : preset_names()) {
        const ExperimentConfig c = preset_config(name);
        CHECK(c.name == name);
        CHECK(parse_config(dump_config(c)) == c);
        CHECK(parse_config(dump_config(c, -1)) == c);
    }
    CHECK_THROWS_AS(preset_config("no-such-preset"), Error);
}

TEST_CASE("shipped config files mirror the presets") {
    for (const auto& name : preset_names()) {
        const std::string path = std::string(LLSGM_SOURCE_DIR) + "/configs/" + name + ".json";
        CHECK_MESSAGE(load_config(path) == preset_config(name), path);
        CHECK_MESSAGE(read_file(path) == dump_config(preset_config(name)), path);
    }
}

TEST_CASE("coupling tables are keyed target then source") {
    const ExperimentConfig c = preset_config("twopop-regimes");
    // E onto I is 4, I onto E is 0.75
    CHECK(c.twopop.b[pop_i][pop_e] == 4.0);
    CHECK(c.twopop.b[pop_e][pop_i] == 0.75);
    const std::string text = dump_config(c);
    CHECK(text.find("\"I\": {\n        \"E\": 4.0") != std::string::npos);
}

TEST_CASE("missing fields take defaults") {
    const ExperimentConfig c =
        parse_config(R"({"schema_version": 1, "experiment": "blowup", "numerics": {"T": 1.0}})");
    CHECK(c.kind == ExperimentKind::blowup);
    CHECK(c.numerics.T == 1.0);
    CHECK(c.numerics.M == 16);
    CHECK(c.onepop.a0 == 1.0);
}

TEST_CASE("malformed configs are rejected before any computation") {
    CHECK(category_of("{") == ErrorCategory::configuration);
    CHECK(category_of(R"({"experiment": "blowup"})") == ErrorCategory::configuration);
    CHECK(category_of(R"({"schema_version": 2, "experiment": "blowup"})") == ErrorCategory::configuration);
    CHECK(category_of(R"({"schema_version": 1})") == ErrorCategory::configuration);
    CHECK(category_of(R"({"schema_version": 1, "experiment": "sweep"})") == ErrorCategory::configuration);
    CHECK(category_of(R"({"schema_version": 1, "experiment": "blowup", "colour": 1})") == ErrorCategory::configuration);
    CHECK(category_of(R"({"schema_version": 1, "experiment": "blowup", "numerics": {"M": "x"}})") ==
          ErrorCategory::configuration);
    CHECK(category_of(R"({"schema_version": 1, "experiment": "blowup", "numerics": {"Mm": 3}})") ==
          ErrorCategory::configuration);
}

TEST_CASE("kind-specific checks") {
    // delay 0.1 is not a whole number of 3e-4 steps
    CHECK(category_of(edited("twopop-regimes", "\"dt\": 0.0001", "\"dt\": 0.0003")) == ErrorCategory::configuration);
    // snapshot off the time grid, and past the final time
    CHECK(category_of(edited("blowup-onepop", "2.95", "2.9505")) == ErrorCategory::configuration);
    CHECK(category_of(edited("blowup-onepop", "3.35", "4.5")) == ErrorCategory::configuration);
    // dt that does not divide T
    CHECK(category_of(edited("convergence-time-onepop", "0.04,", "0.03,")) == ErrorCategory::configuration);
    CHECK(category_of(edited("convergence-space-onepop", "\"M_ladder\": [\n      3,", "\"M_ladder\": [],\"x\": [")) ==
          ErrorCategory::configuration);
    CHECK(category_of(edited("twopop-regimes", "\"model\": \"twopop\"", "\"model\": \"onepop\"")) ==
          ErrorCategory::configuration);
    CHECK(category_of(edited("efficiency", "0.015625,", "0.3,")) == ErrorCategory::configuration);
    CHECK(category_of(edited("blowup-onepop", "\"refractory\": \"pass-through\"", "\"refractory\": \"slow\"")) ==
          ErrorCategory::configuration);
}

TEST_CASE("experiment names") {
    CHECK(parse_experiment_kind("twopop-regimes") == ExperimentKind::twopop_regimes);
    CHECK(to_string(ExperimentKind::compare_fdm) == "compare-fdm");
    CHECK_THROWS_AS(parse_experiment_kind("regimes"), Error);
}
