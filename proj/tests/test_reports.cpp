#include <doctest.h>

#include <string>

#include <nlohmann/json.hpp>

#include "fa/energy.hpp"
#include "fa/gcn.hpp"
#include "fa/graph.hpp"
#include "fa/spectral.hpp"
#include "schema_check.hpp"

namespace {

std::string schema_path(const std::string& name) {
  return std::string(FA_SCHEMA_DIR) + "/" + name + ".schema.json";
}

fa::Graph p3_plus_p2() {
  return fa::build_graph({{0, 1}, {1, 2}, {3, 4}}, 5);
}

}  // namespace

TEST_CASE("schema checker catches type and required-field violations") {
  nlohmann::json schema = {
      {"type", "object"},
      {"required", {"a", "b"}},
      {"properties",
       {{"a", {{"type", "number"}}}, {"b", {{"type", "string"}}}}}};
  CHECK(fa_tests::schema_errors({{"a", 1.5}, {"b", "x"}}, schema).empty());
  CHECK(fa_tests::schema_errors({{"a", 1.5}}, schema).size() == 1);
  CHECK(fa_tests::schema_errors({{"a", "nope"}, {"b", "x"}}, schema).size() ==
        1);
  CHECK(!fa_tests::schema_errors(nlohmann::json::array(), schema).empty());
}

TEST_CASE("spectral summary JSON matches its schema and values") {
  fa::Graph g = p3_plus_p2();
  nlohmann::json j = fa::to_json(fa::component_fiedler_summary(g));
  auto errors =
      fa_tests::schema_errors(j, fa_tests::load_json(schema_path("spectral_summary")));
  for (const auto& e : errors) MESSAGE(e);
  CHECK(errors.empty());
  CHECK(j["node_count"] == 5);
  CHECK(j["per_component_fiedler"].size() == 2);
  CHECK(j["simple_average_fiedler"].get<double>() == doctest::Approx(1.5));
  CHECK(j["weighted_average_fiedler"].get<double>() == doctest::Approx(1.4));
}

TEST_CASE("bounds JSON matches its schema") {
  nlohmann::json j = fa::to_json(fa::spectral_bounds(16, 1.0, 3));
  auto errors =
      fa_tests::schema_errors(j, fa_tests::load_json(schema_path("bounds")));
  for (const auto& e : errors) MESSAGE(e);
  CHECK(errors.empty());
  CHECK(j["mean_distance_lower"].get<double>() > 0.0);
  CHECK(j["diameter_upper"].get<double>() >=
        j["diameter_lower"].get<double>());
}

TEST_CASE("depth advice JSON matches its schema") {
  fa::Graph g = p3_plus_p2();
  fa::SpectralSummary summary = fa::component_fiedler_summary(g);
  fa::BoundsReport bounds =
      fa::spectral_bounds(summary.node_count, summary.weighted_average_fiedler,
                          summary.max_degree);
  nlohmann::json j = fa::to_json(fa::depth_advice(summary, bounds, {1, 2, 3}));
  auto errors = fa_tests::schema_errors(
      j, fa_tests::load_json(schema_path("depth_advice")));
  for (const auto& e : errors) MESSAGE(e);
  CHECK(errors.empty());
  CHECK(j["depth_flags"].size() == 3);
}

TEST_CASE("energy report JSON matches its schema") {
  fa::EnergyReport r;
  r.dirichlet_energy = 3.5;
  r.fiedler_bound = 2.0;
  r.rho = 1.75;
  r.total_feature_norm = 4.0;
  r.centered = true;
  nlohmann::json j = fa::to_json(r);
  auto errors = fa_tests::schema_errors(
      j, fa_tests::load_json(schema_path("energy_report")));
  for (const auto& e : errors) MESSAGE(e);
  CHECK(errors.empty());
  CHECK(j["rho"].get<double>() == doctest::Approx(1.75));
  CHECK(j["centered"] == true);
}

TEST_CASE("sweep CSV has a rectangular header and numeric body") {
  fa::SweepResult result;
  fa::SweepRun r;
  r.depth = 2;
  r.repeat = 0;
  r.seed = 11;
  r.test_accuracy = 0.5;
  r.best_epoch = 4;
  r.rho_trace = {2.0, 1.25};
  result.runs.push_back(r);
  std::string csv = fa::sweep_csv(result);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "depth,repeat,seed,test_accuracy,best_epoch,rho_1,rho_2");
  // Every row carries the same number of commas as the header.
  size_t header_commas = 0, row_commas = 0;
  size_t nl = csv.find('\n');
  for (size_t i = 0; i < nl; ++i) header_commas += csv[i] == ',';
  for (size_t i = nl + 1; i < csv.size() && csv[i] != '\n'; ++i)
    row_commas += csv[i] == ',';
  CHECK(header_commas == row_commas);
}
