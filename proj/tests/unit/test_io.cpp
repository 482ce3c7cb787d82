#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "nitsche/driver.hpp"
#include "nitsche/errors.hpp"
#include "nitsche/export.hpp"
#include "nitsche/studies.hpp"

using namespace nitsche;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nitsche_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("built-in scenarios round-trip through JSON") {
  for (const auto& name : builtin_scenario_names()) {
    const Scenario sc = builtin_scenario(name);
    const nlohmann::json doc = scenario_to_json(sc);
    CHECK(scenario_from_json(doc) == sc);
    CHECK(scenario_from_json(nlohmann::json::parse(doc.dump())) == sc);
  }
  const Scenario bend = builtin_scenario("cantilever-bend");
  CHECK(bend.loads.body_force == std::array<double, 2>{0.0, -2e4});
  CHECK(builtin_scenario("cantilever-stretch").loads.body_force == std::array<double, 2>{1e5, 0.0});
  CHECK(bend.material.E == 1e6);
  CHECK(bend.coupling.gamma0_factor == 20.0);
  CHECK_THROWS_AS(builtin_scenario("nope"), ConfigError);
}

TEST_CASE("config validation names the offending field") {
  nlohmann::json doc = scenario_to_json(builtin_scenario("cantilever-bend"));
  auto bad = doc;
  bad["coupling"]["gama0"] = 3;
  CHECK(error_of([&] { scenario_from_json(bad); }).find("coupling.gama0") != std::string::npos);
  CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);

  bad = doc;
  bad["material"]["E"] = "stiff";
  CHECK(error_of([&] { scenario_from_json(bad); }).find("material.E") != std::string::npos);

  bad = doc;
  bad["coupling"]["mode"] = "glued";
  CHECK(error_of([&] { scenario_from_json(bad); }).find("coupling.mode") != std::string::npos);

  bad = doc;
  bad["material"]["nu"] = 0.5;
  CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);

  bad = doc;
  bad["coupling"]["alpha"] = -1.0;
  CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);

  bad = doc;
  bad.erase("spec");
  CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
}

TEST_CASE("overrides") {
  nlohmann::json doc = scenario_to_json(builtin_scenario("cantilever-bend"));
  apply_override(doc, "section.EI=1e4");
  apply_override(doc, "coupling.mode=contact");
  apply_override(doc, "coupling.alpha=1e-5");
  apply_override(doc, "loads.body_force=[0, 5]");
  const Scenario sc = scenario_from_json(doc);
  CHECK(sc.section.EI == 1e4);
  CHECK(sc.coupling.mode == "contact");
  CHECK(sc.loads.body_force == std::array<double, 2>{0.0, 5.0});
  CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "section.EI.x=1"), ConfigError);
}

TEST_CASE("config files") {
  const fs::path good = scratch("good.json");
  std::ofstream(good) << scenario_to_json(builtin_scenario("cantilever-stretch")).dump(2);
  CHECK(scenario_from_json(read_config_file(good)) == builtin_scenario("cantilever-stretch"));

  const fs::path broken = scratch("broken.json");
  std::ofstream(broken) << "{\n  \"spec\": 1,\n  \"name\": oops\n}\n";
  CHECK_THROWS_AS(read_config_file(broken), ConfigError);
  CHECK(error_of([&] { read_config_file(broken); }).find("line 3") != std::string::npos);

  CHECK_THROWS_AS(read_config_file(scratch("does_not_exist.json")), IoError);
}

TEST_CASE("built-in problem setup") {
  const Problem p = build_problem(fixtures::coarse_cantilever("strong", 1e4, 0.3));
  CHECK(p.meshes.size() == 5);
  CHECK(p.interface.segments.size() == 6);
  CHECK(p.materials[0].lambda == doctest::Approx(375000.0));
  for (const auto& m : p.meshes) CHECK(m.max_diameter() <= 2.0 * 0.3);
  // Default beam element size is the mean of the adjacent mesh sizes.
  for (const auto& s : p.interface.segments) {
    for (const auto& e : s.elements) CHECK(e.length() <= 0.3 + 1e-12);
  }
  Scenario one = fixtures::coarse_cantilever("strong", 1e4, 0.3);
  one.mesh.interface_element_size = 0.0;
  CHECK(build_problem(one).interface.element_count() == 6);
}

TEST_CASE("mesh cache is written and reused") {
  const fs::path cache = scratch("cantilever.mesh");
  fs::remove(cache);
  Scenario sc = fixtures::coarse_cantilever("hybrid");
  sc.mesh.cache = cache.string();
  const Problem a = build_problem(sc);
  REQUIRE(fs::exists(cache));
  const Problem b = build_problem(sc);
  for (std::size_t m = 0; m < a.meshes.size(); ++m) {
    CHECK(a.meshes[m].nodes == b.meshes[m].nodes);
    CHECK(a.meshes[m].triangles == b.meshes[m].triangles);
  }
}

TEST_CASE("profile CSV round trip is exact") {
  std::vector<ProfileRow> rows{{0, 0.1, 1.0 / 3.0, -2e-17, 0.5, 1e-300, -7.25, 3e12, -0.0},
                               {5, 0.123456789012345678, 6.02e23, 0.0, -1.0, 2.0, 3.0, 4.0, 5.0}};
  std::stringstream ss;
  write_profile_csv(ss, rows);
  CHECK(ss.str().rfind(kProfileHeader, 0) == 0);
  CHECK(read_profile_csv(ss) == rows);

  std::stringstream bad(std::string(kProfileHeader) + "\n1,2,3\n");
  CHECK_THROWS_AS(read_profile_csv(bad), IoError);
  std::stringstream noheader("a,b\n");
  CHECK_THROWS_AS(read_profile_csv(noheader), IoError);
}

TEST_CASE("run, summarize and export a scenario") {
  Scenario sc = fixtures::coarse_cantilever("strong", 1e4);
  sc.name = "unit-run";
  const RunResult r = run_scenario(sc);
  REQUIRE(r.probe.has_value());
  CHECK(r.probe->y() < 0.0);

  const auto summary = run_summary(sc, r);
  CHECK(summary["mode"] == "strong");
  CHECK(summary["dofs"]["total"].get<int>() == r.system.dofs.size);
  CHECK(summary["newton_iterations"] == 0);
  CHECK(summary["energy"].get<double>() > 0.0);
  // Linear problem: the work of the loads is twice the strain energy.
  CHECK(summary["work"].get<double>() == doctest::Approx(2.0 * summary["energy"].get<double>()).epsilon(1e-8));

  const fs::path dir = scratch("export");
  fs::remove_all(dir);
  const auto files = write_outputs(sc, r, dir);
  CHECK(files.size() == 4);
  for (const auto& f : files) CHECK(fs::file_size(f) > 0);

  std::ifstream vtk(dir / "unit-run.vtk");
  std::string text((std::istreambuf_iterator<char>(vtk)), std::istreambuf_iterator<char>());
  std::size_t points = 0;
  std::size_t cells = 0;
  for (const auto& m : r.problem.meshes) {
    points += m.nodes.size();
    cells += m.triangles.size();
  }
  CHECK(text.find("POINTS " + std::to_string(points) + " double") != std::string::npos);
  CHECK(text.find("CELLS " + std::to_string(cells) + " " + std::to_string(4 * cells)) != std::string::npos);
  CHECK(text.find("VECTORS displacement double") != std::string::npos);
  CHECK(text.find("TENSORS stress double") != std::string::npos);

  std::ifstream svg(dir / "unit-run.svg");
  std::string s((std::istreambuf_iterator<char>(svg)), std::istreambuf_iterator<char>());
  CHECK(s.find("id=\"undeformed\"") != std::string::npos);
  CHECK(s.find("id=\"deformed\"") != std::string::npos);
  CHECK(s.find("id=\"interface\"") != std::string::npos);

  const auto rows = read_profile_csv(dir / "unit-run_profile.csv");
  CHECK(rows == profile_rows(r.post));
  CHECK(rows.size() == r.post.profile.size());

  CHECK_THROWS_AS(write_outputs(sc, r, dir / "unit-run.vtk" / "sub"), IoError);
}

TEST_CASE("identical configs give bit-identical summaries") {
  Scenario sc = fixtures::coarse_cantilever("contact", 1e4, 0.3);
  sc.coupling.alpha = 1e-6;
  const std::string a = run_summary(sc, run_scenario(sc)).dump();
  const std::string b = run_summary(sc, run_scenario(sc)).dump();
  CHECK(a == b);
}

TEST_CASE("a single convergence level gives no slope and a warning") {
  ConvergenceOptions o;
  o.levels = {8};
  const ConvergenceReport r = run_convergence(o);
  CHECK(r.rows.size() == 1);
  CHECK_FALSE(r.l2_slope.has_value());
  CHECK_FALSE(r.energy_slope.has_value());
  CHECK_FALSE(r.warnings.empty());
}
