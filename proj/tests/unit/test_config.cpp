#include "common.hpp"

#include "tva/config.hpp"

using namespace tva;
using json = nlohmann::json;

namespace {

json base() { return {{"lie_spec", "sl2.json"}, {"r", 1}, {"level", "3/2"}}; }

}  // namespace

TEST_CASE("shipped configs load")
{
	for (const char* name : {"sl2_r1.json", "sl2_r2.json", "abelian_r1.json"}) {
		SessionConfig c = SessionConfig::from_file(testing::kData + "/" + name);
		VacuumModule V(c.spec, c.rank, c.level);
		ModeWindow w = materialize(c.window, V, c.base_dir);
		CHECK(w.states.size() == c.window.states.size());
		CHECK(c.estimate_cost() < c.budget);
	}
}

TEST_CASE("defaults and overrides")
{
	SessionConfig c = SessionConfig::from_json(base(), testing::kData);
	CHECK(c.level == Rational(3, 2));
	CHECK(c.window.m.size() == 1);
	CHECK(c.triple_window.m0_lo == c.window.m0_lo);
	json j = base();
	j["r"] = 2;
	j["window"] = {{"m0", {-1, 3}}, {"m", {{-1, 0}, {0, 2}}}, {"states", {"vac", "e(-1,1,0)"}}};
	c = SessionConfig::from_json(j, testing::kData);
	CHECK(c.window.cell_count() == 5 * 2 * 3);
}

TEST_CASE("invalid configs are rejected before computing")
{
	auto bad = [](json j) { CHECK_THROWS_AS(SessionConfig::from_json(j, testing::kData), ConfigError); };
	json j = base();
	j["r"] = 0;
	bad(j);
	j = base();
	j["level"] = "1/0";
	bad(j);
	j = base();
	j["level"] = "abc";
	bad(j);
	j = base();
	j.erase("lie_spec");
	bad(j);
	j = base();
	j["lie_spec"] = "missing.json";
	bad(j);
	j = base();
	j["window"] = {{"m0", {2, 1}}};
	bad(j);
	j = base();
	j["window"] = {{"m", {{-1, 1}, {-1, 1}}}};
	bad(j);
	j = base();
	j["cap"] = -1;
	bad(j);
	SessionConfig c = SessionConfig::from_json(base(), testing::kData);
	c.window.states = {"q(-1,0)"};
	VacuumModule V(c.spec, c.rank, c.level);
	CHECK_THROWS_AS(materialize(c.window, V, c.base_dir), ConfigError);
}

TEST_CASE("session key depends on mathematical content only")
{
	SessionConfig a = SessionConfig::from_json(base(), testing::kData);
	SessionConfig b = SessionConfig::from_json(base(), testing::kData);
	b.report_path = "elsewhere.json";
	CHECK(a.session_key() == b.session_key());
	b.level = 2;
	CHECK(a.session_key() != b.session_key());
}
