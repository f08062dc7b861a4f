#include "common.hpp"

#include <random>

using namespace tva;
using testing::sl2;
using json = nlohmann::json;

TEST_CASE("sl2 loads and validates")
{
	const auto& s = sl2();
	REQUIRE(s.dim() == 3);
	CHECK(s.index_of("h") == 2);
	auto ef = s.bracket(0, 1);
	REQUIRE(ef.size() == 1);
	CHECK(ef[0].index == 2);
	CHECK(ef[0].coeff == 1);
	// filled in by antisymmetry
	auto fe = s.bracket(1, 0);
	REQUIRE(fe.size() == 1);
	CHECK(fe[0].coeff == -1);
	CHECK(s.form(2, 2) == 2);
	CHECK(validate_lie_spec(s).ok);
}

TEST_CASE("invariance violation reports the triple")
{
	auto bad = LieAlgebraSpec::from_file(testing::kData + "/sl2_bad_form.json");
	auto r = validate_lie_spec(bad);
	CHECK_FALSE(r.ok);
	CHECK(r.identity == "invariance");
	CHECK(r.triple.size() == 3);
	CHECK(r.detail.find("<[") != std::string::npos);
}

TEST_CASE("Jacobi violation is found")
{
	LieAlgebraSpec s = sl2();
	s.set_bracket(2, 0, {{0, Rational(3)}});
	s.set_bracket(0, 2, {{0, Rational(-3)}});
	auto r = validate_lie_spec(s);
	CHECK_FALSE(r.ok);
	CHECK(r.identity == "jacobi");
}

TEST_CASE("antisymmetry violation when both orders are listed inconsistently")
{
	json j = {{"dim", 2},
	          {"basis", {"x", "y"}},
	          {"brackets", {{{"i", "x"}, {"j", "y"}, {"coeffs", {{"x", 1}}}}, {{"i", "y"}, {"j", "x"}, {"coeffs", {{"x", 1}}}}}},
	          {"form", {{0, 0}, {0, 0}}}};
	auto s = LieAlgebraSpec::from_json(j);
	auto r = validate_lie_spec(s);
	CHECK_FALSE(r.ok);
	CHECK(r.identity == "antisymmetry");
	j = sl2().to_json();
	j["brackets"].push_back(j["brackets"][0]);
	CHECK_THROWS_AS(LieAlgebraSpec::from_json(j), SpecError);
}

TEST_CASE("structural errors")
{
	json base = {{"dim", 2}, {"basis", {"x", "y"}}, {"form", {{1, 0}, {0, 1}}}};
	CHECK_NOTHROW(LieAlgebraSpec::from_json(base));
	json j = base;
	j.erase("form");
	CHECK_THROWS_AS(LieAlgebraSpec::from_json(j), SpecError);
	j = base;
	j["dim"] = 3;
	CHECK_THROWS_AS(LieAlgebraSpec::from_json(j), SpecError);
	j = base;
	j["basis"] = {"x", "vac"};
	CHECK_THROWS_AS(LieAlgebraSpec::from_json(j), SpecError);
	j = base;
	j["brackets"] = {{{"i", "x"}, {"j", "z"}, {"coeffs", json::object()}}};
	CHECK_THROWS_AS(LieAlgebraSpec::from_json(j), SpecError);
	j = base;
	j["brackets"] = {{{"i", 0}, {"j", 1}, {"coeffs", {{"x", "1/2"}}}}, {{"i", 0}, {"j", 1}, {"coeffs", json::object()}}};
	CHECK_THROWS_AS(LieAlgebraSpec::from_json(j), SpecError);
	j = base;
	j["form"] = {{1, 0}, {0}};
	CHECK_THROWS_AS(LieAlgebraSpec::from_json(j), SpecError);
}

TEST_CASE("rational coefficients round-trip through JSON")
{
	json j = {{"dim", 2}, {"basis", {"x", "y"}}, {"brackets", {{{"i", 0}, {"j", 1}, {"coeffs", {{"x", "1/2"}}}}}},
	          {"form", {{0, 0}, {0, 0}}}};
	auto s = LieAlgebraSpec::from_json(j);
	CHECK(s.bracket(0, 1)[0].coeff == Rational(1, 2));
	auto back = LieAlgebraSpec::from_json(s.to_json());
	CHECK(back.bracket(1, 0)[0].coeff == Rational(-1, 2));
	CHECK(validate_lie_spec(s).ok);
}

TEST_CASE("property: bracket_g is antisymmetric, satisfies Jacobi, and the form is invariant")
{
	std::mt19937_64 rng(3);
	auto rnd = [&] {
		GVector v(3);
		for (auto& c : v)
			{
			c = Rational(static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 3));
			c.canonicalize();
		}
		return v;
	};
	for (int t = 0; t < 50; ++t) {
		GVector a = rnd(), b = rnd(), c = rnd();
		GVector ab = bracket_g(sl2(), a, b), ba = bracket_g(sl2(), b, a);
		for (int i = 0; i < 3; ++i)
			CHECK(ab[i] == -ba[i]);
		GVector j1 = bracket_g(sl2(), bracket_g(sl2(), a, b), c);
		GVector j2 = bracket_g(sl2(), bracket_g(sl2(), b, c), a);
		GVector j3 = bracket_g(sl2(), bracket_g(sl2(), c, a), b);
		for (int i = 0; i < 3; ++i)
			CHECK(j1[i] + j2[i] + j3[i] == 0);
		CHECK(form_g(sl2(), ab, c) == form_g(sl2(), a, bracket_g(sl2(), b, c)));
		CHECK(form_g(sl2(), a, b) == form_g(sl2(), b, a));
	}
}
