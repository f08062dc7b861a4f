#include "common.hpp"

using namespace tva;
using testing::sl2;
using testing::st;

TEST_CASE("multi-index parsing")
{
	CHECK(parse_multi_index("2", 1) == MultiIndex{2});
	CHECK(parse_multi_index("(2,-1)", 2) == MultiIndex{2, -1});
	CHECK(parse_multi_index("2,-1", 2) == MultiIndex{2, -1});
	CHECK_THROWS_AS(parse_multi_index("2", 2), ParseError);
	CHECK_THROWS_AS(parse_multi_index("a", 1), ParseError);
}

TEST_CASE("state references")
{
	VacuumModule V(sl2(), 1, Rational(1));
	CHECK(st("vac", V) == StateVector::vacuum());
	CHECK(st("1", V) == StateVector::vacuum());
	CHECK(st("f", V) == StateVector::tail(1));
	CHECK(st("0", V).is_zero());
	CHECK(st("3/2*e(-1,0) + -1*h(-2,0)", V) ==
	      Rational(3, 2) * st("e(-1,0)", V) - st("h(-2,0)", V));
	CHECK(st("e(-1,2)|f", V) == V.act(LoopMode{0, -1, {2}}, StateVector::tail(1)));
	CHECK_THROWS_AS(st("q(-1,0)", V), ParseError);
	CHECK_THROWS_AS(st("e(-1)", V), ParseError);
	CHECK_THROWS_AS(st("e(-1,0", V), ParseError);
}

TEST_CASE("rank 2 modes")
{
	VacuumModule V(sl2(), 2, Rational(1));
	CHECK(format_state(st("e(-1,1,-1)", V), sl2()) == "1·|e(-1,1,-1) 1⟩");
}

TEST_CASE("JSON round trip and canonical-order check")
{
	VacuumModule V(sl2(), 1, Rational(1));
	auto s = st("2/3*f(-1,0)e(-1,0) + h(-2,1)|e", V);
	auto j = state_to_json(s, sl2());
	CHECK(state_from_json(j, sl2(), 1) == s);
	nlohmann::json bad = {{{"word", {{"f", 1, 0}, {"e", 1, 0}}}, {"tail", "1"}, {"coeff", "1"}}};
	CHECK_THROWS_AS(state_from_json(bad, sl2(), 1), ParseError);
}

TEST_CASE("formatting")
{
	VacuumModule V(sl2(), 1, Rational(1));
	CHECK(format_state(StateVector{}, sl2()) == "0");
	CHECK(format_state(StateVector::vacuum(), sl2()) == "1·|1⟩");
	CHECK(format_state(st("-1/2*h", V), sl2()) == "-1/2·|h⟩");
}
