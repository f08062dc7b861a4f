#include "common.hpp"

#include "../residue_oracle.hpp"

using namespace tva;
using testing::sl2;
using testing::st;

namespace {

struct Fixture {
	VacuumModule V{sl2(), 1, Rational(1)};
	VertexAlgebra va{V};
	FieldEngine fe{va, V};
	ModeWindow w = [this] {
		ModeWindow x = testing::window(1, -2, 2, 1);
		testing::add(x, "vac", V);
		testing::add(x, "f", V);
		testing::add(x, "e(-1,0)", V);
		return x;
	}();
};

}  // namespace

TEST_CASE("oracle self-check on the bracket expansion")
{
	Fixture F;
	oracle::ResidueOracle orc(F.V, 6);
	auto ef1 = F.fe.e_product_unchecked(F.fe.current(0), 1, {0}, F.fe.current(1));
	auto ef0 = F.fe.e_product_unchecked(F.fe.current(0), 0, {0}, F.fe.current(1));
	for (const auto& s : F.w.states) {
		CHECK(orc.mode(ef1, -1, {0}, s) == s);
		CHECK(orc.mode(ef1, 0, {0}, s).is_zero());
		CHECK(orc.mode(ef0, 1, {1}, s) == F.V.act(LoopMode{2, 1, {1}}, s));
	}
}

TEST_CASE("currents, identity, derivatives")
{
	Fixture F;
	auto e = F.fe.current(0);
	auto s = st("f(-1,1)", F.V);
	CHECK(F.fe.mode(e, 1, {-1}, s) == F.V.act(LoopMode{0, 1, {-1}}, s));
	CHECK(F.fe.mode(F.fe.identity(), -1, {0}, s) == s);
	CHECK(F.fe.mode(F.fe.identity(), 0, {0}, s).is_zero());
	// d/dx0 a(x0,x): mode (n0,n) is -n0 a(n0-1,n); x d/dx: -n a(n0,n)
	CHECK(F.fe.mode(F.fe.apply_D(0, e), 2, {-1}, s) == Rational(-2) * F.V.act(LoopMode{0, 1, {-1}}, s));
	CHECK(F.fe.mode(F.fe.apply_D(1, e), 1, {-1}, s) == F.V.act(LoopMode{0, 1, {-1}}, s));
	CHECK_THROWS_AS(F.fe.apply_D(2, e), std::out_of_range);
	CHECK_THROWS_AS(F.fe.current(3), std::out_of_range);
}

TEST_CASE("vertex field equals Y")
{
	Fixture F;
	auto u = st("h(-1,1)f(-2,0)", F.V);
	auto h = F.fe.vertex(u);
	for (const auto& [n0, n] : F.w.cells())
		for (const auto& s : F.w.states)
			CHECK(F.fe.mode(h, n0, n, s) == F.va.y_mode(u, n0, n, s));
}

TEST_CASE("locality orders of currents")
{
	Fixture F;
	CHECK(F.fe.locality_order(F.fe.current(0), F.fe.current(1), F.w, 4) == 2);
	CHECK(F.fe.locality_order(F.fe.current(0), F.fe.current(2), F.w, 4) == 1);
	CHECK(F.fe.locality_order(F.fe.current(0), F.fe.current(0), F.w, 4) == 0);
	CHECK_FALSE(F.fe.locality_order(F.fe.current(0), F.fe.current(1), F.w, 1).has_value());
	CHECK_FALSE(F.fe.locality_at(F.fe.current(0), F.fe.current(1), 1, F.w).ok);
	ModeWindow empty = testing::window(1, 0, 0, 0);
	CHECK_THROWS_AS(F.fe.locality_order(F.fe.current(0), F.fe.current(1), empty, 4), std::invalid_argument);
}

TEST_CASE("e_product checks locality and the term cap")
{
	Fixture F;
	FieldOptions tight;
	tight.locality_bound = 1;
	FieldEngine fe1(F.va, F.V, tight);
	CHECK_THROWS_AS(fe1.e_product(fe1.current(0), 0, {0}, fe1.current(1), F.w), LocalityError);
	CHECK_NOTHROW(F.fe.e_product(F.fe.current(0), 0, {0}, F.fe.current(1), F.w));
	FieldOptions capped;
	capped.max_sum_terms = 1;
	FieldEngine fe2(F.va, F.V, capped);
	auto p = fe2.e_product_unchecked(fe2.current(0), -3, {0}, fe2.current(1));
	CHECK_THROWS_AS(fe2.mode(p, -2, {0}, StateVector::tail(1)), FinitenessError);
}

TEST_CASE("transfer: a_(j,m) b = c_j")
{
	Fixture F;
	auto& fe = F.fe;
	std::vector<FieldHandle> c = {fe.current(2), fe.identity()};
	for (int m = -1; m <= 1; ++m)
		CHECK(fe.transfer_check(fe.current(0), fe.current(1), c, {m}, F.w).ok);
	std::vector<FieldHandle> wrong = {fe.current(2), fe.scaled(Rational(2), fe.identity())};
	CHECK_FALSE(fe.transfer_check(fe.current(0), fe.current(1), wrong, {0}, F.w).ok);
}

TEST_CASE("generated space is deduplicated and pairwise local")
{
	Fixture F;
	GenerateOptions g;
	g.depth = 1;
	g.m0_lo = -1;
	g.m0_hi = 1;
	g.m_values = {MultiIndex{0}};
	auto U = std::vector<FieldHandle>{F.fe.current(0), F.fe.current(1), F.fe.current(2)};
	auto space = F.fe.generate(U, g, F.w);
	CHECK(space.fields.size() >= 3);
	CHECK(space.locality_failures.empty());
	CHECK(space.max_locality >= 2);
	CHECK(space.max_locality <= 4);
}
