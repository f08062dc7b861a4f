#include "common.hpp"

#include <random>

using namespace tva;
using testing::sl2;

namespace {

ToroidalElement L(int rank, const char* a, int t0, MultiIndex m) { return ToroidalElement::loop(rank, sl2().index_of(a), t0, m); }

}  // namespace

TEST_CASE("loop brackets with central term")
{
	auto x = toroidal_bracket(sl2(), L(1, "e", 1, {0}), L(1, "f", -1, {0}));
	CHECK(x == L(1, "h", 0, {0}) + ToroidalElement::central(1));
	// no central term unless both total degrees vanish
	CHECK(toroidal_bracket(sl2(), L(1, "e", 1, {1}), L(1, "f", -1, {0})) == L(1, "h", 0, {1}));
	CHECK(toroidal_bracket(sl2(), L(1, "h", 2, {1}), L(1, "h", -2, {-1})) == ToroidalElement::central(1, 4));
	CHECK(toroidal_bracket(sl2(), L(1, "h", 0, {1}), L(1, "e", 3, {-1})) == L(1, "e", 3, {0}) + L(1, "e", 3, {0}));
	CHECK(toroidal_bracket(sl2(), L(1, "h", 0, {1}), L(1, "h", 0, {-1})).is_zero());
}

TEST_CASE("derivations act as -t0 d/dt0-type degree operators")
{
	auto d0 = ToroidalElement::derivation(1, 0);
	auto d1 = ToroidalElement::derivation(1, 1);
	CHECK(toroidal_bracket(sl2(), d0, L(1, "e", 2, {1})) == Rational(-2) * L(1, "e", 1, {1}));
	CHECK(toroidal_bracket(sl2(), d1, L(1, "e", 2, {3})) == Rational(-3) * L(1, "e", 2, {3}));
	CHECK(toroidal_bracket(sl2(), d0, d1).is_zero());
	CHECK(toroidal_bracket(sl2(), d0, ToroidalElement::central(1)).is_zero());
	CHECK(toroidal_bracket(sl2(), L(1, "f", 0, {2}), d1) == Rational(2) * L(1, "f", 0, {2}));
}

TEST_CASE("rank 2 indices add componentwise")
{
	auto x = toroidal_bracket(sl2(), L(2, "e", 1, {1, -1}), L(2, "f", -1, {-1, 1}));
	CHECK(x == L(2, "h", 0, {0, 0}) + ToroidalElement::central(2));
	CHECK(toroidal_bracket(sl2(), L(2, "e", 1, {1, 0}), L(2, "f", -1, {0, 1})) == L(2, "h", 0, {1, 1}));
	CHECK_THROWS_AS(toroidal_bracket(sl2(), L(1, "e", 0, {0}), L(2, "e", 0, {0, 0})), std::invalid_argument);
}

TEST_CASE("property: antisymmetry and Jacobi on random elements with derivations")
{
	std::mt19937_64 rng(17);
	for (int rank : {1, 2}) {
		auto rnd = [&] {
			ToroidalElement x(rank);
			for (int t = 0; t < 2; ++t) {
				MultiIndex m(rank);
				for (int i = 0; i < rank; ++i)
					m[i] = static_cast<int>(rng() % 5) - 2;
				x.add_loop(LoopMode{static_cast<int>(rng() % 3), static_cast<int>(rng() % 5) - 2, m},
				           Rational(static_cast<int>(rng() % 3) + 1));
			}
			x.add_der(static_cast<int>(rng() % (rank + 1)), Rational(static_cast<int>(rng() % 2)));
			return x;
		};
		for (int t = 0; t < 60; ++t) {
			auto x = rnd(), y = rnd(), z = rnd();
			CHECK((toroidal_bracket(sl2(), x, y) + toroidal_bracket(sl2(), y, x)).is_zero());
			auto j = toroidal_bracket(sl2(), toroidal_bracket(sl2(), x, y), z) +
			         toroidal_bracket(sl2(), toroidal_bracket(sl2(), y, z), x) +
			         toroidal_bracket(sl2(), toroidal_bracket(sl2(), z, x), y);
			CHECK(j.is_zero());
		}
	}
}

TEST_CASE("printing")
{
	CHECK(mode_to_string(sl2(), LoopMode{0, -1, {2}}) == "e(-1,2)");
	CHECK(mode_to_string(sl2(), LoopMode{2, 0, {1, -1}}) == "h(0,1,-1)");
}
