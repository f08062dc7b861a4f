#include "common.hpp"

#include <random>

using namespace tva;
using testing::show;
using testing::sl2;
using testing::st;

TEST_CASE("monomial table interns stably")
{
	PBWMonomial m{{LoopMode{0, -1, {2}}}, PBWMonomial::kVacuum};
	MonoId a = intern(m), b = intern(m);
	CHECK(a == b);
	CHECK(monomial(a) == m);
	CHECK(MonomialTable::instance().vacuum() == 0);
	CHECK(monomial(0).word.empty());
	CHECK(m.degree() == 1);
	CHECK(MonomialTable::instance().degree(a) == 1);
	CHECK(PBWMonomial{{LoopMode{0, -2, {0}}}, 1}.degree() == 3);
	CHECK(m.is_canonical());
	CHECK_FALSE(PBWMonomial{{LoopMode{0, 1, {0}}}, PBWMonomial::kVacuum}.is_canonical());
	CHECK_FALSE(PBWMonomial{{LoopMode{1, -1, {0}}, LoopMode{0, -1, {0}}}, PBWMonomial::kVacuum}.is_canonical());
	CHECK(PBWMonomial{{LoopMode{0, -1, {1}}, LoopMode{1, -2, {-3}}}, 2}.t_degree(1) == MultiIndex{-2});
}

TEST_CASE("state vector arithmetic drops zeros")
{
	StateVector v = StateVector::vacuum() + StateVector::tail(0);
	v -= StateVector::vacuum();
	CHECK(v == StateVector::tail(0));
	v *= Rational(0);
	CHECK(v.is_zero());
	CHECK(v.max_degree() == -1);
	StateVector w = Rational(2) * StateVector::tail(1);
	CHECK(w.coeff(intern(PBWMonomial{{}, 1})) == 2);
	CHECK(w.degrees() == std::set<int>{1});
}

TEST_CASE("creation modes reorder into PBW form")
{
	VacuumModule V(sl2(), 1, Rational(1));
	CHECK(show(V.act(LoopMode{0, -1, {2}}, StateVector::vacuum()), V) == "1·|e(-1,2) 1⟩");
	// f(-1,0) e(-1,0) 1 = e(-1,0) f(-1,0) 1 + [f,e](-2,0) 1
	CHECK(show(st("f(-1,0)e(-1,0)", V), V) == "1·|e(-1,0) f(-1,0) 1⟩ + -1·|h(-2,0) 1⟩");
	CHECK(show(st("h(-1,1)f(-2,0)", V), V) == "-2·|f(-3,1) 1⟩ + 1·|f(-2,0) h(-1,1) 1⟩");
}

TEST_CASE("annihilation modes: hand-derived values")
{
	for (const Rational& l : {Rational(1), Rational(-2), Rational(3, 2)}) {
		VacuumModule V(sl2(), 1, l);
		auto ef = st("e(-1,0)f(-1,0)", V);
		CHECK(V.act(LoopMode{0, 1, {0}}, ef) == l * st("e(-1,0)", V));
		CHECK(V.act(LoopMode{2, 1, {0}}, ef) == Rational(2) * st("h(-1,0)", V));
		CHECK(V.act(LoopMode{1, 1, {0}}, st("e(-1,0)", V)) == l * StateVector::vacuum());
		CHECK(V.act(LoopMode{0, 1, {1}}, st("f(-1,-1)", V)) == l * StateVector::vacuum());
		CHECK(V.act(LoopMode{0, 1, {1}}, st("f(-1,0)", V)).is_zero());
		CHECK(V.act(LoopMode{2, 0, {0}}, st("e(-1,2)|f", V)).is_zero());
		// h(0,3) e(-1,2) f = e(-1,2) [h,f] + [h,e](-1,5) f
		CHECK(V.act(LoopMode{2, 0, {3}}, st("e(-1,2)|f", V)) ==
		      Rational(2) * st("e(-1,5)|f", V) - Rational(2) * st("e(-1,2)|f", V));
	}
}

TEST_CASE("tail action")
{
	VacuumModule V(sl2(), 1, Rational(-2));
	int e = 0, f = 1, h = 2;
	CHECK(V.base_action(e, 0, {4}, f) == StateVector::tail(h));
	CHECK(V.base_action(h, 1, {1}, h) == Rational(-4) * StateVector::vacuum());
	CHECK(V.base_action(e, 2, {0}, f).is_zero());
	CHECK(V.base_action(e, 0, {0}, PBWMonomial::kVacuum).is_zero());
	CHECK_THROWS_AS(V.base_action(e, -1, {0}, f), std::invalid_argument);
}

TEST_CASE("central element acts by the level and derivations are rejected")
{
	VacuumModule V(sl2(), 1, Rational(5, 3));
	auto w = st("e(-1,0)|h", V);
	CHECK(V.act(ToroidalElement::central(1, 3), w) == Rational(5) * w);
	CHECK_THROWS_AS(V.act(ToroidalElement::derivation(1, 0), w), std::invalid_argument);
}

TEST_CASE("d0 on vacuum-tail states")
{
	VacuumModule V(sl2(), 1, Rational(1));
	CHECK(V.d0(StateVector::vacuum()).is_zero());
	CHECK(V.d0(st("e(-1,0)f(-2,1)", V)) == st("e(-2,0)f(-2,1)", V) + Rational(2) * st("e(-1,0)f(-3,1)", V));
	CHECK_THROWS_AS(V.d0(StateVector::tail(0)), std::invalid_argument);
}

TEST_CASE("property: module law on random states, r = 1 and 2, three levels")
{
	std::mt19937_64 rng(21);
	for (int r : {1, 2})
		for (const Rational& l : {Rational(0), Rational(1), Rational(-2)}) {
			VacuumModule V(sl2(), r, l);
			auto box = testing::window(r, 0, 0, 1).m_values();
			for (int t = 0; t < 30; ++t) {
				StateVector w = random_state(rng, V, box, 3, 2);
				auto mode = [&] {
					return LoopMode{static_cast<int>(rng() % 3), static_cast<int>(rng() % 5) - 2, box[rng() % box.size()]};
				};
				LoopMode x = mode(), y = mode();
				StateVector lhs = V.act(x, V.act(y, w)) - V.act(y, V.act(x, w));
				LoopBracket br = bracket_modes(sl2(), x, y);
				StateVector rhs = br.central * l * w;
				for (const auto& [m, c] : br.loop)
					rhs.add_scaled(V.act(m, w), c);
				CHECK(lhs == rhs);
			}
		}
}

TEST_CASE("property: restrictedness and grading")
{
	std::mt19937_64 rng(5);
	VacuumModule V(sl2(), 1, Rational(1));
	auto box = testing::window(1, 0, 0, 2).m_values();
	for (int t = 0; t < 30; ++t) {
		StateVector w = random_state(rng, V, box, 3, 2);
		int N = V.restricted_witness(w);
		for (int a = 0; a < 3; ++a)
			for (const auto& m : box)
				CHECK(V.act(LoopMode{a, N + 1, m}, w).is_zero());
	}
}

TEST_CASE("twisted module")
{
	VacuumModule V(sl2(), 1, Rational(1));
	auto sigma = TwistedModule::default_sigma(sl2());
	CHECK(is_form_automorphism(sl2(), sigma));
	TwistedModule T(V, sigma, {-1});
	// e(1,1) acts as -f(1,1)
	auto w = st("e(-1,-1)", V);
	CHECK(T.act(LoopMode{0, 1, {1}}, w) == StateVector() - V.act(LoopMode{1, 1, {1}}, w));
	CHECK(T.act(LoopMode{0, 1, {2}}, st("e(-1,-2)", V)) == V.act(LoopMode{1, 1, {2}}, st("e(-1,-2)", V)));
	std::vector<std::vector<Rational>> bad = {{2, 0, 0}, {0, 1, 0}, {0, 0, 1}};
	CHECK_FALSE(is_form_automorphism(sl2(), bad));
	CHECK_THROWS_AS(TwistedModule(V, bad, {1}), SpecError);
	CHECK_THROWS_AS(TwistedModule(V, sigma, {2}), SpecError);
	CHECK_THROWS_AS(TwistedModule(V, sigma, {1, 1}), SpecError);
}

TEST_CASE("central shift breaks the module law for e(1,0), f(-1,0) on 1")
{
	VacuumModule V(sl2(), 1, Rational(1));
	V.set_central_shift(Rational(1));
	LoopMode x{0, 1, {0}}, y{1, -1, {0}};
	auto one = StateVector::vacuum();
	StateVector lhs = V.act(x, V.act(y, one)) - V.act(y, V.act(x, one));
	CHECK(lhs == Rational(2) * one);  // bracket predicts h(0,0) 1 + level * 1 = 1
}
