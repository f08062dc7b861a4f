#include "common.hpp"

#include "../residue_oracle.hpp"

#include <random>

using namespace tva;
using testing::show;
using testing::sl2;
using testing::st;

TEST_CASE("Y of a generator is its current")
{
	VacuumModule V(sl2(), 1, Rational(1));
	VertexAlgebra va(V);
	auto w = st("f(-1,-1)h(-2,0)", V);
	for (int n0 = -2; n0 <= 2; ++n0)
		for (int n = -1; n <= 1; ++n)
			for (int a = 0; a < 3; ++a)
				CHECK(va.y_mode(StateVector::tail(a), n0, {n}, w) == V.act(LoopMode{a, n0, {n}}, w));
}

TEST_CASE("product examples")
{
	VacuumModule V(sl2(), 1, Rational(1));
	VertexAlgebra va(V);
	auto e = StateVector::tail(0), f = StateVector::tail(1), h = StateVector::tail(2);
	CHECK(show(va.product(e, 1, {0}, f), V) == "1·|1⟩");
	CHECK(va.product(e, 0, {3}, f) == h);
	CHECK(va.product(h, 1, {-2}, h) == Rational(2) * StateVector::vacuum());
	CHECK(va.product(e, 2, {0}, f).is_zero());
	auto v = st("h(-1,1)f(-2,0)", V);
	CHECK(va.product(StateVector::vacuum(), -1, {0}, v) == v);
	CHECK(va.product(StateVector::vacuum(), -1, {1}, v).is_zero());
	CHECK(va.product(StateVector::vacuum(), 0, {0}, v).is_zero());
	// (e(-1,0)1)_(1,0) f = e(1,0) f = l<e,f> 1
	CHECK(va.product(st("e(-1,0)", V), 1, {0}, f) == StateVector::vacuum());
	CHECK(va.product(st("e(-1,0)", V), 1, {1}, f).is_zero());
	CHECK(va.y_mode(st("e(-1,2)", V), -1, {2}, StateVector::vacuum()) == st("e(-1,2)", V));
	CHECK(va.y_mode(st("e(-1,2)", V), -1, {0}, StateVector::vacuum()).is_zero());
}

TEST_CASE("Y(a_(m0,m) b) agrees with the residue oracle on products of currents")
{
	for (int r : {1, 2}) {
		VacuumModule V(sl2(), r, Rational(-2));
		VertexAlgebra va(V);
		FieldEngine fe(va, V);
		oracle::ResidueOracle orc(V, 6);
		auto box = testing::window(r, 0, 0, 1).m_values();
		std::vector<StateVector> ws = {StateVector::vacuum(), StateVector::tail(1),
		                               V.act(LoopMode{0, -1, box.back()}, StateVector::vacuum())};
		for (int a = 0; a < 3; ++a)
			for (int b = 0; b < 3; ++b)
				for (int k = 1; k <= 2; ++k) {
					const MultiIndex& m = box[(a + 2 * b + k) % box.size()];
					StateVector u = V.act(LoopMode{a, -k, m}, StateVector::tail(b));
					auto h = fe.e_product_unchecked(fe.current(a), -k, m, fe.current(b));
					for (int n0 = -2; n0 <= 2; ++n0)
						for (const auto& n : box)
							for (const auto& w : ws)
								CHECK(va.y_mode(u, n0, n, w) == orc.mode(h, n0, n, w));
				}
	}
}

TEST_CASE("depth-2 states against nested oracle products")
{
	VacuumModule V(sl2(), 1, Rational(1));
	VertexAlgebra va(V);
	FieldEngine fe(va, V);
	oracle::ResidueOracle orc(V, 6);
	// h(-1,1) e(-1,0) f = h_(-1,1) (e_(-1,0) f)
	StateVector u = V.act(LoopMode{2, -1, {1}}, V.act(LoopMode{0, -1, {0}}, StateVector::tail(1)));
	auto inner = fe.e_product_unchecked(fe.current(0), -1, {0}, fe.current(1));
	auto h = fe.e_product_unchecked(fe.current(2), -1, {1}, inner);
	for (int n0 = -2; n0 <= 2; ++n0)
		for (int n = -1; n <= 2; ++n)
			for (const auto& w : {StateVector::vacuum(), StateVector::tail(0)})
				CHECK(va.y_mode(u, n0, {n}, w) == orc.mode(h, n0, {n}, w));
}

TEST_CASE("grading cutoff and creation")
{
	VacuumModule V(sl2(), 1, Rational(1));
	VertexAlgebra va(V);
	ModeWindow w = testing::window(1, -3, 3, 1);
	for (const char* s : {"e", "h(-1,1)f(-2,0)", "e(-1,0)|h"}) {
		auto v = st(s, V);
		CHECK(va.creation_check(v, w).ok);
		int d = v.max_degree();
		CHECK(va.product(v, d, {0}, StateVector::vacuum()).is_zero());
	}
}

TEST_CASE("vacuum ideal: y0_mode, x_support, d0")
{
	VacuumModule V(sl2(), 1, Rational(1));
	VertexAlgebra va(V);
	auto u = st("e(-1,1)f(-2,-1)", V);
	CHECK(va.x_support(u) == MultiIndex{0});
	CHECK(va.x_support(st("e(-1,2)", V)) == MultiIndex{2});
	CHECK(va.y0_mode(u, -1, StateVector::vacuum()) == u);
	CHECK(va.y0_mode(st("e(-1,2)", V), -2, StateVector::vacuum()) == st("e(-2,2)", V));
	CHECK(va.d0_check(u).ok);
	CHECK_THROWS_AS(va.y0_mode(StateVector::tail(0), 0, StateVector::vacuum()), FinitenessError);
	ModeWindow w = testing::window(1, -2, 2, 1);
	testing::add(w, "vac", V);
	testing::add(w, "f(-1,1)", V);
	CHECK(va.v0_creation(u, w).ok);
	CHECK(va.reconstruction(u, w, V).ok);
	CHECK(va.reconstruction(StateVector::tail(2), w, V).ok);
	CHECK(va.precover_roundtrip(u, w, V).ok);
	for (int a = 0; a < 3; ++a)
		for (int b = 0; b < 3; ++b)
			CHECK(va.v0_affine_commutator(a, b, w, V).ok);
}

namespace {

/// prod_k (1 - q^k)^{-c} by repeated multiplication with geometric series.
std::vector<long> partitions(long colors, int n)
{
	std::vector<long> p(n + 1, 0);
	p[0] = 1;
	for (int k = 1; k <= n; ++k)
		for (long c = 0; c < colors; ++c)
			for (int d = k; d <= n; ++d)
				p[d] += p[d - k];
	return p;
}

}  // namespace

TEST_CASE("PBW count matches an independent coloured-partition count")
{
	for (long colors : {1L, 3L, 9L, 27L}) {
		auto want = partitions(colors, 5);
		auto got = pbw_count(static_cast<std::size_t>(colors), 5);
		for (int d = 0; d <= 5; ++d)
			CHECK(static_cast<long>(got[d]) == want[d]);
	}
	CHECK(pbw_count(9, 3) == std::vector<std::size_t>{1, 9, 54, 255});
	auto box = testing::window(1, 0, 0, 1).m_values();
	CHECK(enumerate_monomials(sl2(), box, 2, false).size() == 1 + 9 + 54);
}

TEST_CASE("V0 build at depth 1 lists a(-k,m)1 and has no tails")
{
	VacuumModule V(sl2(), 1, Rational(1));
	VertexAlgebra va(V);
	V0Options vo;
	vo.depth = 1;
	vo.max_degree = 2;
	vo.min_m0 = -2;
	vo.box = testing::window(1, 0, 0, 1).m_values();
	V0Subspace sub = build_V0(va, vo);
	CHECK(sub.tails_absent);
	CHECK(sub.contains_vacuum);
	CHECK(sub.box_dims[1] == 9);
	for (const auto& s : sub.spanning)
		for (const auto& [id, c] : s.terms())
			CHECK(monomial(id).tail == PBWMonomial::kVacuum);
}

TEST_CASE("echelon basis")
{
	VacuumModule V(sl2(), 1, Rational(1));
	EchelonBasis B;
	auto a = st("e(-1,0)", V), b = st("f(-1,0)", V);
	CHECK(B.insert(a + b));
	CHECK(B.insert(a - b));
	CHECK_FALSE(B.insert(a));
	CHECK(B.rank() == 2);
	CHECK(B.reduce(Rational(3) * b).is_zero());
	CHECK_FALSE(B.reduce(st("h(-1,0)", V)).is_zero());
}
