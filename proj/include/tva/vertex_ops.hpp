#pragma once

#include "tva/vacuum_module.hpp"
#include "tva/window.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tva {

/// Raised when a sum that should be finite by grading is not.
class FinitenessError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Outcome of a single window check: ok, or the first failing coefficient.
struct CheckOutcome {
	bool ok = true;
	nlohmann::json witness;
	std::size_t coefficients = 0;
};

/// The vertex operator map of V(l,0) and its action on restricted modules.
/// Modes are computed by peeling the leftmost creation mode of each PBW word;
/// results are memoized per (monomial, mode, monomial, module).
class VertexAlgebra {
public:
	explicit VertexAlgebra(const VacuumModule& V, std::size_t cache_entries = std::size_t{1} << 21);

	const VacuumModule& algebra() const { return V_; }
	const LieAlgebraSpec& spec() const { return V_.spec(); }
	int rank() const { return V_.rank(); }

	/// Coefficient v_{(n0,n)} w of x0^{-n0-1} x^{-n} in Y(v; x0, x) w.
	StateVector y_mode(const StateVector& v, int n0, const MultiIndex& n, const StateVector& w,
	                   const RestrictedModule& W) const;
	StateVector y_mode(const StateVector& v, int n0, const MultiIndex& n, const StateVector& w) const
	{
		return y_mode(v, n0, n, w, V_);
	}
	std::shared_ptr<const StateVector> y_monomial(MonoId v, int n0, const MultiIndex& n, MonoId w,
	                                              const RestrictedModule& W) const;

	/// u_{(m0,m)} v inside V(l,0).
	StateVector product(const StateVector& u, int m0, const MultiIndex& m, const StateVector& v) const
	{
		return y_mode(u, m0, m, v, V_);
	}

	/// y_mode(v, n0, n, 1) = 0 for every cell of win with n0 >= 0.
	CheckOutcome creation_check(const StateVector& v, const ModeWindow& win) const;

	/// Y^0(u, x0) = Y(u; x0, x) at x = 1, on vacuum-tail states u.
	/// Throws FinitenessError if u has a monomial with a tail in g.
	StateVector y0_mode(const StateVector& u, int n0, const StateVector& w, const RestrictedModule& W) const;
	StateVector y0_mode(const StateVector& u, int n0, const StateVector& w) const { return y0_mode(u, n0, w, V_); }

	/// The single x-degree carrying Y(u), when u is t-homogeneous with vacuum tail.
	std::optional<MultiIndex> x_support(const StateVector& u) const;

	/// Y(u; x0, x) w vanishes off x^{-lambda(u)} and agrees there with Y^0.
	CheckOutcome precover_roundtrip(const StateVector& u, const ModeWindow& win, const RestrictedModule& W) const;
	/// u_{(n0,n)} w = Y^0(u_{(-1,n)} 1)_{n0} w for every cell and state.
	CheckOutcome reconstruction(const StateVector& u, const ModeWindow& win, const RestrictedModule& W) const;
	/// d0 u = u_{-2} 1 under Y^0.
	CheckOutcome d0_check(const StateVector& u) const;
	/// Y^0(u, x0) 1 has no negative powers of x0 and constant term u.
	CheckOutcome v0_creation(const StateVector& u, const ModeWindow& win) const;
	/// [a(p0,m), b(q0,n)] of Y^0 currents against the r-loop affine bracket.
	CheckOutcome v0_affine_commutator(int a, int b, const ModeWindow& win, const RestrictedModule& W) const;
	/// Ordinary Borcherds identity of Y^0 at (L, M, N).
	CheckOutcome v0_borcherds(const StateVector& u, const StateVector& v, const StateVector& w, int L, int M,
	                          int N, const RestrictedModule& W) const;

	std::size_t cache_size() const { return cache_.size(); }

private:
	struct Key {
		MonoId v;
		MonoId w;
		int n0;
		MultiIndex n;
		uint64_t module;
		friend bool operator==(const Key&, const Key&) = default;
	};
	struct KeyHash {
		std::size_t operator()(const Key& k) const
		{
			std::size_t h = k.n.hash();
			h = (h ^ k.v) * 0x9e3779b97f4a7c15ULL;
			h = (h ^ k.w) * 0xff51afd7ed558ccdULL;
			h = (h ^ static_cast<std::size_t>(static_cast<uint32_t>(k.n0))) * 0x100000001b3ULL;
			return h ^ (k.module << 7);
		}
	};

	StateVector compute(MonoId v, int n0, const MultiIndex& n, MonoId w, const RestrictedModule& W) const;

	const VacuumModule& V_;
	mutable ShardedLru<Key, StateVector, KeyHash> cache_;
};

/// Row-reduced basis over Q, one pivot monomial per row and every pivot
/// absent from the other rows.
class EchelonBasis {
public:
	/// Adds v if it is independent of the rows; returns whether it was added.
	bool insert(const StateVector& v);
	StateVector reduce(StateVector v) const;
	std::size_t rank() const { return rows_.size(); }
	const std::vector<StateVector>& rows() const { return rows_; }

private:
	std::vector<StateVector> rows_;
	std::vector<MonoId> pivots_;
	std::map<MonoId, std::size_t> pivot_row_;
};

/// Spanning set of V^0 built from generator products applied to 1.
struct V0Subspace {
	std::vector<StateVector> spanning;
	std::vector<std::string> provenance;
	/// Echelon basis per degree.
	std::map<int, EchelonBasis> basis;
	std::map<int, std::size_t> graded_dims;
	/// Ranks after projection onto monomials whose modes all lie in the box.
	std::map<int, std::size_t> box_dims;
	/// Independent count from prod_k (1 - q^k)^{-dim g * |box|}.
	std::map<int, std::size_t> expected_box_dims;
	bool tails_absent = true;
	bool contains_vacuum = false;
};

struct V0Options {
	int depth = 2;
	int max_degree = 3;
	int min_m0 = -3;
	std::vector<MultiIndex> box;
	/// Also feed v_{(m0,m)} 1 for g-tail PBW monomials v of degree <= this.
	int tail_probe_degree = 2;
};

V0Subspace build_V0(const VertexAlgebra& va, const V0Options& opt);

/// Coefficients of prod_{k>=1} (1 - q^k)^{-colors} up to q^max_degree.
std::vector<std::size_t> pbw_count(std::size_t colors, int max_degree);

/// All PBW monomials of degree <= max_degree whose modes lie in box, with
/// vacuum tail (tail_in_g = false) or with each basis tail (true).
std::vector<PBWMonomial> enumerate_monomials(const LieAlgebraSpec& spec, const std::vector<MultiIndex>& box,
                                             int max_degree, bool tail_in_g);

}  // namespace tva
