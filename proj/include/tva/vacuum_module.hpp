#pragma once

#include "tva/lru_cache.hpp"
#include "tva/pbw.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace tva {

/// A restricted module of level l for the toroidal Lie algebra, realised on
/// the PBW space of V(l,0). Subclasses only decide how a loop mode acts.
class RestrictedModule {
public:
	RestrictedModule();
	virtual ~RestrictedModule() = default;
	RestrictedModule(const RestrictedModule&) = delete;
	RestrictedModule& operator=(const RestrictedModule&) = delete;

	virtual const LieAlgebraSpec& spec() const = 0;
	virtual int rank() const = 0;
	virtual const Rational& level() const = 0;
	virtual std::string name() const = 0;

	/// x acting on a single basis monomial.
	virtual std::shared_ptr<const StateVector> act_monomial(const LoopMode& x, MonoId w) const = 0;

	/// Largest N with a(n0, n) w possibly nonzero for n0 = N; every mode with
	/// n0 > N kills w. Also the grading bound used to cut infinite sums.
	virtual int vanishing_bound(const StateVector& w) const { return std::max(0, w.max_degree()); }

	StateVector act(const LoopMode& x, const StateVector& w) const;
	/// Loop part acts by modes, k by the level; derivations are rejected.
	StateVector act(const ToroidalElement& x, const StateVector& w) const;

	/// Distinguishes modules in shared memo tables.
	uint64_t uid() const { return uid_; }

private:
	uint64_t uid_;
};

/// The induced module V(l,0) = U(L_-) ⊗ (g ⊕ C) with the PBW basis of
/// pbw.hpp. The act memo is bounded and LRU evicted.
class VacuumModule : public RestrictedModule {
public:
	VacuumModule(LieAlgebraSpec spec, int rank, Rational level, std::size_t cache_entries = std::size_t{1} << 20);

	const LieAlgebraSpec& spec() const override { return spec_; }
	int rank() const override { return rank_; }
	const Rational& level() const override { return level_; }
	std::string name() const override { return "V(" + to_string(level_) + ",0)"; }

	std::shared_ptr<const StateVector> act_monomial(const LoopMode& x, MonoId w) const override;

	/// The tail action: a(k, m) on g ⊕ C for k >= 0. tail is a basis index or
	/// PBWMonomial::kVacuum. Throws std::invalid_argument for k < 0.
	StateVector base_action(int a, int k, const MultiIndex& m, int tail) const;

	/// N0 with a(n0, n) state = 0 for all n0 > N0.
	int restricted_witness(const StateVector& state) const { return vanishing_bound(state); }

	/// d0 on tail-1 states, [d0, a(-k, m)] = k a(-k-1, m) and d0 1 = 0.
	/// Throws std::invalid_argument on a state with a tail in g.
	StateVector d0(const StateVector& state) const;

	/// Mutation hook: the central term produced while commuting past creation
	/// modes uses level + shift instead of level.
	void set_central_shift(Rational shift);
	const Rational& central_shift() const { return central_shift_; }

	std::size_t cache_size() const { return cache_.size(); }

private:
	struct Key {
		LoopMode x;
		MonoId w;
		friend bool operator==(const Key&, const Key&) = default;
	};
	struct KeyHash {
		std::size_t operator()(const Key& k) const { return k.x.hash() * 31 + k.w * 0x9e3779b97f4a7c15ULL; }
	};

	StateVector compute(const LoopMode& x, MonoId w) const;

	LieAlgebraSpec spec_;
	int rank_;
	Rational level_;
	Rational central_shift_;
	mutable ShardedLru<Key, StateVector, KeyHash> cache_;
};

/// V(l,0) with the twisted action a(n0, n) -> eps^n sigma(a)(n0, n), where
/// sigma is an automorphism of g preserving the form and eps in {1,-1}^r.
class TwistedModule : public RestrictedModule {
public:
	/// sigma[i][j] is the coefficient of b_i in sigma(b_j). Throws SpecError
	/// if sigma is not a form-preserving automorphism.
	TwistedModule(const VacuumModule& base, std::vector<std::vector<Rational>> sigma, std::vector<int> eps);

	const LieAlgebraSpec& spec() const override { return base_.spec(); }
	int rank() const override { return base_.rank(); }
	const Rational& level() const override { return base_.level(); }
	std::string name() const override;

	std::shared_ptr<const StateVector> act_monomial(const LoopMode& x, MonoId w) const override;

	/// Swap of the first two basis vectors with a sign flip on the rest if that
	/// preserves bracket and form, else -1 on g if that does, else the identity.
	static std::vector<std::vector<Rational>> default_sigma(const LieAlgebraSpec& spec);

private:
	const VacuumModule& base_;
	std::vector<std::vector<Rational>> sigma_;
	std::vector<int> eps_;
};

/// Checks that sigma preserves brackets and the form.
bool is_form_automorphism(const LieAlgebraSpec& spec, const std::vector<std::vector<Rational>>& sigma);

}  // namespace tva
