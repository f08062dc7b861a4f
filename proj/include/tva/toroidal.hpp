#pragma once

#include "tva/lie_algebra.hpp"
#include "tva/multi_index.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace tva {

/// a ⊗ t0^{t0} t^m for a basis element a.
struct LoopMode {
	int basis = 0;
	int t0 = 0;
	MultiIndex m;

	/// PBW order: basis index, then t0 ascending (larger k first), then m
	/// lexicographically.
	friend auto operator<=>(const LoopMode&, const LoopMode&) = default;
	friend bool operator==(const LoopMode&, const LoopMode&) = default;

	std::size_t hash() const
	{
		return (m.hash() ^ (static_cast<std::size_t>(static_cast<uint32_t>(t0)) << 20)) * 0x9e3779b97f4a7c15ULL +
		       static_cast<std::size_t>(basis);
	}
};

struct LoopModeHash {
	std::size_t operator()(const LoopMode& x) const { return x.hash(); }
};

/// Finite combination of loop modes, the central element k and d0..d_r.
class ToroidalElement {
public:
	explicit ToroidalElement(int rank = 1) : rank_(rank), der_(rank + 1) {}

	static ToroidalElement loop(int rank, int basis, int t0, const MultiIndex& m, Rational coeff = 1);
	static ToroidalElement central(int rank, Rational coeff = 1);
	static ToroidalElement derivation(int rank, int i, Rational coeff = 1);

	int rank() const { return rank_; }
	const std::map<LoopMode, Rational>& loops() const { return loops_; }
	const Rational& central_coeff() const { return central_; }
	const std::vector<Rational>& der() const { return der_; }

	void add_loop(const LoopMode& x, const Rational& c);
	void add_central(const Rational& c) { central_ += c; }
	void add_der(int i, const Rational& c) { der_.at(i) += c; }

	ToroidalElement& operator+=(const ToroidalElement& o);
	ToroidalElement& operator*=(const Rational& c);
	friend ToroidalElement operator+(ToroidalElement a, const ToroidalElement& b) { return a += b; }
	friend ToroidalElement operator-(ToroidalElement a, const ToroidalElement& b)
	{
		ToroidalElement nb = b;
		nb *= Rational(-1);
		return a += nb;
	}
	friend ToroidalElement operator*(const Rational& c, ToroidalElement a) { return a *= c; }

	bool is_zero() const;
	friend bool operator==(const ToroidalElement& a, const ToroidalElement& b)
	{
		return a.rank_ == b.rank_ && a.loops_ == b.loops_ && a.central_ == b.central_ && a.der_ == b.der_;
	}

	std::string to_string(const LieAlgebraSpec& spec) const;

private:
	int rank_;
	std::map<LoopMode, Rational> loops_;
	Rational central_;
	std::vector<Rational> der_;
};

/// Bracket of two loop modes: the loop part of [X, Y] plus the coefficient of k.
struct LoopBracket {
	std::vector<std::pair<LoopMode, Rational>> loop;
	Rational central;
};

LoopBracket bracket_modes(const LieAlgebraSpec& spec, const LoopMode& x, const LoopMode& y);

/// [X, Y] in the toroidal Lie algebra with derivations. Throws
/// std::invalid_argument on a rank mismatch.
ToroidalElement toroidal_bracket(const LieAlgebraSpec& spec, const ToroidalElement& x, const ToroidalElement& y);

std::string mode_to_string(const LieAlgebraSpec& spec, const LoopMode& x);

}  // namespace tva
