#pragma once

// Brute-force mode values of fields built from currents: every product is
// evaluated by multiplying truncated double series and taking residues, with
// nothing shared with the library's recursion except the module action on
// currents.

#include "tva/field.hpp"

#include <map>
#include <stdexcept>
#include <tuple>

namespace oracle {

using tva::MultiIndex;
using tva::Rational;
using tva::StateVector;

/// n choose k for any integer n, straight from the falling factorial.
inline Rational choose(long n, long k)
{
	if (k < 0)
		return 0;
	Rational num = 1, den = 1;
	for (long i = 0; i < k; ++i) {
		num *= Rational(n - i);
		den *= Rational(i + 1);
	}
	return num / den;
}

/// Coefficients of (s*x0 + t*y0)^e expanded in nonnegative powers of the
/// second variable, truncated to `terms` terms: {(pow_x0, pow_y0) -> c}.
inline std::map<std::pair<long, long>, Rational> binomial_series(long e, int s, int t, bool second_first, int terms)
{
	std::map<std::pair<long, long>, Rational> out;
	for (long i = 0; i < terms; ++i) {
		Rational c = choose(e, i);
		if (c == 0)
			continue;
		// (A + B)^e = sum C(e,i) A^{e-i} B^i with B the small variable
		if (!second_first) {  // A = s x0, B = t y0
			Rational sc = 1;
			for (long k = 0; k < e - i; ++k)
				sc *= s;
			if (e - i < 0)
				for (long k = 0; k < i - e; ++k)
					sc /= s;
			for (long k = 0; k < i; ++k)
				sc *= t;
			out[{e - i, i}] += c * sc;
		} else {  // A = t y0, B = s x0
			Rational sc = 1;
			for (long k = 0; k < e - i; ++k)
				sc *= t;
			if (e - i < 0)
				for (long k = 0; k < i - e; ++k)
					sc /= t;
			for (long k = 0; k < i; ++k)
				sc *= s;
			out[{i, e - i}] += c * sc;
		}
	}
	return out;
}

class ResidueOracle {
public:
	ResidueOracle(const tva::RestrictedModule& W, int truncation) : W_(W), T_(truncation) {}

	/// Mode (n0, n) of the field on w; checks that truncations T and T+2 agree.
	StateVector mode(const tva::FieldHandle& h, int n0, const MultiIndex& n, const StateVector& w)
	{
		StateVector a = eval(h, n0, n, w, T_);
		StateVector b = eval(h, n0, n, w, T_ + 2);
		if (a != b)
			throw std::runtime_error("residue oracle: truncation did not converge");
		return a;
	}

private:
	StateVector eval(const tva::FieldHandle& h, int n0, const MultiIndex& n, const StateVector& w, int T)
	{
		StateVector out;
		for (const auto& [id, c] : w.terms())
			out.add_scaled(eval_mono(h, n0, n, id, T), c);
		return out;
	}

	StateVector eval_mono(const tva::FieldHandle& h, int n0, const MultiIndex& n, tva::MonoId w, int T)
	{
		auto key = std::make_tuple(h->id, n0, n, w, T);
		if (auto it = memo_.find(key); it != memo_.end())
			return it->second;
		StateVector ws = StateVector::basis(w);
		StateVector out;
		switch (h->kind) {
		case tva::FieldKind::Current:
			out = W_.act(tva::LoopMode{h->basis, n0, n}, ws);
			break;
		case tva::FieldKind::Identity:
			if (n0 == -1 && n.is_zero())
				out = ws;
			break;
		case tva::FieldKind::Linear:
			for (const auto& [c, t] : h->terms)
				out.add_scaled(eval_mono(t, n0, n, w, T), c);
			break;
		case tva::FieldKind::Product:
			out = product(h, n0, n, ws, T);
			break;
		default:
			throw std::invalid_argument("residue oracle handles currents, identity, sums and products only");
		}
		memo_.emplace(key, out);
		return out;
	}

	/// Res_{x0} Res_x x^{m-1} y^{-m} [(x0-y0)^{m0} a(x0,x) b(y0,y) - (-y0+x0)^{m0} b(y0,y) a(x0,x)] w,
	/// coefficient of y0^{-p0-1} y^{-p}. A single coefficient of a product of
	/// series is the sum over the support of one factor; the binomial factor is
	/// truncated to L terms.
	StateVector product(const tva::FieldHandle& h, int p0, const MultiIndex& p, const StateVector& w, int L)
	{
		const int m0 = h->m0;
		const MultiIndex& m = h->m;
		const MultiIndex q = p - m;  // y^{-m} y^{-q} = y^{-p}
		StateVector out;
		// x0^{-i-1} y0^{-j-1} times x0^{px} y0^{py} lands on x0^{-1} y0^{-p0-1}
		for (const auto& [pw, c] : binomial_series(m0, 1, -1, false, L)) {
			int i = static_cast<int>(pw.first);
			int j = static_cast<int>(p0 + pw.second);
			StateVector bw = eval(h->b, j, q, w, L);
			if (!bw.is_zero())
				out.add_scaled(eval(h->a, i, m, bw, L), c);
		}
		for (const auto& [pw, c] : binomial_series(m0, 1, -1, true, L)) {
			int i = static_cast<int>(pw.first);
			int j = static_cast<int>(p0 + pw.second);
			StateVector aw = eval(h->a, i, m, w, L);
			if (!aw.is_zero())
				out.add_scaled(eval(h->b, j, q, aw, L), -c);
		}
		return out;
	}

	const tva::RestrictedModule& W_;
	int T_;
	std::map<std::tuple<uint64_t, int, MultiIndex, tva::MonoId, int>, StateVector> memo_;
};

}  // namespace oracle
